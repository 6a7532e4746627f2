//! Regime classification, hysteresis traces and the 1D stability indicator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonlinearity::PhiFunction;

use super::config::ClassifyThresholds;
use super::state::DiagnosticsRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Stationary,
    Rotating,
    Wandering,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Stationary => "stationary",
            Regime::Rotating => "rotating",
            Regime::Wandering => "wandering",
        })
    }
}

/// Measurements over the post-transient window of a diagnostics series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeMetrics {
    /// Largest centroid excursion from the window start, in diameters.
    pub displacement: f64,
    /// Centroid distance between window start and end, in diameters.
    pub net_displacement: f64,
    /// `max Q − min Q`.
    pub q_variation: f64,
    /// Half the peak-to-peak Q.
    pub q_amplitude: f64,
    /// Lag of the dominant autocorrelation peak of Q, if any.
    pub q_period: Option<f64>,
    /// Autocorrelation at that peak.
    pub q_acf_peak: f64,
    pub window_start: f64,
    pub window_end: f64,
}

fn window<'a>(series: &'a [DiagnosticsRecord], transient: f64) -> &'a [DiagnosticsRecord] {
    let Some(last) = series.last() else { return series };
    let t0 = series[0].t + transient * (last.t - series[0].t);
    let start = series.partition_point(|r| r.t < t0);
    &series[start.min(series.len() - 1)..]
}

/// Normalized autocorrelation of a mean-removed series, lags `0..max_lag`.
pub fn autocorrelation(x: &[f64], max_lag: usize) -> Vec<f64> {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n.max(1) as f64;
    let d: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let var: f64 = d.iter().map(|v| v * v).sum();
    (0..max_lag.min(n))
        .map(|k| {
            if var == 0.0 {
                return 0.0;
            }
            d[..n - k].iter().zip(&d[k..]).map(|(a, b)| a * b).sum::<f64>() / var
        })
        .collect()
}

/// First autocorrelation maximum after the first zero crossing, limited to a
/// third of the window so at least three periods are observed.
fn dominant_period(q: &[f64]) -> Option<(usize, f64)> {
    let acf = autocorrelation(q, q.len() / 3 + 1);
    let cross = acf.iter().position(|&a| a < 0.0)?;
    let (mut best, mut lag) = (f64::NEG_INFINITY, 0);
    for k in cross.max(1)..acf.len().saturating_sub(1) {
        if acf[k] >= acf[k - 1] && acf[k] >= acf[k + 1] && acf[k] > best {
            best = acf[k];
            lag = k;
            break;
        }
    }
    (lag > 0).then_some((lag, best))
}

pub fn regime_metrics(
    series: &[DiagnosticsRecord],
    diameter: f64,
    thresholds: &ClassifyThresholds,
) -> Result<RegimeMetrics> {
    if series.len() < 2 || !(diameter > 0.0) {
        return Err(Error::InvalidInput(
            "need at least two records and a positive diameter".into(),
        ));
    }
    let w = window(series, thresholds.transient_fraction);
    let c0 = w[0].centroid;
    let displacement = w
        .iter()
        .map(|r| (r.centroid - c0).norm())
        .fold(0.0, f64::max)
        / diameter;
    let net_displacement = (w[w.len() - 1].centroid - c0).norm() / diameter;
    let q: Vec<f64> = w.iter().map(|r| r.q).collect();
    let qmax = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let qmin = q.iter().copied().fold(f64::INFINITY, f64::min);
    let dt_out = if w.len() > 1 {
        (w[w.len() - 1].t - w[0].t) / (w.len() - 1) as f64
    } else {
        0.0
    };
    let peak = dominant_period(&q);
    Ok(RegimeMetrics {
        displacement,
        net_displacement,
        q_variation: qmax - qmin,
        q_amplitude: 0.5 * (qmax - qmin),
        q_period: peak
            .filter(|p| p.1 > thresholds.acf_floor)
            .map(|p| p.0 as f64 * dt_out),
        q_acf_peak: peak.map_or(0.0, |p| p.1),
        window_start: w[0].t,
        window_end: w[w.len() - 1].t,
    })
}

/// Applies the thresholds to already computed metrics.
pub fn classify_metrics(m: &RegimeMetrics, th: &ClassifyThresholds) -> Result<Regime> {
    if m.displacement < th.stationary_displacement && m.q_variation < th.stationary_q_variation {
        Ok(Regime::Stationary)
    } else if m.displacement > th.wandering_displacement {
        Ok(Regime::Wandering)
    } else if m.displacement < th.rotating_displacement && m.q_period.is_some() {
        Ok(Regime::Rotating)
    } else {
        Err(Error::Inconclusive(format!(
            "displacement {:.3} diameters, Q variation {:.3e}, Q period {:?}",
            m.displacement, m.q_variation, m.q_period
        )))
    }
}

pub fn classify_regime(
    series: &[DiagnosticsRecord],
    diameter: f64,
    thresholds: &ClassifyThresholds,
) -> Result<Regime> {
    classify_metrics(&regime_metrics(series, diameter, thresholds)?, thresholds)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HysteresisTrace {
    pub node: usize,
    pub t: Vec<f64>,
    pub v: Vec<f64>,
    pub v_minus_phi: Vec<f64>,
    /// Sample indices `k` with `|V_k − V_{k−1}|` above the threshold.
    pub jumps: Vec<usize>,
}

impl HysteresisTrace {
    pub fn jump_times(&self) -> Vec<f64> {
        self.jumps.iter().map(|&k| self.t[k]).collect()
    }

    /// Jumps per period over the sampled time span.
    pub fn jumps_per_period(&self, period: f64) -> f64 {
        let span = match (self.t.first(), self.t.last()) {
            (Some(a), Some(b)) if b > a => b - a,
            _ => return 0.0,
        };
        self.jumps.len() as f64 * period / span
    }
}

/// Extracts the series of one tracked node; records without it are skipped.
pub fn hysteresis_trace(series: &[DiagnosticsRecord], node: usize, jump_threshold: f64) -> HysteresisTrace {
    let mut trace = HysteresisTrace {
        node,
        t: Vec::new(),
        v: Vec::new(),
        v_minus_phi: Vec::new(),
        jumps: Vec::new(),
    };
    for r in series {
        if let Some(s) = r.tracked.iter().find(|s| s.node == node) {
            if trace.v.last().is_some_and(|&prev| (s.v - prev).abs() > jump_threshold) {
                trace.jumps.push(trace.v.len());
            }
            trace.t.push(r.t);
            trace.v.push(s.v);
            trace.v_minus_phi.push(s.v - s.phi);
        }
    }
    trace
}

/// `Φ′(V) < c₀`: the velocity lies on a stable branch of the 1D problem.
pub fn stability_indicator(phi: &PhiFunction, v: f64, c0: f64) -> Result<bool> {
    Ok(phi.derivative(v)? < c0)
}
