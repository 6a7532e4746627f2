//! Grid scan of I₂ over a (V, λ) box and refinement of its sign changes.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::write_csv;
use crate::nonlinearity::PhiFunction;

use super::closure::closure_functional_i2;
use super::profile::{assemble_profile, TravelingWaveProfile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub v_range: (f64, f64),
    pub lambda_range: (f64, f64),
    /// Grid nodes along V and λ (each ≥ 8).
    pub nv: usize,
    pub nl: usize,
    /// Refinement stops once `|I₂| ≤ tol`.
    pub tol: f64,
    /// Roots with `|V|` below this are the trivial circles and are dropped.
    pub min_speed: f64,
    /// Node count of assembled profiles.
    pub profile_nodes: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            v_range: (0.1, 3.0),
            lambda_range: (0.0, 20.0),
            nv: 30,
            nl: 41,
            tol: 1e-8,
            min_speed: 1e-3,
            profile_nodes: 256,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |r: (f64, f64)| r.0.is_finite() && r.1.is_finite() && r.1 > r.0;
        if !ok(self.v_range) || !ok(self.lambda_range) {
            return Err(Error::InvalidInput(format!(
                "ranges must be finite and non-degenerate (V {:?}, lambda {:?})",
                self.v_range, self.lambda_range
            )));
        }
        if self.nv < 8 || self.nl < 8 {
            return Err(Error::InvalidInput(format!(
                "grid must be at least 8x8, got {}x{}",
                self.nv, self.nl
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidInput("tol must be positive".into()));
        }
        Ok(())
    }

    fn node(range: (f64, f64), n: usize, k: usize) -> f64 {
        range.0 + (range.1 - range.0) * k as f64 / (n - 1) as f64
    }
}

/// I₂ on the grid; failed cells are NaN.
#[derive(Debug, Clone)]
pub struct Landscape {
    pub v: Vec<f64>,
    pub lambda: Vec<f64>,
    /// Row-major: `i2[iv * lambda.len() + il]`.
    pub i2: Vec<f64>,
}

impl Landscape {
    pub fn get(&self, iv: usize, il: usize) -> f64 {
        self.i2[iv * self.lambda.len() + il]
    }

    /// Columns `V, lambda, I2`; missing values are written as `NaN`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let nl = self.lambda.len();
        write_csv(
            path,
            &["V", "lambda", "I2"],
            self.i2
                .iter()
                .enumerate()
                .map(|(k, &val)| vec![self.v[k / nl], self.lambda[k % nl], val]),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketAxis {
    Lambda,
    Velocity,
}

#[derive(Debug, Clone)]
pub struct TravelingWave {
    pub v: f64,
    pub lambda: f64,
    pub i2: f64,
    pub axis: BracketAxis,
    pub profile: TravelingWaveProfile,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub landscape: Landscape,
    pub waves: Vec<TravelingWave>,
    /// Brackets whose refinement failed or hit a discontinuity.
    pub rejected_brackets: usize,
}

/// Sign information of one evaluation; a blown-up front arc counts with the
/// sign of its slope.
#[derive(Debug, Clone, Copy)]
enum Probe {
    Value(f64),
    Blown(f64),
    Missing,
}

impl Probe {
    fn at(phi: &PhiFunction, v: f64, lambda: f64) -> Probe {
        match closure_functional_i2(v, lambda, phi) {
            Ok(x) if x.is_finite() => Probe::Value(x),
            Err(Error::ArcBlowUp { slope, .. }) if slope != 0.0 => Probe::Blown(slope.signum()),
            _ => Probe::Missing,
        }
    }

    fn sign(self) -> Option<f64> {
        match self {
            Probe::Value(x) if x != 0.0 => Some(x.signum()),
            Probe::Value(_) => Some(0.0),
            Probe::Blown(s) => Some(s),
            Probe::Missing => None,
        }
    }

    fn value(self) -> f64 {
        match self {
            Probe::Value(x) => x,
            _ => f64::NAN,
        }
    }
}

/// Bisection on the segment `a + s (b − a)`, `s ∈ [0, 1]`.
fn bisect(
    phi: &PhiFunction,
    a: (f64, f64),
    b: (f64, f64),
    sign_a: f64,
    tol: f64,
) -> Option<(f64, f64, f64)> {
    let point = |s: f64| (a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1));
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (v, l) = point(mid);
        let probe = Probe::at(phi, v, l);
        if let Probe::Value(x) = probe {
            if x.abs() <= tol {
                return Some((v, l, x));
            }
        }
        match probe.sign() {
            Some(s) if s == sign_a => lo = mid,
            Some(_) => hi = mid,
            None => return None,
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    // The bracket collapsed without |I₂| reaching tol: a jump, not a root.
    None
}

/// Scans I₂ on the grid, refines every sign change along λ (at fixed V) and
/// along V (at fixed λ), and assembles a profile per root.
pub fn find_traveling_waves(phi: &PhiFunction, config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let (nv, nl) = (config.nv, config.nl);
    let vs: Vec<f64> = (0..nv).map(|k| SearchConfig::node(config.v_range, nv, k)).collect();
    let ls: Vec<f64> = (0..nl)
        .map(|k| SearchConfig::node(config.lambda_range, nl, k))
        .collect();
    let probes: Vec<Probe> = (0..nv * nl)
        .into_par_iter()
        .map(|k| Probe::at(phi, vs[k / nl], ls[k % nl]))
        .collect();
    let landscape = Landscape {
        v: vs.clone(),
        lambda: ls.clone(),
        i2: probes.iter().map(|p| p.value()).collect(),
    };

    // (start, end, sign at start, axis) for every sign change between neighbours.
    let mut brackets = Vec::new();
    for iv in 0..nv {
        for il in 0..nl {
            let p = probes[iv * nl + il];
            let Some(s0) = p.sign() else { continue };
            let mut push = |jv: usize, jl: usize, axis| {
                if let Some(s1) = probes[jv * nl + jl].sign() {
                    if s0 != s1 && !(s0 == 0.0 && s1 == 0.0) {
                        brackets.push(((vs[iv], ls[il]), (vs[jv], ls[jl]), s0, axis));
                    }
                }
            };
            if il + 1 < nl {
                push(iv, il + 1, BracketAxis::Lambda);
            }
            if iv + 1 < nv {
                push(iv + 1, il, BracketAxis::Velocity);
            }
        }
    }

    let refined: Vec<Option<(f64, f64, f64, BracketAxis)>> = brackets
        .par_iter()
        .map(|&(a, b, s0, axis)| {
            if s0 == 0.0 {
                // Exact zero on a node.
                return Some((a.0, a.1, 0.0, axis));
            }
            bisect(phi, a, b, s0, config.tol).map(|(v, l, x)| (v, l, x, axis))
        })
        .collect();
    let mut rejected = refined.iter().filter(|r| r.is_none()).count();

    let dv = (config.v_range.1 - config.v_range.0) / (nv - 1) as f64;
    let dl = (config.lambda_range.1 - config.lambda_range.0) / (nl - 1) as f64;
    let mut roots: Vec<(f64, f64, f64, BracketAxis)> = Vec::new();
    let mut candidates: Vec<_> = refined
        .into_iter()
        .flatten()
        .filter(|r| r.0.abs() >= config.min_speed)
        .collect();
    // λ-brackets first so V-brackets only add roots the λ scan missed.
    candidates.sort_by(|a, b| {
        (a.3 == BracketAxis::Velocity)
            .cmp(&(b.3 == BracketAxis::Velocity))
            .then(a.0.total_cmp(&b.0))
            .then(a.1.total_cmp(&b.1))
    });
    for c in candidates {
        let duplicate = roots.iter().any(|r| {
            (r.0 - c.0).abs() < 1e-9 * (1.0 + c.0.abs()) && (r.1 - c.1).abs() < 1e-9 * (1.0 + c.1.abs())
                || (c.3 == BracketAxis::Velocity
                    && r.3 == BracketAxis::Lambda
                    && (r.0 - c.0).abs() <= dv
                    && (r.1 - c.1).abs() <= dl)
        });
        if !duplicate {
            roots.push(c);
        }
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let assembled: Vec<Option<TravelingWave>> = roots
        .par_iter()
        .map(|&(v, lambda, i2, axis)| {
            assemble_profile(phi, v, lambda, config.profile_nodes)
                .ok()
                .map(|profile| TravelingWave {
                    v,
                    lambda,
                    i2,
                    axis,
                    profile,
                })
        })
        .collect();
    rejected += assembled.iter().filter(|w| w.is_none()).count();
    Ok(SearchResult {
        landscape,
        waves: assembled.into_iter().flatten().collect(),
        rejected_brackets: rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_boxes() {
        let phi = PhiFunction::toy(1.0);
        let mut c = SearchConfig {
            v_range: (0.0, 0.0),
            ..Default::default()
        };
        assert!(find_traveling_waves(&phi, &c).is_err());
        c.v_range = (0.1, 1.0);
        c.nv = 4;
        assert!(find_traveling_waves(&phi, &c).is_err());
    }

    #[test]
    fn zero_phi_has_no_nontrivial_waves() {
        let phi = PhiFunction::toy(0.0);
        let c = SearchConfig {
            v_range: (0.1, 3.0),
            lambda_range: (0.5, 10.0),
            nv: 10,
            nl: 10,
            ..Default::default()
        };
        let r = find_traveling_waves(&phi, &c).unwrap();
        assert!(r.waves.is_empty());
        assert_eq!(r.landscape.i2.len(), 100);
    }

    #[test]
    fn landscape_csv_marks_missing_cells() {
        let dir = tempfile::tempdir().unwrap();
        let l = Landscape {
            v: vec![1.0, 2.0],
            lambda: vec![0.0],
            i2: vec![0.5, f64::NAN],
        };
        let path = dir.path().join("l.csv");
        l.write_csv(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("2,0,NaN"));
    }
}
