//! Cubic spline interpolants used by the Φ table and by curve resampling.

use crate::error::{Error, Result};
use crate::linalg::{cyclic_thomas_solve, thomas_solve};

/// Natural cubic spline through samples on a uniform grid.
#[derive(Debug, Clone)]
pub struct UniformSpline {
    x0: f64,
    dx: f64,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl UniformSpline {
    pub fn new(x0: f64, dx: f64, values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n < 4 || dx <= 0.0 || !dx.is_finite() {
            return Err(Error::InvalidInput(format!(
                "spline needs >= 4 samples and positive spacing (got {n}, dx = {dx})"
            )));
        }
        // Natural end conditions: M_0 = M_{n-1} = 0.
        let m = n - 2;
        let lower = vec![1.0; m];
        let diag = vec![4.0; m];
        let upper = vec![1.0; m];
        let rhs: Vec<f64> = (1..n - 1)
            .map(|k| 6.0 * (values[k + 1] - 2.0 * values[k] + values[k - 1]) / (dx * dx))
            .collect();
        let inner = thomas_solve(&lower, &diag, &upper, &rhs)?;
        let mut second = Vec::with_capacity(n);
        second.push(0.0);
        second.extend(inner);
        second.push(0.0);
        Ok(Self {
            x0,
            dx,
            values,
            second,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x0
    }

    pub fn x_max(&self) -> f64 {
        self.x0 + self.dx * (self.values.len() - 1) as f64
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_min() && x <= self.x_max()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn locate(&self, x: f64) -> (usize, f64) {
        let n = self.values.len();
        let t = ((x - self.x0) / self.dx).clamp(0.0, (n - 1) as f64);
        let k = (t.floor() as usize).min(n - 2);
        (k, t - k as f64)
    }

    pub fn value(&self, x: f64) -> f64 {
        let (k, s) = self.locate(x);
        let (a, b) = (1.0 - s, s);
        let h2 = self.dx * self.dx;
        a * self.values[k]
            + b * self.values[k + 1]
            + ((a * a * a - a) * self.second[k] + (b * b * b - b) * self.second[k + 1]) * h2 / 6.0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let (k, s) = self.locate(x);
        let (a, b) = (1.0 - s, s);
        (self.values[k + 1] - self.values[k]) / self.dx
            + ((1.0 - 3.0 * a * a) * self.second[k] + (3.0 * b * b - 1.0) * self.second[k + 1])
                * self.dx
                / 6.0
    }
}

/// Periodic cubic spline on non-uniform knots `t_0 = 0 < t_1 < ... < t_{n-1} < period`.
#[derive(Debug, Clone)]
pub struct PeriodicSpline {
    knots: Vec<f64>,
    period: f64,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl PeriodicSpline {
    pub fn new(knots: Vec<f64>, period: f64, values: Vec<f64>) -> Result<Self> {
        let n = knots.len();
        if n < 3 || values.len() != n {
            return Err(Error::InvalidInput(
                "periodic spline needs >= 3 knots and matching values".into(),
            ));
        }
        let h: Vec<f64> = (0..n)
            .map(|k| {
                if k + 1 < n {
                    knots[k + 1] - knots[k]
                } else {
                    period + knots[0] - knots[n - 1]
                }
            })
            .collect();
        if h.iter().any(|&hk| !(hk > 0.0)) {
            return Err(Error::InvalidInput(
                "periodic spline knots must be strictly increasing within one period".into(),
            ));
        }
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for k in 0..n {
            let hp = h[(k + n - 1) % n];
            let hk = h[k];
            lower[k] = hp;
            diag[k] = 2.0 * (hp + hk);
            upper[k] = hk;
            let yp = values[(k + n - 1) % n];
            let yn = values[(k + 1) % n];
            rhs[k] = 6.0 * ((yn - values[k]) / hk - (values[k] - yp) / hp);
        }
        let second = cyclic_thomas_solve(&lower, &diag, &upper, &rhs)?;
        Ok(Self {
            knots,
            period,
            values,
            second,
        })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    fn segment_length(&self, k: usize) -> f64 {
        let n = self.knots.len();
        if k + 1 < n {
            self.knots[k + 1] - self.knots[k]
        } else {
            self.period + self.knots[0] - self.knots[n - 1]
        }
    }

    /// Maps any parameter into `(segment, offset within segment)`.
    pub fn locate(&self, t: f64) -> (usize, f64) {
        let t = (t - self.knots[0]).rem_euclid(self.period) + self.knots[0];
        let k = match self
            .knots
            .binary_search_by(|probe| probe.total_cmp(&t))
        {
            Ok(k) => k,
            Err(0) => 0,
            Err(k) => k - 1,
        };
        (k, t - self.knots[k])
    }

    /// Evaluates inside segment `k` at offset `s` in `[0, h_k]`.
    pub fn eval_in(&self, k: usize, s: f64) -> f64 {
        let n = self.knots.len();
        let h = self.segment_length(k);
        let b = s / h;
        let a = 1.0 - b;
        let k1 = (k + 1) % n;
        a * self.values[k]
            + b * self.values[k1]
            + ((a * a * a - a) * self.second[k] + (b * b * b - b) * self.second[k1]) * h * h / 6.0
    }

    pub fn value(&self, t: f64) -> f64 {
        let (k, s) = self.locate(t);
        self.eval_in(k, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn uniform_spline_interpolates_nodes_and_smooth_data() {
        let dx = 0.05;
        let xs: Vec<f64> = (0..201).map(|k| -5.0 + dx * k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (0.7 * x).sin()).collect();
        let sp = UniformSpline::new(-5.0, dx, ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((sp.value(*x) - y).abs() < 1e-14);
        }
        for k in 0..100 {
            let x = -3.0 + 0.0613 * k as f64;
            assert!((sp.value(x) - (0.7 * x).sin()).abs() < 1e-7);
            assert!((sp.derivative(x) - 0.7 * (0.7 * x).cos()).abs() < 1e-5);
        }
    }

    #[test]
    fn periodic_spline_reproduces_trig() {
        let n = 40;
        let knots: Vec<f64> = (0..n)
            .map(|k| TAU * (k as f64 + 0.3 * ((k as f64) * 0.5).sin().powi(2)) / n as f64)
            .collect();
        let values: Vec<f64> = knots.iter().map(|t| t.cos()).collect();
        let sp = PeriodicSpline::new(knots, TAU, values).unwrap();
        for k in 0..97 {
            let t = -1.0 + 0.11 * k as f64;
            assert!((sp.value(t) - t.cos()).abs() < 5e-5, "t = {t}");
        }
    }
}
