//! Dormand-Prince 5(4) embedded Runge-Kutta stepping for small autonomous-in-form systems.

use crate::error::Result;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub type State<const D: usize> = [f64; D];

/// One accepted-or-rejected trial step.
#[derive(Debug, Clone, Copy)]
pub struct Trial<const D: usize> {
    pub y: State<D>,
    /// Derivative at the new point (first stage of the next step).
    pub dy: State<D>,
    /// Scaled RMS error norm; the step is acceptable when `<= 1`.
    pub error_norm: f64,
}

#[inline]
fn axpy<const D: usize>(y: &State<D>, h: f64, terms: &[(f64, &State<D>)]) -> State<D> {
    let mut out = *y;
    for (c, k) in terms {
        for d in 0..D {
            out[d] += h * c * k[d];
        }
    }
    out
}

/// Takes a single Dormand-Prince step from `(x, y)` with derivative `dy`.
pub fn dopri_step<const D: usize, F>(
    rhs: &mut F,
    x: f64,
    y: &State<D>,
    dy: &State<D>,
    h: f64,
    rtol: f64,
    atol: f64,
) -> Result<Trial<D>>
where
    F: FnMut(f64, &State<D>) -> Result<State<D>>,
{
    let k1 = *dy;
    let k2 = rhs(x + C2 * h, &axpy(y, h, &[(A21, &k1)]))?;
    let k3 = rhs(x + C3 * h, &axpy(y, h, &[(A31, &k1), (A32, &k2)]))?;
    let k4 = rhs(x + C4 * h, &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = rhs(
        x + C5 * h,
        &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    )?;
    let k6 = rhs(
        x + h,
        &axpy(
            y,
            h,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ),
    )?;
    let y_new = axpy(
        y,
        h,
        &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
    );
    let k7 = rhs(x + h, &y_new)?;

    let mut sum = 0.0;
    for d in 0..D {
        let e = h
            * (E1 * k1[d] + E3 * k3[d] + E4 * k4[d] + E5 * k5[d] + E6 * k6[d] + E7 * k7[d]);
        let scale = atol + rtol * y[d].abs().max(y_new[d].abs());
        sum += (e / scale).powi(2);
    }
    let error_norm = (sum / D as f64).sqrt();
    Ok(Trial {
        y: y_new,
        dy: k7,
        error_norm: if error_norm.is_finite() {
            error_norm
        } else {
            f64::INFINITY
        },
    })
}

/// Step-size factor from the error norm (order-5 controller with safety margin).
pub fn step_factor(error_norm: f64) -> f64 {
    if error_norm == 0.0 {
        return 5.0;
    }
    (0.9 * error_norm.powf(-0.2)).clamp(0.2, 5.0)
}

/// Cubic Hermite interpolant on a step of length `h` at fraction `s` in `[0, 1]`.
pub fn hermite(y0: f64, d0: f64, y1: f64, d1: f64, h: f64, s: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

/// Integrates `y' = rhs(x, y)` from `x0` to `x1` with adaptive stepping.
pub fn integrate_to<const D: usize, F>(
    rhs: F,
    x0: f64,
    y0: State<D>,
    x1: f64,
    rtol: f64,
    atol: f64,
) -> Result<State<D>>
where
    F: FnMut(f64, &State<D>) -> Result<State<D>>,
{
    integrate_with(rhs, x0, y0, x1, rtol, atol, f64::INFINITY, |_, _, _| Ok(()))
}

/// Like [`integrate_to`], but calls `on_step(x, y, dy)` after every accepted
/// step and never takes a step longer than `max_step`.
#[allow(clippy::too_many_arguments)]
pub fn integrate_with<const D: usize, F, G>(
    mut rhs: F,
    x0: f64,
    y0: State<D>,
    x1: f64,
    rtol: f64,
    atol: f64,
    max_step: f64,
    mut on_step: G,
) -> Result<State<D>>
where
    F: FnMut(f64, &State<D>) -> Result<State<D>>,
    G: FnMut(f64, &State<D>, &State<D>) -> Result<()>,
{
    let span = x1 - x0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let max_step = max_step.abs();
    let mut x = x0;
    let mut y = y0;
    let mut dy = rhs(x, &y)?;
    let mut h = dir * (span.abs() * 1e-3).max(1e-12).min(max_step);
    loop {
        let remaining = x1 - x;
        if remaining.abs() <= 1e-15 * span.abs().max(1.0) {
            return Ok(y);
        }
        if h.abs() > remaining.abs() {
            h = remaining;
        }
        let trial = dopri_step(&mut rhs, x, &y, &dy, h, rtol, atol)?;
        if trial.error_norm <= 1.0 {
            x = if h == remaining { x1 } else { x + h };
            y = trial.y;
            dy = trial.dy;
            on_step(x, &y, &dy)?;
        }
        let next = h * step_factor(trial.error_norm);
        if next.abs() < 1e-14 * span.abs().max(1.0) {
            return Err(crate::error::Error::StepSizeUnderflow { x });
        }
        h = dir * next.abs().min(max_step);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let y = integrate_to(|_, y: &[f64; 1]| Ok([y[0]]), 0.0, [1.0], 2.0, 1e-12, 1e-14).unwrap();
        assert!((y[0] - 2f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn harmonic_oscillator_backwards() {
        let y = integrate_to(
            |_, y: &[f64; 2]| Ok([y[1], -y[0]]),
            0.0,
            [0.0, 1.0],
            -1.5,
            1e-12,
            1e-14,
        )
        .unwrap();
        assert!((y[0] - (-1.5f64).sin()).abs() < 1e-10);
        assert!((y[1] - (-1.5f64).cos()).abs() < 1e-10);
    }

    #[test]
    fn hermite_reproduces_cubics() {
        let p = |x: f64| x * x * x - 2.0 * x + 1.0;
        let dp = |x: f64| 3.0 * x * x - 2.0;
        let (a, b) = (0.5, 1.7);
        for k in 0..=10 {
            let s = k as f64 / 10.0;
            let v = hermite(p(a), dp(a), p(b), dp(b), b - a, s);
            assert!((v - p(a + s * (b - a))).abs() < 1e-13);
        }
    }
}
