//! Shooting of single arcs `y″ = f(y′)` from `y(0) = 0`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::ode::{dopri_step, hermite, integrate_with, step_factor};
use crate::quadrature::{integrate, QuadratureOptions};

use super::rhs::ArcRhs;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Largest abscissa an arc may reach.
    pub max_span: f64,
    /// Largest accepted step (limits sample spacing).
    pub max_step: f64,
    /// Number of slope samples used to detect rest points before integrating.
    pub presample: usize,
    /// `|w|` beyond which a fixed-span arc is declared blown up.
    pub blowup_slope: f64,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-11,
            atol: 1e-12,
            max_span: 1e4,
            max_step: f64::INFINITY,
            presample: 512,
            blowup_slope: 1e4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    SlopeReached,
    BlowUp,
    MaxSpan,
}

/// Samples `(x_j, y_j, w_j)` of one arc plus its end state.
#[derive(Debug, Clone)]
pub struct ArcSolution {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub w: Vec<f64>,
    pub x_end: f64,
    pub y_end: f64,
    pub w_end: f64,
    pub termination: Termination,
}

impl ArcSolution {
    fn start(w0: f64) -> Self {
        Self {
            x: vec![0.0],
            y: vec![0.0],
            w: vec![w0],
            x_end: 0.0,
            y_end: 0.0,
            w_end: w0,
            termination: Termination::MaxSpan,
        }
    }

    fn push(&mut self, x: f64, y: f64, w: f64) {
        self.x.push(x);
        self.y.push(y);
        self.w.push(w);
        self.x_end = x;
        self.y_end = y;
        self.w_end = w;
    }
}

/// Integrates `w′ = f(w)`, `y′ = w` from `w(0) = w0` until `w = stop_slope`.
///
/// With `stop_slope = +∞` the arc is followed to its vertical tangent by
/// integrating in the tangent angle, which is regular there.
pub fn shoot_arc<R: ArcRhs>(
    rhs: &R,
    w0: f64,
    stop_slope: f64,
    opts: &ShootOptions,
) -> Result<ArcSolution> {
    if !w0.is_finite() || !(stop_slope > w0) {
        return Err(Error::InvalidInput(format!(
            "shoot_arc needs finite w0 < stop_slope (got {w0}, {stop_slope})"
        )));
    }
    if stop_slope == f64::INFINITY {
        return shoot_to_vertical(rhs, w0, opts);
    }
    presample_rates(rhs, w0, stop_slope, opts.presample)?;

    let mut f = |_x: f64, s: &[f64; 2]| -> Result<[f64; 2]> { Ok([rhs.rate(s[0])?, s[0]]) };
    let mut arc = ArcSolution::start(w0);
    let mut x = 0.0;
    let mut st = [w0, 0.0];
    let mut d = f(x, &st)?;
    let mut h = (0.01 * (stop_slope - w0) / d[0]).min(opts.max_step);
    loop {
        if x >= opts.max_span {
            return Err(Error::SpanExceeded {
                max_span: opts.max_span,
                slope: st[0],
            });
        }
        h = h.min(opts.max_span - x);
        let trial = dopri_step(&mut f, x, &st, &d, h, opts.rtol, opts.atol)?;
        if trial.error_norm <= 1.0 {
            if trial.y[0] >= stop_slope {
                let (xe, ye) = locate_slope(&mut f, x, &st, &d, h, &trial.y, &trial.dy, stop_slope, opts)?;
                arc.push(xe, ye[1], ye[0]);
                arc.termination = Termination::SlopeReached;
                return Ok(arc);
            }
            if !(trial.dy[0] > 0.0) {
                return Err(Error::StalledArc {
                    slope: trial.y[0],
                    rate: trial.dy[0],
                    target: stop_slope,
                });
            }
            x += h;
            st = trial.y;
            d = trial.dy;
            arc.push(x, st[1], st[0]);
        }
        h = (h * step_factor(trial.error_norm)).min(opts.max_step);
        if h < 1e-14 * (1.0 + x) {
            return Err(Error::StepSizeUnderflow { x });
        }
    }
}

fn presample_rates<R: ArcRhs>(rhs: &R, w0: f64, stop: f64, n: usize) -> Result<()> {
    let n = n.max(2);
    for k in 0..=n {
        let w = w0 + (stop - w0) * k as f64 / n as f64;
        let r = rhs.rate(w)?;
        if !(r > 0.0) {
            return Err(Error::StalledArc {
                slope: w,
                rate: r,
                target: stop,
            });
        }
    }
    Ok(())
}

/// Finds the abscissa inside the last step where `w = stop`: cubic Hermite
/// guess, then Newton corrections of the step length with re-integration.
#[allow(clippy::too_many_arguments)]
fn locate_slope<F>(
    f: &mut F,
    x: f64,
    st: &[f64; 2],
    d: &[f64; 2],
    h: f64,
    st1: &[f64; 2],
    d1: &[f64; 2],
    stop: f64,
    opts: &ShootOptions,
) -> Result<(f64, [f64; 2])>
where
    F: FnMut(f64, &[f64; 2]) -> Result<[f64; 2]>,
{
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if hermite(st[0], d[0], st1[0], d1[0], h, mid) < stop {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut hs = 0.5 * (lo + hi) * h;
    let mut best = (x + h, *st1);
    for _ in 0..12 {
        if hs <= 0.0 {
            hs = 1e-3 * h;
        }
        let t = dopri_step(f, x, st, d, hs, opts.rtol, opts.atol)?;
        best = (x + hs, t.y);
        let r = t.y[0] - stop;
        if r.abs() <= 1e-14 * stop.abs().max(1.0) || t.dy[0] <= 0.0 {
            break;
        }
        hs -= r / t.dy[0];
    }
    Ok(best)
}

fn shoot_to_vertical<R: ArcRhs>(rhs: &R, w0: f64, opts: &ShootOptions) -> Result<ArcSolution> {
    let a0 = w0.atan();
    let n = opts.presample.max(2);
    for k in 0..=n {
        let a = a0 + (FRAC_PI_2 - a0) * k as f64 / n as f64;
        let kappa = rhs.curvature_at_angle(a)?;
        if !(kappa > 0.0) {
            return Err(Error::StalledArc {
                slope: a.tan(),
                rate: kappa / a.cos().powi(3),
                target: f64::INFINITY,
            });
        }
    }
    // dx/dφ = cos φ / κ, dy/dφ = sin φ / κ.
    let f = |a: f64, _s: &[f64; 2]| -> Result<[f64; 2]> {
        let kappa = rhs.curvature_at_angle(a)?;
        if !(kappa > 0.0) {
            return Err(Error::StalledArc {
                slope: a.tan(),
                rate: kappa / a.cos().powi(3),
                target: f64::INFINITY,
            });
        }
        Ok([a.cos() / kappa, a.sin() / kappa])
    };
    let mut arc = ArcSolution::start(w0);
    let max_span = opts.max_span;
    let end = integrate_with(
        f,
        a0,
        [0.0, 0.0],
        FRAC_PI_2,
        opts.rtol,
        opts.atol,
        (FRAC_PI_2 - a0) / 64.0,
        |a, s, _| {
            if s[0] > max_span {
                return Err(Error::SpanExceeded {
                    max_span,
                    slope: a.tan(),
                });
            }
            arc.push(s[0], s[1], a.tan());
            Ok(())
        },
    )?;
    arc.x_end = end[0];
    arc.y_end = end[1];
    arc.w_end = f64::INFINITY;
    arc.termination = Termination::BlowUp;
    Ok(arc)
}

/// Integrates `w′ = f(w)`, `y′ = w` from `w(0) = w0` over `[0, span]`.
pub fn shoot_span<R: ArcRhs>(
    rhs: &R,
    w0: f64,
    span: f64,
    opts: &ShootOptions,
) -> Result<ArcSolution> {
    if !(span >= 0.0) || !span.is_finite() || !w0.is_finite() {
        return Err(Error::InvalidInput(format!(
            "shoot_span needs a finite span >= 0 and finite w0 (got {span}, {w0})"
        )));
    }
    let f = |_x: f64, s: &[f64; 2]| -> Result<[f64; 2]> { Ok([rhs.rate(s[0])?, s[0]]) };
    let mut arc = ArcSolution::start(w0);
    let blowup = opts.blowup_slope;
    let mut last = (0.0, w0);
    let result = integrate_with(
        f,
        0.0,
        [w0, 0.0],
        span,
        opts.rtol,
        opts.atol,
        opts.max_step,
        |x, s, _| {
            last = (x, s[0]);
            if s[0].abs() > blowup || !s[0].is_finite() {
                return Err(Error::ArcBlowUp {
                    x,
                    target: span,
                    slope: s[0],
                });
            }
            arc.push(x, s[1], s[0]);
            Ok(())
        },
    );
    match result {
        Ok(end) => {
            arc.x_end = span;
            arc.y_end = end[1];
            arc.w_end = end[0];
            arc.termination = Termination::MaxSpan;
            Ok(arc)
        }
        Err(Error::StepSizeUnderflow { x }) => Err(Error::ArcBlowUp {
            x,
            target: span,
            slope: last.1,
        }),
        Err(e) => Err(e),
    }
}

/// `∫₀^∞ dz / f(z)` via `z = tan θ`, where the integrand becomes `cos θ / κ(θ)`.
pub fn blowup_abscissa_by_quadrature<R: ArcRhs>(rhs: &R) -> Result<f64> {
    let n = 1024;
    for k in 0..=n {
        let a = FRAC_PI_2 * k as f64 / n as f64;
        let kappa = rhs.curvature_at_angle(a)?;
        if !(kappa > 0.0) {
            return Err(Error::NonPositiveRhs {
                z: a.tan(),
                value: kappa / a.cos().powi(3),
            });
        }
    }
    integrate(
        |a| {
            let kappa = rhs.curvature_at_angle(a)?;
            if !(kappa > 0.0) {
                return Err(Error::NonPositiveRhs {
                    z: a.tan(),
                    value: kappa,
                });
            }
            Ok(a.cos() / kappa)
        },
        0.0,
        FRAC_PI_2,
        QuadratureOptions {
            abs_tol: 1e-14,
            rel_tol: 1e-11,
            ..Default::default()
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinearity::PhiFunction;
    use crate::travelwave::rhs::{ArcKind, ShootingRhs};

    #[test]
    fn constant_rate_reaches_slope_one_at_one_over_a() {
        for a in [0.5, 2.0, 7.0] {
            let rhs = move |_w: f64| Ok(a);
            let arc = shoot_arc(&rhs, 0.0, 1.0, &ShootOptions::default()).unwrap();
            assert!((arc.x_end - 1.0 / a).abs() < 1e-12, "{}", arc.x_end);
            assert!((arc.w_end - 1.0).abs() < 1e-12);
            assert!((arc.y_end - 0.5 / a).abs() < 1e-12);
            assert_eq!(arc.termination, Termination::SlopeReached);
        }
    }

    #[test]
    fn circle_double_blows_up_at_one_over_a() {
        // w′ = A(1+w²)^{3/2} has w = Ax/√(1−A²x²).
        for a in [0.5, 3.0] {
            let rhs = move |w: f64| Ok(a * (1.0 + w * w).powf(1.5));
            let arc = shoot_arc(&rhs, 0.0, f64::INFINITY, &ShootOptions::default()).unwrap();
            assert!((arc.x_end - 1.0 / a).abs() < 1e-6);
            assert_eq!(arc.termination, Termination::BlowUp);
            for (x, w) in arc.x.iter().zip(&arc.w).take(arc.x.len() - 1) {
                let exact = a * x / (1.0 - a * a * x * x).sqrt();
                assert!((w - exact).abs() < 1e-6 * (1.0 + exact.abs()));
            }
        }
    }

    #[test]
    fn zero_phi_blowup_is_one_over_lambda() {
        let phi = PhiFunction::toy(0.0);
        for lambda in [1.0, 2.0, 4.0] {
            let rhs = ShootingRhs::new(0.0, lambda, &phi, ArcKind::Back);
            let by_ode = shoot_arc(&rhs, 0.0, f64::INFINITY, &ShootOptions::default()).unwrap();
            let by_quad = blowup_abscissa_by_quadrature(&rhs).unwrap();
            assert!((by_ode.x_end - 1.0 / lambda).abs() < 1e-6);
            assert!((by_quad - 1.0 / lambda).abs() < 1e-10);
        }
    }

    #[test]
    fn toy_blowup_methods_agree() {
        let phi = PhiFunction::toy(100.0);
        let lambda = 2.0 * phi.sup_norm() + 1.0;
        for kind in [ArcKind::Back, ArcKind::Front] {
            let rhs = ShootingRhs::new(1.0, lambda, &phi, kind);
            let a = shoot_arc(&rhs, 0.0, f64::INFINITY, &ShootOptions::default()).unwrap().x_end;
            let b = blowup_abscissa_by_quadrature(&rhs).unwrap();
            assert!(((a - b) / b).abs() < 1e-4);
        }
    }

    #[test]
    fn slope_event_is_located_to_tolerance() {
        let phi = PhiFunction::toy(100.0);
        let rhs = ShootingRhs::new(2.0, 9.75, &phi, ArcKind::Side);
        let arc = shoot_arc(&rhs, -1.0, 1.0, &ShootOptions::default()).unwrap();
        assert!((arc.w_end - 1.0).abs() < 1e-8);
        // Samples increase in slope and y integrates w.
        for k in 1..arc.w.len() {
            assert!(arc.w[k] > arc.w[k - 1]);
        }
    }

    #[test]
    fn y_matches_trapezoid_of_w_on_dense_samples() {
        let rhs = |w: f64| Ok(1.0 + 0.5 * w * w);
        let opts = ShootOptions {
            max_step: 1e-4,
            ..Default::default()
        };
        let arc = shoot_arc(&rhs, -0.5, 1.0, &opts).unwrap();
        let mut y = 0.0;
        for k in 1..arc.x.len() {
            y += 0.5 * (arc.w[k] + arc.w[k - 1]) * (arc.x[k] - arc.x[k - 1]);
            assert!((y - arc.y[k]).abs() < 1e-8);
        }
    }

    #[test]
    fn rest_point_stalls() {
        let rhs = |w: f64| Ok(0.5 - w);
        assert!(matches!(
            shoot_arc(&rhs, 0.0, 1.0, &ShootOptions::default()),
            Err(Error::StalledArc { .. })
        ));
        assert!(matches!(
            blowup_abscissa_by_quadrature(&|w: f64| Ok(0.5 - w)),
            Err(Error::NonPositiveRhs { .. })
        ));
    }

    #[test]
    fn span_limit() {
        let rhs = |_w: f64| Ok(1e-3);
        let opts = ShootOptions {
            max_span: 10.0,
            ..Default::default()
        };
        assert!(matches!(
            shoot_arc(&rhs, 0.0, 1.0, &opts),
            Err(Error::SpanExceeded { .. })
        ));
    }

    #[test]
    fn fixed_span_and_blowup() {
        let rhs = |_w: f64| Ok(2.0);
        let arc = shoot_span(&rhs, -1.0, 0.75, &ShootOptions::default()).unwrap();
        assert!((arc.w_end - 0.5).abs() < 1e-12);
        let rhs = |w: f64| Ok((1.0 + w * w).powf(1.5));
        assert!(matches!(
            shoot_span(&rhs, 0.0, 2.0, &ShootOptions::default()),
            Err(Error::ArcBlowUp { slope, .. }) if slope > 0.0
        ));
    }
}
