//! The closure functional I₂ and the integral criteria for traveling waves.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::nonlinearity::PhiFunction;
use crate::quadrature::{integrate, QuadratureOptions};

use super::rhs::{ArcKind, ShootingRhs};
use super::shoot::{shoot_arc, shoot_span, ArcSolution, ShootOptions};

/// `λ(V) = 2‖Φ‖∞ + V`, which keeps both `f_V` and `f_{−V}` positive.
pub fn lambda_of_v(phi: &PhiFunction, v: f64) -> f64 {
    2.0 * phi.sup_norm() + v
}

/// The three arcs of one shooting pass.
#[derive(Debug, Clone)]
pub struct ClosureArcs {
    pub v: f64,
    pub lambda: f64,
    /// `f_V^λ`, slope 0 → 1.
    pub back: ArcSolution,
    /// `g_V^λ` in the frame rotated clockwise by π/2, slope −1 → 1.
    pub side: ArcSolution,
    /// `f_{−V}^λ` in the frame rotated by π, slope −1 over `span`.
    pub front: ArcSolution,
    /// `x_B − y_R(x_R)`.
    pub span: f64,
}

impl ClosureArcs {
    /// Front slope at the matching abscissa.
    pub fn i2(&self) -> f64 {
        self.front.w_end
    }
}

/// Runs the back, side and front arcs at `(V, λ)`.
pub fn shoot_closure(
    v: f64,
    lambda: f64,
    phi: &PhiFunction,
    opts: &ShootOptions,
) -> Result<ClosureArcs> {
    let back = shoot_arc(&ShootingRhs::new(v, lambda, phi, ArcKind::Back), 0.0, 1.0, opts)?;
    let side = shoot_arc(
        &ShootingRhs::new(v, lambda, phi, ArcKind::Side),
        -back.w_end,
        1.0,
        opts,
    )?;
    let span = back.x_end - side.y_end;
    let front = shoot_span(
        &ShootingRhs::new(v, lambda, phi, ArcKind::Front),
        -side.w_end,
        span,
        opts,
    )?;
    Ok(ClosureArcs {
        v,
        lambda,
        back,
        side,
        front,
        span,
    })
}

/// `I₂(V, λ)`. Zero means the arcs glue into a closed C¹ curve.
pub fn closure_functional_i2(v: f64, lambda: f64, phi: &PhiFunction) -> Result<f64> {
    Ok(shoot_closure(v, lambda, phi, &ShootOptions::default())?.i2())
}

fn quad_opts() -> QuadratureOptions {
    QuadratureOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-10,
        ..Default::default()
    }
}

/// `I(V)` with `λ = λ(V)`, written over `z ∈ (0, V)` and evaluated with
/// `z = V sin θ` to remove the `1/√(V² − z²)` endpoint singularity.
pub fn integral_criterion_i(v: f64, phi: &PhiFunction) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::InvalidInput(format!("I(V) needs V > 0, got {v}")));
    }
    let lambda = lambda_of_v(phi, v);
    let integral = integrate(
        |t| {
            let z = v * t.sin();
            let (pp, pm) = (phi.value(z)?, phi.value(-z)?);
            let num = z * (2.0 * z + pm - pp);
            let den = (z - pp + lambda) * (-z - pm + lambda);
            Ok(num / den)
        },
        0.0,
        FRAC_PI_2,
        quad_opts(),
    )?;
    Ok(integral / v)
}

/// `I(V, λ) = ∫₀^∞ (1/f_{−V}^λ − 1/f_V^λ) dz` for a free `λ`.
pub fn integral_criterion_free(v: f64, lambda: f64, phi: &PhiFunction) -> Result<f64> {
    integrate(
        |t| {
            let u = v * t.cos();
            let kb = u - phi.value(u)? + lambda;
            let kf = -u - phi.value(-u)? + lambda;
            if !(kb > 0.0) || !(kf > 0.0) {
                return Err(Error::NonPositiveRhs {
                    z: t.tan(),
                    value: kb.min(kf),
                });
            }
            Ok(t.cos() * (1.0 / kf - 1.0 / kb))
        },
        0.0,
        FRAC_PI_2,
        quad_opts(),
    )
}
