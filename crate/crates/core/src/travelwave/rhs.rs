//! Right-hand sides of the slope equations `w′ = f(w)`.

use crate::error::Result;
use crate::nonlinearity::PhiFunction;

/// A slope equation `w′ = rate(w)` for an arc written as a graph `y(x)`, `w = y′`.
pub trait ArcRhs {
    fn rate(&self, w: f64) -> Result<f64>;

    /// Curvature at tangent angle `φ = atan w`, i.e. `cos³φ · rate(tan φ)`.
    fn curvature_at_angle(&self, phi: f64) -> Result<f64> {
        let c = phi.cos();
        Ok(c * c * c * self.rate(phi.tan())?)
    }
}

impl<F> ArcRhs for F
where
    F: Fn(f64) -> Result<f64>,
{
    fn rate(&self, w: f64) -> Result<f64> {
        self(w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    /// `f_V^λ`.
    Back,
    /// `f_{−V}^λ`.
    Front,
    /// The rotated `g_V^λ`.
    Side,
}

/// `f_V^λ(z) = s³ (V/s − Φ(V/s) + λ)` or `g_V^λ(z) = s³ (−Vz/s − Φ(−Vz/s) + λ)`
/// with `s = √(1+z²)`.
#[derive(Debug, Clone, Copy)]
pub struct ShootingRhs<'a> {
    pub v: f64,
    pub lambda: f64,
    pub phi: &'a PhiFunction,
    pub kind: ArcKind,
}

impl<'a> ShootingRhs<'a> {
    pub fn new(v: f64, lambda: f64, phi: &'a PhiFunction, kind: ArcKind) -> Self {
        Self {
            v,
            lambda,
            phi,
            kind,
        }
    }

    /// Normal speed seen by the arc at unit tangent `(cos φ, sin φ)`.
    fn normal_speed(&self, cos: f64, sin: f64) -> f64 {
        match self.kind {
            ArcKind::Back => self.v * cos,
            ArcKind::Front => -self.v * cos,
            ArcKind::Side => -self.v * sin,
        }
    }

    /// `u − Φ(u) + λ` at normal speed `u`.
    fn law(&self, u: f64) -> Result<f64> {
        Ok(u - self.phi.value(u)? + self.lambda)
    }
}

impl ArcRhs for ShootingRhs<'_> {
    fn rate(&self, z: f64) -> Result<f64> {
        let s = (1.0 + z * z).sqrt();
        Ok(s * s * s * self.law(self.normal_speed(1.0 / s, z / s))?)
    }

    fn curvature_at_angle(&self, phi: f64) -> Result<f64> {
        self.law(self.normal_speed(phi.cos(), phi.sin()))
    }
}
