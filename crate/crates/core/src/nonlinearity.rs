//! The velocity nonlinearity Φ_β.
//!
//! For a standing wave θ₀, `Φ_β(V) = ∫ ψ(z; V) (θ₀′(z))² dz` where ψ solves
//! `ψ″ + V ψ′ − ψ = β θ₀′` with `ψ(±L) = 0`. The boundary-value problem is
//! discretized with second-order centered differences on the standing-wave grid
//! and solved by the Thomas algorithm. A [`PhiFunction`] caches Φ on a uniform
//! V-grid and interpolates it with a natural cubic spline.
//!
//! The closed-form toy `Φ̃_β(V) = −β (1 − tanh V) e^{−V²}` is also provided.

use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interp::UniformSpline;
use crate::io::{read_csv_columns, write_csv};
use crate::potential::StandingWaveProfile;

/// Step of the centered difference used for Φ′ on tabulated nonlinearities.
pub const PHI_PRIME_STEP: f64 = 1e-4;

/// V-range and spacing of the cached Φ table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRange {
    pub v_min: f64,
    pub v_max: f64,
    pub dv: f64,
}

impl Default for TableRange {
    fn default() -> Self {
        Self {
            v_min: -10.0,
            v_max: 10.0,
            dv: 0.01,
        }
    }
}

impl TableRange {
    pub fn nodes(&self) -> Result<usize> {
        if !(self.dv > 0.0) || !(self.v_max > self.v_min) {
            return Err(Error::InvalidInput(format!(
                "bad table range [{}, {}] with spacing {}",
                self.v_min, self.v_max, self.dv
            )));
        }
        let n = ((self.v_max - self.v_min) / self.dv).round() as usize + 1;
        if n < 4 {
            return Err(Error::InvalidInput("table needs at least 4 nodes".into()));
        }
        Ok(n)
    }
}

#[derive(Debug, Clone)]
pub enum PhiKind {
    BvpBacked {
        profile: Arc<StandingWaveProfile>,
        beta: f64,
    },
    Toy {
        beta: f64,
    },
    /// Imported table without a generating profile.
    Tabulated,
}

/// An evaluatable nonlinearity `V ↦ Φ_β(V)` with derivative.
#[derive(Debug, Clone)]
pub struct PhiFunction {
    kind: PhiKind,
    table: Option<UniformSpline>,
}

/// Solves the ψ boundary-value problem on the profile grid.
///
/// Returns ψ at every node, including the two Dirichlet ends.
pub fn solve_psi(profile: &StandingWaveProfile, v: f64, beta: f64) -> Result<Vec<f64>> {
    let mut work = PsiWorkspace::new(profile.len());
    let mut psi = vec![0.0; profile.len()];
    work.solve(profile, v, beta, &mut psi)?;
    Ok(psi)
}

/// Reusable buffers for repeated ψ solves on one grid.
pub(crate) struct PsiWorkspace {
    /// Modified super-diagonal of the forward sweep.
    sweep: Vec<f64>,
    /// Reciprocal pivots, used by the blocked solve.
    inv: Vec<f64>,
}

impl PsiWorkspace {
    pub(crate) fn new(nodes: usize) -> Self {
        Self {
            sweep: vec![0.0; nodes],
            inv: vec![0.0; nodes],
        }
    }

    /// Stationary solve `ψ″ + V ψ′ − ψ = β θ₀′` into `out` (length = grid nodes).
    pub(crate) fn solve(
        &mut self,
        profile: &StandingWaveProfile,
        v: f64,
        beta: f64,
        out: &mut [f64],
    ) -> Result<()> {
        self.solve_relaxed(profile, v, beta, 0.0, None, out)
    }

    /// Backward-Euler variant: `r (ψ − prev) = ψ″ + V ψ′ − ψ − β θ₀′` with
    /// relaxation weight `r = ε / Δt`. With `r = 0` this is the stationary problem.
    ///
    /// The interior rows share their coefficients, so the Thomas sweep runs
    /// on scalars instead of coefficient arrays.
    pub(crate) fn solve_relaxed(
        &mut self,
        profile: &StandingWaveProfile,
        v: f64,
        beta: f64,
        relax: f64,
        prev: Option<&[f64]>,
        out: &mut [f64],
    ) -> Result<()> {
        let dz = profile.dz();
        if !relaxed_row_is_dominant(v, dz, relax) {
            return Err(Error::SingularSystem { row: 0 });
        }
        let n = profile.len();
        let inv_dz2 = 1.0 / (dz * dz);
        let adv = v / (2.0 * dz);
        // Row written as -(stencil) so the diagonal is positive.
        let lower = -(inv_dz2 - adv);
        let upper = -(inv_dz2 + adv);
        let diag = 2.0 * inv_dz2 + 1.0 + relax;
        let dtheta = profile.dtheta();
        let rhs = |j: usize| -beta * dtheta[j] + prev.map_or(0.0, |p| relax * p[j]);
        out[0] = 0.0;
        out[n - 1] = 0.0;
        let mut c_prev = 0.0;
        let mut d_prev = 0.0;
        let mut inv = 0.0;
        // Once the sweep coefficient repeats bit for bit it stays fixed, and
        // the remaining rows reuse its reciprocal.
        let mut settled = false;
        for j in 1..n - 1 {
            if !settled {
                let pivot = diag - lower * c_prev;
                if pivot == 0.0 || !pivot.is_finite() {
                    return Err(Error::SingularSystem { row: j });
                }
                inv = 1.0 / pivot;
                let c = upper * inv;
                settled = c == c_prev;
                c_prev = c;
            }
            d_prev = (rhs(j) - lower * d_prev) * inv;
            self.sweep[j] = c_prev;
            out[j] = d_prev;
        }
        for j in (1..n - 2).rev() {
            out[j] -= self.sweep[j] * out[j + 1];
        }
        Ok(())
    }
}

/// Centered advection keeps the rows diagonally dominant while
/// `|V|/Δz < 2/Δz² + 1 + relax`.
fn relaxed_row_is_dominant(v: f64, dz: f64, relax: f64) -> bool {
    v.is_finite() && v.abs() / dz < 2.0 / (dz * dz) + 1.0 + relax
}

/// Columns interleaved by [`solve_relaxed_block`].
pub(crate) const BLOCK: usize = 4;

/// [`PsiWorkspace::solve_relaxed`] for [`BLOCK`] contiguous columns at once.
/// The sweeps of independent columns are interleaved so their dependency
/// chains overlap; each column gets bit-identical results to the single solve.
pub(crate) fn solve_relaxed_block(
    profile: &StandingWaveProfile,
    v: &[f64; BLOCK],
    beta: f64,
    relax: f64,
    prev: &[f64],
    out: &mut [f64],
    sweeps: &mut [PsiWorkspace; BLOCK],
) -> Result<()> {
    let n = profile.len();
    let dz = profile.dz();
    let inv_dz2 = 1.0 / (dz * dz);
    let diag = 2.0 * inv_dz2 + 1.0 + relax;
    let mut lower = [0.0; BLOCK];
    let mut inv_tail = [0.0; BLOCK];
    let mut settle = [n; BLOCK];
    for k in 0..BLOCK {
        if !relaxed_row_is_dominant(v[k], dz, relax) {
            return Err(Error::SingularSystem { row: 0 });
        }
        let adv = v[k] / (2.0 * dz);
        lower[k] = -(inv_dz2 - adv);
        let upper = -(inv_dz2 + adv);
        // Forward coefficients until they repeat, as in the single solve.
        let ws = &mut sweeps[k];
        let mut c_prev = 0.0;
        for j in 1..n - 1 {
            let pivot = diag - lower[k] * c_prev;
            if pivot == 0.0 || !pivot.is_finite() {
                return Err(Error::SingularSystem { row: j });
            }
            let inv = 1.0 / pivot;
            let c = upper * inv;
            ws.sweep[j] = c;
            ws.inv[j] = inv;
            if c == c_prev {
                settle[k] = j;
                inv_tail[k] = inv;
                break;
            }
            c_prev = c;
        }
        let fill = settle[k].min(n - 1);
        for j in fill..n - 1 {
            ws.sweep[j] = c_prev;
            ws.inv[j] = inv_tail[k];
        }
    }
    let dtheta = profile.dtheta();
    let mut d = [0.0; BLOCK];
    for j in 1..n - 1 {
        let forcing = -beta * dtheta[j];
        for k in 0..BLOCK {
            let r = forcing + relax * prev[k * n + j];
            d[k] = (r - lower[k] * d[k]) * sweeps[k].inv[j];
            out[k * n + j] = d[k];
        }
    }
    for k in 0..BLOCK {
        out[k * n] = 0.0;
        out[k * n + n - 1] = 0.0;
    }
    for j in (1..n - 2).rev() {
        for k in 0..BLOCK {
            out[k * n + j] -= sweeps[k].sweep[j] * out[k * n + j + 1];
        }
    }
    Ok(())
}

/// Trapezoidal quadrature of `ψ (θ₀′)²` over the grid.
pub fn weighted_integral(profile: &StandingWaveProfile, values: &[f64]) -> f64 {
    let w = profile.weight();
    let n = w.len();
    let interior: f64 = (1..n - 1).map(|j| values[j] * w[j]).sum();
    profile.dz() * (interior + 0.5 * (values[0] * w[0] + values[n - 1] * w[n - 1]))
}

/// Φ_β(V) from a fresh ψ solve, bypassing any table.
pub fn phi_direct(profile: &StandingWaveProfile, v: f64, beta: f64) -> Result<f64> {
    let psi = solve_psi(profile, v, beta)?;
    Ok(weighted_integral(profile, &psi))
}

/// `−β (1 − tanh V) e^{−V²}`.
pub fn toy_phi(beta: f64, v: f64) -> f64 {
    -beta * (1.0 - v.tanh()) * (-v * v).exp()
}

/// Analytic derivative of [`toy_phi`].
pub fn toy_phi_prime(beta: f64, v: f64) -> f64 {
    let sech2 = 1.0 / v.cosh().powi(2);
    beta * (-v * v).exp() * (sech2 + 2.0 * v * (1.0 - v.tanh()))
}

impl PhiFunction {
    /// BVP-backed Φ tabulated on the default range `[-10, 10]`, `ΔV = 0.01`.
    pub fn bvp(profile: Arc<StandingWaveProfile>, beta: f64) -> Result<Self> {
        Self::bvp_with_range(profile, beta, TableRange::default())
    }

    pub fn bvp_with_range(
        profile: Arc<StandingWaveProfile>,
        beta: f64,
        range: TableRange,
    ) -> Result<Self> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::InvalidInput(format!("beta must be >= 0, got {beta}")));
        }
        let n = range.nodes()?;
        let values = (0..n)
            .into_par_iter()
            .map_init(
                || (PsiWorkspace::new(profile.len()), vec![0.0; profile.len()]),
                |(work, psi), k| {
                    let v = range.v_min + range.dv * k as f64;
                    work.solve(&profile, v, beta, psi)?;
                    Ok(weighted_integral(&profile, psi))
                },
            )
            .collect::<Result<Vec<f64>>>()?;
        let table = UniformSpline::new(range.v_min, range.dv, values)?;
        Ok(Self {
            kind: PhiKind::BvpBacked { profile, beta },
            table: Some(table),
        })
    }

    pub fn toy(beta: f64) -> Self {
        Self {
            kind: PhiKind::Toy { beta },
            table: None,
        }
    }

    /// Builds a nonlinearity from samples on a uniform V-grid.
    pub fn from_samples(v: &[f64], phi: &[f64]) -> Result<Self> {
        if v.len() != phi.len() || v.len() < 4 {
            return Err(Error::InvalidInput(
                "Φ table needs >= 4 rows with matching columns".into(),
            ));
        }
        let dv = (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64;
        if !(dv > 0.0) {
            return Err(Error::InvalidInput("Φ table V column must increase".into()));
        }
        for (k, vk) in v.iter().enumerate() {
            if (vk - (v[0] + dv * k as f64)).abs() > 1e-9 * (1.0 + vk.abs()) {
                return Err(Error::InvalidInput(format!(
                    "Φ table V column is not uniform at row {k}"
                )));
            }
        }
        Ok(Self {
            kind: PhiKind::Tabulated,
            table: Some(UniformSpline::new(v[0], dv, phi.to_vec())?),
        })
    }

    /// Reads a table with columns `V, phi` (a `phi_prime` column is ignored).
    pub fn from_csv(path: &Path) -> Result<Self> {
        let cols = read_csv_columns(path, &["V", "phi"])?;
        Self::from_samples(&cols[0], &cols[1])
    }

    pub fn kind(&self) -> &PhiKind {
        &self.kind
    }

    pub fn beta(&self) -> Option<f64> {
        match &self.kind {
            PhiKind::BvpBacked { beta, .. } | PhiKind::Toy { beta } => Some(*beta),
            PhiKind::Tabulated => None,
        }
    }

    pub fn table_range(&self) -> Option<(f64, f64)> {
        self.table.as_ref().map(|t| (t.x_min(), t.x_max()))
    }

    pub fn value(&self, v: f64) -> Result<f64> {
        if !v.is_finite() {
            return Err(Error::InvalidInput(format!("Φ evaluated at non-finite V = {v}")));
        }
        match (&self.kind, &self.table) {
            (PhiKind::Toy { beta }, _) => Ok(toy_phi(*beta, v)),
            (_, Some(table)) if table.contains(v) => Ok(table.value(v)),
            (PhiKind::BvpBacked { profile, beta }, _) => phi_direct(profile, v, *beta),
            (PhiKind::Tabulated, Some(table)) => Err(Error::InvalidInput(format!(
                "V = {v} outside imported Φ table [{}, {}]",
                table.x_min(),
                table.x_max()
            ))),
            (PhiKind::Tabulated, None) => unreachable!("tabulated Φ always has a table"),
        }
    }

    pub fn derivative(&self, v: f64) -> Result<f64> {
        match &self.kind {
            PhiKind::Toy { beta } => Ok(toy_phi_prime(*beta, v)),
            _ => {
                let h = PHI_PRIME_STEP;
                Ok((self.value(v + h)? - self.value(v - h)?) / (2.0 * h))
            }
        }
    }

    /// `max |Φ|` over the cached table (sampled on the default range for the toy).
    pub fn sup_norm(&self) -> f64 {
        match (&self.kind, &self.table) {
            (PhiKind::Toy { beta }, _) => {
                let r = TableRange::default();
                let n = r.nodes().expect("default range is valid");
                (0..n)
                    .map(|k| toy_phi(*beta, r.v_min + r.dv * k as f64).abs())
                    .fold(0.0, f64::max)
            }
            (_, Some(t)) => t.values().iter().map(|v| v.abs()).fold(0.0, f64::max),
            (_, None) => 0.0,
        }
    }

    /// Samples `(V, Φ, Φ′)` on the table grid (default grid for the toy).
    pub fn samples(&self) -> Result<Vec<[f64; 3]>> {
        let (v_min, v_max, dv) = match &self.table {
            Some(t) => {
                let n = t.values().len();
                (t.x_min(), t.x_max(), (t.x_max() - t.x_min()) / (n - 1) as f64)
            }
            None => {
                let r = TableRange::default();
                (r.v_min, r.v_max, r.dv)
            }
        };
        let n = ((v_max - v_min) / dv).round() as usize + 1;
        (0..n)
            .map(|k| {
                let v = v_min + dv * k as f64;
                // Stay on the table at its ends so Φ′ never triggers a direct solve.
                let phi = self.value(v)?;
                let dphi = match (&self.kind, &self.table) {
                    (PhiKind::Toy { .. }, _) => self.derivative(v)?,
                    (_, Some(t)) => {
                        let h = PHI_PRIME_STEP;
                        let lo = (v - h).max(t.x_min());
                        let hi = (v + h).min(t.x_max());
                        (t.value(hi) - t.value(lo)) / (hi - lo)
                    }
                    (_, None) => self.derivative(v)?,
                };
                Ok([v, phi, dphi])
            })
            .collect()
    }

    /// Writes columns `V, phi, phi_prime`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let rows = self.samples()?;
        write_csv(path, &["V", "phi", "phi_prime"], rows.into_iter().map(|r| r.to_vec()))
    }
}

/// A one-parameter family `β ↦ Φ_β` for critical-β estimation.
#[derive(Debug, Clone)]
pub enum PhiFamily {
    Bvp(Arc<StandingWaveProfile>),
    Toy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaCritEstimate {
    pub beta_crit: f64,
    pub bracket: (f64, f64),
    /// Half-width of the sampled V-range `[-v_max, v_max]`.
    pub v_max: f64,
}

/// Bisection on β for the predicate `max_{|V| ≤ v_max} |Φ_β′(V)| < 1`.
///
/// V is sampled every 0.01. Returns the midpoint of a final bracket no wider
/// than `1e-3`.
pub fn estimate_beta_crit(family: &PhiFamily, v_max: f64, beta_hi: f64) -> Result<BetaCritEstimate> {
    if !(v_max > 0.0) || !(beta_hi > 0.0) {
        return Err(Error::InvalidInput(format!(
            "need v_max > 0 and beta_hi > 0 (got {v_max}, {beta_hi})"
        )));
    }
    let dv = 0.01;
    let n = (2.0 * v_max / dv).ceil() as usize + 1;
    let grid: Vec<f64> = (0..n).map(|k| (-v_max + dv * k as f64).min(v_max)).collect();

    // Φ_β is linear in β, so one unit-β table serves every bisection probe.
    let unit_slopes: Vec<f64> = match family {
        PhiFamily::Toy => grid.iter().map(|&v| toy_phi_prime(1.0, v)).collect(),
        PhiFamily::Bvp(profile) => {
            let pad = 2.0 * dv;
            let phi = PhiFunction::bvp_with_range(
                profile.clone(),
                1.0,
                TableRange {
                    v_min: -v_max - pad,
                    v_max: v_max + pad,
                    dv: dv / 2.0,
                },
            )?;
            grid.iter()
                .map(|&v| phi.derivative(v))
                .collect::<Result<_>>()?
        }
    };
    let max_slope = |beta: f64| {
        unit_slopes
            .iter()
            .map(|s| (beta * s).abs())
            .fold(0.0, f64::max)
    };
    if max_slope(beta_hi) < 1.0 {
        return Err(Error::BracketFailure(format!(
            "max |Φ′| = {} < 1 at beta_hi = {beta_hi}",
            max_slope(beta_hi)
        )));
    }
    let (mut lo, mut hi) = (0.0, beta_hi);
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if max_slope(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(BetaCritEstimate {
        beta_crit: 0.5 * (lo + hi),
        bracket: (lo, hi),
        v_max,
    })
}
