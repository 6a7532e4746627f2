//! Simulation state and the explicit/implicit time step.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{signed_area, DiscreteCurve, Vec2};
use crate::nonlinearity::{solve_relaxed_block, PsiWorkspace, BLOCK};
use crate::potential::StandingWaveProfile;

use super::config::SimConfig;

/// Per-node actin columns `a[i][j]`, stored row-major with one row per curve node.
#[derive(Debug, Clone, PartialEq)]
pub struct ActinField {
    columns: usize,
    grid: usize,
    values: Vec<f64>,
}

impl ActinField {
    pub fn zeros(columns: usize, grid: usize) -> Self {
        Self {
            columns,
            grid,
            values: vec![0.0; columns * grid],
        }
    }

    /// Builds a field from explicit columns; the ends of each column are forced to 0.
    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self> {
        let grid = cols.first().map_or(0, |c| c.len());
        if grid < 3 || cols.iter().any(|c| c.len() != grid) {
            return Err(Error::InvalidInput("actin columns must share a length >= 3".into()));
        }
        let mut values = Vec::with_capacity(cols.len() * grid);
        for c in cols {
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("actin values must be finite".into()));
            }
            let start = values.len();
            values.extend_from_slice(c);
            values[start] = 0.0;
            values[start + grid - 1] = 0.0;
        }
        Ok(Self {
            columns: cols.len(),
            grid,
            values,
        })
    }

    /// Number of curve nodes.
    pub fn columns(&self) -> usize {
        self.columns
    }

    /// Number of z-grid nodes.
    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.values[i * self.grid..(i + 1) * self.grid]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `Φ_i = Σ_j a_ij (θ₀′)²_j Δz`.
    pub fn phi(&self, profile: &StandingWaveProfile, i: usize) -> f64 {
        let w = profile.weight();
        self.column(i)
            .iter()
            .zip(w)
            .map(|(a, w)| a * w)
            .sum::<f64>()
            * profile.dz()
    }

    fn resampled(&self, map: &crate::geometry::ResampleMap) -> Self {
        let mut out = Self::zeros(map.len(), self.grid);
        out.values
            .par_chunks_mut(self.grid)
            .enumerate()
            .for_each(|(i, col)| {
                for (k, w) in map.weights(i) {
                    for (c, a) in col.iter_mut().zip(self.column(k)) {
                        *c += w * a;
                    }
                }
            });
        out
    }
}

#[derive(Debug, Clone)]
pub struct SimulationState {
    pub curve: DiscreteCurve,
    pub actin: ActinField,
    pub t: f64,
    pub lambda: f64,
    /// Conserved target area.
    pub area0: f64,
    /// Accepted steps so far.
    pub steps: usize,
    /// Result of the last self-intersection check.
    pub self_intersecting: bool,
    /// Second actin buffer, swapped in after each solve.
    spare: Vec<f64>,
}

/// `(V, Φ)` of one tracked node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeSample {
    pub node: usize,
    pub v: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub step: usize,
    pub t: f64,
    pub q: f64,
    pub centroid: Vec2,
    pub area: f64,
    pub lambda: f64,
    /// Area-correction iterations of this step.
    pub iters: usize,
    pub self_intersecting: bool,
    pub tracked: Vec<NodeSample>,
}

/// Curvature, inward normal, `|Dp|` and `Φ` at every node.
struct Kinematics {
    kappa: Vec<f64>,
    normal: Vec<Vec2>,
    speed: Vec<f64>,
    phi: Vec<f64>,
}

impl Kinematics {
    fn new(curve: &DiscreteCurve, actin: &ActinField, profile: &StandingWaveProfile) -> Result<Self> {
        let n = curve.len();
        let per_node: Vec<(f64, Vec2, f64, f64)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let d1 = curve.stencil_d1(i);
                Ok((
                    curve.curvature(i)?,
                    curve.inward_normal(i)?,
                    d1.norm(),
                    actin.phi(profile, i),
                ))
            })
            .collect::<Result<_>>()?;
        let mut k = Kinematics {
            kappa: Vec::with_capacity(n),
            normal: Vec::with_capacity(n),
            speed: Vec::with_capacity(n),
            phi: Vec::with_capacity(n),
        };
        for (kappa, nu, s, phi) in per_node {
            k.kappa.push(kappa);
            k.normal.push(nu);
            k.speed.push(s);
            k.phi.push(phi);
        }
        Ok(k)
    }

    /// Arclength mean of `κ + Φ` by the periodic trapezoid rule.
    fn mean_forcing(&self) -> f64 {
        let num: f64 = (0..self.kappa.len())
            .map(|i| (self.kappa[i] + self.phi[i]) * self.speed[i])
            .sum();
        num / self.speed.iter().sum::<f64>()
    }

    fn velocity(&self, i: usize, lambda: f64) -> f64 {
        self.kappa[i] + self.phi[i] - lambda
    }

    fn tracked(&self, nodes: &[usize], lambda: f64) -> Vec<NodeSample> {
        nodes
            .iter()
            .filter(|&&i| i < self.kappa.len())
            .map(|&i| NodeSample {
                node: i,
                v: self.velocity(i, lambda),
                phi: self.phi[i],
            })
            .collect()
    }
}

/// Solves every column into `next`; `actin` supplies the previous values.
fn solve_columns(
    actin: &ActinField,
    next: &mut Vec<f64>,
    profile: &StandingWaveProfile,
    velocities: &[f64],
    beta: f64,
    relax: f64,
) -> Result<()> {
    let grid = actin.grid;
    next.resize(actin.values.len(), 0.0);
    let prev = &actin.values;
    let width = BLOCK * grid;
    next.par_chunks_mut(width)
        .enumerate()
        .try_for_each_init(
            || std::array::from_fn(|_| PsiWorkspace::new(grid)),
            |ws: &mut [PsiWorkspace; BLOCK], (b, out)| {
                let first = b * BLOCK;
                let before = &prev[first * grid..first * grid + out.len()];
                if out.len() == width {
                    let v = std::array::from_fn(|k| velocities[first + k]);
                    return solve_relaxed_block(profile, &v, beta, relax, before, out, ws);
                }
                for (k, col) in out.chunks_mut(grid).enumerate() {
                    let p = &before[k * grid..(k + 1) * grid];
                    ws[0].solve_relaxed(profile, velocities[first + k], beta, relax, Some(p), col)?;
                }
                Ok(())
            },
        )
}

fn check_grid(config: &SimConfig, profile: &StandingWaveProfile) -> Result<()> {
    if profile.intervals() != config.intervals
        || (profile.half_width() - config.half_width).abs() > 1e-12 * config.half_width
    {
        return Err(Error::InvalidInput(format!(
            "standing-wave grid (L={}, M={}) does not match config (L={}, M={})",
            profile.half_width(),
            profile.intervals(),
            config.half_width,
            config.intervals
        )));
    }
    Ok(())
}

/// Initial state: every actin column solves the stationary problem with the
/// normal speed `dot(velocity, ν_i)` of a rigid translation (zero if absent).
pub fn init_state(
    curve: DiscreteCurve,
    profile: &StandingWaveProfile,
    config: &SimConfig,
    tw_velocity: Option<Vec2>,
) -> Result<SimulationState> {
    config.validate()?;
    check_grid(config, profile)?;
    let n = curve.len();
    let normals: Vec<Vec2> = (0..n).map(|i| curve.inward_normal(i)).collect::<Result<_>>()?;
    let velocities: Vec<f64> = match tw_velocity {
        Some(u) => normals.iter().map(|nu| u.dot(*nu)).collect(),
        None => vec![0.0; n],
    };
    let mut actin = ActinField::zeros(n, profile.len());
    let mut values = Vec::new();
    solve_columns(&actin, &mut values, profile, &velocities, config.beta, 0.0)?;
    actin.values = values;
    let kin = Kinematics::new(&curve, &actin, profile)?;
    Ok(SimulationState {
        area0: curve.shoelace_area(),
        lambda: kin.mean_forcing(),
        self_intersecting: !curve.is_simple(),
        curve,
        actin,
        t: 0.0,
        steps: 0,
        spare: Vec::new(),
    })
}

/// Normal velocities `κ_i + Φ_i − λ` of the current state at its own mean λ.
pub fn normal_velocities(state: &SimulationState, profile: &StandingWaveProfile) -> Result<Vec<f64>> {
    let kin = Kinematics::new(&state.curve, &state.actin, profile)?;
    let lambda = kin.mean_forcing();
    Ok((0..state.curve.len()).map(|i| kin.velocity(i, lambda)).collect())
}

/// Diagnostics of a state without advancing it.
pub fn diagnose(
    state: &SimulationState,
    config: &SimConfig,
    profile: &StandingWaveProfile,
) -> Result<DiagnosticsRecord> {
    let kin = Kinematics::new(&state.curve, &state.actin, profile)?;
    Ok(record(state, &kin, config, 0))
}

fn record(state: &SimulationState, kin: &Kinematics, config: &SimConfig, iters: usize) -> DiagnosticsRecord {
    DiagnosticsRecord {
        step: state.steps,
        t: state.t,
        q: state.curve.isoperimetric_quotient(),
        centroid: state.curve.centroid(),
        area: state.curve.shoelace_area(),
        lambda: state.lambda,
        iters,
        self_intersecting: state.self_intersecting,
        tracked: kin.tracked(&config.track_nodes, state.lambda),
    }
}

/// Resamples to equal chords, carries actin columns along and rescales about
/// the centroid so the polygon area is unchanged.
fn resample(state: &mut SimulationState, n: usize) -> Result<()> {
    let area = state.curve.signed_area();
    let (curve, map) = state.curve.resample_with_map(n)?;
    let c = curve.centroid();
    let s = (area / curve.signed_area()).sqrt();
    let pts = curve
        .points()
        .iter()
        .map(|&p| c + (p - c) * s)
        .collect();
    state.curve = DiscreteCurve::preserving_orientation(pts)?;
    state.actin = state.actin.resampled(&map);
    state.self_intersecting = !state.curve.is_simple();
    Ok(())
}

/// Moved points for a given λ.
fn moved(curve: &DiscreteCurve, kin: &Kinematics, lambda: f64, dt: f64) -> Vec<Vec2> {
    curve
        .points()
        .iter()
        .enumerate()
        .map(|(i, &p)| p + kin.normal[i] * (kin.velocity(i, lambda) * dt))
        .collect()
}

/// `dA/dλ` of the moved polygon; the area is quadratic in λ.
fn area_slope(curve: &DiscreteCurve, kin: &Kinematics, lambda: f64, dt: f64) -> f64 {
    let pts = moved(curve, kin, lambda, dt);
    let n = pts.len();
    // q_i(λ) = b_i − λ Δt ν_i, so dA/dλ = −½ Δt Σ (ν_i × q_{i+1} + q_i × ν_{i+1}).
    let s: f64 = (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            kin.normal[i].cross(pts[j]) + pts[i].cross(kin.normal[j])
        })
        .sum();
    -0.5 * dt * s
}

/// One time step; on error the state is left at the last accepted step
/// (possibly resampled).
pub fn step(
    state: &mut SimulationState,
    config: &SimConfig,
    profile: &StandingWaveProfile,
) -> Result<DiagnosticsRecord> {
    if config.resample_every > 0 && state.steps > 0 && state.steps % config.resample_every == 0 {
        resample(state, config.nodes)?;
    }
    let kin = Kinematics::new(&state.curve, &state.actin, profile)?;
    let dt = config.dt;
    let mut lambda = kin.mean_forcing();
    let mut pts = moved(&state.curve, &kin, lambda, dt);
    let mut rel = (signed_area(&pts) - state.area0) / state.area0;
    let mut iters = 0;
    while rel.abs() > config.err {
        if iters == config.max_area_iters {
            return Err(Error::AreaLoopDiverged {
                iterations: iters,
                relative_error: rel,
            });
        }
        let slope = area_slope(&state.curve, &kin, lambda, dt);
        if !(slope.abs() > 0.0) || !slope.is_finite() {
            return Err(Error::AreaLoopDiverged {
                iterations: iters,
                relative_error: rel,
            });
        }
        lambda -= config.area_damping * rel * state.area0 / slope;
        pts = moved(&state.curve, &kin, lambda, dt);
        rel = (signed_area(&pts) - state.area0) / state.area0;
        iters += 1;
    }
    if pts.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidInput("non-finite curve point".into()));
    }
    let velocities: Vec<f64> = (0..pts.len()).map(|i| kin.velocity(i, lambda)).collect();
    let curve = DiscreteCurve::preserving_orientation(pts)?;
    let mut next = std::mem::take(&mut state.spare);
    if let Err(e) = solve_columns(
        &state.actin,
        &mut next,
        profile,
        &velocities,
        config.beta,
        config.epsilon / dt,
    ) {
        state.spare = next;
        return Err(e);
    }
    state.spare = std::mem::replace(&mut state.actin.values, next);
    state.curve = curve;
    state.lambda = lambda;
    state.t += dt;
    state.steps += 1;
    // The tracked (V, Φ) are those that drove this step.
    Ok(record(state, &kin, config, iters))
}
