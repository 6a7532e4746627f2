//! Simulation configuration, read from TOML.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{solve_standing_wave, PotentialWell, StandingWaveProfile};

/// Thresholds used by [`super::classify_regime`], in curve diameters where applicable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifyThresholds {
    /// Fraction of the run discarded as transient before measuring.
    pub transient_fraction: f64,
    pub stationary_displacement: f64,
    pub stationary_q_variation: f64,
    pub rotating_displacement: f64,
    pub wandering_displacement: f64,
    /// Minimum autocorrelation of the Q peak that counts as a period.
    pub acf_floor: f64,
}

impl Default for ClassifyThresholds {
    fn default() -> Self {
        Self {
            transient_fraction: 0.3,
            stationary_displacement: 0.05,
            stationary_q_variation: 1e-4,
            rotating_displacement: 1.0,
            wandering_displacement: 2.0,
            acf_floor: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub epsilon: f64,
    pub beta: f64,
    pub well: PotentialWell,
    /// Curve nodes N.
    pub nodes: usize,
    /// z-grid intervals M (M + 1 nodes on `[-L, L]`).
    pub intervals: usize,
    /// L.
    pub half_width: f64,
    pub dt: f64,
    pub t_end: f64,
    /// Relative area tolerance.
    pub err: f64,
    pub max_area_iters: usize,
    /// Multiplies each λ correction; 1 is a plain Newton step.
    pub area_damping: f64,
    /// Resample to equal chords every this many steps (0 disables).
    pub resample_every: usize,
    /// Emit diagnostics every this many steps.
    pub output_every: usize,
    /// Write curve snapshots every this many steps (0 disables).
    pub snapshot_every: usize,
    /// Nodes whose `(V, Φ)` are recorded for hysteresis traces.
    pub track_nodes: Vec<usize>,
    /// `|ΔV|` between consecutive outputs that counts as a jump.
    pub jump_threshold: f64,
    pub classify: ClassifyThresholds,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.01,
            beta: 100.0,
            well: PotentialWell::asym150(),
            nodes: 256,
            intervals: 400,
            half_width: 20.0,
            dt: 1e-7,
            t_end: 0.1,
            err: 1e-8,
            max_area_iters: 50,
            area_damping: 1.0,
            resample_every: 50,
            output_every: 100,
            snapshot_every: 0,
            track_nodes: vec![0],
            jump_threshold: 0.5,
            classify: ClassifyThresholds::default(),
        }
    }
}

impl SimConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: SimConfig =
            toml::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: SimConfig = toml::from_str(&text).map_err(|e| Error::parse(path, e))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if !(self.epsilon > 0.0) {
            return bad(format!("epsilon must be > 0, got {}", self.epsilon));
        }
        if !(self.beta >= 0.0) {
            return bad(format!("beta must be >= 0, got {}", self.beta));
        }
        if self.nodes < crate::geometry::MIN_NODES {
            return bad(format!("nodes must be >= 8, got {}", self.nodes));
        }
        if self.intervals < 16 || self.intervals % 2 != 0 {
            return bad(format!("intervals must be even and >= 16, got {}", self.intervals));
        }
        if !(self.half_width > 0.0) || !(self.dt > 0.0) || !(self.t_end >= 0.0) {
            return bad("half_width and dt must be > 0 and t_end >= 0".into());
        }
        if !(self.err > 0.0) || self.max_area_iters == 0 {
            return bad("err must be > 0 and max_area_iters >= 1".into());
        }
        if !(self.area_damping > 0.0 && self.area_damping <= 1.0) {
            return bad(format!("area_damping must lie in (0, 1], got {}", self.area_damping));
        }
        if self.output_every == 0 {
            return bad("output_every must be >= 1".into());
        }
        if let Some(&i) = self.track_nodes.iter().find(|&&i| i >= self.nodes) {
            return bad(format!("tracked node {i} out of range"));
        }
        self.well.validate()
    }

    /// `Δt / h²` with `h = 1/N`.
    pub fn dt_over_h2(&self) -> f64 {
        self.dt * (self.nodes as f64).powi(2)
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.dt_over_h2() > 1e-2 {
            w.push(format!(
                "dt/h^2 = {:.3e} exceeds 1e-2; the explicit curve update may be unstable",
                self.dt_over_h2()
            ));
        }
        w
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil().max(0.0) as usize
    }

    pub fn standing_wave(&self) -> Result<StandingWaveProfile> {
        solve_standing_wave(&self.well, self.half_width, self.intervals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip_and_defaults() {
        let cfg = SimConfig::from_toml_str(
            r#"
            epsilon = 0.002
            nodes = 128
            [well]
            kind = "allen_cahn"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.epsilon, 0.002);
        assert_eq!(cfg.nodes, 128);
        assert_eq!(cfg.well, PotentialWell::AllenCahn);
        assert_eq!(cfg.err, 1e-8);
        let back = SimConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(SimConfig::from_toml_str("epsilon = 0.0").is_err());
        assert!(SimConfig::from_toml_str("unknown_key = 1").is_err());
        assert!(SimConfig::from_toml_str("intervals = 101").is_err());
    }

    #[test]
    fn step_ratio_warning() {
        let cfg = SimConfig {
            dt: 1e-6,
            nodes: 256,
            ..Default::default()
        };
        assert!((cfg.dt_over_h2() - 0.065536).abs() < 1e-12);
        assert_eq!(cfg.warnings().len(), 1);
    }
}
