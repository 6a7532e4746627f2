//! Time stepping of closed curves under `V = κ + Φ − λ` with per-node actin
//! columns, an area-preserving λ and regime diagnostics.

mod config;
mod diagnostics;
mod run;
mod state;

pub use config::{ClassifyThresholds, SimConfig};
pub use diagnostics::{
    autocorrelation, classify_metrics, classify_regime, hysteresis_trace, regime_metrics,
    stability_indicator, HysteresisTrace, Regime, RegimeMetrics,
};
pub use run::{run, DirectorySink, MemorySink, Sink};
pub use state::{
    diagnose, init_state, normal_velocities, step, ActinField, DiagnosticsRecord, NodeSample,
    SimulationState,
};

#[cfg(test)]
mod tests;
