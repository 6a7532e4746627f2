//! Sharp-interface model of a crawling cell.
//!
//! The crate computes the phase-field standing wave θ₀ and its nonlinearity Φ_β,
//! searches for traveling-wave curves of the sharp-interface limit, and evolves
//! closed curves under the area-preserving law `V = κ + Φ − λ`.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod interp;
pub mod io;
pub mod linalg;
pub mod manifest;
pub mod nonlinearity;
pub mod ode;
pub mod potential;
pub mod quadrature;
pub mod simulator;
pub mod travelwave;

pub use error::{Error, Result};
pub use nonlinearity::{estimate_beta_crit, solve_psi, BetaCritEstimate, PhiFamily, PhiFunction};
pub use potential::{compute_c0, solve_standing_wave, PotentialWell, StandingWaveProfile};
pub use geometry::{DiscreteCurve, Vec2};
