//! Traveling waves of the sharp-interface law `V = κ + Φ(V) − λ`.
//!
//! A wave moving with speed `V` in the +y direction has normal speed
//! `V cos φ` on an arc with tangent angle `φ`, so each arc written as a graph
//! satisfies `y″ = f(y′)`. Three arcs are shot in succession (rear, side in a
//! frame rotated by π/2, front in a frame rotated by π); the front slope at the
//! matching abscissa is the closure functional `I₂(V, λ)`, and its zeros give
//! closed C¹ profiles after mirroring.

mod closure;
mod profile;
mod rhs;
mod search;
mod shoot;

pub use closure::{
    closure_functional_i2, integral_criterion_free, integral_criterion_i, lambda_of_v,
    shoot_closure, ClosureArcs,
};
pub use profile::{assemble_profile, ProfileMetadata, TravelingWaveProfile};
pub use rhs::{ArcKind, ArcRhs, ShootingRhs};
pub use search::{
    find_traveling_waves, BracketAxis, Landscape, SearchConfig, SearchResult, TravelingWave,
};
pub use shoot::{
    blowup_abscissa_by_quadrature, shoot_arc, shoot_span, ArcSolution, ShootOptions, Termination,
};
