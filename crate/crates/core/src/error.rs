use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The integrated standing wave does not climb monotonically from one
    /// well to the other.
    #[error("standing-wave profile is not monotone or does not connect the wells: {0}")]
    NonMonotoneProfile(String),

    #[error("potential is negative at theta = {theta} (2W = {value:e})")]
    DegenerateWell { theta: f64, value: f64 },

    #[error("tridiagonal system is singular: zero pivot at row {row}")]
    SingularSystem { row: usize },

    #[error("bisection bracket has no sign change: {0}")]
    BracketFailure(String),

    /// The slope equation has a rest point before the requested slope, so
    /// the arc can never turn far enough to close.
    #[error("arc stalled at slope {slope} (rate {rate:e}) before reaching {target}")]
    StalledArc { slope: f64, rate: f64, target: f64 },

    #[error("arc exceeded maximum span {max_span} at slope {slope}")]
    SpanExceeded { max_span: f64, slope: f64 },

    #[error("arc slope left every bound (slope {slope:e}) at x = {x} before the requested abscissa {target}")]
    ArcBlowUp { x: f64, target: f64, slope: f64 },

    #[error("shooting right-hand side is non-positive at z = {z} (value {value:e})")]
    NonPositiveRhs { z: f64, value: f64 },

    #[error("adaptive quadrature did not converge (estimate {estimate}, error {error:e})")]
    QuadratureNonConvergence { estimate: f64, error: f64 },

    #[error("ODE step size underflow at x = {x}")]
    StepSizeUnderflow { x: f64 },

    #[error("degenerate tangent at node {node} (|Dp| = {norm:e})")]
    DegenerateTangent { node: usize, norm: f64 },

    #[error("area correction did not converge after {iterations} iterations (relative error {relative_error:e})")]
    AreaLoopDiverged {
        iterations: usize,
        relative_error: f64,
    },

    #[error("classification inconclusive: {0}")]
    Inconclusive(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }

    /// True for failures of the numerical pipeline (as opposed to bad input or IO).
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::InvalidInput(_) | Error::Io { .. } | Error::Parse { .. }
        )
    }
}
