use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {point} outside domain [{lo}, {hi}]")]
    Domain { point: f64, lo: f64, hi: f64 },

    #[error("derivative of order {order} is not available for {what}")]
    UnsupportedOrder { order: usize, what: &'static str },

    #[error("degenerate induced metric (det = {det})")]
    DegenerateMetric { det: f64 },

    #[error("degenerate curve: zero speed")]
    DegenerateCurve,

    #[error("no closed-form mean curvature for {surface} with {connection}")]
    UnsupportedPair {
        surface: &'static str,
        connection: &'static str,
    },

    #[error("halfspace violation: <p, u> = {height} must be positive")]
    HalfspaceViolation { height: f64 },

    #[error("invalid parameter: {0}")]
    BadParam(String),

    #[error("integrator failed at x = {x} with step {h}: {reason}")]
    StepFailure { x: f64, h: f64, reason: String },

    #[error("solution is flat (second derivative vanishes identically)")]
    FlatSolution,

    #[error("first variation is only defined for the Levi-Civita connection")]
    UnsupportedConnection,

    #[error("quadrature did not converge (estimated error {estimate:e})")]
    Quadrature { estimate: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
