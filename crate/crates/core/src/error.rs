use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate domain: {0}")]
    Degenerate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("side {0} does not exist")]
    InvalidSide(usize),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("resolution: {0}")]
    Resolution(String),
    #[error("invalid coefficients: {0}")]
    InvalidCoefficients(String),
    #[error("solver: {0}")]
    Solver(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("empty region")]
    EmptyRegion,
    #[error("comparison function not positive at {0} region nodes")]
    NonPositive(usize),
    #[error("singular evaluation: {0}")]
    Singular(String),
    #[error("internal: {0}")]
    Internal(String),
}
