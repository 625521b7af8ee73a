use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("halfspace intersection is empty")]
    EmptyIntersection,
    #[error("origin is not an interior point of the body")]
    OriginNotInterior,
    #[error("iteration did not converge after {iterations} steps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("unsupported dimension {dim} for {what}")]
    UnsupportedDimension { dim: usize, what: &'static str },
    #[error("least-squares design is ill conditioned (condition number {0:e})")]
    IllConditioned(f64),
    #[error("operation {op} does not support body kind {kind}")]
    UnsupportedBodyKind { op: &'static str, kind: &'static str },
    #[error("rejection sampler stalled: acceptance rate {0:e}")]
    RejectionStall(f64),
    #[error("point is not on the boundary (residual {0:e})")]
    OffBoundary(f64),
    #[error("budget {budget} is too small; need at least {min}")]
    BudgetTooSmall { budget: usize, min: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
