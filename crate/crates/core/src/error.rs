//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("explicit coefficient list must start with a_0 = 1 (got {0})")]
    NonUnitLeading(f64),

    #[error("kernel coefficient a_{index} = {value} is not strictly positive")]
    NonPositive { index: usize, value: f64 },

    #[error("boundary evaluation requires a certified tail bound (kernel may be unbounded)")]
    UnboundedAtBoundary,

    #[error("operation needs grades up to {needed}, but the sequence depth is {depth}")]
    DepthExceeded { needed: usize, depth: usize },

    #[error("element is neither a boundary symbol nor flagged compact")]
    AmbiguousElement,

    #[error("tau(P_0) = {value} lies outside the face interval [0, {alpha}]")]
    OutOfFace { value: f64, alpha: f64 },

    #[error("the face is empty: the support collapsed while the trace must be 1")]
    EmptyFace,

    #[error("no positive semidefinite point found: {0}")]
    Infeasible(String),

    #[error("row tuple is already a co-isometry; nothing to split")]
    AlreadyExtreme,

    #[error("row tuple is rank deficient; the splitting is not defined here")]
    RankDeficient,

    #[error("quadrature weights must be nonnegative and sum to 1")]
    InvalidQuadrature,

    #[error("invalid input: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
