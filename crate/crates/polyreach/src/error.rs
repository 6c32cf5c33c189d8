//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("empty set: {0}")]
    EmptySet(String),
    #[error("unbounded set: {0}")]
    UnboundedSet(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("singular linear system")]
    SingularSystem,
    #[error("linear program infeasible")]
    Infeasible,
    #[error("linear program unbounded")]
    Unbounded,
    #[error("strategy violation: {0}")]
    StrategyViolation(String),
    #[error("divergence: {0}")]
    Divergence(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
