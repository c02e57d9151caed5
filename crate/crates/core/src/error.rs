use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("at least 2 objectives are required, got {0}")]
    TooFewObjectives(usize),
    #[error("non-finite objective value at point {point}, objective {objective}")]
    NonFinite { point: usize, objective: usize },
    #[error("point set is empty")]
    Empty,
    #[error("subset size {k} exceeds the {available} available candidates")]
    SubsetTooLarge { k: usize, available: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("selection cancelled")]
    Cancelled,
}
