use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid exponent p = {0}")]
    InvalidExponent(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("direction is not a unit vector (norm {0})")]
    NonUnitDirection(f64),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no qualifying fragment: {0}")]
    NoFragment(String),
    #[error("flatness hypothesis violated: {0}")]
    NotFlat(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
