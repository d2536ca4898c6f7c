use thiserror::Error;

/// Errors reported by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial ring mismatch: {0}")]
    RingMismatch(String),
    #[error("dimension mismatch: expected n = {expected}, found n = {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("wrong coordinate system: expected {expected}, found {found}")]
    WrongCoords { expected: String, found: String },
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
