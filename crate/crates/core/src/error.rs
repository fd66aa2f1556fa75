use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid cone: {0}")]
    InvalidCone(String),
    #[error("element is not in the cone")]
    NotInCone,
    #[error("element is not an order unit")]
    NotAnOrderUnit,
    #[error("ratios are not comparable: {0}")]
    NotComparable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not a derivation of the cone: {0}")]
    NotADerivation(String),
    #[error("basis is not closed under the commutator (residual {residual:e})")]
    NotClosed { residual: f64 },
    #[error("cut oracle is inconsistent at {0}")]
    OracleInconsistent(String),
    #[error("hypothesis not satisfied: {0}")]
    Vacuous(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
