use thiserror::Error;

use crate::matrix::DenseMatrix;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range {lo}..={hi}")]
    OutOfRange { index: usize, lo: usize, hi: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("field too small: need {required} elements, field has {available}")]
    FieldTooSmall { required: usize, available: u64 },

    #[error("hypothesis failed, witness constraint:\n{witness}")]
    HypothesisFailed { witness: DenseMatrix },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("enumeration too large: {size} matrices exceeds the limit of {limit}")]
    TooLarge { size: u128, limit: u64 },

    #[error("operation requires a finite prime field")]
    RequiresFiniteField,

    #[error("subspace is not a left ideal")]
    NotLeftIdeal,
}
