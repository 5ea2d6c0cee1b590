use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("cannot reduce an element of negative valuation {0}")]
    NegativeValuation(i64),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("filling has shape {found:?}, expected {expected:?}")]
    ShapeMismatch { expected: Vec<usize>, found: Vec<usize> },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("generator has an entry of negative valuation")]
    NonIntegralInput,
    #[error("module is not of full rank ({rank} < {expected})")]
    NotFullRank { rank: usize, expected: usize },
    #[error("exponent matrix has a negative cycle through index {0}")]
    NegativeCycle(usize),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A cross-check between two independent computations disagreed.
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
