use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed matrix: {rows}x{cols} needs {expected} entries, got {actual}")]
    MalformedMatrix { rows: usize, cols: usize, expected: usize, actual: usize },

    #[error("non-finite amplitude encountered")]
    NonFinite,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid subsystem index {index} for a state with {count} subsystems")]
    InvalidSubsystem { index: usize, count: usize },

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("invalid filter: {0}")]
    InvalidFilter(String),

    #[error("index {index} out of range 0..{bound}")]
    OutOfRange { index: usize, bound: usize },

    #[error("the singlet outcome is projected out in vbs mode")]
    SingletExcluded,

    #[error("outcome sequence has length {actual}, chain has {expected} internal nodes")]
    OutcomeLength { expected: usize, actual: usize },

    #[error(
        "enumeration of {outcomes} outcomes exceeds the budget of {budget}; \
         use sample_outcomes or p_sum_transfer instead"
    )]
    BudgetExceeded { outcomes: u128, budget: u128 },

    #[error("chain length {n} outside the supported range {min}..={max}")]
    ChainLength { n: usize, min: usize, max: usize },

    #[error("zero operator has no defined entanglement")]
    ZeroOperator,

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
