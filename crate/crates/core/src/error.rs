use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension {requested} exceeds the direction-number table ({available} dimensions)")]
    UnsupportedDimension { requested: usize, available: usize },

    #[error("malformed direction-number table at line {line}: {reason}")]
    DirectionTable { line: usize, reason: String },

    #[error("value {value} outside the open unit interval")]
    Domain { value: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (pivot {pivot:e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("integrand evaluation produced a non-finite value (coordinate {coordinate:?})")]
    Evaluation { coordinate: Option<usize> },

    #[error("degenerate direction: {0}")]
    DegenerateDirection(String),

    #[error("monotonicity contract violated: {0}")]
    ContractViolation(String),

    #[error("sign condition violated at index {index} (value {value:e})")]
    SignCondition { index: usize, value: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
