use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order must be ≥ {min}, got {got}")]
    InvalidOrder { got: i64, min: i64 },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("order {order} needs at least {order} terms, only {available} available")]
    InsufficientTerms { order: usize, available: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("grid of {size} points aliases a polynomial of degree {degree} (need size > {})", 2 * degree)]
    Aliasing { size: usize, degree: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("ratio undefined for the zero polynomial")]
    UndefinedRatio,

    #[error("gradient undefined at the zero vector")]
    UndefinedGradient,

    #[error("invalid support: {0}")]
    InvalidSupport(String),

    #[error("entry t[{row}][{column}] = {value} exceeds bound {bound}")]
    BoundViolation { row: usize, column: i64, value: f64, bound: f64 },

    #[error("invalid row: {0}")]
    InvalidRow(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

impl Error {
    /// Stable machine-readable tag used in error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidOrder { .. } => "invalid-order",
            Error::InvalidSequence(_) => "invalid-sequence",
            Error::InsufficientTerms { .. } => "insufficient-terms",
            Error::Precondition(_) => "precondition",
            Error::Resource(_) => "resource",
            Error::Aliasing { .. } => "aliasing",
            Error::InvalidInput(_) => "invalid-input",
            Error::UndefinedRatio => "undefined-ratio",
            Error::UndefinedGradient => "undefined-gradient",
            Error::InvalidSupport(_) => "invalid-support",
            Error::BoundViolation { .. } => "bound-violation",
            Error::InvalidRow(_) => "invalid-row",
            Error::InsufficientData(_) => "insufficient-data",
        }
    }
}
