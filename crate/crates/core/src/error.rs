use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("valuation of zero is infinite")]
    InfiniteValuation,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("intersection is not zero-dimensional")]
    NotZeroDimensional,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("point lies on the divisor")]
    OnDivisor,
    #[error("point lies on the zero-cycle")]
    OnCycle,
    #[error("zero-cycle has no generators")]
    MissingGenerators,
    #[error("orbit {0} has no exact data")]
    UnsupportedOrbit(usize),
    #[error("empty sample")]
    EmptySample,
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("the linear system has no nonzero solution")]
    NoKernel,
    #[error("no target cycle")]
    NoTarget,
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),
    #[error("divisors are not simple normal crossings at the cycle: {0}")]
    NotSnc(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("cannot factor {0}")]
    FactorizationTooLarge(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
