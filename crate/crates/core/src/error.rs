use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("k = {k} exceeds code length n = {n}")]
    RateTooHigh { k: usize, n: usize },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("n = {0} is too large for exhaustive enumeration (max 16)")]
    TooLargeToEnumerate(usize),
    #[error("bit index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("threshold must be non-negative, got {0}")]
    NegativeThreshold(f64),
    #[error("no closed-form latency for {0}")]
    NoClosedForm(String),
    #[error("code rate must be in (0, 1], got {0}")]
    BadRate(f64),
    #[error("invalid layout string: {0}")]
    BadLayoutString(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
