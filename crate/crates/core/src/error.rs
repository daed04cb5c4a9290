use thiserror::Error;

/// Errors produced by witnesskit operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WitnessError {
    #[error("matrix is not Hermitian (max |H - H^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("iteration budget exhausted after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("label {label} out of range 1..={max} at position {position}")]
    LabelOutOfRange { position: usize, label: usize, max: usize },

    #[error("bad arity: {0}")]
    BadArity(String),

    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),

    #[error("bad subsystem positions ({r1}, {r2}) for {m} subsystems")]
    BadPositions { r1: usize, r2: usize, m: usize },

    #[error("wrong shape: {0}")]
    WrongShape(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("witness does not detect the target under white noise (target expectation {detection:e})")]
    NoDetection { detection: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, WitnessError>;
