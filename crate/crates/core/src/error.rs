use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("signal has no component orthogonal to the noise fields; it cannot be sensed noise-free")]
    NoSignalComponent,

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("non-finite value {value} at site {site}")]
    NonFinite { site: usize, value: f64 },

    #[error("noise fields are linearly dependent (numerical rank {rank} of {count})")]
    DependentNoise { rank: usize, count: usize },

    #[error("{noise} noise fields leave no orthogonal complement on {sites} sites")]
    NoComplement { noise: usize, sites: usize },

    #[error("unreachable: {0}")]
    Unreachable(String),

    #[error("too many configurations to enumerate: {count} exceeds {limit}")]
    TooLarge { count: u128, limit: u128 },

    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error("spectrum is not linearly spaced")]
    NotLinear,

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("insufficient time: {0}")]
    InsufficientTime(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
