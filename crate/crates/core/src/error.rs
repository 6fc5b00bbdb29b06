use thiserror::Error;

/// Errors produced by the cipher, the envelope and the timing harness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} must be {expected} bytes, got {actual}")]
    InvalidLength {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("quarter-round indices must be distinct and below 16, got {0:?}")]
    InvalidIndices([usize; 4]),

    /// The tag did not verify. The message must be discarded.
    #[error("authentication failed")]
    AuthenticationFailed,

    /// The buffer cannot hold a nonce and a tag.
    #[error("malformed message: {len} bytes is shorter than the {min}-byte minimum")]
    MalformedMessage { len: usize, min: usize },

    #[error("entropy source unavailable: {0}")]
    Entropy(String),

    #[error("cannot summarize an empty sample set")]
    EmptySampleSet,

    #[error("sample {index} has a negative duration")]
    InvalidSample { index: usize },

    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid latency budget: {0}")]
    InvalidBudget(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
