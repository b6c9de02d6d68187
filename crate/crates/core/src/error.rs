use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A sequence does not cover the support of a matrix row.
    #[error("sequence of length {len} is too short for row {row} (support ends at {needed})")]
    SequenceTooShort { row: usize, needed: usize, len: usize },

    /// The full-density subsequence construction ran out of indices.
    #[error("truncation too small: thresholds reached only up to t = {deepest_t}")]
    TruncationTooSmall { deepest_t: usize },

    /// No vicinity parameter was found within the halving depth.
    #[error("vicinity search exhausted; smallest alpha tried was {smallest_alpha:e}")]
    VicinityExhausted { smallest_alpha: f64 },

    /// A scenario file failed to parse or validate.
    #[error("scenario error: {0}")]
    Scenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
