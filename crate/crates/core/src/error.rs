use thiserror::Error;

use crate::rounding::RoundingTrace;

/// Errors produced by the solvers and the instance I/O layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Malformed instance data. `line` is 1-based when the input came from text.
    #[error("format error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Format { line: Option<usize>, message: String },

    #[error("capacity exceeded: {required} nodes required, limit is {limit}")]
    Capacity { required: u128, limit: u128 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// The simplex gave up. When raised inside a rounding run, the fixes made
    /// so far are attached.
    #[error("LP numeric failure after {iterations} iterations")]
    NumericFailure {
        iterations: usize,
        partial: Option<Box<RoundingTrace>>,
    },
}

impl Error {
    pub(crate) fn format(line: Option<usize>, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
