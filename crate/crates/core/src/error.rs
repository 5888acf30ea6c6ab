use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// An input violates a documented precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A malformed line in an edge-list or membership file.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A randomized generator could not meet its target.
    #[error("generation failed: {msg}")]
    Generation {
        msg: String,
        /// Best mixing coefficient reached before giving up, when relevant.
        best_mu: Option<f64>,
    },

    /// A detector could not produce a partition.
    #[error("detector failed: {0}")]
    Detector(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    /// True for errors caused by bad user input rather than runtime failure.
    pub fn is_argument(&self) -> bool {
        matches!(self, Error::Argument(_) | Error::Parse { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
