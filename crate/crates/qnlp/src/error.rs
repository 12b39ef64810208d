use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] qnlp_core::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Whether the error stems from bad flags or configuration rather than
    /// from the data being processed.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Core(qnlp_core::Error::InvalidConfig(_)))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
