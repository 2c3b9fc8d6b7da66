use std::path::Path;

use thiserror::Error;

/// Errors surfaced by the pipeline, grouped by cause so callers can map
/// them onto distinct exit codes (I/O vs. malformed data vs. bad settings).
#[derive(Debug, Error)]
pub enum Error {
    /// Underlying I/O failure, with the operation that triggered it.
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    /// Malformed input bytes: bad magic, truncated header, corrupt record.
    #[error("format error: {0}")]
    Format(String),

    /// Invalid configuration or arguments: shapes, ratios, empty inputs.
    #[error("config error: {0}")]
    Config(String),

    /// Numeric failure during training or evaluation (NaN loss etc.).
    #[error("numeric error: {0}")]
    Numeric(String),
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub fn io_path(verb: &str, path: &Path, source: std::io::Error) -> Self {
        Error::Io {
            context: format!("{verb} {}", path.display()),
            source,
        }
    }

    pub fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
