use std::io;

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the frontend and its tooling can report.
///
/// Variants are grouped by the class of problem rather than by module, so a
/// caller (notably the CLI) can map them onto exit statuses with
/// [`Error::is_config`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("encoding error: {0}")]
    Encoding(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("shape error: expected {expected} sub-units, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("handshake error: {0}")]
    Handshake(String),

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("transport error: {0}")]
    Transport(String),

    #[error("inventory error: {0}")]
    Inventory(String),

    #[error("format error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Format { line: Option<usize>, message: String },

    #[error("size error: {set} set has {available} rows, needs {needed}")]
    Size {
        set: &'static str,
        needed: usize,
        available: usize,
    },

    #[error("template error: {0}")]
    Template(String),

    #[error("generation error: {0}")]
    Generation(String),

    #[error("coverage error: missing cells {}", .0.join(", "))]
    Coverage(Vec<String>),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn format(message: impl Into<String>) -> Self {
        Error::Format {
            line: None,
            message: message.into(),
        }
    }

    pub(crate) fn format_at(line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            line: Some(line),
            message: message.into(),
        }
    }

    /// True for errors caused by configuration rather than by the data.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_))
    }

    /// True for the three failure classes of the external LID backend.
    pub fn is_backend(&self) -> bool {
        matches!(
            self,
            Error::Handshake(_) | Error::Protocol(_) | Error::Transport(_)
        )
    }
}
