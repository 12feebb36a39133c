use std::path::PathBuf;

use wavesource_core::Error as CoreError;

/// Failures surfaced by the command-line front end, each mapped to a
/// process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("missing input: {0}")]
    MissingInput(String),

    #[error("malformed input {path}: {reason}")]
    BadInput { path: PathBuf, reason: String },

    #[error("numerical failure: {0}")]
    Numerical(CoreError),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::MissingInput(_) | CliError::BadInput { .. } => 3,
            CliError::Numerical(_) => 4,
            CliError::Io { .. } => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn bad_input(path: impl Into<PathBuf>, reason: impl ToString) -> Self {
        CliError::BadInput {
            path: path.into(),
            reason: reason.to_string(),
        }
    }
}

impl From<CoreError> for CliError {
    /// Errors that a different configuration would avoid are configuration
    /// errors; the rest are numerical.
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter { .. }
            | CoreError::ObservationAtCenter
            | CoreError::WindowTooEarly { .. }
            | CoreError::UnderSampled { .. }
            | CoreError::LatticeTooSmall { .. }
            | CoreError::GridMismatch(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e),
        }
    }
}
