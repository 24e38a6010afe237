use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

/// Errors surfaced by the command-line front-end.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] mu_forge::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("{}: {message}", path.display())]
    Input { path: PathBuf, message: String },

    #[error("invalid recipe {}: {source}", path.display())]
    Recipe { path: PathBuf, source: serde_json::Error },

    /// A property check failed; carries the rendered report.
    #[error("property check failed")]
    Failed(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    /// Stable process exit codes.
    pub fn exit_code(&self) -> u8 {
        use mu_forge::Error as E;
        match self {
            CliError::Io { .. } => 1,
            CliError::Input { .. } | CliError::Recipe { .. } => 2,
            CliError::Core(E::Parse { .. } | E::Tautology { .. }) => 2,
            CliError::Core(E::BoundExceeded { .. }) => 3,
            CliError::Core(E::Verification(_)) | CliError::Failed(_) => 5,
            CliError::Core(_) => 4,
        }
    }
}

impl From<CliError> for ExitCode {
    fn from(e: CliError) -> ExitCode {
        ExitCode::from(e.exit_code())
    }
}

pub type CliResult<T> = Result<T, CliError>;
