use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

/// Failures of a run, mapped onto sysexits-style exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Domain(#[from] ncdomain::Error),

    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", path.display())]
    Content { path: PathBuf, source: ncdomain::Error },

    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 64,
            CliError::Domain(_) | CliError::Content { .. } => 65,
            CliError::File { .. } | CliError::Output(_) => 66,
        })
    }
}
