use std::process::ExitCode;

use qpade_core::Error;
use thiserror::Error;

/// Why a run did not succeed, mapped onto the exit codes
/// 1 (usage), 2 (exact identity), 3 (precision).
#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("identity failure: {0}")]
    Identity(String),
    #[error("precision failure: {0}")]
    Precision(String),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Usage(_) | Failure::Io(_) => ExitCode::from(1),
            Failure::Identity(_) => ExitCode::from(2),
            Failure::Precision(_) => ExitCode::from(3),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precision(_) => Failure::Precision(e.to_string()),
            Error::Config(_) => Failure::Usage(e.to_string()),
            _ => Failure::Identity(e.to_string()),
        }
    }
}
