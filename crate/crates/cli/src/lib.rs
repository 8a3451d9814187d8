//! IO companion to `movoid-core`: the certificate file format with its
//! from-scratch verifier, stable JSON/CSV output schemas, the threaded
//! search driver, and the command implementations behind the `movoid`
//! binary.

pub mod cert;
pub mod commands;
pub mod parallel;
pub mod report;

use thiserror::Error;

/// Command failures, each mapping to a process exit code: verification
/// failures exit 1, usage and parse problems exit 2, exceeded budgets
/// exit 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Usage(String),
    #[error("budget exceeded")]
    Budget,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Budget => 3,
            CliError::Io(_) => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Output formats; text is human oriented and unstable, JSON and CSV are
/// the machine contracts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}
