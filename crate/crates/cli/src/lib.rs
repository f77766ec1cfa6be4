//! Experiment runner behind the `trustfusion` binary.

pub mod commands;
pub mod spec;

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read spec {}: {source}", path.display())]
    Missing {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed spec {origin}: {message}")]
    Malformed { origin: String, message: String },
    #[error("invalid `{field}`: {message}")]
    Invalid { field: String, message: String },
    #[error("{context}: {source}")]
    Output {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Model(#[from] trustfusion::Error),
}

impl CliError {
    /// Process exit status. Usage errors exit with 2 through clap.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Missing { .. } => 3,
            CliError::Malformed { .. } => 4,
            CliError::Invalid { .. } => 5,
            CliError::Output { .. } | CliError::Model(_) => 1,
        }
    }
}
