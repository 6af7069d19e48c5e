//! Library side of the `vbs-swap` command-line tool.
//!
//! [`args`] holds the clap definitions, [`config`] merges flags with an
//! optional JSON config file, [`commands`] runs the four subcommands and
//! [`emit`] renders their results as JSON or CSV.

pub mod args;
pub mod commands;
pub mod config;
pub mod emit;

use std::process::ExitCode;

use thiserror::Error;

pub use args::Cli;
pub use commands::{run, Rendered};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::Io(_) => ExitCode::from(2),
            CliError::Budget(_) => ExitCode::from(3),
        }
    }
}

impl From<vbs_swap::Error> for CliError {
    fn from(e: vbs_swap::Error) -> Self {
        match e {
            vbs_swap::Error::BudgetExceeded { .. } | vbs_swap::Error::ChainLength { .. } => {
                CliError::Budget(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}
