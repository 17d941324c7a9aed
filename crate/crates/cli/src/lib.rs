//! Experiment runner: each subcommand recomputes one family of exact
//! statements and writes a self-describing CSV or JSON artifact.

pub mod artifact;
pub mod commands;
pub mod config;

use std::path::PathBuf;

use thiserror::Error;
use wordmaplab::Error as CoreError;

pub use artifact::{Artifact, Check};
pub use config::{Cli, Command, ExperimentConfig, Family, Format, GroupWord, TableAction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("{0}")]
    Budget(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub(crate) fn usage(e: CoreError) -> Self {
        CliError::Usage(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Invariant(_) => EXIT_INVARIANT,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Io(_) | CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        use CoreError::*;
        match e {
            Invariant(_) | Tolerance(_) | FourierPattern(_) | TwistIntegrality(_) | EigenSeparation { .. } => {
                CliError::Invariant(e.to_string())
            }
            BudgetExceeded { .. } => CliError::Budget(format!(
                "{e}; raise {} or use --monte-carlo where offered",
                wordmaplab::budget::BUDGET_ENV
            )),
            Json(_) => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

/// Result of one run: the artifact, its rendering, and where it went.
#[derive(Debug)]
pub struct Outcome {
    pub artifact: Artifact,
    pub rendered: String,
    pub written_to: Option<PathBuf>,
}

impl Outcome {
    /// Nonzero when any recorded invariant failed.
    pub fn exit_code(&self) -> i32 {
        if self.artifact.passed() {
            EXIT_OK
        } else {
            EXIT_INVARIANT
        }
    }
}

/// Validates the config, runs the command on a pool of `config.threads`
/// workers and writes the artifact to `config.out` when set.
pub fn run(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Internal(e.to_string()))?;
    let artifact = pool.install(|| commands::execute(config))?;
    let rendered = artifact.render(config)?;
    if let Some(path) = &config.out {
        std::fs::write(path, &rendered).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(Outcome { artifact, rendered, written_to: config.out.clone() })
}
