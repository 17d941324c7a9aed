use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use wordmaplab::charlab::DEFAULT_TABLE_SEED;
use wordmaplab::ffpoly::FamilyKind;
use wordmaplab::Budget;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Linear,
    Unitary,
    Selfdual,
}

impl From<Family> for FamilyKind {
    fn from(f: Family) -> Self {
        match f {
            Family::Linear => FamilyKind::Linear,
            Family::Unitary => FamilyKind::Unitary,
            Family::Selfdual => FamilyKind::SelfDual,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "wordmaplab", version, about = "Exact checks on polynomial families, word maps and character tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_TABLE_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Omit the timestamp so reruns are byte-identical.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Worker threads; machine parallelism when absent.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Euler product of λ·Pₙ(q) against C(n+λ-1, n)·qⁿ.
    IdentityCheck {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 64)]
        trunc: usize,
        #[arg(long, default_value_t = 1)]
        lambda: u32,
    },
    /// Closed-form minimal block counts against exhaustive enumeration.
    IrreducibleCounts {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
    /// Exact block-count distribution cₙ,ₘ.
    FactorDist {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 64)]
        trunc: usize,
        /// Cross-check against enumeration up to this degree.
        #[arg(long, default_value_t = 0)]
        enumerate: usize,
    },
    /// Tail fractions of the block-count distribution.
    Tail {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 64)]
        trunc: usize,
        #[arg(long, default_value_t = 8)]
        m_max: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2, 3])]
        k: Vec<u32>,
    },
    /// Word-map distribution with its L¹ distance to uniform.
    Wordmap {
        #[command(flatten)]
        target: GroupWord,
        /// Sample instead of enumerating; output is approximate.
        #[arg(long)]
        monte_carlo: Option<u64>,
    },
    /// Histograms of power-map fiber sizes by two routes.
    Fibers {
        #[arg(long)]
        group: String,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [2i64, 3, 4, 6])]
        m: Vec<i64>,
    },
    /// Unipotent count against q^(n²-n).
    Unipotents {
        #[arg(long)]
        group: String,
    },
    /// Trace-prescribed solutions of x₁x₂x₃ = e in SL₂(q).
    Sl2Triples {
        #[arg(long)]
        q: u64,
        /// One triple `a1,a2,a3` of field codes; every triple when absent.
        #[arg(long, value_delimiter = ',', num_args = 3)]
        traces: Option<Vec<u32>>,
    },
    /// Representation zeta function values.
    Zeta {
        #[arg(long)]
        group: String,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0f64, 2.0])]
        s: Vec<f64>,
    },
    /// Fraction of elements with small character ratios.
    GenericBound {
        #[arg(long)]
        group: String,
        #[arg(long, value_delimiter = ',', default_values_t = [0.25f64, 0.5])]
        eps: Vec<f64>,
    },
    /// Fourier coefficients of an admissible word.
    Admissible {
        #[command(flatten)]
        target: GroupWord,
    },
    /// Emit or re-validate a character table file.
    Table {
        #[command(subcommand)]
        action: TableAction,
    },
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupWord {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub word: String,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "kebab-case")]
pub enum TableAction {
    Emit {
        #[arg(long)]
        group: String,
    },
    Ingest {
        #[arg(long)]
        input: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::IdentityCheck { .. } => "identity-check",
            Command::IrreducibleCounts { .. } => "irreducible-counts",
            Command::FactorDist { .. } => "factor-dist",
            Command::Tail { .. } => "tail",
            Command::Wordmap { .. } => "wordmap",
            Command::Fibers { .. } => "fibers",
            Command::Unipotents { .. } => "unipotents",
            Command::Sl2Triples { .. } => "sl2-triples",
            Command::Zeta { .. } => "zeta",
            Command::GenericBound { .. } => "generic-bound",
            Command::Admissible { .. } => "admissible",
            Command::Table { .. } => "table",
        }
    }
}

/// Everything that determines an artifact. Echoed into every output header.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub timestamp: bool,
    pub threads: Option<usize>,
    pub budget: Budget,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            seed: DEFAULT_TABLE_SEED,
            format: Format::Csv,
            out: None,
            timestamp: false,
            threads: None,
            budget: Budget::default(),
        }
    }

    /// Reads the budget from `WORDMAPLAB_BUDGET` when set.
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let config = ExperimentConfig {
            command: cli.command,
            seed: cli.seed,
            format: cli.format,
            out: cli.out,
            timestamp: !cli.no_timestamp,
            threads: cli.threads,
            budget: Budget::from_env().map_err(CliError::usage)?,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Usage(msg));
        if self.threads == Some(0) {
            return bad("--threads must be positive".into());
        }
        match &self.command {
            Command::IdentityCheck { trunc, lambda, .. } => {
                if *lambda == 0 {
                    return bad("--lambda must be positive".into());
                }
                if *trunc == 0 {
                    return bad("--trunc must be positive".into());
                }
            }
            Command::IrreducibleCounts { n_max, .. } if *n_max == 0 => return bad("--n-max must be positive".into()),
            Command::FactorDist { trunc, enumerate, .. } => {
                if *trunc == 0 || enumerate > trunc {
                    return bad("need 0 < --trunc and --enumerate ≤ --trunc".into());
                }
            }
            Command::Tail { trunc, k, .. } if *trunc == 0 || k.is_empty() => {
                return bad("--trunc must be positive and --k nonempty".into())
            }
            Command::Wordmap { monte_carlo: Some(0), .. } => return bad("--monte-carlo needs N > 0".into()),
            Command::Fibers { m, .. } if m.is_empty() => return bad("--m must be nonempty".into()),
            Command::Zeta { s, .. } if s.iter().any(|&s| !(s > 0.0)) => return bad("--s values must be positive".into()),
            Command::GenericBound { eps, .. } if eps.iter().any(|&e| !(e > 0.0)) => {
                return bad("--eps values must be positive".into())
            }
            _ => {}
        }
        Ok(())
    }
}
