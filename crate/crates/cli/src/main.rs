use std::process::ExitCode;

use clap::Parser;
use wordmaplab_cli::{run, Cli, ExperimentConfig};

fn main() -> ExitCode {
    let config = match ExperimentConfig::from_cli(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("wordmaplab: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&config) {
        Ok(outcome) => {
            if outcome.written_to.is_none() {
                print!("{}", outcome.rendered);
            }
            for c in outcome.artifact.failures() {
                eprintln!("wordmaplab: invariant violated: {} ({})", c.invariant, c.detail);
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("wordmaplab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
