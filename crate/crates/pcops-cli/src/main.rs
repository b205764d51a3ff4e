use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pcops_cli::runner::{run_experiment, RunOptions};

/// Certified fixed-point iteration experiments: build a method from a JSON
/// config, iterate it, verify its certificate claims, and persist the trace
/// and verification report.
#[derive(Parser)]
#[command(name = "pcops", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config file.
    ///
    /// Exit status: 0 all checks passed, 1 a check failed, 2 configuration
    /// error, 3 numeric failure.
    Run {
        /// Path to the experiment config (JSON).
        config: PathBuf,
        /// Output directory (overrides the config and $PCOPS_OUT).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the run seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Suppress per-check summary lines.
        #[arg(long)]
        quiet: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            quiet,
        } => {
            let opts = RunOptions {
                config_path: config,
                out_override: out,
                seed_override: seed,
                quiet,
            };
            match run_experiment(&opts) {
                Ok(outcome) => ExitCode::from(outcome.exit_code()),
                Err(err) => {
                    eprintln!("{err}");
                    ExitCode::from(err.exit_code())
                }
            }
        }
    }
}
