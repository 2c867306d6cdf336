use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use fuzzytori_cli::config::ExperimentKind;

#[derive(Parser)]
#[command(
    name = "fuzzytori",
    about = "Finite quantum tori: algebra checks, quantum-metric certificates, \
             and certified quantum Gromov-Hausdorff upper bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory for CSV, summary, and plot artifacts.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print what an experiment kind certifies.
    Describe { kind: String },
    /// Parse and validate a config file.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            threads,
        } => {
            let mut cfg = fuzzytori_cli::validate_config(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let outcome = fuzzytori_cli::run_experiment(&cfg, &out, threads)?;
            for artifact in &outcome.artifacts {
                println!("wrote {artifact}");
            }
            if outcome.failed_rows > 0 {
                eprintln!(
                    "{}: {} certificate row(s) FAILED",
                    outcome.kind, outcome.failed_rows
                );
                return Ok(ExitCode::FAILURE);
            }
            println!("{}: ok", outcome.kind);
            Ok(ExitCode::SUCCESS)
        }
        Command::Describe { kind } => match ExperimentKind::from_name(&kind) {
            Some(k) => {
                println!("{}", fuzzytori_cli::describe::describe(k));
                Ok(ExitCode::SUCCESS)
            }
            None => {
                eprintln!(
                    "unknown kind '{kind}'; expected one of: algebra-check, theorem-main, \
                     annex, collapse, odd-scheme, riemann, norm-field"
                );
                Ok(ExitCode::FAILURE)
            }
        },
        Command::Validate { config } => {
            let cfg = fuzzytori_cli::validate_config(&config)?;
            println!("{}: valid (seed {})", cfg.kind.name(), cfg.seed);
            Ok(ExitCode::SUCCESS)
        }
    }
}
