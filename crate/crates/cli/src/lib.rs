//! Experiment runner for the fuzzytori library: configuration parsing,
//! orchestration with a worker pool, and CSV/plot/summary emission.
//!
//! Re-running any experiment with the same config and seed produces
//! byte-identical CSV files; every sampled quantity is driven by explicit
//! (seed, stream) pairs and row aggregation is order-deterministic.

pub mod config;
pub mod describe;
pub mod experiments;
pub mod formats;
pub mod plot;

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use config::ExperimentConfig;

/// Outcome of one experiment run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub kind: String,
    /// Certificate rows that failed their gate; nonzero means exit nonzero.
    pub failed_rows: usize,
    pub artifacts: Vec<String>,
}

/// Parses and validates a config file without running it.
pub fn validate_config(path: &Path) -> Result<ExperimentConfig> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let cfg: ExperimentConfig = toml::from_str(&text).context("parsing config")?;
    cfg.validate()?;
    Ok(cfg)
}

/// Runs an experiment, writing artifacts under `out_dir`.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    threads: Option<usize>,
) -> Result<RunOutcome> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .context("building worker pool")?;
    pool.install(|| experiments::dispatch(cfg, out_dir))
}
