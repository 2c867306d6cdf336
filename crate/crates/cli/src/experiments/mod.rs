//! Experiment implementations. Each writes one or more CSV files (with a
//! '#'-commented header block documenting every column), a human-readable
//! summary, and an SVG rendering of the headline column.

mod algebra_check;
mod annex;
mod collapse_exp;
mod norm_field;
mod odd_scheme;
mod riemann;
mod theorem_main;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::RunOutcome;

pub fn dispatch(cfg: &ExperimentConfig, out: &Path) -> Result<RunOutcome> {
    cfg.validate()?;
    match cfg.kind {
        ExperimentKind::AlgebraCheck => algebra_check::run(cfg, out),
        ExperimentKind::TheoremMain => theorem_main::run(cfg, out),
        ExperimentKind::Annex => annex::run(cfg, out),
        ExperimentKind::Collapse => collapse_exp::run(cfg, out),
        ExperimentKind::OddScheme => odd_scheme::run(cfg, out),
        ExperimentKind::Riemann => riemann::run(cfg, out),
        ExperimentKind::NormField => norm_field::run(cfg, out),
    }
}

/// CSV builder: '#'-prefixed comment block, then a header row, then data rows.
pub(crate) struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(comments: &[&str], header: &[&str]) -> Csv {
        let mut text = String::new();
        for c in comments {
            let _ = writeln!(text, "# {c}");
        }
        let _ = writeln!(text, "{}", header.join(","));
        Csv {
            text,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "csv row width");
        let _ = writeln!(self.text, "{}", fields.join(","));
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// Shortest-roundtrip float formatting; deterministic for a given value.
pub(crate) fn fmt(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        "inf".to_string()
    }
}

pub(crate) fn write_artifact(out: &Path, name: &str, content: &str) -> Result<String> {
    let path = out.join(name);
    fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
    Ok(path.display().to_string())
}
