//! Experiment configuration: a versioned TOML file with a `kind`, a mandatory
//! `seed` for anything sampled, and kind-specific parameters.

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

use fuzzytori::lengths::LengthFunction;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub version: u32,
    pub kind: ExperimentKind,
    pub seed: u64,
    #[serde(default)]
    pub params: Params,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExperimentKind {
    #[serde(rename = "algebra-check")]
    AlgebraCheck,
    #[serde(rename = "theorem-main")]
    TheoremMain,
    #[serde(rename = "annex")]
    Annex,
    #[serde(rename = "collapse")]
    Collapse,
    #[serde(rename = "odd-scheme")]
    OddScheme,
    #[serde(rename = "riemann")]
    Riemann,
    #[serde(rename = "norm-field")]
    NormField,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::AlgebraCheck => "algebra-check",
            ExperimentKind::TheoremMain => "theorem-main",
            ExperimentKind::Annex => "annex",
            ExperimentKind::Collapse => "collapse",
            ExperimentKind::OddScheme => "odd-scheme",
            ExperimentKind::Riemann => "riemann",
            ExperimentKind::NormField => "norm-field",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "algebra-check" => Some(Self::AlgebraCheck),
            "theorem-main" => Some(Self::TheoremMain),
            "annex" => Some(Self::Annex),
            "collapse" => Some(Self::Collapse),
            "odd-scheme" => Some(Self::OddScheme),
            "riemann" => Some(Self::Riemann),
            "norm-field" => Some(Self::NormField),
            _ => None,
        }
    }
}

/// Union of the kind-specific parameters; validation checks the fields the
/// selected kind actually uses.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Params {
    /// Group moduli, e.g. [5, 5].
    pub k: Option<Vec<u64>>,
    /// Antisymmetric matrix of rationals ("num/den" strings), row-major rows.
    pub s: Option<Vec<Vec<String>>>,
    /// Limit twist targets (one per 2x2 block).
    pub psi: Option<Vec<f64>>,
    /// Prime levels.
    pub primes: Option<Vec<u64>>,
    pub epsilon: Option<f64>,
    /// Length kind: "max-arc" | "sum-arc" | "euclidean-arc".
    pub length: Option<String>,
    /// Polygon order for modulus constraints.
    pub polygon_order: Option<usize>,
    pub samples: Option<usize>,
    /// Number of metric-space instances (annex).
    pub spaces: Option<usize>,
    /// Metric space size (annex) or target dimension (odd-scheme).
    pub n: Option<usize>,
    /// Path to a metric-space file (annex) overriding random generation.
    pub metric_file: Option<String>,
    /// Collapse: kept dimensions and family indices ("inf" allowed).
    pub delta: Option<usize>,
    pub family: Option<Vec<String>>,
    /// Odd scheme target dimension.
    pub d: Option<usize>,
    /// Riemann: integrand name ("exp-cos" | "cos-squared" | "one").
    pub function: Option<String>,
    pub quadrature_points: Option<usize>,
    /// Norm-field: element coefficient lines "x_1 .. x_d re im".
    pub element: Option<Vec<String>>,
    /// Norm-field: also compute the Lip-norm field.
    pub with_lip: Option<bool>,
    /// Convergence probes.
    pub probe_pairs: Option<usize>,
    pub probe_random: Option<usize>,
}

impl ExperimentConfig {
    pub fn length_function(&self, d: usize) -> Result<LengthFunction> {
        let kind = self.params.length.as_deref().unwrap_or("max-arc");
        Ok(match kind {
            "max-arc" => LengthFunction::max_arc(d),
            "sum-arc" => LengthFunction::sum_arc(d),
            "euclidean-arc" => LengthFunction::euclidean_arc(d),
            other => bail!("params.length: unknown length kind '{other}'"),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            bail!("version: expected {CONFIG_VERSION}, got {}", self.version);
        }
        let p = &self.params;
        match self.kind {
            ExperimentKind::AlgebraCheck => {
                let Some(k) = &p.k else { bail!("params.k: required") };
                if k.is_empty() || k.iter().any(|&x| x == 0) {
                    bail!("params.k: moduli must be positive");
                }
            }
            ExperimentKind::TheoremMain => {
                let Some(primes) = &p.primes else {
                    bail!("params.primes: required")
                };
                if primes.is_empty() {
                    bail!("params.primes: must be nonempty");
                }
                if p.psi.as_ref().map_or(true, |v| v.is_empty()) {
                    bail!("params.psi: required and nonempty");
                }
                if p.epsilon.map_or(true, |e| e <= 0.0) {
                    bail!("params.epsilon: required and positive");
                }
            }
            ExperimentKind::Annex => {
                if p.metric_file.is_none() {
                    let n = p.n.unwrap_or(0);
                    if n == 0 {
                        bail!("params.n: required (or params.metric_file)");
                    }
                }
                if p.epsilon.map_or(true, |e| e <= 0.0) {
                    bail!("params.epsilon: required and positive");
                }
                if let Some(m) = p.polygon_order {
                    if m < 8 || m % 2 != 0 {
                        bail!("params.polygon_order: must be even and >= 8");
                    }
                }
            }
            ExperimentKind::Collapse => {
                let Some(k) = &p.k else { bail!("params.k: required") };
                if k.is_empty() {
                    bail!("params.k: must be nonempty");
                }
                let Some(delta) = p.delta else {
                    bail!("params.delta: required")
                };
                if delta == 0 || delta > k.len() {
                    bail!("params.delta: must be in 1..=d");
                }
                if p.family.as_ref().map_or(true, |f| f.is_empty()) {
                    bail!("params.family: required and nonempty");
                }
            }
            ExperimentKind::OddScheme => {
                let Some(d) = p.d else { bail!("params.d: required") };
                if d % 2 == 0 {
                    bail!("params.d: must be odd");
                }
                if p.epsilon.map_or(true, |e| e <= 0.0) {
                    bail!("params.epsilon: required and positive");
                }
            }
            ExperimentKind::Riemann => {
                let Some(primes) = &p.primes else {
                    bail!("params.primes: required")
                };
                if primes.is_empty() {
                    bail!("params.primes: must be nonempty");
                }
                let f = p.function.as_deref().unwrap_or("exp-cos");
                if !matches!(f, "exp-cos" | "cos-squared" | "one") {
                    bail!("params.function: unknown integrand '{f}'");
                }
            }
            ExperimentKind::NormField => {
                let Some(primes) = &p.primes else {
                    bail!("params.primes: required")
                };
                if primes.is_empty() {
                    bail!("params.primes: must be nonempty");
                }
                if p.element.as_ref().map_or(true, |e| e.is_empty()) {
                    bail!("params.element: required and nonempty");
                }
            }
        }
        Ok(())
    }
}

/// Parses the family index list used by the collapse experiment ("inf" is the
/// limit member).
pub fn parse_family(items: &[String]) -> Result<Vec<fuzzytori::lengths::CollapseIndex>> {
    items
        .iter()
        .map(|s| {
            if s == "inf" {
                Ok(fuzzytori::lengths::CollapseIndex::Infinity)
            } else {
                s.parse::<u64>()
                    .map(fuzzytori::lengths::CollapseIndex::Finite)
                    .map_err(|_| anyhow::anyhow!("params.family: bad index '{s}'"))
            }
        })
        .collect()
}
