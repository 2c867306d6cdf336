//! Subgroup averages against the certified Haar integral.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::Result;
use rayon::prelude::*;

use fuzzytori::groups::FinAbGroup;
use fuzzytori::qmetric::riemann_gap;

use crate::config::ExperimentConfig;
use crate::experiments::{fmt, write_artifact, Csv};
use crate::plot::{line_chart, Series};
use crate::RunOutcome;

const TAU: f64 = std::f64::consts::TAU;

fn integrand(name: &str) -> (fn(&[f64]) -> f64, f64, &'static str) {
    match name {
        "exp-cos" => (
            |t: &[f64]| (TAU * t[0]).cos().exp(),
            TAU * std::f64::consts::E,
            "exp(cos 2 pi t); integral is the modified Bessel value I0(1)",
        ),
        "cos-squared" => (
            |t: &[f64]| (TAU * t[0]).cos().powi(2),
            TAU,
            "cos^2(2 pi t); integral 1/2, aliased exactly for k >= 3",
        ),
        _ => (|_t: &[f64]| 1.0, 0.0, "constant 1"),
    }
}

pub fn run(cfg: &ExperimentConfig, out: &Path) -> Result<RunOutcome> {
    let p = &cfg.params;
    let primes = p.primes.clone().expect("validated");
    let name = p.function.as_deref().unwrap_or("exp-cos").to_string();
    let (f, lipschitz, doc) = integrand(&name);
    let points = p.quadrature_points.unwrap_or(1_000_000);

    let gaps: Vec<(u64, fuzzytori::qmetric::RiemannGap)> = primes
        .par_iter()
        .map(|&k| {
            let group = FinAbGroup::new(vec![k]).map_err(|e| anyhow::anyhow!("{e}"))?;
            Ok((k, riemann_gap(f, &group, points, lipschitz)))
        })
        .collect::<Result<_>>()?;

    let mut csv = Csv::new(
        &[
            "subgroup means vs the certified torus integral",
            &format!("integrand: {doc}"),
            "k: subgroup level U_k",
            "subgroup_mean: (1/k) sum over U_k of f",
            &format!("integral: certified {points}-point quadrature value"),
            "quad_error: certified quadrature error bound",
            "gap: |subgroup_mean - integral|",
        ],
        &["k", "subgroup_mean", "integral", "quad_error", "gap"],
    );
    let mut chart = Vec::new();
    for (k, g) in &gaps {
        csv.row(&[
            k.to_string(),
            fmt(g.subgroup_mean),
            fmt(g.integral.value),
            fmt(g.integral.error_bound),
            fmt(g.gap),
        ]);
        chart.push((*k as f64, g.gap));
    }

    // the headline property: the gap column decreases along the levels
    let mut monotone = true;
    for w in gaps.windows(2) {
        if w[1].1.gap > w[0].1.gap + 1e-15 {
            monotone = false;
        }
    }

    let mut summary = String::new();
    let _ = writeln!(summary, "riemann: integrand {name}, levels {primes:?}");
    let _ = writeln!(
        summary,
        "  integral = {:.12} (certified error {:.1e})",
        gaps[0].1.integral.value, gaps[0].1.integral.error_bound
    );
    for (k, g) in &gaps {
        let _ = writeln!(summary, "  k = {k:>3}: gap = {:.3e}", g.gap);
    }
    let _ = writeln!(
        summary,
        "  gap column monotone decreasing: {}",
        if monotone { "yes" } else { "NO" }
    );

    let svg = line_chart(
        "Riemann-sum gap vs level",
        "k",
        "|mean - integral|",
        &[Series {
            name: "gap",
            points: chart,
        }],
    );

    let artifacts = vec![
        write_artifact(out, "riemann.csv", &csv.finish())?,
        write_artifact(out, "summary.txt", &summary)?,
        write_artifact(out, "riemann.svg", &svg)?,
    ];
    Ok(RunOutcome {
        kind: "riemann".into(),
        failed_rows: usize::from(!monotone),
        artifacts,
    })
}
