//! Composite plan for odd-dimensional tori: collapse + full-matrix-algebra
//! halves, each within epsilon/2.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::Result;

use fuzzytori::ghbounds::odd_dimension_plan;

use crate::config::ExperimentConfig;
use crate::experiments::{fmt, write_artifact, Csv};
use crate::RunOutcome;

pub fn run(cfg: &ExperimentConfig, out: &Path) -> Result<RunOutcome> {
    let p = &cfg.params;
    let d = p.d.expect("validated");
    let epsilon = p.epsilon.expect("validated");
    let l = cfg.length_function(d)?;
    let plan = odd_dimension_plan(d, epsilon, &l).map_err(|e| anyhow::anyhow!("plan: {e}"))?;

    let mut csv = Csv::new(
        &[
            "composite plan approximating an odd-dimensional torus",
            "d: target dimension",
            "collapse_index m: family member with I_m = mean(arc)/(m+1) <= eps/2",
            "collapse_bound: the certified collapse half",
            "kernel_order, prime: the even-dimensional approximation level",
            "delta_p: its kernel-cutoff certificate (must be <= eps/6)",
            "fuzzy_bound: the even-dimensional half (eps/2)",
            "total: sum of the two halves, <= eps by the triangle inequality",
        ],
        &[
            "d",
            "epsilon",
            "collapse_index",
            "collapse_bound",
            "kernel_order",
            "prime",
            "delta_p",
            "fuzzy_bound",
            "total",
        ],
    );
    csv.row(&[
        plan.d.to_string(),
        fmt(plan.epsilon),
        plan.collapse_index.to_string(),
        fmt(plan.collapse_bound),
        plan.kernel_order.to_string(),
        plan.prime.to_string(),
        fmt(plan.delta_p),
        fmt(plan.fuzzy_bound),
        fmt(plan.total),
    ]);

    let arithmetic_ok = (plan.total - (plan.collapse_bound + plan.fuzzy_bound)).abs() < 1e-12
        && plan.total <= epsilon + 1e-12
        && plan.collapse_bound <= epsilon / 2.0 + 1e-12;

    let mut summary = String::new();
    let _ = writeln!(summary, "odd-scheme: d = {d}, epsilon = {epsilon}");
    let _ = writeln!(
        summary,
        "  collapse T^{} -> T^{d}: family index m = {}, bound {:.6}",
        d + 1,
        plan.collapse_index,
        plan.collapse_bound
    );
    let _ = writeln!(
        summary,
        "  full matrix algebra level: prime {} with kernel order {}, delta_p = {:.6}",
        plan.prime, plan.kernel_order, plan.delta_p
    );
    let _ = writeln!(summary, "  certified total: {:.6} <= {epsilon}", plan.total);

    // reusable config fragment for the planned collapse run
    let mut fragment = String::new();
    let _ = writeln!(fragment, "version = 1");
    let _ = writeln!(fragment, "kind = \"collapse\"");
    let _ = writeln!(fragment, "seed = {}", cfg.seed);
    let _ = writeln!(fragment, "\n[params]");
    let _ = writeln!(
        fragment,
        "k = [{}]",
        vec![plan.prime.to_string(); d + 1].join(", ")
    );
    let _ = writeln!(fragment, "delta = {d}");
    let _ = writeln!(fragment, "family = [\"{}\"]", plan.collapse_index);
    let _ = writeln!(
        fragment,
        "length = \"{}\"",
        cfg.params.length.as_deref().unwrap_or("max-arc")
    );

    let artifacts = vec![
        write_artifact(out, "odd-scheme.csv", &csv.finish())?,
        write_artifact(out, "odd-scheme-plan.toml", &fragment)?,
        write_artifact(out, "summary.txt", &summary)?,
    ];
    Ok(RunOutcome {
        kind: "odd-scheme".into(),
        failed_rows: usize::from(!arithmetic_ok),
        artifacts,
    })
}
