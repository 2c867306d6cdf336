//! Collapse certificates along a degenerating length family.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::Result;
use rayon::prelude::*;

use fuzzytori::collapse::{collapse_certificate, quotient_metric_space, CollapseRow, CollapseSetup};
use fuzzytori::fuzzy_algebra::SkewBicharacter;
use fuzzytori::groups::FinAbGroup;
use fuzzytori::lengths::CollapseIndex;

use crate::config::{parse_family, ExperimentConfig};
use crate::experiments::{fmt, write_artifact, Csv};
use crate::plot::{line_chart, Series};
use crate::RunOutcome;

fn index_label(n: CollapseIndex) -> String {
    match n {
        CollapseIndex::Finite(n) => n.to_string(),
        CollapseIndex::Infinity => "inf".into(),
    }
}

pub fn run(cfg: &ExperimentConfig, out: &Path) -> Result<RunOutcome> {
    let p = &cfg.params;
    let k = p.k.clone().expect("validated");
    let delta = p.delta.expect("validated");
    let family = parse_family(p.family.as_ref().expect("validated"))?;
    let samples = p.samples.unwrap_or(50);
    let group = FinAbGroup::new(k.clone()).map_err(|e| anyhow::anyhow!("params.k: {e}"))?;
    let sigma = match &p.s {
        Some(rows) => crate::formats::parse_bicharacter(rows)?,
        None => SkewBicharacter::zero(group.dim()),
    };
    let base = cfg.length_function(group.dim())?;

    let rows: Vec<CollapseRow> = family
        .par_iter()
        .map(|&n| {
            let setup = CollapseSetup::new(group.clone(), sigma.clone(), base.clone(), delta, n)
                .map_err(|e| anyhow::anyhow!("collapse setup: {e}"))?;
            collapse_certificate(&setup, samples, cfg.seed)
                .map_err(|e| anyhow::anyhow!("collapse certificate: {e}"))
        })
        .collect::<Result<_>>()?;

    // quotient identification uses any family member; it depends only on (k, δ, σ)
    let setup0 = CollapseSetup::new(
        group.clone(),
        sigma.clone(),
        base.clone(),
        delta,
        family[0],
    )
    .map_err(|e| anyhow::anyhow!("collapse setup: {e}"))?;
    let (kept, _restricted, _spec) =
        quotient_metric_space(&setup0).map_err(|e| anyhow::anyhow!("quotient space: {e}"))?;

    // radius bound for the comparison summand: mean of the limit length over
    // the kept block
    let mut mean_kept = 0.0;
    let linf = fuzzytori::lengths::collapse_family(&base, CollapseIndex::Infinity, delta)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    for h in group.elements() {
        mean_kept += linf
            .evaluate(&group.torus_point(&h))
            .map_err(|e| anyhow::anyhow!("{e}"))?;
    }
    mean_kept /= group.order() as f64;

    let mut csv = Csv::new(
        &[
            "collapse certificates along the degenerating length family",
            &format!(
                "k = {k:?}, kept dimensions delta = {delta}, fixed-point algebra on Z_{:?}",
                kept.moduli()
            ),
            "n: family index (inf = limit member)",
            "i_n: mean of l_n over the collapsed block; certified distance to the fixed-point algebra",
            "ratio_dev: sup off the block of |l_inf/l_n - 1|",
            "norm_resid: worst ||a - E a|| - i_n*L[n](a) over samples (<= 0 when the bound holds)",
            "lip_resid: worst L[n](E a) - L[n](a) over samples",
            "cert_bound: i_n + 2*ratio_dev*R/(1-ratio_dev) with R the kept-block length mean",
        ],
        &[
            "n",
            "i_n",
            "ratio_dev",
            "norm_resid",
            "lip_resid",
            "cert_bound",
        ],
    );
    let mut failed = 0usize;
    let mut chart = Vec::new();
    for row in &rows {
        let cmp = if row.ratio_dev < 1.0 {
            2.0 * row.ratio_dev * mean_kept / (1.0 - row.ratio_dev)
        } else {
            f64::INFINITY
        };
        let bound = row.i_n + cmp;
        if row.max_norm_residual > 1e-9 || row.max_lip_excess > 1e-9 {
            failed += 1;
        }
        if let CollapseIndex::Finite(n) = row.n {
            chart.push((n as f64, bound));
        }
        csv.row(&[
            index_label(row.n),
            fmt(row.i_n),
            fmt(row.ratio_dev),
            fmt(row.max_norm_residual),
            fmt(row.max_lip_excess),
            fmt(bound),
        ]);
    }

    let mut summary = String::new();
    let _ = writeln!(
        summary,
        "collapse: k = {k:?}, delta = {delta}, family {:?}, {samples} samples per member",
        p.family.as_ref().unwrap()
    );
    for row in &rows {
        let _ = writeln!(
            summary,
            "  n = {:>4}: I_n = {:.6}, ratio deviation {:.6}, residuals ({:.2e}, {:.2e})",
            index_label(row.n),
            row.i_n,
            row.ratio_dev,
            row.max_norm_residual,
            row.max_lip_excess
        );
    }
    let _ = writeln!(summary, "  failed rows: {failed}");

    let svg = line_chart(
        "collapse certificate vs family index",
        "n",
        "bound",
        &[Series {
            name: "i_n + comparison",
            points: chart,
        }],
    );

    let artifacts = vec![
        write_artifact(out, "collapse.csv", &csv.finish())?,
        write_artifact(out, "summary.txt", &summary)?,
        write_artifact(out, "collapse.svg", &svg)?,
    ];
    Ok(RunOutcome {
        kind: "collapse".into(),
        failed_rows: failed,
        artifacts,
    })
}
