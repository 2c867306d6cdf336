//! Norm and Lip-norm fields of a fixed lattice element along quotient levels.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::Result;

use fuzzytori::fuzzy_algebra::{full_matrix_bicharacter, SkewBicharacter};
use fuzzytori::groups::FinAbGroup;
use fuzzytori::qmetric::{commutative_lip_estimate, lip_field, norm_field};

use crate::config::ExperimentConfig;
use crate::experiments::{fmt, write_artifact, Csv};
use crate::plot::{line_chart, Series};
use crate::RunOutcome;

pub fn run(cfg: &ExperimentConfig, out: &Path) -> Result<RunOutcome> {
    let p = &cfg.params;
    let primes = p.primes.clone().expect("validated");
    let psi = p.psi.clone();
    let d = match &psi {
        Some(v) => 2 * v.len(),
        None => p.k.as_ref().map(|k| k.len()).unwrap_or(1),
    };
    let element = crate::formats::parse_lattice_element(p.element.as_ref().expect("validated"), d)?;
    let with_lip = p.with_lip.unwrap_or(true);
    let length = cfg.length_function(d)?;

    let levels: Vec<(FinAbGroup, SkewBicharacter)> = primes
        .iter()
        .map(|&pr| {
            let group =
                FinAbGroup::cyclic_power(pr, d).map_err(|e| anyhow::anyhow!("{e}"))?;
            let sigma = match &psi {
                Some(v) => full_matrix_bicharacter(v, pr)
                    .map_err(|e| anyhow::anyhow!("params.psi with prime {pr}: {e}"))?,
                None => SkewBicharacter::zero(d),
            };
            Ok((group, sigma))
        })
        .collect::<Result<_>>()?;

    let norms =
        norm_field(&element, &levels).map_err(|e| anyhow::anyhow!("norm field: {e}"))?;
    let lips = if with_lip {
        Some(lip_field(&element, &levels, &length).map_err(|e| anyhow::anyhow!("lip field: {e}"))?)
    } else {
        None
    };

    // untwisted reference values
    let untwisted = psi.is_none();
    let (norm_ref, lip_ref) = if untwisted {
        let sup = element.commutative_sup(4096);
        let lip = (d == 1 && with_lip)
            .then(|| commutative_lip_estimate(&element, &length, 10_000))
            .transpose()
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        (Some(sup), lip)
    } else {
        (None, None)
    };

    let mut csv = Csv::new(
        &[
            "norm and Lip-norm fields of a fixed lattice element",
            "p: prime level (group Z_p^d)",
            "norm: C*-norm of the folded element at this level",
            "lip: Lip-norm of the folded element (empty if disabled)",
            "folded: whether the quotient map folds the element support",
            &match (norm_ref, lip_ref) {
                (Some(n), Some(l)) => {
                    format!("untwisted references: sup-norm {n}, grid Lipschitz constant {l}")
                }
                (Some(n), None) => format!("untwisted reference: sup-norm {n}"),
                _ => "twisted levels: Cauchy behavior is the certified property".to_string(),
            },
        ],
        &["p", "norm", "lip", "folded"],
    );
    let mut norm_chart = Vec::new();
    let mut lip_chart = Vec::new();
    let mut failed = 0usize;
    for (i, pt) in norms.iter().enumerate() {
        if pt.folded {
            failed += 1; // folding is flagged, never silently accepted
        }
        let lip_v = lips.as_ref().map(|l| l[i].value);
        csv.row(&[
            pt.k[0].to_string(),
            fmt(pt.value),
            lip_v.map(fmt).unwrap_or_default(),
            pt.folded.to_string(),
        ]);
        norm_chart.push((pt.k[0] as f64, pt.value));
        if let Some(v) = lip_v {
            lip_chart.push((pt.k[0] as f64, v));
        }
    }

    let mut summary = String::new();
    let _ = writeln!(
        summary,
        "norm-field: d = {d}, levels {primes:?}, twist {:?}",
        psi.as_deref().unwrap_or(&[])
    );
    for (i, pt) in norms.iter().enumerate() {
        let _ = write!(summary, "  p = {:>3}: norm {:.9}", pt.k[0], pt.value);
        if let Some(l) = &lips {
            let _ = write!(summary, ", lip {:.9}", l[i].value);
        }
        if pt.folded {
            let _ = write!(summary, "  [FOLDED]");
        }
        let _ = writeln!(summary);
    }
    if let Some(n) = norm_ref {
        let _ = writeln!(summary, "  untwisted sup-norm reference: {n:.9}");
    }
    if let Some(l) = lip_ref {
        let _ = writeln!(summary, "  untwisted Lipschitz reference: {l:.9}");
    }
    // successive gaps (Cauchy witness)
    if norms.len() >= 2 {
        let gaps: Vec<String> = norms
            .windows(2)
            .map(|w| format!("{:.3e}", (w[1].value - w[0].value).abs()))
            .collect();
        let _ = writeln!(summary, "  successive norm gaps: {}", gaps.join(", "));
    }

    let mut series = vec![Series {
        name: "norm",
        points: norm_chart,
    }];
    if !lip_chart.is_empty() {
        series.push(Series {
            name: "lip",
            points: lip_chart,
        });
    }
    let svg = line_chart("norm and Lip-norm fields", "p", "value", &series);

    let artifacts = vec![
        write_artifact(out, "norm-field.csv", &csv.finish())?,
        write_artifact(out, "summary.txt", &summary)?,
        write_artifact(out, "norm-field.svg", &svg)?,
    ];
    Ok(RunOutcome {
        kind: "norm-field".into(),
        failed_rows: failed,
        artifacts,
    })
}
