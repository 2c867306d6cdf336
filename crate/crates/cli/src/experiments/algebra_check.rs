//! Algebra soundness: associativity, the C*-identity, the commutation
//! relation, the untwisted Fourier oracle, and the center dimension.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::Result;
use rayon::prelude::*;

use fuzzytori::fuzzy_algebra::{
    center_dimension, cstar_norm, twisted_product, SkewBicharacter,
};
use fuzzytori::groups::FinAbGroup;
use fuzzytori::sampling::{random_element, stream};
use fuzzytori::{unit_phase, C64};

use crate::config::ExperimentConfig;
use crate::experiments::{fmt, write_artifact, Csv};
use crate::RunOutcome;

pub(crate) struct AlgebraStats {
    pub assoc: f64,
    pub cstar: f64,
    pub commutation: f64,
    pub dft: Option<f64>,
    pub center: u64,
}

pub(crate) fn run_checks(
    group: &FinAbGroup,
    sigma: &SkewBicharacter,
    samples: usize,
    seed: u64,
) -> fuzzytori::Result<AlgebraStats> {
    sigma.validate_on(group)?;
    let is_untwisted = (0..sigma.dim())
        .all(|i| (0..sigma.dim()).all(|j| sigma.entry(i, j) == 0.0));

    let per_sample = |s: usize| -> fuzzytori::Result<(f64, f64, f64, f64)> {
        let mut rng = stream(seed, 0x414c47 ^ s as u64);
        let f = random_element(group, sigma, &mut rng);
        let g = random_element(group, sigma, &mut rng);
        let h = random_element(group, sigma, &mut rng);
        let assoc = twisted_product(&twisted_product(&f, &g)?, &h)?
            .coeff_distance(&twisted_product(&f, &twisted_product(&g, &h)?)?);
        let nf = cstar_norm(&f)?;
        let nff = cstar_norm(&twisted_product(&f.involution(), &f)?)?;
        let cstar = (nff - nf * nf).abs() / (nf * nf).max(1e-300);
        // commutation relation on random generators
        let d = group.dim();
        let a: Vec<i64> = (0..d)
            .map(|j| fuzzytori::sampling::uniform_u64(&mut rng, group.moduli()[j]) as i64)
            .collect();
        let b: Vec<i64> = (0..d)
            .map(|j| fuzzytori::sampling::uniform_u64(&mut rng, group.moduli()[j]) as i64)
            .collect();
        let da = fuzzytori::fuzzy_algebra::AlgElement::delta(group.clone(), sigma.clone(), &a)?;
        let db = fuzzytori::fuzzy_algebra::AlgElement::delta(group.clone(), sigma.clone(), &b)?;
        let sig = sigma.sigma_coords(&a, &b);
        let comm = twisted_product(&da, &db)?
            .coeff_distance(&twisted_product(&db, &da)?.scale(sig * sig));
        // untwisted oracle: the norm equals the max modulus of the Fourier values
        let dft = if is_untwisted {
            let mut best: f64 = 0.0;
            for m in group.elements() {
                let mut acc = C64::new(0.0, 0.0);
                for (x, v) in f.coeffs() {
                    let t: f64 = x
                        .iter()
                        .zip(m.coords().iter())
                        .zip(group.moduli().iter())
                        .map(|((&xj, &mj), &kj)| {
                            ((xj as u128 * mj as u128) % kj as u128) as f64 / kj as f64
                        })
                        .sum();
                    acc += *v * unit_phase(-t);
                }
                best = best.max(acc.norm());
            }
            (best - nf).abs()
        } else {
            0.0
        };
        Ok((assoc, cstar, comm, dft))
    };

    let results: Vec<fuzzytori::Result<(f64, f64, f64, f64)>> =
        (0..samples).into_par_iter().map(per_sample).collect();
    let mut assoc = 0.0f64;
    let mut cstar = 0.0f64;
    let mut comm = 0.0f64;
    let mut dft = 0.0f64;
    for r in results {
        let (a, c, k, d) = r?;
        assoc = assoc.max(a);
        cstar = cstar.max(c);
        comm = comm.max(k);
        dft = dft.max(d);
    }
    Ok(AlgebraStats {
        assoc,
        cstar,
        commutation: comm,
        dft: is_untwisted.then_some(dft),
        center: center_dimension(sigma, group)?,
    })
}

pub fn run(cfg: &ExperimentConfig, out: &Path) -> Result<RunOutcome> {
    let p = &cfg.params;
    let k = p.k.clone().expect("validated");
    let group = FinAbGroup::new(k.clone()).map_err(|e| anyhow::anyhow!("params.k: {e}"))?;
    let sigma = match &p.s {
        Some(rows) => crate::formats::parse_bicharacter(rows)?,
        None => SkewBicharacter::zero(group.dim()),
    };
    let samples = p.samples.unwrap_or(100);
    let stats = run_checks(&group, &sigma, samples, cfg.seed)
        .map_err(|e| anyhow::anyhow!("algebra check: {e}"))?;

    let mut csv = Csv::new(
        &[
            "algebra soundness report",
            "k: group moduli",
            "samples: random elements checked",
            "assoc_resid: worst coefficientwise associativity residual",
            "cstar_resid: worst relative C*-identity residual | ||f*f|| - ||f||^2 | / ||f||^2",
            "comm_resid: worst commutation-relation residual (exact coefficient check)",
            "dft_resid: worst |norm - Fourier oracle| (untwisted case only, else empty)",
            "center_dim: dimension of the center (1 = full matrix algebra)",
        ],
        &[
            "k",
            "samples",
            "assoc_resid",
            "cstar_resid",
            "comm_resid",
            "dft_resid",
            "center_dim",
        ],
    );
    csv.row(&[
        format!("{:?}", k).replace(',', ";"),
        samples.to_string(),
        fmt(stats.assoc),
        fmt(stats.cstar),
        fmt(stats.commutation),
        stats.dft.map(fmt).unwrap_or_default(),
        stats.center.to_string(),
    ]);

    let mut summary = String::new();
    let _ = writeln!(summary, "algebra-check on Z_k^d with k = {k:?}");
    let _ = writeln!(summary, "  center dimension: {}", stats.center);
    let _ = writeln!(summary, "  associativity residual: {:.3e}", stats.assoc);
    let _ = writeln!(summary, "  C*-identity residual:   {:.3e}", stats.cstar);
    let _ = writeln!(summary, "  commutation residual:   {:.3e}", stats.commutation);
    if let Some(d) = stats.dft {
        let _ = writeln!(summary, "  Fourier oracle residual: {d:.3e}");
    }
    let ok = stats.assoc <= 1e-11 && stats.cstar <= 1e-9 && stats.commutation <= 1e-12;
    let _ = writeln!(summary, "  verdict: {}", if ok { "PASS" } else { "FAILED" });

    let artifacts = vec![
        write_artifact(out, "algebra-check.csv", &csv.finish())?,
        write_artifact(out, "summary.txt", &summary)?,
    ];
    Ok(RunOutcome {
        kind: "algebra-check".into(),
        failed_rows: usize::from(!ok),
        artifacts,
    })
}
