//! Text formats: rational matrices ("num/den"), algebra-element coefficient
//! lines ("x_1 .. x_d re im"), and the finite-metric-space file (size, labels,
//! lower-triangular distances).

use anyhow::{bail, Context, Result};

use fuzzytori::fuzzy_algebra::{AlgElement, LatticeElement, SkewBicharacter};
use fuzzytori::ghbounds::FiniteMetricSpace;
use fuzzytori::groups::FinAbGroup;
use fuzzytori::C64;

/// Parses "num/den" or "num" into a float.
pub fn parse_rational(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().context("rational numerator")?;
        let d: i64 = den.trim().parse().context("rational denominator")?;
        if d == 0 {
            bail!("rational with zero denominator: {s}");
        }
        Ok(n as f64 / d as f64)
    } else {
        Ok(s.parse::<i64>().context("rational")? as f64)
    }
}

fn format_rational(v: f64) -> String {
    // small denominators cover every matrix this tool produces; fall back to
    // the decimal form otherwise
    for den in 1..=1000i64 {
        let num = v * den as f64;
        if (num - num.round()).abs() < 1e-9 {
            let n = num.round() as i64;
            return if den == 1 {
                format!("{n}")
            } else {
                format!("{n}/{den}")
            };
        }
    }
    format!("{v}")
}

/// Matrix of rationals, one row per line, entries whitespace-separated.
pub fn parse_bicharacter(rows: &[Vec<String>]) -> Result<SkewBicharacter> {
    let d = rows.len();
    let mut s = Vec::with_capacity(d * d);
    for row in rows {
        if row.len() != d {
            bail!("bicharacter matrix must be square ({d}x{d})");
        }
        for entry in row {
            s.push(parse_rational(entry)?);
        }
    }
    SkewBicharacter::new(d, s).map_err(|e| anyhow::anyhow!("bicharacter: {e}"))
}

pub fn write_bicharacter(s: &SkewBicharacter) -> String {
    let d = s.dim();
    let mut out = String::new();
    for i in 0..d {
        let row: Vec<String> = (0..d).map(|j| format_rational(s.entry(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Coefficient lines "x_1 .. x_d re im" for a lattice element.
pub fn parse_lattice_element(lines: &[String], d: usize) -> Result<LatticeElement> {
    let mut f = LatticeElement::zero(d);
    for line in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != d + 2 {
            bail!("element line '{line}': expected {} fields", d + 2);
        }
        let coords: Vec<i64> = parts[..d]
            .iter()
            .map(|p| p.parse::<i64>().context("element coordinate"))
            .collect::<Result<_>>()?;
        let re: f64 = parts[d].parse().context("element re")?;
        let im: f64 = parts[d + 1].parse().context("element im")?;
        f.set_coeff(coords, C64::new(re, im));
    }
    Ok(f)
}

pub fn write_element(f: &AlgElement) -> String {
    let mut out = String::new();
    for (x, v) in f.coeffs() {
        let coords: Vec<String> = x.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("{}  {} {}\n", coords.join(" "), v.re, v.im));
    }
    out
}

pub fn parse_element(text: &str, group: &FinAbGroup, sigma: &SkewBicharacter) -> Result<AlgElement> {
    let d = group.dim();
    let mut f = AlgElement::zero(group.clone(), sigma.clone());
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != d + 2 {
            bail!("element line '{line}': expected {} fields", d + 2);
        }
        let coords: Vec<i64> = parts[..d]
            .iter()
            .map(|p| p.parse::<i64>().context("element coordinate"))
            .collect::<Result<_>>()?;
        let re: f64 = parts[d].parse()?;
        let im: f64 = parts[d + 1].parse()?;
        let reduced = group
            .reduce(&coords)
            .map_err(|e| anyhow::anyhow!("element coords: {e}"))?;
        f.set_coeff(reduced, C64::new(re, im));
    }
    Ok(f)
}

/// Metric-space file: first line `n`, second line the labels, then `n-1` lines
/// of the lower-triangular distances (row `i` holds `d(i,0) .. d(i,i-1)`).
pub fn parse_metric_space(text: &str) -> Result<FiniteMetricSpace> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let n: usize = lines
        .next()
        .context("metric file: missing size line")?
        .parse()
        .context("metric file: size")?;
    let labels: Vec<String> = lines
        .next()
        .context("metric file: missing labels line")?
        .split_whitespace()
        .map(|s| s.to_string())
        .collect();
    if labels.len() != n {
        bail!("metric file: expected {n} labels, got {}", labels.len());
    }
    let mut dist = vec![0.0f64; n * n];
    for i in 1..n {
        let row = lines
            .next()
            .with_context(|| format!("metric file: missing row {i}"))?;
        let vals: Vec<f64> = row
            .split_whitespace()
            .map(|v| v.parse::<f64>().context("metric file: distance"))
            .collect::<Result<_>>()?;
        if vals.len() != i {
            bail!("metric file: row {i} must have {i} entries");
        }
        for (j, &v) in vals.iter().enumerate() {
            dist[i * n + j] = v;
            dist[j * n + i] = v;
        }
    }
    FiniteMetricSpace::new(labels, dist).map_err(|e| anyhow::anyhow!("metric file: {e}"))
}

pub fn write_metric_space(x: &FiniteMetricSpace) -> String {
    let n = x.len();
    let mut out = format!("{n}\n{}\n", x.labels().join(" "));
    for i in 1..n {
        let row: Vec<String> = (0..i).map(|j| format!("{}", x.distance(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
