//! Dense complex linear algebra and a dense simplex solver.
//!
//! The eigensolver is a cyclic Jacobi iteration for hermitian matrices. Each
//! rotation works on a 2x2 pivot block `[[a, g e^{iφ}], [g e^{-iφ}, b]]`,
//! splitting the phase off first so the remaining problem is the classical real
//! symmetric rotation. The off-diagonal Frobenius mass decreases monotonically,
//! which is the convergence certificate. Dimensions here stay well below the
//! point where QR iteration would win.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::C64;

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            entries: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Builds from row-major entries, rejecting NaN/Inf.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(CMatrix { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.entries[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: C64) {
        self.entries[i * self.cols + j] += v;
    }

    pub fn dagger(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn mul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.add_to(i, j, a * other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(other.entries.iter()) {
            *a -= *b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn trace(&self) -> C64 {
        let n = self.rows.min(self.cols);
        (0..n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermitian_residual(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let mut r: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                r = r.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        r
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_residual() <= tol
    }
}

const JACOBI_MAX_SWEEPS: usize = 60;

/// Eigenvalues of a hermitian matrix, ascending.
///
/// Rejects non-square input and input whose hermitian residual exceeds
/// `1e-10 * max(1, ||M||_F)`.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    let (vals, _) = hermitian_eigen(m, false)?;
    Ok(vals)
}

/// Eigenvalues (ascending) and a unitary whose columns are the matching
/// eigenvectors.
pub fn hermitian_eigensystem(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let (vals, vecs) = hermitian_eigen(m, true)?;
    Ok((vals, vecs.expect("vectors requested")))
}

fn hermitian_eigen(m: &CMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<CMatrix>)> {
    if m.rows != m.cols {
        return Err(Error::NonSquare);
    }
    let n = m.rows;
    let scale = m.frobenius_norm().max(1.0);
    let res = m.hermitian_residual();
    if res > 1e-10 * scale {
        return Err(Error::NonHermitian { residual: res });
    }
    if n == 0 {
        return Ok((Vec::new(), want_vectors.then(|| CMatrix::zeros(0, 0))));
    }

    let mut a = m.clone();
    // Symmetrize exactly so rounding in the input cannot bias the iteration.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
            a.set(i, j, avg);
            a.set(j, i, avg.conj());
        }
        let d = a.get(i, i);
        a.set(i, i, C64::new(d.re, 0.0));
    }
    let mut v = want_vectors.then(|| CMatrix::identity(n));

    let tol = 1e-14 * scale;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q).norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            let mut vals: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
            if let Some(ref mut vm) = v {
                // Sort eigenpairs together.
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).expect("finite"));
                let mut sorted = CMatrix::zeros(n, n);
                for (newc, &oldc) in idx.iter().enumerate() {
                    for r in 0..n {
                        sorted.set(r, newc, vm.get(r, oldc));
                    }
                }
                *vm = sorted;
                vals = idx.iter().map(|&i| a.get(i, i).re).collect();
            } else {
                vals.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
            }
            return Ok((vals, v));
        }

        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let g = apq.norm();
                if g <= 1e-300 {
                    continue;
                }
                // apq = g e^{iφ}; with P = diag(e^{iφ}, 1) the pivot block becomes
                // real symmetric and the usual rotation angle applies.
                let phase = apq / g;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let theta = 0.5 * f64::atan2(2.0 * g, aqq - app);
                let c = theta.cos();
                let s = theta.sin();
                // Columns of U restricted to (p,q): U[p][p]=c e^{iφ}, U[p][q]=s e^{iφ},
                // U[q][p]=-s, U[q][q]=c.
                let upp = phase * c;
                let upq = phase * s;
                let uqp = C64::new(-s, 0.0);
                let uqq = C64::new(c, 0.0);

                // A <- U† A U. Rows/cols p and q change.
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a.get(r, p);
                    let arq = a.get(r, q);
                    let new_rp = arp * upp + arq * uqp;
                    let new_rq = arp * upq + arq * uqq;
                    a.set(r, p, new_rp);
                    a.set(p, r, new_rp.conj());
                    a.set(r, q, new_rq);
                    a.set(q, r, new_rq.conj());
                }
                // 2x2 corner.
                let aa = C64::new(app, 0.0);
                let bb = C64::new(aqq, 0.0);
                let npp = (upp.conj() * aa + uqp.conj() * apq.conj()) * upp
                    + (upp.conj() * apq + uqp.conj() * bb) * uqp;
                let nqq = (upq.conj() * aa + uqq.conj() * apq.conj()) * upq
                    + (upq.conj() * apq + uqq.conj() * bb) * uqq;
                a.set(p, p, C64::new(npp.re, 0.0));
                a.set(q, q, C64::new(nqq.re, 0.0));
                a.set(p, q, C64::new(0.0, 0.0));
                a.set(q, p, C64::new(0.0, 0.0));

                if let Some(ref mut vm) = v {
                    for r in 0..n {
                        let vrp = vm.get(r, p);
                        let vrq = vm.get(r, q);
                        vm.set(r, p, vrp * upp + vrq * uqp);
                        vm.set(r, q, vrp * upq + vrq * uqq);
                    }
                }
            }
        }
    }
    Err(Error::NoConvergence)
}

/// Largest singular value: `sqrt(λ_max(M†M))`.
pub fn operator_norm(m: &CMatrix) -> Result<f64> {
    if m.entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    if m.rows == 0 || m.cols == 0 {
        return Ok(0.0);
    }
    // Work with the smaller Gram matrix.
    let gram = if m.rows >= m.cols {
        m.dagger().mul(m)?
    } else {
        m.mul(&m.dagger())?
    };
    let vals = hermitian_eigenvalues(&gram)?;
    let top = vals.last().copied().unwrap_or(0.0).max(0.0);
    Ok(top.sqrt())
}

/// Constraint relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

/// `maximize objective · x` over free real unknowns subject to the listed
/// constraints. The solver contract requires a bounded optimum; callers pin a
/// gauge when their seminorm ball contains a line.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub variables: usize,
    pub objective: Vec<f64>,
    pub constraints: Vec<(Vec<f64>, Relation, f64)>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub optimum: f64,
    pub witness: Vec<f64>,
    /// Dual values per constraint row, for gap diagnostics.
    pub dual: Vec<f64>,
}

impl LinearProgram {
    fn validate(&self) -> Result<()> {
        if self.objective.len() != self.variables {
            return Err(Error::DimensionMismatch {
                expected: self.variables,
                got: self.objective.len(),
            });
        }
        for (row, _, b) in &self.constraints {
            if row.len() != self.variables {
                return Err(Error::DimensionMismatch {
                    expected: self.variables,
                    got: row.len(),
                });
            }
            if !b.is_finite() || row.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        if self.objective.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }
}

const LP_EPS: f64 = 1e-9;

/// Dense two-phase tableau simplex with Bland's rule.
///
/// Free variables are split into positive and negative parts; inequality rows
/// get slack variables, equality rows get phase-one artificials. Bland's rule
/// (lowest eligible index) precludes cycling.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;
    let n = lp.variables;
    let split = 2 * n;
    let n_rows = lp.constraints.len();

    let n_slack = lp
        .constraints
        .iter()
        .filter(|(_, rel, _)| *rel == Relation::Le)
        .count();
    let total = split + n_slack + n_rows; // artificials for every row keep phase 1 uniform

    // tableau[r] = row of coefficients, rhs at index `total`.
    let mut t = vec![vec![0.0f64; total + 1]; n_rows];
    let mut basis = vec![0usize; n_rows];
    let mut slack_col_of_row = vec![usize::MAX; n_rows];

    let mut next_slack = split;
    let art_base = split + n_slack;
    for (r, (row, rel, b)) in lp.constraints.iter().enumerate() {
        let flip = *b < 0.0;
        let sgn = if flip { -1.0 } else { 1.0 };
        for (j, &a) in row.iter().enumerate() {
            t[r][j] = sgn * a;
            t[r][n + j] = -sgn * a;
        }
        if *rel == Relation::Le {
            t[r][next_slack] = sgn;
            slack_col_of_row[r] = next_slack;
            next_slack += 1;
        }
        t[r][total] = sgn * b;
        // Artificial always present; phase 1 drives it out.
        t[r][art_base + r] = 1.0;
        basis[r] = art_base + r;
    }

    // Phase 1: minimize sum of artificials == maximize -sum.
    let mut cost1 = vec![0.0f64; total];
    for r in 0..n_rows {
        cost1[art_base + r] = -1.0;
    }
    run_simplex(&mut t, &mut basis, &cost1, total, art_base)?;
    let phase1: f64 = basis
        .iter()
        .zip(t.iter())
        .filter(|(b, _)| **b >= art_base)
        .map(|(_, row)| row[total])
        .sum();
    if phase1 > 1e-7 {
        return Err(Error::Infeasible);
    }
    // Pivot any artificial still in the basis out on a nonzero legal column.
    for r in 0..n_rows {
        if basis[r] >= art_base {
            if let Some(j) = (0..art_base).find(|&j| t[r][j].abs() > LP_EPS) {
                pivot(&mut t, &mut basis, r, j);
            }
            // A fully zero row is redundant; its artificial stays at level 0.
        }
    }

    // Phase 2.
    let mut cost2 = vec![0.0f64; total];
    for j in 0..n {
        cost2[j] = lp.objective[j];
        cost2[n + j] = -lp.objective[j];
    }
    run_simplex(&mut t, &mut basis, &cost2, total, art_base)?;

    let mut x_split = vec![0.0f64; total];
    for (r, &b) in basis.iter().enumerate() {
        x_split[b] = t[r][total];
    }
    let witness: Vec<f64> = (0..n).map(|j| x_split[j] - x_split[n + j]).collect();
    let optimum: f64 = witness
        .iter()
        .zip(lp.objective.iter())
        .map(|(x, c)| x * c)
        .sum();

    // Dual values: y_i = -reduced cost of row i's slack (Le rows), or of its
    // artificial column (Eq rows), with the sign flip undone.
    let mut reduced = vec![0.0f64; total];
    for j in 0..total {
        let mut z = 0.0;
        for r in 0..n_rows {
            z += cost2[basis[r]] * t[r][j];
        }
        reduced[j] = cost2[j] - z;
    }
    let mut dual = vec![0.0f64; n_rows];
    for r in 0..n_rows {
        let col = if slack_col_of_row[r] != usize::MAX {
            slack_col_of_row[r]
        } else {
            art_base + r
        };
        let flip = lp.constraints[r].2 < 0.0;
        let y = -reduced[col];
        dual[r] = if flip { -y } else { y };
    }

    Ok(LpSolution {
        optimum,
        witness,
        dual,
    })
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], r: usize, c: usize) {
    let total = t[r].len() - 1;
    let p = t[r][c];
    for j in 0..=total {
        t[r][j] /= p;
    }
    for i in 0..t.len() {
        if i == r {
            continue;
        }
        let f = t[i][c];
        if f == 0.0 {
            continue;
        }
        for j in 0..=total {
            t[i][j] -= f * t[r][j];
        }
    }
    basis[r] = c;
}

fn run_simplex(
    t: &mut Vec<Vec<f64>>,
    basis: &mut Vec<usize>,
    cost: &[f64],
    total: usize,
    art_base: usize,
) -> Result<()> {
    let n_rows = t.len();
    loop {
        // Reduced costs; Bland: pick the lowest-index improving column.
        let mut enter = None;
        for j in 0..total {
            // Artificials never re-enter once phase 1 is done (cost 0 keeps
            // them neutral, but excluding them is cheaper and safe in phase 1 too
            // since they start basic).
            if j >= art_base && cost[j] == 0.0 {
                continue;
            }
            if basis.contains(&j) {
                continue;
            }
            let mut z = 0.0;
            for r in 0..n_rows {
                z += cost[basis[r]] * t[r][j];
            }
            if cost[j] - z > LP_EPS {
                enter = Some(j);
                break;
            }
        }
        let Some(c) = enter else {
            return Ok(());
        };
        // Ratio test, Bland tie-break on the leaving basic variable index.
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..n_rows {
            if t[r][c] > LP_EPS {
                let ratio = t[r][total] / t[r][c];
                match leave {
                    None => leave = Some((r, ratio)),
                    Some((lr, lratio)) => {
                        if ratio < lratio - LP_EPS
                            || ((ratio - lratio).abs() <= LP_EPS && basis[r] < basis[lr])
                        {
                            leave = Some((r, ratio));
                        }
                    }
                }
            }
        }
        let Some((r, _)) = leave else {
            return Err(Error::Unbounded);
        };
        pivot(t, basis, r, c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::SeededRng;
    use rand::Rng;

    fn cm(rows: usize, cols: usize, data: &[(f64, f64)]) -> CMatrix {
        CMatrix::from_entries(
            rows,
            cols,
            data.iter().map(|&(re, im)| C64::new(re, im)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn eigen_identity() {
        let m = CMatrix::identity(3);
        let vals = hermitian_eigenvalues(&m).unwrap();
        assert_eq!(vals.len(), 3);
        for v in vals {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eigen_reflection() {
        let m = cm(2, 2, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        let vals = hermitian_eigenvalues(&m).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_diagonal() {
        let mut m = CMatrix::zeros(3, 3);
        m.set(0, 0, C64::new(-2.0, 0.0));
        m.set(1, 1, C64::new(0.0, 0.0));
        m.set(2, 2, C64::new(5.0, 0.0));
        let vals = hermitian_eigenvalues(&m).unwrap();
        assert!((vals[0] + 2.0).abs() < 1e-12);
        assert!(vals[1].abs() < 1e-12);
        assert!((vals[2] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = cm(2, 2, &[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(
            hermitian_eigenvalues(&m),
            Err(Error::NonHermitian { .. })
        ));
        let r = cm(2, 3, &[(0.0, 0.0); 6]);
        assert!(matches!(hermitian_eigenvalues(&r), Err(Error::NonSquare)));
    }

    fn random_hermitian(n: usize, rng: &mut SeededRng) -> CMatrix {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(rng.gen::<f64>() * 2.0 - 1.0, 0.0));
            for j in (i + 1)..n {
                let z = C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
                m.set(i, j, z);
                m.set(j, i, z.conj());
            }
        }
        m
    }

    #[test]
    fn eigen_sum_equals_trace() {
        let mut rng = crate::sampling::stream(0, 7);
        for n in [2usize, 5, 9, 17, 33] {
            let m = random_hermitian(n, &mut rng);
            let vals = hermitian_eigenvalues(&m).unwrap();
            let sum: f64 = vals.iter().sum();
            let tr = m.trace().re;
            let scale = operator_norm(&m).unwrap().max(1.0);
            assert!(
                (sum - tr).abs() <= 1e-8 * n as f64 * scale,
                "n={n}: |sum-trace| = {}",
                (sum - tr).abs()
            );
        }
    }

    #[test]
    fn eigen_residuals() {
        let mut rng = crate::sampling::stream(0, 11);
        let m = random_hermitian(12, &mut rng);
        let (vals, vecs) = hermitian_eigensystem(&m).unwrap();
        let norm = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        for (k, &lam) in vals.iter().enumerate() {
            // ||M v - lam v||
            let mut res: f64 = 0.0;
            for i in 0..12 {
                let mut mv = C64::new(0.0, 0.0);
                for j in 0..12 {
                    mv += m.get(i, j) * vecs.get(j, k);
                }
                res += (mv - vecs.get(i, k) * lam).norm_sqr();
            }
            assert!(res.sqrt() <= 1e-9 * norm.max(1.0), "eigpair {k}");
        }
    }

    #[test]
    fn operator_norm_cases() {
        // permutation matrix
        let p = cm(
            3,
            3,
            &[
                (0.0, 0.0),
                (1.0, 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
                (1.0, 0.0),
                (1.0, 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
            ],
        );
        assert!((operator_norm(&p).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(operator_norm(&CMatrix::zeros(4, 2)).unwrap(), 0.0);
        let r = cm(2, 2, &[(0.0, 0.0), (2.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert!((operator_norm(&r).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn operator_norm_unitary_invariance() {
        let mut rng = crate::sampling::stream(0, 23);
        for _ in 0..4 {
            let m = random_hermitian(10, &mut rng);
            let (_, u) = hermitian_eigensystem(&random_hermitian(10, &mut rng)).unwrap();
            let (_, v) = hermitian_eigensystem(&random_hermitian(10, &mut rng)).unwrap();
            let a = u.mul(&m).unwrap().mul(&v).unwrap();
            let n0 = operator_norm(&m).unwrap();
            let n1 = operator_norm(&a).unwrap();
            assert!((n0 - n1).abs() <= 1e-8 * n0.max(1.0));
        }
    }

    #[test]
    fn lp_simple_max() {
        let lp = LinearProgram {
            variables: 1,
            objective: vec![1.0],
            constraints: vec![
                (vec![1.0], Relation::Le, 1.0),
                (vec![-1.0], Relation::Le, 0.0),
            ],
        };
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.optimum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lp_two_vars() {
        let lp = LinearProgram {
            variables: 2,
            objective: vec![1.0, 1.0],
            constraints: vec![
                (vec![1.0, 0.0], Relation::Le, 1.0),
                (vec![0.0, 1.0], Relation::Le, 1.0),
            ],
        };
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.optimum - 2.0).abs() < 1e-9);
    }

    #[test]
    fn lp_lipschitz_pair() {
        // max f2 - f1 s.t. |f2 - f1| <= 0.7, gauge f1 = 0
        let lp = LinearProgram {
            variables: 2,
            objective: vec![-1.0, 1.0],
            constraints: vec![
                (vec![-1.0, 1.0], Relation::Le, 0.7),
                (vec![1.0, -1.0], Relation::Le, 0.7),
                (vec![1.0, 0.0], Relation::Eq, 0.0),
            ],
        };
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.optimum - 0.7).abs() < 1e-9);
    }

    #[test]
    fn lp_infeasible_and_unbounded() {
        let inf = LinearProgram {
            variables: 1,
            objective: vec![0.0],
            constraints: vec![
                (vec![1.0], Relation::Le, -1.0),
                (vec![-1.0], Relation::Le, -1.0),
            ],
        };
        assert!(matches!(solve_lp(&inf), Err(Error::Infeasible)));
        let unb = LinearProgram {
            variables: 1,
            objective: vec![1.0],
            constraints: vec![(vec![-1.0], Relation::Le, 0.0)],
        };
        assert!(matches!(solve_lp(&unb), Err(Error::Unbounded)));
    }

    #[test]
    fn lp_duality_gap_on_random_bounded_lps() {
        let mut rng = crate::sampling::stream(0, 99);
        for trial in 0..20 {
            let n = 3 + (rng.gen::<u64>() % 40) as usize;
            let m = 2 + (rng.gen::<u64>() % 30) as usize;
            let mut constraints = Vec::new();
            for _ in 0..m {
                let row: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
                let b = rng.gen::<f64>() * 2.0 + 0.5;
                constraints.push((row, Relation::Le, b));
            }
            // box constraints keep it bounded
            for j in 0..n {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                constraints.push((e.clone(), Relation::Le, 3.0));
                let mut ne = vec![0.0; n];
                ne[j] = -1.0;
                constraints.push((ne, Relation::Le, 3.0));
            }
            let lp = LinearProgram {
                variables: n,
                objective: (0..n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect(),
                constraints,
            };
            let sol = solve_lp(&lp).unwrap();
            // primal feasibility of the witness
            for (row, rel, b) in &lp.constraints {
                let ax: f64 = row.iter().zip(sol.witness.iter()).map(|(a, x)| a * x).sum();
                match rel {
                    Relation::Le => assert!(ax <= b + 1e-8, "trial {trial}: {ax} > {b}"),
                    Relation::Eq => assert!((ax - b).abs() <= 1e-8),
                }
            }
            // weak duality gap of the tableau dual
            let dual_val: f64 = sol
                .dual
                .iter()
                .zip(lp.constraints.iter())
                .map(|(y, (_, _, b))| y * b)
                .sum();
            assert!(
                (dual_val - sol.optimum).abs() <= 1e-7 * (1.0 + sol.optimum.abs()),
                "trial {trial}: duality gap {}",
                (dual_val - sol.optimum).abs()
            );
        }
    }
}
