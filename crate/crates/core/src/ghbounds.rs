//! Bridges between quantum metric spaces, linear-programming evaluation of the
//! dual state-space metrics, the matrix approximation of finite metric spaces,
//! and the aggregated convergence reports.
//!
//! Every dual distance evaluated here is
//! `d_L(μ,ν) = sup { |μ(a) - ν(a)| : L(a) ≤ 1 }` for a polyhedral seminorm `L`
//! on the self-adjoint part; complex moduli of matrix entries are the only
//! non-polyhedral pieces and are bracketed by inscribed and circumscribed
//! regular polygons, yielding a certified two-sided interval for `d_L`.
//!
//! The comparison bridge turns a uniform ratio bound between two Lip-norms on
//! one space into a distance certificate. If
//! `η = sup |L_a - L_b| / max(L_a, L_b) < 1` and the `L_a`-unit ball lies
//! within distance `R` of the scalars, set `γ = 2ηR/(1-η)` and
//! `N(a,b) = ‖a-b‖/γ` on the direct sum. For `L_a(a) ≤ 1` choose the partner
//! `b = (1-η)(a - s) + s` (s the nearest scalar): then `L_b(b) ≤ (1-η)L_b(a) ≤`
//! `L_a(a) ≤ 1` and `‖a-b‖ = η‖a-s‖ ≤ ηR ≤ γ`; symmetrically the `L_b`-ball
//! has radius at most `R/(1-η)`, giving partners within `ηR/(1-η) ≤ γ`. So
//! `max{L_a, L_b, N}` is a bridge and each state is within `γ` of its copy on
//! the other side: `dist_q((V,L_a),(V,L_b)) ≤ 2ηR/(1-η)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fuzzy_algebra::{full_matrix_bicharacter, LatticeElement, SkewBicharacter};
use crate::groups::FinAbGroup;
use crate::lengths::LengthFunction;
use crate::numerics::{hermitian_eigenvalues, solve_lp, CMatrix, LinearProgram, Relation};
use crate::qmetric::{
    approx_certificate, lip_norm, theta_map, ApproxCertificate, LipNormSpec,
};
use crate::sampling::{complex_normal, stream};
use crate::C64;

/// Finite metric space: labels and a symmetric distance matrix with exact
/// triangle inequality.
#[derive(Clone, Debug)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
}

impl FiniteMetricSpace {
    pub fn new(labels: Vec<String>, dist: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if dist.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: dist.len(),
            });
        }
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return Err(Error::InvalidParameter("nonzero diagonal"));
            }
            for j in 0..n {
                let dij = dist[i * n + j];
                if !dij.is_finite() || dij < 0.0 {
                    return Err(Error::NonFinite);
                }
                if dist[j * n + i] != dij {
                    return Err(Error::InvalidParameter("asymmetric distances"));
                }
                if i != j && dij == 0.0 {
                    return Err(Error::InvalidParameter("zero distance off diagonal"));
                }
                for k in 0..n {
                    if dij > dist[i * n + k] + dist[k * n + j] + 1e-12 {
                        return Err(Error::InvalidParameter("triangle inequality violated"));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { labels, dist })
    }

    /// Repairs an arbitrary symmetric nonnegative matrix into a metric by
    /// shortest paths, then constructs the space.
    pub fn repaired(labels: Vec<String>, mut dist: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if dist.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: dist.len(),
            });
        }
        for i in 0..n {
            dist[i * n + i] = 0.0;
            for j in 0..i {
                let v = 0.5 * (dist[i * n + j] + dist[j * n + i]);
                dist[i * n + j] = v;
                dist[j * n + i] = v;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = dist[i * n + k] + dist[k * n + j];
                    if via < dist[i * n + j] {
                        dist[i * n + j] = via;
                    }
                }
            }
        }
        Self::new(labels, dist)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len() + j]
    }

    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..self.len() {
            for j in 0..i {
                d = d.max(self.distance(i, j));
            }
        }
        d
    }

    pub fn scaled(&self, factor: f64) -> FiniteMetricSpace {
        FiniteMetricSpace {
            labels: self.labels.clone(),
            dist: self.dist.iter().map(|d| d * factor).collect(),
        }
    }

    /// Lipschitz seminorm of a real function on the points.
    pub fn lipschitz(&self, f: &[f64]) -> f64 {
        let mut l = 0.0f64;
        for i in 0..self.len() {
            for j in 0..i {
                l = l.max((f[i] - f[j]).abs() / self.distance(i, j));
            }
        }
        l
    }
}

/// The Lip-norm on hermitian `n×n` matrices approximating `C(X)`:
/// `L_ε(A) = max { Lip(diag A), (2(n²-n)/ε)·sup_{i≠j}|A_ij| }`.
///
/// The off-diagonal coefficient makes the per-state chain close:
/// `L_ε(A) ≤ 1` gives `Σ_{i<j}|A_ij| ≤ ε/4`, so
/// `|ν(D f) - ν(A)| ≤ ‖A - D(P A)‖ + ‖f - P A‖ ≤ ε/2 + ε/2 = ε`
/// for every matrix state `ν` once the bridge constraint holds.
#[derive(Clone, Debug)]
pub struct MatrixLipNorm {
    pub space: FiniteMetricSpace,
    pub epsilon: f64,
}

/// Construct the matrix Lip-norm data; `L_ε(A) = 0` exactly for real multiples
/// of the identity.
pub fn matrix_lip_norm(space: &FiniteMetricSpace, epsilon: f64) -> Result<MatrixLipNorm> {
    if epsilon <= 0.0 {
        return Err(Error::InvalidParameter("epsilon must be positive"));
    }
    Ok(MatrixLipNorm {
        space: space.clone(),
        epsilon,
    })
}

impl MatrixLipNorm {
    pub fn n(&self) -> usize {
        self.space.len()
    }

    /// Coefficient in front of `sup_{i≠j} |A_ij|`.
    pub fn off_diagonal_coefficient(&self) -> f64 {
        let n = self.n() as f64;
        2.0 * (n * n - n) / self.epsilon
    }

    /// Radius of the off-diagonal modulus ball: `|A_ij| ≤ ε/(2(n²-n))`.
    pub fn off_diagonal_radius(&self) -> f64 {
        1.0 / self.off_diagonal_coefficient()
    }

    /// Direct evaluation on a hermitian matrix.
    pub fn seminorm(&self, a: &CMatrix) -> Result<f64> {
        let n = self.n();
        if a.rows() != n || a.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: a.rows(),
            });
        }
        let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
        let mut off = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                off = off.max(a.get(i, j).norm());
            }
        }
        Ok(self
            .space
            .lipschitz(&diag)
            .max(self.off_diagonal_coefficient() * off))
    }
}

/// `N(f, A) = (2/ε) ‖f - P(A)‖_∞`, the defect bridge of the matrix
/// approximation.
pub fn annex_bridge_seminorm(f: &[f64], a: &CMatrix, epsilon: f64) -> f64 {
    let mut worst = 0.0f64;
    for (i, &fi) in f.iter().enumerate() {
        worst = worst.max((fi - a.get(i, i).re).abs());
    }
    2.0 * worst / epsilon
}

/// A state of one side of a (possibly bridged) pair of order-unit spaces.
#[derive(Clone, Debug)]
pub enum StatePoint {
    /// Probability vector on the function side.
    Commutative(Vec<f64>),
    /// Density matrix on the matrix side.
    Matrix(CMatrix),
    /// Probability vector on the second function side of a comparison bridge.
    CommutativeB(Vec<f64>),
    /// Convex combination `t·μ + (1-t)·ν` of a function-side state and a
    /// matrix-side state.
    Joint {
        t: f64,
        comm: Vec<f64>,
        matrix: CMatrix,
    },
}

pub fn point_mass(n: usize, i: usize) -> StatePoint {
    let mut p = alloc::vec![0.0; n];
    p[i] = 1.0;
    StatePoint::Commutative(p)
}

pub fn pure_state(n: usize, i: usize) -> StatePoint {
    let mut m = CMatrix::zeros(n, n);
    m.set(i, i, C64::new(1.0, 0.0));
    StatePoint::Matrix(m)
}

fn check_probability(p: &[f64], n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p.len(),
        });
    }
    if p.iter().any(|&x| !(x >= -1e-12)) {
        return Err(Error::InvalidParameter("negative probability"));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter("probabilities must sum to 1"));
    }
    Ok(())
}

fn check_density(rho: &CMatrix, n: usize) -> Result<()> {
    if rho.rows() != n || rho.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rho.rows(),
        });
    }
    if !rho.is_hermitian(1e-10) {
        return Err(Error::NonHermitian {
            residual: rho.hermitian_residual(),
        });
    }
    if (rho.trace().re - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter("density matrix trace must be 1"));
    }
    let vals = hermitian_eigenvalues(rho)?;
    if vals.first().copied().unwrap_or(0.0) < -1e-10 {
        return Err(Error::InvalidParameter("density matrix not positive"));
    }
    Ok(())
}

/// The polyhedral dual-metric problems the LP evaluator understands.
#[derive(Clone, Debug)]
pub enum DualMetricProblem {
    /// States on `C(X)` with the Lipschitz seminorm.
    Lipschitz(FiniteMetricSpace),
    /// States on `M_n` with the matrix Lip-norm.
    Matrix(MatrixLipNorm),
    /// `C(X) ⊕ M_n` with `L = max{Lip, L_ε, N}` for the defect bridge.
    AnnexBridge(MatrixLipNorm),
    /// `C(X) ⊕ C(X)` with seminorms `scale_a·Lip`, `scale_b·Lip` and
    /// `N(f,g) = max_i |f_i - g_i| / gamma`.
    ComparisonBridge {
        space: FiniteMetricSpace,
        scale_a: f64,
        scale_b: f64,
        gamma: f64,
    },
}

/// Two-sided bracket for a dual distance.
#[derive(Clone, Copy, Debug)]
pub struct LpInterval {
    pub lower: f64,
    pub upper: f64,
}

struct VarLayout {
    /// function side values (empty when absent)
    f: core::ops::Range<usize>,
    /// matrix diagonal
    diag: core::ops::Range<usize>,
    /// off-diagonal (re, im) pairs, row-major i < j
    off: core::ops::Range<usize>,
    /// second function side (comparison problems)
    g: core::ops::Range<usize>,
    total: usize,
}

fn layout(problem: &DualMetricProblem) -> VarLayout {
    match problem {
        DualMetricProblem::Lipschitz(x) => {
            let n = x.len();
            VarLayout {
                f: 0..n,
                diag: n..n,
                off: n..n,
                g: n..n,
                total: n,
            }
        }
        DualMetricProblem::Matrix(m) => {
            let n = m.n();
            let off = n * (n - 1) / 2;
            VarLayout {
                f: 0..0,
                diag: 0..n,
                off: n..n + 2 * off,
                g: n + 2 * off..n + 2 * off,
                total: n + 2 * off,
            }
        }
        DualMetricProblem::AnnexBridge(m) => {
            let n = m.n();
            let off = n * (n - 1) / 2;
            VarLayout {
                f: 0..n,
                diag: n..2 * n,
                off: 2 * n..2 * n + 2 * off,
                g: 2 * n + 2 * off..2 * n + 2 * off,
                total: 2 * n + 2 * off,
            }
        }
        DualMetricProblem::ComparisonBridge { space, .. } => {
            let n = space.len();
            VarLayout {
                f: 0..n,
                diag: n..n,
                off: n..n,
                g: n..2 * n,
                total: 2 * n,
            }
        }
    }
}

fn off_index(layout: &VarLayout, n: usize, i: usize, j: usize) -> usize {
    // i < j; pairs enumerated row-major
    let mut idx = 0;
    for r in 0..n {
        for c in (r + 1)..n {
            if r == i && c == j {
                return layout.off.start + 2 * idx;
            }
            idx += 1;
        }
    }
    unreachable!("off-diagonal index out of range")
}

fn state_objective(
    state: &StatePoint,
    problem: &DualMetricProblem,
    lay: &VarLayout,
) -> Result<Vec<f64>> {
    let mut obj = alloc::vec![0.0f64; lay.total];
    let func_side = |obj: &mut Vec<f64>, p: &[f64], range: &core::ops::Range<usize>| {
        for (slot, &pi) in range.clone().zip(p.iter()) {
            obj[slot] += pi;
        }
    };
    let matrix_side = |obj: &mut Vec<f64>, rho: &CMatrix, lay: &VarLayout, n: usize| {
        for i in 0..n {
            obj[lay.diag.start + i] += rho.get(i, i).re;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let base = off_index(lay, n, i, j);
                obj[base] += 2.0 * rho.get(i, j).re;
                obj[base + 1] += 2.0 * rho.get(i, j).im;
            }
        }
    };
    match (problem, state) {
        (DualMetricProblem::Lipschitz(x), StatePoint::Commutative(p)) => {
            check_probability(p, x.len())?;
            func_side(&mut obj, p, &lay.f);
        }
        (DualMetricProblem::Matrix(m), StatePoint::Matrix(rho)) => {
            check_density(rho, m.n())?;
            matrix_side(&mut obj, rho, lay, m.n());
        }
        (DualMetricProblem::AnnexBridge(m), StatePoint::Commutative(p)) => {
            check_probability(p, m.n())?;
            func_side(&mut obj, p, &lay.f);
        }
        (DualMetricProblem::AnnexBridge(m), StatePoint::Matrix(rho)) => {
            check_density(rho, m.n())?;
            matrix_side(&mut obj, rho, lay, m.n());
        }
        (DualMetricProblem::AnnexBridge(m), StatePoint::Joint { t, comm, matrix }) => {
            if !(0.0..=1.0).contains(t) {
                return Err(Error::InvalidParameter("joint weight outside [0,1]"));
            }
            check_probability(comm, m.n())?;
            check_density(matrix, m.n())?;
            for (slot, &pi) in lay.f.clone().zip(comm.iter()) {
                obj[slot] += t * pi;
            }
            let mut part = alloc::vec![0.0f64; lay.total];
            matrix_side(&mut part, matrix, lay, m.n());
            for (o, p) in obj.iter_mut().zip(part.iter()) {
                *o += (1.0 - t) * p;
            }
        }
        (DualMetricProblem::ComparisonBridge { space, .. }, StatePoint::Commutative(p)) => {
            check_probability(p, space.len())?;
            func_side(&mut obj, p, &lay.f);
        }
        (DualMetricProblem::ComparisonBridge { space, .. }, StatePoint::CommutativeB(p)) => {
            check_probability(p, space.len())?;
            func_side(&mut obj, p, &lay.g);
        }
        _ => return Err(Error::InvalidParameter("state incompatible with problem")),
    }
    Ok(obj)
}

fn lipschitz_rows(
    constraints: &mut Vec<(Vec<f64>, Relation, f64)>,
    total: usize,
    range: &core::ops::Range<usize>,
    x: &FiniteMetricSpace,
    scale: f64,
) {
    let n = x.len();
    for i in 0..n {
        for j in 0..i {
            // scale·|v_i - v_j| ≤ d_ij
            let bound = x.distance(i, j) / scale;
            let mut row = alloc::vec![0.0; total];
            row[range.start + i] = 1.0;
            row[range.start + j] = -1.0;
            constraints.push((row.clone(), Relation::Le, bound));
            for r in row.iter_mut() {
                *r = -*r;
            }
            constraints.push((row, Relation::Le, bound));
        }
    }
}

fn modulus_rows(
    constraints: &mut Vec<(Vec<f64>, Relation, f64)>,
    total: usize,
    lay: &VarLayout,
    n: usize,
    radius: f64,
    polygon: usize,
    inscribed: bool,
) {
    // circumscribed: tangent half-planes at m directions (contains the disk);
    // inscribed: the same directions rotated half a step with radius·cos(π/m)
    // (contained in the disk)
    let m = polygon;
    for i in 0..n {
        for j in (i + 1)..n {
            let base = off_index(lay, n, i, j);
            for t in 0..m {
                let ang = if inscribed {
                    core::f64::consts::PI * (2 * t + 1) as f64 / m as f64
                } else {
                    crate::TAU * t as f64 / m as f64
                };
                let bound = if inscribed {
                    radius * (core::f64::consts::PI / m as f64).cos()
                } else {
                    radius
                };
                let mut row = alloc::vec![0.0; total];
                row[base] = ang.cos();
                row[base + 1] = ang.sin();
                constraints.push((row, Relation::Le, bound));
            }
        }
    }
}

fn build_lp(
    problem: &DualMetricProblem,
    objective: Vec<f64>,
    polygon: usize,
    inscribed: bool,
) -> LinearProgram {
    let lay = layout(problem);
    let total = lay.total;
    let mut constraints: Vec<(Vec<f64>, Relation, f64)> = Vec::new();
    match problem {
        DualMetricProblem::Lipschitz(x) => {
            lipschitz_rows(&mut constraints, total, &lay.f, x, 1.0);
        }
        DualMetricProblem::Matrix(m) => {
            lipschitz_rows(&mut constraints, total, &lay.diag, &m.space, 1.0);
            modulus_rows(
                &mut constraints,
                total,
                &lay,
                m.n(),
                m.off_diagonal_radius(),
                polygon,
                inscribed,
            );
        }
        DualMetricProblem::AnnexBridge(m) => {
            let n = m.n();
            lipschitz_rows(&mut constraints, total, &lay.f, &m.space, 1.0);
            lipschitz_rows(&mut constraints, total, &lay.diag, &m.space, 1.0);
            modulus_rows(
                &mut constraints,
                total,
                &lay,
                n,
                m.off_diagonal_radius(),
                polygon,
                inscribed,
            );
            // bridge: |f_i - A_ii| ≤ ε/2
            for i in 0..n {
                let mut row = alloc::vec![0.0; total];
                row[lay.f.start + i] = 1.0;
                row[lay.diag.start + i] = -1.0;
                constraints.push((row.clone(), Relation::Le, m.epsilon / 2.0));
                for r in row.iter_mut() {
                    *r = -*r;
                }
                constraints.push((row, Relation::Le, m.epsilon / 2.0));
            }
        }
        DualMetricProblem::ComparisonBridge {
            space,
            scale_a,
            scale_b,
            gamma,
        } => {
            let n = space.len();
            lipschitz_rows(&mut constraints, total, &lay.f, space, *scale_a);
            lipschitz_rows(&mut constraints, total, &lay.g, space, *scale_b);
            for i in 0..n {
                let mut row = alloc::vec![0.0; total];
                row[lay.f.start + i] = 1.0;
                row[lay.g.start + i] = -1.0;
                constraints.push((row.clone(), Relation::Le, *gamma));
                for r in row.iter_mut() {
                    *r = -*r;
                }
                constraints.push((row, Relation::Le, *gamma));
            }
        }
    }
    // States are unital, so the objective is invariant under adding scalars;
    // pinning the first variable keeps the feasible region bounded.
    let mut gauge = alloc::vec![0.0; total];
    gauge[0] = 1.0;
    constraints.push((gauge, Relation::Eq, 0.0));
    LinearProgram {
        variables: total,
        objective,
        constraints,
    }
}

/// Evaluates `d_L(μ, ν)` with certified lower and upper bounds from the
/// inscribed and circumscribed polygon relaxations of the modulus constraints.
/// An unbounded program means the seminorm is not a Lip-norm on this face.
pub fn dual_metric_lp(
    mu: &StatePoint,
    nu: &StatePoint,
    problem: &DualMetricProblem,
    polygon: usize,
) -> Result<LpInterval> {
    if polygon < 8 || polygon % 2 != 0 {
        return Err(Error::InvalidParameter("polygon order must be even and ≥ 8"));
    }
    let lay = layout(problem);
    let mo = state_objective(mu, problem, &lay)?;
    let no = state_objective(nu, problem, &lay)?;
    let objective: Vec<f64> = mo.iter().zip(no.iter()).map(|(a, b)| a - b).collect();
    // the seminorm ball is symmetric, so sup |μ-ν| = sup (μ-ν)
    let run = |inscribed: bool| -> Result<f64> {
        let lp = build_lp(problem, objective.clone(), polygon, inscribed);
        match solve_lp(&lp) {
            Ok(sol) => Ok(sol.optimum),
            Err(Error::Unbounded) => Err(Error::NotALipNorm),
            Err(e) => Err(e),
        }
    };
    let has_modulus = matches!(
        problem,
        DualMetricProblem::Matrix(_) | DualMetricProblem::AnnexBridge(_)
    );
    if has_modulus {
        let lower = run(true)?;
        let upper = run(false)?;
        Ok(LpInterval {
            lower: lower.max(0.0),
            upper: upper.max(0.0),
        })
    } else {
        let v = run(false)?.max(0.0);
        Ok(LpInterval { lower: v, upper: v })
    }
}

/// Which constructive map a sampled state certifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnnexSide {
    /// `d(μ, μ∘P)` for a function-side state.
    Function,
    /// `d(ν∘D, ν)` for a matrix-side state.
    Matrix,
}

#[derive(Clone, Debug)]
pub struct AnnexSample {
    pub side: AnnexSide,
    pub index: usize,
    pub interval: LpInterval,
    pub target: f64,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct AnnexReport {
    pub epsilon: f64,
    pub n: usize,
    /// `dist_q(C(X), M_n) ≤ ε` by the bridge construction.
    pub certified_bound: f64,
    pub samples: Vec<AnnexSample>,
    /// Lipschitz-dual recovery `d_L(δ_i, δ_j)` intervals for all pairs.
    pub recovery: Vec<(usize, usize, f64, LpInterval)>,
    pub failed: bool,
}

/// Tolerated multiplicative slack on the per-state targets (polygon relaxation
/// plus LP tolerance).
pub const ANNEX_GATE_SLACK: f64 = 1.02;

/// Samples states on both sides and certifies the constructive per-state maps
/// of the matrix approximation: `μ ↦ μ∘P` stays within `ε/2`, `ν ↦ ν∘D`
/// within `ε`. Includes all point masses and basis pure states, then seeded
/// Dirichlet vectors and Gaussian density matrices.
pub fn annex_certificate(
    space: &FiniteMetricSpace,
    epsilon: f64,
    samples: usize,
    polygon: usize,
    seed: u64,
) -> Result<AnnexReport> {
    let m = matrix_lip_norm(space, epsilon)?;
    let n = m.n();
    let problem = DualMetricProblem::AnnexBridge(m);
    let mut rng = stream(seed, 0x414e_4e45);
    let mut report_samples = Vec::new();
    let mut failed = false;

    let mut mu_states: Vec<StatePoint> = (0..n).map(|i| point_mass(n, i)).collect();
    for _ in 0..samples {
        mu_states.push(StatePoint::Commutative(crate::sampling::dirichlet(
            n, &mut rng,
        )));
    }
    for (index, mu) in mu_states.iter().enumerate() {
        let StatePoint::Commutative(p) = mu else {
            unreachable!()
        };
        let mut rho = CMatrix::zeros(n, n);
        for (i, &pi) in p.iter().enumerate() {
            rho.set(i, i, C64::new(pi, 0.0));
        }
        let interval = dual_metric_lp(mu, &StatePoint::Matrix(rho), &problem, polygon)?;
        let target = epsilon / 2.0;
        let ok = interval.upper <= target * ANNEX_GATE_SLACK;
        failed |= !ok;
        report_samples.push(AnnexSample {
            side: AnnexSide::Function,
            index,
            interval,
            target,
            ok,
        });
    }

    let mut nu_states: Vec<StatePoint> = (0..n).map(|i| pure_state(n, i)).collect();
    for _ in 0..samples {
        nu_states.push(StatePoint::Matrix(crate::sampling::density_matrix(
            n, &mut rng,
        )));
    }
    for (index, nu) in nu_states.iter().enumerate() {
        let StatePoint::Matrix(rho) = nu else {
            unreachable!()
        };
        let diag: Vec<f64> = (0..n).map(|i| rho.get(i, i).re.max(0.0)).collect();
        let s: f64 = diag.iter().sum();
        let p: Vec<f64> = diag.iter().map(|x| x / s).collect();
        let interval = dual_metric_lp(&StatePoint::Commutative(p), nu, &problem, polygon)?;
        let target = epsilon;
        let ok = interval.upper <= target * ANNEX_GATE_SLACK;
        failed |= !ok;
        report_samples.push(AnnexSample {
            side: AnnexSide::Matrix,
            index,
            interval,
            target,
            ok,
        });
    }

    // Lipschitz-dual recovery on the pure function side
    let lip = DualMetricProblem::Lipschitz(space.clone());
    let mut recovery = Vec::new();
    for i in 0..n {
        for j in 0..i {
            let interval = dual_metric_lp(&point_mass(n, i), &point_mass(n, j), &lip, polygon)?;
            recovery.push((i, j, space.distance(i, j), interval));
        }
    }

    Ok(AnnexReport {
        epsilon,
        n,
        certified_bound: epsilon,
        samples: report_samples,
        recovery,
        failed,
    })
}

/// Greedy net: repeatedly adds the sample point whose `eps`-ball covers the
/// most still-uncovered samples, until everything is covered; returns the
/// induced metric restriction and the verified covering radius (≤ `eps` by
/// construction). Deterministic: ties break on the lowest index.
pub fn eps_net<F: Fn(usize, usize) -> f64>(
    count: usize,
    metric: F,
    eps: f64,
) -> Result<(FiniteMetricSpace, Vec<usize>, f64)> {
    if count == 0 {
        return Err(Error::EmptyInput);
    }
    if eps <= 0.0 {
        return Err(Error::InvalidParameter("eps must be positive"));
    }
    let mut covered = alloc::vec![false; count];
    let mut chosen: Vec<usize> = Vec::new();
    while covered.iter().any(|&c| !c) {
        let mut best = (0usize, 0usize);
        for c in 0..count {
            let gain = (0..count)
                .filter(|&i| !covered[i] && metric(i, c) <= eps)
                .count();
            if gain > best.1 {
                best = (c, gain);
            }
        }
        let (center, _) = best;
        chosen.push(center);
        for i in 0..count {
            if metric(i, center) <= eps {
                covered[i] = true;
            }
        }
    }
    let covering = (0..count)
        .map(|i| {
            chosen
                .iter()
                .map(|&c| metric(i, c))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0f64, f64::max);
    let m = chosen.len();
    let mut dist = alloc::vec![0.0; m * m];
    for a in 0..m {
        for b in 0..a {
            let v = metric(chosen[a], chosen[b]);
            dist[a * m + b] = v;
            dist[b * m + a] = v;
        }
    }
    let labels = chosen.iter().map(|i| format!("x{i}")).collect();
    Ok((FiniteMetricSpace::new(labels, dist)?, chosen, covering))
}

/// `dist_q((V,L_a),(V,L_b)) ≤ 2ηR/(1-η)` from probe evaluations of the two
/// Lip-norms and a radius bound `R` for the unit ball modulo scalars (see the
/// module docs for the derivation).
#[derive(Clone, Copy, Debug)]
pub struct ComparisonBound {
    pub eta: f64,
    pub radius: f64,
    pub bound: f64,
}

pub fn lipnorm_comparison_bound(probes: &[(f64, f64)], radius: f64) -> Result<ComparisonBound> {
    let mut eta = 0.0f64;
    for &(la, lb) in probes {
        let m = la.max(lb);
        if m == 0.0 {
            continue;
        }
        eta = eta.max((la - lb).abs() / m);
    }
    if eta >= 1.0 {
        return Err(Error::NotComparable { eta });
    }
    Ok(ComparisonBound {
        eta,
        radius,
        bound: 2.0 * eta * radius / (1.0 - eta),
    })
}

/// Per-level row of the fuzzy-torus convergence report.
#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub k: Vec<u64>,
    /// Pointwise gap of the lifted bicharacter to the limit on the kernel box.
    pub sigma_gap: f64,
    pub covering_radius: f64,
    pub c_n: f64,
    pub mean_phi_l: f64,
    pub delta_n: f64,
    pub injective: bool,
    pub admissible: bool,
    /// Lip-norms of the folded probes at this level.
    pub lip_probes: Vec<f64>,
    /// Mean of the length over the level's subgroup: the radius bound.
    pub mean_length: f64,
}

/// Certified pairwise bound between consecutive admissible levels.
#[derive(Clone, Debug)]
pub struct ConvergencePair {
    pub from: Vec<u64>,
    pub to: Vec<u64>,
    pub eta: f64,
    pub radius: f64,
    pub comparison: f64,
    /// `δ_n + δ_m + comparison`, bounding `dist_q(fuzzy_n, fuzzy_m)`.
    pub pair_bound: f64,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub certificate: ApproxCertificate,
    pub rows: Vec<ConvergenceRow>,
    pub pairs: Vec<ConvergencePair>,
    pub probe_count: usize,
}

/// Inputs of the convergence report: the limit twist data `ψ`, the prime levels,
/// the target `ε`, the length function, and the probe configuration.
#[derive(Clone, Debug)]
pub struct ConvergenceInput {
    pub psi: Vec<f64>,
    pub primes: Vec<u64>,
    pub epsilon: f64,
    pub length: LengthFunction,
    pub probe_pairs: usize,
    pub probe_random: usize,
    pub seed: u64,
}

fn limit_bicharacter(psi: &[f64]) -> Result<SkewBicharacter> {
    let half = psi.len();
    let d = 2 * half;
    let mut s = alloc::vec![0.0f64; d * d];
    for (j, &v) in psi.iter().enumerate() {
        let r = 2 * j;
        s[r * d + r + 1] = -v;
        s[(r + 1) * d + r] = v;
    }
    SkewBicharacter::new(d, s)
}

/// Deterministic spread of ± frequency pairs from the kernel support, low to
/// high, plus seeded random self-adjoint probes supported in the box.
fn build_probes(
    support: &[crate::groups::LatticePoint],
    d: usize,
    pairs: usize,
    random: usize,
    seed: u64,
) -> Vec<LatticeElement> {
    let mut reps: Vec<Vec<i64>> = support
        .iter()
        .map(|p| p.coords.clone())
        .filter(|c| c.iter().any(|&x| x != 0))
        .filter(|c| {
            // canonical representative of the ± pair
            let first_nonzero = c.iter().find(|&&x| x != 0).copied().unwrap_or(0);
            first_nonzero > 0
        })
        .collect();
    reps.sort_by_key(|c| {
        (
            c.iter().map(|&x| x.unsigned_abs()).max().unwrap_or(0),
            c.iter().map(|&x| x.unsigned_abs()).sum::<u64>(),
            c.clone(),
        )
    });
    let mut probes = Vec::new();
    if !reps.is_empty() {
        let take = pairs.min(reps.len());
        for t in 0..take {
            // evenly spaced through the sorted list so that low and high
            // frequencies are both represented
            let idx = if take == 1 {
                0
            } else {
                t * (reps.len() - 1) / (take - 1)
            };
            let chi = &reps[idx];
            let neg: Vec<i64> = chi.iter().map(|&x| -x).collect();
            let mut even = LatticeElement::zero(d);
            even.set_coeff(chi.clone(), C64::new(1.0, 0.0));
            even.set_coeff(neg.clone(), C64::new(1.0, 0.0));
            probes.push(even);
            let mut odd = LatticeElement::zero(d);
            odd.set_coeff(chi.clone(), C64::new(0.0, 1.0));
            odd.set_coeff(neg, C64::new(0.0, -1.0));
            probes.push(odd);
        }
    }
    let mut rng = stream(seed, 0x50_52_4f);
    for _ in 0..random {
        let mut a = LatticeElement::zero(d);
        for chi in reps.iter() {
            let v = complex_normal(&mut rng) * C64::new(0.35, 0.0);
            let neg: Vec<i64> = chi.iter().map(|&x| -x).collect();
            a.set_coeff(chi.clone(), v);
            a.set_coeff(neg, v.conj());
        }
        if a.coeffs().next().is_some() {
            probes.push(a);
        }
    }
    probes
}

/// Assembles the per-level certificates and the pairwise certified bounds
/// between consecutive admissible fuzzy tori.
pub fn torus_convergence_report(input: &ConvergenceInput) -> Result<ConvergenceReport> {
    if input.primes.is_empty() {
        return Err(Error::EmptyInput);
    }
    if input.psi.is_empty() {
        return Err(Error::InvalidParameter("psi must be nonempty"));
    }
    let d = 2 * input.psi.len();
    if input.length.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: input.length.dim(),
        });
    }
    let sigma_inf = limit_bicharacter(&input.psi)?;
    let levels: Vec<(FinAbGroup, SkewBicharacter)> = input
        .primes
        .iter()
        .map(|&p| {
            Ok((
                FinAbGroup::cyclic_power(p, d)?,
                full_matrix_bicharacter(&input.psi, p)?,
            ))
        })
        .collect::<Result<_>>()?;
    let certificate = approx_certificate(input.epsilon, &input.length, &levels)?;
    let probes = build_probes(
        &certificate.support,
        d,
        input.probe_pairs,
        input.probe_random,
        input.seed,
    );

    let box_radius = certificate.kernel_order as i64;
    let mut rows = Vec::with_capacity(levels.len());
    for ((group, sigma), approx) in levels.iter().zip(certificate.rows.iter()) {
        let sigma_gap = sigma.pointwise_gap(&sigma_inf, box_radius);
        let covering_radius = crate::lengths::covering_radius(group, &input.length)?;
        let mut mean_length = 0.0;
        for h in group.elements() {
            mean_length += input.length.evaluate(&group.torus_point(&h))?;
        }
        mean_length /= group.order() as f64;
        let mut lip_probes = Vec::with_capacity(probes.len());
        if approx.admissible {
            let spec =
                LipNormSpec::full(group.clone(), sigma.clone(), input.length.clone());
            for probe in &probes {
                let image = theta_map(probe, group, sigma)?;
                lip_probes.push(lip_norm(&image, &spec)?);
            }
        }
        rows.push(ConvergenceRow {
            k: group.moduli().to_vec(),
            sigma_gap,
            covering_radius,
            c_n: approx.c_n,
            mean_phi_l: approx.mean_phi_l,
            delta_n: approx.delta_n,
            injective: approx.injective,
            admissible: approx.admissible,
            lip_probes,
            mean_length,
        });
    }

    let mut pairs = Vec::new();
    let admissible: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].admissible).collect();
    for w in admissible.windows(2) {
        let (a, b) = (w[0], w[1]);
        let probe_pairs: Vec<(f64, f64)> = rows[a]
            .lip_probes
            .iter()
            .zip(rows[b].lip_probes.iter())
            .map(|(&x, &y)| (x, y))
            .collect();
        let radius = rows[a].mean_length.max(rows[b].mean_length);
        let cmp = lipnorm_comparison_bound(&probe_pairs, radius)?;
        pairs.push(ConvergencePair {
            from: rows[a].k.clone(),
            to: rows[b].k.clone(),
            eta: cmp.eta,
            radius,
            comparison: cmp.bound,
            pair_bound: rows[a].delta_n + rows[b].delta_n + cmp.bound,
        });
    }

    Ok(ConvergenceReport {
        certificate,
        rows,
        pairs,
        probe_count: probes.len(),
    })
}

/// Composite plan approximating an odd-dimensional torus: collapse one
/// dimension of an even-dimensional torus to within `ε/2`, then approximate
/// the even-dimensional torus by a full matrix algebra to within `ε/2`.
#[derive(Clone, Debug)]
pub struct OddDimensionPlan {
    pub d: usize,
    pub epsilon: f64,
    /// Collapse family index `m` with `I_m = mean(arc)/(m+1) ≤ ε/2`.
    pub collapse_index: u64,
    pub collapse_bound: f64,
    /// Kernel order and prime for the even-dimensional approximation target
    /// `ε/2`, with its `δ_p ≤ ε/6` row obligation checked.
    pub kernel_order: usize,
    pub prime: u64,
    pub delta_p: f64,
    pub fuzzy_bound: f64,
    pub total: f64,
}

const PRIME_SEARCH_CAP: u64 = 10_000;

fn next_prime_at_least(mut p: u64) -> Result<u64> {
    fn is_prime(p: u64) -> bool {
        if p < 2 {
            return false;
        }
        let mut q = 2;
        while q * q <= p {
            if p % q == 0 {
                return false;
            }
            q += 1;
        }
        true
    }
    p = p.max(3);
    while p <= PRIME_SEARCH_CAP {
        if is_prime(p) && p > 2 {
            return Ok(p);
        }
        p += 1;
    }
    Err(Error::KernelOrderCapExceeded {
        cap: PRIME_SEARCH_CAP as usize,
    })
}

/// Plans the two certified halves for odd `d`: the collapse of `T^{d+1}` onto
/// `T^d` under the degenerating length family, and a full-matrix-algebra level
/// for `T^{d+1}` with trivial limit twist.
pub fn odd_dimension_plan(d: usize, epsilon: f64, l: &LengthFunction) -> Result<OddDimensionPlan> {
    if d % 2 == 0 {
        return Err(Error::InvalidParameter("d must be odd"));
    }
    if epsilon <= 0.0 {
        return Err(Error::InvalidParameter("epsilon must be positive"));
    }
    if l.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: l.dim(),
        });
    }
    // Collapse piece: the extended length evaluates the extra coordinate to
    // arc, whose torus mean is 1/4; I_m = (1/4)/(m+1).
    let mean_extra = 0.25;
    let target_half = epsilon / 2.0;
    let m = if mean_extra <= target_half {
        0
    } else {
        (mean_extra / target_half - 1.0).ceil() as u64
    };
    let collapse_bound = mean_extra / (m as f64 + 1.0);

    // Fuzzy piece on T^{d+1} with ψ = 0 and the collapse-family length l_m.
    let extended = match l {
        LengthFunction::MaxArc { .. } => LengthFunction::max_arc(d + 1),
        LengthFunction::SumArc { .. } => LengthFunction::sum_arc(d + 1),
        LengthFunction::EuclideanArc { .. } => LengthFunction::euclidean_arc(d + 1),
        _ => {
            return Err(Error::InvalidParameter(
                "plan supports the analytic length kinds",
            ))
        }
    };
    let family =
        crate::lengths::collapse_family(&extended, crate::lengths::CollapseIndex::Finite(m), d)?;
    let target = target_half / (3.0 * (1.0 + target_half));
    let (order, _) = crate::quadrature::least_fejer_order(&family, target, 64)?;
    let prime = next_prime_at_least(2 * order as u64 + 1)?;
    let psi = alloc::vec![0.0f64; (d + 1) / 2];
    let group = FinAbGroup::cyclic_power(prime, d + 1)?;
    let sigma = full_matrix_bicharacter(&psi, prime)?;
    let cert = approx_certificate(target_half, &family, &[(group, sigma)])?;
    let row = &cert.rows[0];
    if !row.admissible {
        return Err(Error::KernelOrderCapExceeded { cap: 64 });
    }
    Ok(OddDimensionPlan {
        d,
        epsilon,
        collapse_index: m,
        collapse_bound,
        kernel_order: cert.kernel_order,
        prime,
        delta_p: row.delta_n,
        fuzzy_bound: target_half,
        total: collapse_bound + target_half,
    })
}
