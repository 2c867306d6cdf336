//! Lip-norms from the dual action, positive summability kernels, the cutoff
//! operators they induce, the coefficient-folding map onto finite quotients,
//! and the finite-dimensional approximation certificates.
//!
//! The Lip-norm of `f` is the exact finite maximum of
//! `‖f - α_g f‖ / l(g)` over the acting set minus the identity. A kernel `φ`
//! (nonnegative, mean 1, finite Fourier support) induces
//! `α^φ f = Σ_g φ(g) α_{g^{-1}} f / |H|`, which multiplies the χ-coefficient by
//! the folded Fourier coefficient of `φ`; rescaled by `c = 1/mean_H(φ)` it is a
//! unital cutoff whose contraction constants are exactly the certificate
//! `δ = c · mean_H(φ·l)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fuzzy_algebra::{cstar_norm, AlgElement, LatticeElement, SkewBicharacter};
use crate::groups::{injective_on, pairing, FinAbGroup, GroupElement, LatticePoint};
use crate::lengths::{CertifiedValue, LengthFunction};
use crate::quadrature::{fejer_coefficient, least_fejer_order};
use crate::sampling::{random_self_adjoint, stream};
use crate::{unit_phase, C64};

/// Which group elements the Lip-norm supremum runs over.
#[derive(Clone, Debug)]
pub enum ActingSet {
    /// All of `U_k^d` minus the identity.
    Full,
    /// An explicit sample (a supergroup variant enlarges, never shrinks).
    Sample(Vec<GroupElement>),
}

/// Seminorm description: algebra context, length function, acting set.
#[derive(Clone, Debug)]
pub struct LipNormSpec {
    pub group: FinAbGroup,
    pub sigma: SkewBicharacter,
    pub length: LengthFunction,
    pub acting: ActingSet,
}

impl LipNormSpec {
    pub fn full(group: FinAbGroup, sigma: SkewBicharacter, length: LengthFunction) -> Self {
        LipNormSpec {
            group,
            sigma,
            length,
            acting: ActingSet::Full,
        }
    }
}

/// `L(f) = max_{g ≠ e} ‖f - α_g f‖ / l(g)` over the acting set.
pub fn lip_norm(f: &AlgElement, spec: &LipNormSpec) -> Result<f64> {
    if f.group() != &spec.group {
        return Err(Error::GroupMismatch);
    }
    let mut best = 0.0f64;
    let eval = |g: &GroupElement, best: &mut f64| -> Result<()> {
        if g.is_identity() {
            return Ok(());
        }
        let l = spec.length.evaluate(&spec.group.torus_point(g))?;
        if l <= 0.0 {
            return Err(Error::DegenerateLength);
        }
        let mut diff = AlgElement::zero(spec.group.clone(), f.bicharacter().clone());
        for (x, v) in f.coeffs() {
            let chi = spec
                .group
                .element(&x.iter().map(|&c| c as i64).collect::<Vec<_>>())?;
            let w = *v * (C64::new(1.0, 0.0) - pairing(g, &chi)?);
            diff.set_coeff(x.clone(), w);
        }
        let n = cstar_norm(&diff)?;
        *best = (*best).max(n / l);
        Ok(())
    };
    match &spec.acting {
        ActingSet::Full => {
            for g in spec.group.elements() {
                eval(&g, &mut best)?;
            }
        }
        ActingSet::Sample(gs) => {
            for g in gs {
                if g.group() != &spec.group {
                    return Err(Error::GroupMismatch);
                }
                eval(g, &mut best)?;
            }
        }
    }
    Ok(best)
}

/// Where a kernel lives: the torus (lattice Fourier support) or a finite group.
#[derive(Clone, Debug)]
pub enum KernelDomain {
    Torus(usize),
    Finite(FinAbGroup),
}

/// Nonnegative, mean-one finite linear combination of characters, stored by its
/// real Fourier coefficients.
#[derive(Clone, Debug)]
pub struct Kernel {
    domain: KernelDomain,
    coeffs: BTreeMap<Vec<i64>, f64>,
}

impl Kernel {
    pub fn domain(&self) -> &KernelDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        match &self.domain {
            KernelDomain::Torus(d) => *d,
            KernelDomain::Finite(g) => g.dim(),
        }
    }

    pub fn fourier_support(&self) -> Vec<LatticePoint> {
        self.coeffs
            .keys()
            .map(|m| LatticePoint::new(m.clone()))
            .collect()
    }

    pub fn fourier_coefficient(&self, m: &[i64]) -> f64 {
        self.coeffs.get(m).copied().unwrap_or(0.0)
    }

    /// Pointwise value `Σ_m c_m e^{2πi m·θ}` (real by symmetry of the data).
    pub fn evaluate(&self, theta: &[f64]) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for (m, &c) in self.coeffs.iter() {
            let mut t = 0.0f64;
            for (mj, &tj) in m.iter().zip(theta.iter()) {
                t += *mj as f64 * tj;
            }
            acc += unit_phase(t) * c;
        }
        acc.re
    }

    /// Fourier coefficient of the restriction to `U_k^d` at `χ ∈ Z_k^d`: the sum
    /// of the lattice coefficients over the fiber `χ + kZ^d` for torus kernels,
    /// the entry itself for finite kernels.
    pub fn folded_coefficient(&self, chi: &[u64], group: &FinAbGroup) -> Result<f64> {
        match &self.domain {
            KernelDomain::Finite(g) => {
                if g != group {
                    return Err(Error::GroupMismatch);
                }
                let key: Vec<i64> = chi.iter().map(|&c| c as i64).collect();
                Ok(self.fourier_coefficient(&key))
            }
            KernelDomain::Torus(d) => {
                if *d != group.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: *d,
                        got: group.dim(),
                    });
                }
                let mut acc = 0.0;
                for (m, &c) in self.coeffs.iter() {
                    let reduced = group.reduce(m)?;
                    if reduced == chi {
                        acc += c;
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Mean over `U_k^d` (for torus kernels this is the folded coefficient at 0).
    pub fn subgroup_mean(&self, group: &FinAbGroup) -> Result<f64> {
        self.folded_coefficient(&alloc::vec![0u64; group.dim()], group)
    }

    /// Mean of `φ·l` over `U_k^d`, the exact finite sum entering certificates.
    pub fn length_weighted_mean(&self, group: &FinAbGroup, l: &LengthFunction) -> Result<f64> {
        let mut acc = 0.0;
        for h in group.elements() {
            let p = group.torus_point(&h);
            acc += self.evaluate(&p) * l.evaluate(&p)?;
        }
        Ok(acc / group.order() as f64)
    }
}

/// Product Fejér kernel of the given order on `T^d`: Fourier support
/// `{-N..N}^d`, coefficients `Π_j (1 - |m_j|/(N+1))`, pointwise nonnegative,
/// integral one.
pub fn fejer_kernel(order: usize, d: usize) -> Kernel {
    let mut coeffs = BTreeMap::new();
    let n = order as i64;
    let mut m = alloc::vec![-n; d];
    loop {
        let c: f64 = m.iter().map(|&mj| fejer_coefficient(order, mj)).product();
        coeffs.insert(m.clone(), c);
        let mut j = d;
        let mut done = true;
        while j > 0 {
            j -= 1;
            if m[j] < n {
                m[j] += 1;
                for w in m.iter_mut().skip(j + 1) {
                    *w = -n;
                }
                done = false;
                break;
            }
        }
        if done {
            break;
        }
    }
    Kernel {
        domain: KernelDomain::Torus(d),
        coeffs,
    }
}

/// Positive-definite kernel on a finite abelian group built from a character
/// set `F` containing the trivial character: `φ_n = |Σ_{η∈F} η|^{2n}`,
/// normalized to mean one. Concentrates at the identity as `n` grows when the
/// nontrivial characters of `F` separate the group.
pub fn peter_weyl_kernel(
    group: &FinAbGroup,
    chars: &[GroupElement],
    power: u32,
) -> Result<Kernel> {
    if !chars.iter().any(|c| c.is_identity()) {
        return Err(Error::TrivialCharacterMissing);
    }
    for c in chars {
        if c.group() != group {
            return Err(Error::GroupMismatch);
        }
    }
    let n = group.order() as usize;
    let mut values = Vec::with_capacity(n);
    for g in group.elements() {
        let mut s = C64::new(0.0, 0.0);
        for eta in chars {
            s += pairing(&g, eta)?;
        }
        values.push(s.norm_sqr().powi(power as i32));
    }
    let mean: f64 = values.iter().sum::<f64>() / n as f64;
    // finite Fourier inversion for the coefficients
    let mut coeffs = BTreeMap::new();
    for chi in group.elements() {
        let mut acc = C64::new(0.0, 0.0);
        for (idx, g) in group.elements().enumerate() {
            acc += C64::new(values[idx] / mean, 0.0) * pairing(&g, &chi)?.conj();
        }
        let c = acc.re / n as f64;
        if c.abs() > 1e-13 {
            coeffs.insert(chi.coords().iter().map(|&x| x as i64).collect(), c);
        }
    }
    Ok(Kernel {
        domain: KernelDomain::Finite(group.clone()),
        coeffs,
    })
}

/// Cutoff operator `α^φ`: multiplies the `χ`-coefficient by the folded Fourier
/// coefficient of `φ`, so the range is spanned by the support of the folded
/// transform; real kernels preserve self-adjointness.
pub fn apply_kernel(kernel: &Kernel, f: &AlgElement) -> Result<AlgElement> {
    let group = f.group().clone();
    let mut out = AlgElement::zero(group.clone(), f.bicharacter().clone());
    for (x, v) in f.coeffs() {
        let c = kernel.folded_coefficient(x, &group)?;
        out.set_coeff(x.clone(), *v * C64::new(c, 0.0));
    }
    Ok(out)
}

/// Coefficient folding `Θ(f)(q(h)) = Σ_{j ∈ kZ^d} f(h + j)`: the integrated
/// quotient map from the lattice algebra onto the finite quotient. Injective on
/// supports that the quotient map separates, and equivariant for the dual
/// action of `U_k^d`.
pub fn theta_map(
    f: &LatticeElement,
    group: &FinAbGroup,
    sigma: &SkewBicharacter,
) -> Result<AlgElement> {
    let mut out = AlgElement::zero(group.clone(), sigma.clone());
    for (x, v) in f.coeffs() {
        let reduced = group.reduce(x)?;
        let nv = out.coeff(&reduced) + v;
        out.set_coeff(reduced, nv);
    }
    Ok(out)
}

/// One row of an approximation certificate.
#[derive(Clone, Debug)]
pub struct ApproxRow {
    pub k: Vec<u64>,
    /// `1 / mean_{U_k}(φ)`; the cutoff rescaling.
    pub c_n: f64,
    /// `mean_{U_k}(φ·l)`, exact finite sum.
    pub mean_phi_l: f64,
    /// `c_n · mean_phi_l`; the certified distance to the cutoff range.
    pub delta_n: f64,
    /// Whether the quotient map is injective on the kernel's Fourier support.
    pub injective: bool,
    /// Injective, positive mean, and `c_n ≤ 1 + ε`.
    pub admissible: bool,
}

/// Kernel-order selection plus per-level certified constants.
#[derive(Clone, Debug)]
pub struct ApproxCertificate {
    pub epsilon: f64,
    pub kernel_order: usize,
    /// Certified `∫ φ l` on the torus and the target `ε / (3(1+ε))` it meets.
    pub integral: CertifiedValue,
    pub target: f64,
    pub support: Vec<LatticePoint>,
    pub rows: Vec<ApproxRow>,
}

pub const KERNEL_ORDER_CAP: usize = 64;

/// Selects the least Fejér order meeting the integral bound, then records the
/// per-level constants `(c_n, mean φl, δ_n)` with the injectivity precondition.
pub fn approx_certificate(
    epsilon: f64,
    l: &LengthFunction,
    levels: &[(FinAbGroup, SkewBicharacter)],
) -> Result<ApproxCertificate> {
    if epsilon <= 0.0 {
        return Err(Error::InvalidParameter("epsilon must be positive"));
    }
    let d = l.dim();
    let target = epsilon / (3.0 * (1.0 + epsilon));
    let (order, integral) = least_fejer_order(l, target, KERNEL_ORDER_CAP)?;
    let kernel = fejer_kernel(order, d);
    let support = kernel.fourier_support();
    let mut rows = Vec::with_capacity(levels.len());
    for (group, sigma) in levels {
        sigma.validate_on(group)?;
        let injective = injective_on(&support, group)?;
        let mean_phi = kernel.subgroup_mean(group)?;
        let c_n = if mean_phi > 0.0 {
            1.0 / mean_phi
        } else {
            f64::INFINITY
        };
        let mean_phi_l = kernel.length_weighted_mean(group, l)?;
        let delta_n = c_n * mean_phi_l;
        let admissible = injective && mean_phi > 0.0 && c_n <= 1.0 + epsilon;
        rows.push(ApproxRow {
            k: group.moduli().to_vec(),
            c_n,
            mean_phi_l,
            delta_n,
            injective,
            admissible,
        });
    }
    Ok(ApproxCertificate {
        epsilon,
        kernel_order: order,
        integral,
        target,
        support,
        rows,
    })
}

/// Worst signed residuals of the two cutoff inequalities behind the
/// certificate: with `P = c·α^φ`, both `‖a - P a‖ ≤ δ·L(a)` and
/// `L(P a) ≤ L(a)` on seeded random self-adjoint elements (positive means a
/// violation by that much).
#[derive(Clone, Debug)]
pub struct CutoffCheck {
    pub max_norm_residual: f64,
    pub max_lip_excess: f64,
    pub samples: usize,
}

pub fn cutoff_contract_check(
    spec: &LipNormSpec,
    kernel: &Kernel,
    c_n: f64,
    delta_n: f64,
    samples: usize,
    seed: u64,
) -> Result<CutoffCheck> {
    let mut rng = stream(seed, 0x43_55_54);
    let mut worst_norm = f64::NEG_INFINITY;
    let mut worst_lip = f64::NEG_INFINITY;
    for _ in 0..samples {
        let a = random_self_adjoint(&spec.group, &spec.sigma, &mut rng);
        let pa = apply_kernel(kernel, &a)?.scale(C64::new(c_n, 0.0));
        let la = lip_norm(&a, spec)?;
        let diff_norm = cstar_norm(&a.sub(&pa)?)?;
        worst_norm = worst_norm.max(diff_norm - delta_n * la);
        let lpa = lip_norm(&pa, spec)?;
        worst_lip = worst_lip.max(lpa - la);
    }
    Ok(CutoffCheck {
        max_norm_residual: worst_norm,
        max_lip_excess: worst_lip,
        samples,
    })
}

/// Gap between the subgroup mean and the certified torus integral of a
/// continuous function.
#[derive(Clone, Debug)]
pub struct RiemannGap {
    pub subgroup_mean: f64,
    pub integral: CertifiedValue,
    pub gap: f64,
}

/// `|mean_{U_k^d} f - ∫_{T^d} f dλ|` with the integral from a certified tensor
/// rectangle rule (`lipschitz` bounds the sup-metric Lipschitz constant of `f`).
pub fn riemann_gap<F: Fn(&[f64]) -> f64>(
    f: F,
    group: &FinAbGroup,
    points_per_dim: usize,
    lipschitz: f64,
) -> RiemannGap {
    let d = group.dim();
    let m = points_per_dim.max(1);
    let total = (m as u128).pow(d as u32) as usize;
    let mut acc = 0.0f64;
    let mut idx = alloc::vec![0usize; d];
    let mut point = alloc::vec![0.0f64; d];
    for _ in 0..total {
        for j in 0..d {
            point[j] = (idx[j] as f64 + 0.5) / m as f64;
        }
        acc += f(&point);
        for j in (0..d).rev() {
            idx[j] += 1;
            if idx[j] < m {
                break;
            }
            idx[j] = 0;
        }
    }
    let integral = CertifiedValue {
        value: acc / total as f64,
        error_bound: lipschitz * d as f64 / (2.0 * m as f64),
    };
    let mut sub = 0.0f64;
    for h in group.elements() {
        sub += f(&group.torus_point(&h));
    }
    let subgroup_mean = sub / group.order() as f64;
    RiemannGap {
        subgroup_mean,
        integral,
        gap: (subgroup_mean - integral.value).abs(),
    }
}

/// One point of a norm or Lip-norm field over a sequence of quotient levels.
#[derive(Clone, Debug)]
pub struct FieldPoint {
    pub k: Vec<u64>,
    pub value: f64,
    /// Set when the quotient map folds the support (never silently accepted).
    pub folded: bool,
}

/// `n ↦ ‖Θ_n(a)‖_n` along a sequence of levels.
pub fn norm_field(
    a: &LatticeElement,
    levels: &[(FinAbGroup, SkewBicharacter)],
) -> Result<Vec<FieldPoint>> {
    let support = a.support();
    levels
        .iter()
        .map(|(group, sigma)| {
            sigma.validate_on(group)?;
            let folded = !injective_on(&support, group)?;
            let image = theta_map(a, group, sigma)?;
            Ok(FieldPoint {
                k: group.moduli().to_vec(),
                value: cstar_norm(&image)?,
                folded,
            })
        })
        .collect()
}

/// `n ↦ L_n(Θ_n(a))` along a sequence of levels.
pub fn lip_field(
    a: &LatticeElement,
    levels: &[(FinAbGroup, SkewBicharacter)],
    l: &LengthFunction,
) -> Result<Vec<FieldPoint>> {
    let support = a.support();
    levels
        .iter()
        .map(|(group, sigma)| {
            sigma.validate_on(group)?;
            let folded = !injective_on(&support, group)?;
            let image = theta_map(a, group, sigma)?;
            let spec = LipNormSpec::full(group.clone(), sigma.clone(), l.clone());
            Ok(FieldPoint {
                k: group.moduli().to_vec(),
                value: lip_norm(&image, &spec)?,
                folded,
            })
        })
        .collect()
}

/// Grid estimate of the commutative Lipschitz constant of
/// `θ ↦ Σ_x a(x) e^{2πix·θ}` with respect to `d_l`: the reference value the
/// untwisted Lip fields converge to.
pub fn commutative_lip_estimate(
    a: &LatticeElement,
    l: &LengthFunction,
    grid: usize,
) -> Result<f64> {
    let d = a.dim();
    if d != 1 {
        return Err(Error::InvalidParameter(
            "commutative Lip estimate implemented for d = 1",
        ));
    }
    let eval = |t: f64| -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for (x, v) in a.coeffs() {
            acc += *v * unit_phase(x[0] as f64 * t);
        }
        acc.re
    };
    // sup over shifts of |F(x) - F(x - s)| / l(s) sampled on the grid
    let mut best = 0.0f64;
    for si in 1..grid {
        let s = si as f64 / grid as f64;
        let ls = l.evaluate(&[s])?;
        if ls <= 0.0 {
            continue;
        }
        let mut diff = 0.0f64;
        for xi in 0..grid {
            let x = xi as f64 / grid as f64;
            diff = diff.max((eval(x) - eval(x - s)).abs());
        }
        best = best.max(diff / ls);
    }
    Ok(best)
}
