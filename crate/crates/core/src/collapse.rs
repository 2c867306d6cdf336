//! Fixed-point algebras under a coordinate-block subgroup of the dual action,
//! the averaging conditional expectation onto them, and the quantitative
//! certificate for collapsing a fuzzy torus onto a lower-dimensional one.
//!
//! For `H = {0}^δ × U_{k''}^{d-δ}` acting on `C*(Z_k^d, σ)`, averaging the dual
//! action over `H` kills exactly the coefficients outside the annihilator
//! `{χ : χ_{δ+1..d} = 0}`, so the conditional expectation is an exact
//! coefficient projection. Along the length family `l_n` that degenerates on
//! `H`, the mean `I_n = mean_H(l_n)` bounds `‖a - E(a)‖ ≤ I_n · L[n](a)` and
//! yields the distance certificate to the fixed-point algebra.

use alloc::vec::Vec;

#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fuzzy_algebra::{cstar_norm, AlgElement, SkewBicharacter, INTEGRALITY_TOL};
use crate::groups::FinAbGroup;
use crate::lengths::{collapse_family, CollapseIndex, CosetBlock, LengthFunction};
use crate::qmetric::{lip_norm, LipNormSpec};
use crate::sampling::{random_self_adjoint, stream};

/// Ambient fuzzy torus with the last `d - delta` coordinates collapsed along
/// the family index `n`.
#[derive(Clone, Debug)]
pub struct CollapseSetup {
    pub group: FinAbGroup,
    pub sigma: SkewBicharacter,
    pub base_length: LengthFunction,
    pub delta: usize,
    pub n: CollapseIndex,
}

impl CollapseSetup {
    pub fn new(
        group: FinAbGroup,
        sigma: SkewBicharacter,
        base_length: LengthFunction,
        delta: usize,
        n: CollapseIndex,
    ) -> Result<Self> {
        if delta > group.dim() {
            return Err(Error::UnsupportedSubgroup);
        }
        if base_length.dim() != group.dim() {
            return Err(Error::DimensionMismatch {
                expected: group.dim(),
                got: base_length.dim(),
            });
        }
        sigma.validate_on(&group)?;
        Ok(CollapseSetup {
            group,
            sigma,
            base_length,
            delta,
            n,
        })
    }

    /// The family member `l_n` on the ambient group.
    pub fn length(&self) -> Result<LengthFunction> {
        collapse_family(&self.base_length, self.n, self.delta)
    }

    /// The collapsed block `U_{k''}^{d-δ}` as its own group.
    fn tail_group(&self) -> Result<Option<FinAbGroup>> {
        let tail = &self.group.moduli()[self.delta..];
        if tail.is_empty() {
            return Ok(None);
        }
        Ok(Some(FinAbGroup::new(tail.to_vec())?))
    }

    /// Whether `χ` lies in the annihilator of `H`: zero on the collapsed block.
    fn in_annihilator(&self, chi: &[u64]) -> bool {
        chi[self.delta..].iter().all(|&c| c == 0)
    }
}

/// Averaging over the collapsed block: zeroes every coefficient outside the
/// annihilator of `H`. Idempotent, unital, positive, norm-contractive.
pub fn conditional_expectation(f: &AlgElement, setup: &CollapseSetup) -> Result<AlgElement> {
    if f.group() != &setup.group {
        return Err(Error::GroupMismatch);
    }
    let mut out = AlgElement::zero(setup.group.clone(), f.bicharacter().clone());
    for (x, v) in f.coeffs() {
        if setup.in_annihilator(x) {
            out.set_coeff(x.clone(), *v);
        }
    }
    Ok(out)
}

/// One collapse certificate: the averaged length `I_n`, the empirical residuals
/// of the two inequalities behind it, and the quotient-side deviation.
#[derive(Clone, Debug)]
pub struct CollapseRow {
    pub n: CollapseIndex,
    /// `mean_H(l_n)`; the certified distance to the fixed-point algebra.
    pub i_n: f64,
    /// `sup over sampled points off H of |l~_∞ / l_n - 1|`.
    pub ratio_dev: f64,
    /// Worst `‖a - E a‖ - I_n·L[n](a)` over the samples (≤ 0 when the bound holds).
    pub max_norm_residual: f64,
    /// Worst `L[n](E a) - L[n](a)` over the samples.
    pub max_lip_excess: f64,
    pub samples: usize,
}

/// Computes `I_n = mean_H(l_n)` exactly, verifies `‖a - E(a)‖ ≤ I_n·L[n](a)`
/// and `L[n](E(a)) ≤ L[n](a)` on seeded random self-adjoint elements, and
/// records the uniform ratio deviation of `l_n` from the degenerate limit off
/// the collapsed block.
pub fn collapse_certificate(
    setup: &CollapseSetup,
    samples: usize,
    seed: u64,
) -> Result<CollapseRow> {
    let l_n = setup.length()?;
    let d = setup.group.dim();

    // I_n: mean of l_n over H = {0}^δ × U_{k''}
    let i_n = match setup.tail_group()? {
        None => 0.0,
        Some(tail) => {
            let mut acc = 0.0;
            for h in tail.elements() {
                let mut point = alloc::vec![0.0f64; d];
                for (slot, (&c, &kj)) in point[setup.delta..]
                    .iter_mut()
                    .zip(h.coords().iter().zip(tail.moduli().iter()))
                {
                    *slot = c as f64 / kj as f64;
                }
                acc += l_n.evaluate(&point)?;
            }
            acc / tail.order() as f64
        }
    };

    // ratio deviation of l_n against the degenerate limit, off the block
    let l_tilde = collapse_family(&setup.base_length, CollapseIndex::Infinity, setup.delta)?;
    let off_block: Vec<Vec<f64>> = setup
        .group
        .elements()
        .filter(|x| x.coords()[..setup.delta].iter().any(|&c| c != 0))
        .map(|x| setup.group.torus_point(&x))
        .collect();
    let ratio_dev = if off_block.is_empty() {
        0.0
    } else {
        crate::lengths::ratio_deviation(&l_n, &l_tilde, &off_block)?
    };

    // The limit member vanishes on the collapsed block, so it is a Lip-norm
    // only on the fixed-point algebra; the sampled ambient inequalities apply
    // to the finite members.
    let (worst_norm, worst_lip, samples) = match setup.n {
        CollapseIndex::Infinity => (0.0, 0.0, 0),
        CollapseIndex::Finite(_) => {
            let spec = LipNormSpec::full(setup.group.clone(), setup.sigma.clone(), l_n);
            let mut rng = stream(seed, 0x43_4f_4c);
            let mut worst_norm = f64::NEG_INFINITY;
            let mut worst_lip = f64::NEG_INFINITY;
            for _ in 0..samples {
                let a = random_self_adjoint(&setup.group, &setup.sigma, &mut rng);
                let ea = conditional_expectation(&a, setup)?;
                let la = lip_norm(&a, &spec)?;
                let gap = cstar_norm(&a.sub(&ea)?)?;
                worst_norm = worst_norm.max(gap - i_n * la);
                worst_lip = worst_lip.max(lip_norm(&ea, &spec)? - la);
            }
            (worst_norm, worst_lip, samples)
        }
    };
    Ok(CollapseRow {
        n: setup.n,
        i_n,
        ratio_dev,
        max_norm_residual: worst_norm,
        max_lip_excess: worst_lip,
        samples,
    })
}

/// The fixed-point algebra as a fuzzy torus of the kept block: group `Z_{k'}^δ`,
/// the restricted bicharacter, and the Lip-norm data carried by the degenerate
/// limit length on the quotient.
pub fn quotient_metric_space(
    setup: &CollapseSetup,
) -> Result<(FinAbGroup, SkewBicharacter, LipNormSpec)> {
    let d = setup.group.dim();
    let delta = setup.delta;
    if delta == 0 {
        return Err(Error::UnsupportedSubgroup);
    }
    // cross-block entries must act trivially for the identification
    for i in 0..delta {
        for j in delta..d {
            let v = setup.sigma.entry(i, j);
            if (v - v.round()).abs() > INTEGRALITY_TOL {
                return Err(Error::NonSplitBicharacter { i, j });
            }
        }
    }
    let kept = FinAbGroup::new(setup.group.moduli()[..delta].to_vec())?;
    let mut s = alloc::vec![0.0f64; delta * delta];
    for i in 0..delta {
        for j in 0..delta {
            s[i * delta + j] = setup.sigma.entry(i, j);
        }
    }
    let restricted = SkewBicharacter::new(delta, s)?;
    restricted.validate_on(&kept)?;
    let quotient_l = crate::lengths::quotient_length(
        &collapse_family(&setup.base_length, CollapseIndex::Infinity, delta)?,
        delta,
        CosetBlock::Finite(setup.group.moduli()[delta..].to_vec()),
    )?;
    Ok((
        kept.clone(),
        restricted.clone(),
        LipNormSpec::full(kept, restricted, quotient_l),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy_algebra::{full_matrix_bicharacter, regular_representation, twisted_product};
    use crate::numerics::hermitian_eigenvalues;
    use crate::qmetric::theta_map;
    use crate::sampling::random_element;
    use crate::C64;

    fn z(k: &[u64]) -> FinAbGroup {
        FinAbGroup::new(k.to_vec()).unwrap()
    }

    fn setup_55(n: CollapseIndex) -> CollapseSetup {
        CollapseSetup::new(
            z(&[5, 5]),
            SkewBicharacter::zero(2),
            LengthFunction::max_arc(2),
            1,
            n,
        )
        .unwrap()
    }

    #[test]
    fn expectation_is_exact_projection() {
        let setup = setup_55(CollapseIndex::Finite(3));
        let g = z(&[5, 5]);
        let s = SkewBicharacter::zero(2);
        // fixed frequency stays, full-block frequency dies
        let keep = AlgElement::delta(g.clone(), s.clone(), &[2, 0]).unwrap();
        assert_eq!(
            conditional_expectation(&keep, &setup)
                .unwrap()
                .coeff_distance(&keep),
            0.0
        );
        let kill = AlgElement::delta(g.clone(), s.clone(), &[2, 3]).unwrap();
        assert_eq!(
            conditional_expectation(&kill, &setup).unwrap().support_len(),
            0
        );
        // support(E f) = support(f) ∩ annihilator, idempotent, contractive
        let mut rng = stream(1, 9);
        let f = random_element(&g, &s, &mut rng);
        let ef = conditional_expectation(&f, &setup).unwrap();
        for (x, _) in ef.coeffs() {
            assert_eq!(x[1], 0);
            assert!((ef.coeff(x) - f.coeff(x)).norm() < 1e-15);
        }
        let eef = conditional_expectation(&ef, &setup).unwrap();
        assert_eq!(eef.coeff_distance(&ef), 0.0);
        assert!(cstar_norm(&ef).unwrap() <= cstar_norm(&f).unwrap() + 1e-10);
    }

    #[test]
    fn expectation_trivial_block_is_identity() {
        let g = z(&[5, 5]);
        let s = SkewBicharacter::zero(2);
        let setup = CollapseSetup::new(
            g.clone(),
            s.clone(),
            LengthFunction::max_arc(2),
            2,
            CollapseIndex::Finite(0),
        )
        .unwrap();
        let mut rng = stream(2, 9);
        let f = random_element(&g, &s, &mut rng);
        assert_eq!(
            conditional_expectation(&f, &setup).unwrap().coeff_distance(&f),
            0.0
        );
    }

    #[test]
    fn expectation_positive_on_positive_elements() {
        let g = z(&[5, 5]);
        let s = full_matrix_bicharacter(&[0.375], 5).unwrap();
        let setup = CollapseSetup::new(
            g.clone(),
            s.clone(),
            LengthFunction::max_arc(2),
            1,
            CollapseIndex::Finite(2),
        )
        .unwrap();
        let mut rng = stream(3, 9);
        for _ in 0..5 {
            let f = random_element(&g, &s, &mut rng);
            let pos = twisted_product(&f.involution(), &f).unwrap();
            let epos = conditional_expectation(&pos, &setup).unwrap();
            let vals =
                hermitian_eigenvalues(&regular_representation(&epos).unwrap()).unwrap();
            assert!(vals[0] >= -1e-9, "E preserves positivity, min eig {}", vals[0]);
        }
    }

    #[test]
    fn certificate_members() {
        // I_n = (1/(n+1)) · (1/5) Σ arc(h/5) = 0.24/(n+1), exactly proportional
        for n in [0u64, 1, 4, 9, 19] {
            let setup = setup_55(CollapseIndex::Finite(n));
            let row = collapse_certificate(&setup, 10, 77).unwrap();
            assert!(
                (row.i_n - 0.24 / (n as f64 + 1.0)).abs() < 1e-12,
                "I_{n} = {}",
                row.i_n
            );
            assert!((row.ratio_dev - 1.0 / (n as f64 + 2.0)).abs() < 1e-12);
            assert!(row.max_norm_residual <= 1e-9);
            assert!(row.max_lip_excess <= 1e-9);
        }
        // limit member: I_∞ = 0 since the limit length vanishes on the block
        let setup = setup_55(CollapseIndex::Infinity);
        let row = collapse_certificate(&setup, 5, 78).unwrap();
        assert_eq!(row.i_n, 0.0);
        assert_eq!(row.ratio_dev, 0.0);
    }

    #[test]
    fn quotient_space_commutative_norms_agree() {
        // A_K for S = 0 is the untwisted algebra of the kept block; norms of
        // corresponding elements agree between the small algebra and the
        // annihilator subalgebra of the big one.
        let setup = setup_55(CollapseIndex::Finite(4));
        let (kept, restricted, _spec) = quotient_metric_space(&setup).unwrap();
        assert_eq!(kept.moduli(), &[5]);
        let g = z(&[5, 5]);
        let s = SkewBicharacter::zero(2);
        let mut rng = stream(4, 9);
        for _ in 0..10 {
            let mut small = AlgElement::zero(kept.clone(), restricted.clone());
            let mut big = AlgElement::zero(g.clone(), s.clone());
            for a in 0..5u64 {
                let v = C64::new(
                    rand::Rng::gen::<f64>(&mut rng) - 0.5,
                    rand::Rng::gen::<f64>(&mut rng) - 0.5,
                );
                small.set_coeff(alloc::vec![a], v);
                big.set_coeff(alloc::vec![a, 0], v);
            }
            let ns = cstar_norm(&small).unwrap();
            let nb = cstar_norm(&big).unwrap();
            assert!((ns - nb).abs() < 1e-10, "{ns} vs {nb}");
        }
    }

    #[test]
    fn quotient_space_block_diagonal_case() {
        // d = 4 with two 2x2 blocks: keeping the first block keeps its twist
        let s4 = full_matrix_bicharacter(&[0.375, 0.2], 5).unwrap();
        let setup = CollapseSetup::new(
            z(&[5, 5, 5, 5]),
            s4.clone(),
            LengthFunction::max_arc(4),
            2,
            CollapseIndex::Finite(1),
        )
        .unwrap();
        let (kept, restricted, _) = quotient_metric_space(&setup).unwrap();
        assert_eq!(kept.moduli(), &[5, 5]);
        assert_eq!(restricted.entry(0, 1), s4.entry(0, 1));
        let two = full_matrix_bicharacter(&[0.375], 5).unwrap();
        assert_eq!(restricted.entry(0, 1), two.entry(0, 1));
    }

    #[test]
    fn quotient_space_rejects_cross_block_twist() {
        // a valid bicharacter whose twist couples the kept and collapsed blocks
        let mut s = alloc::vec![0.0f64; 4];
        s[1] = -0.2;
        s[2] = 0.2;
        let sig = SkewBicharacter::new(2, s).unwrap();
        let setup = CollapseSetup::new(
            z(&[5, 5]),
            sig,
            LengthFunction::max_arc(2),
            1,
            CollapseIndex::Finite(0),
        )
        .unwrap();
        assert!(matches!(
            quotient_metric_space(&setup),
            Err(Error::NonSplitBicharacter { .. })
        ));
    }

    #[test]
    fn full_chain_decreases() {
        // both certificate summands decrease along the family
        let mean_l_kept = 0.24; // mean of arc over U_5
        let mut prev_total = f64::INFINITY;
        for n in [0u64, 1, 4, 9, 19] {
            let setup = setup_55(CollapseIndex::Finite(n));
            let row = collapse_certificate(&setup, 5, 79).unwrap();
            let eta = row.ratio_dev;
            let cmp = 2.0 * eta * mean_l_kept / (1.0 - eta);
            let total = row.i_n + cmp;
            assert!(total < prev_total);
            prev_total = total;
        }
    }

    #[test]
    fn fold_then_project_lands_in_annihilator() {
        let g = z(&[5, 5]);
        let s = SkewBicharacter::zero(2);
        let setup = setup_55(CollapseIndex::Finite(2));
        let mut a = crate::fuzzy_algebra::LatticeElement::zero(2);
        a.set_coeff(alloc::vec![1, 0], C64::new(0.5, 0.1));
        a.set_coeff(alloc::vec![-1, 0], C64::new(0.5, -0.1));
        a.set_coeff(alloc::vec![2, 3], C64::new(1.0, 0.0));
        let folded = theta_map(&a, &g, &s).unwrap();
        let e = conditional_expectation(&folded, &setup).unwrap();
        for (x, _) in e.coeffs() {
            assert_eq!(x[1], 0);
        }
        assert_eq!(e.support_len(), 2);
    }
}
