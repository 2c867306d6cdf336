//! Continuous length functions on `T^d` (coordinates normalized to `[0,1)`),
//! their coordinate-block quotients, covering radii of the torsion subgroups,
//! and the one-parameter families that collapse a block of coordinates.
//!
//! Every supported kind is a nondecreasing function of the per-coordinate arc
//! distances `arc(t) = min(t, 1-t)`; several closed forms below rely on that
//! invariant.

use alloc::boxed::Box;
use alloc::vec::Vec;

#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::groups::FinAbGroup;

/// Arc distance of a single coordinate to 0 on the circle `[0,1)`.
#[inline]
pub fn arc(t: f64) -> f64 {
    let r = t - t.floor();
    r.min(1.0 - r)
}

/// Collapse index: a finite member or the limit member of the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollapseIndex {
    Finite(u64),
    Infinity,
}

/// How the collapsed block of a quotient is searched.
#[derive(Clone, Debug, PartialEq)]
pub enum CosetBlock {
    /// Quotient by `{0}^δ x T^{d-δ}`; the infimum over the block is at 0.
    Torus,
    /// Quotient by `{0}^δ x U_{k''}^{d-δ}`; exact minimum over the finite coset.
    Finite(Vec<u64>),
}

/// A length function on `T^d` (or on a quotient `T^δ`).
#[derive(Clone, Debug, PartialEq)]
pub enum LengthFunction {
    MaxArc { d: usize },
    SumArc { d: usize },
    EuclideanArc { d: usize },
    /// `l_n(ω1,ω2) = l(ω1,ω2)/(n+1) + (1 - 1/(n+1)) l(ω1, 0)`, keeping the
    /// first `delta` coordinates; the `Infinity` member is `ω ↦ l(ω1, 0)`.
    Collapse {
        base: Box<LengthFunction>,
        n: CollapseIndex,
        delta: usize,
    },
    /// `l^K([g]) = inf { l(g') : g' in the coset }` for a coordinate block.
    Quotient {
        base: Box<LengthFunction>,
        delta: usize,
        block: CosetBlock,
    },
}

impl LengthFunction {
    pub fn max_arc(d: usize) -> Self {
        LengthFunction::MaxArc { d }
    }

    pub fn sum_arc(d: usize) -> Self {
        LengthFunction::SumArc { d }
    }

    pub fn euclidean_arc(d: usize) -> Self {
        LengthFunction::EuclideanArc { d }
    }

    /// Dimension of the points this length accepts.
    pub fn dim(&self) -> usize {
        match self {
            LengthFunction::MaxArc { d }
            | LengthFunction::SumArc { d }
            | LengthFunction::EuclideanArc { d } => *d,
            LengthFunction::Collapse { base, .. } => base.dim(),
            LengthFunction::Quotient { delta, .. } => *delta,
        }
    }

    /// Evaluates at a point with coordinates in `[0,1)`.
    pub fn evaluate(&self, theta: &[f64]) -> Result<f64> {
        if theta.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: theta.len(),
            });
        }
        for &t in theta {
            if !(0.0..1.0).contains(&t) {
                return Err(Error::OutOfRange { value: t });
            }
        }
        Ok(self.eval_unchecked(theta))
    }

    /// Same, with coordinates reduced mod 1 first. Internal sweeps use this on
    /// differences `θ - h`.
    pub fn eval_wrapped(&self, theta: &[f64]) -> f64 {
        let reduced: Vec<f64> = theta.iter().map(|&t| t - t.floor()).collect();
        self.eval_unchecked(&reduced)
    }

    fn eval_unchecked(&self, theta: &[f64]) -> f64 {
        match self {
            LengthFunction::MaxArc { .. } => {
                theta.iter().map(|&t| arc(t)).fold(0.0, f64::max)
            }
            LengthFunction::SumArc { .. } => theta.iter().map(|&t| arc(t)).sum(),
            LengthFunction::EuclideanArc { .. } => theta
                .iter()
                .map(|&t| arc(t) * arc(t))
                .sum::<f64>()
                .sqrt(),
            LengthFunction::Collapse { base, n, delta } => {
                let mut zeroed = theta.to_vec();
                for t in zeroed.iter_mut().skip(*delta) {
                    *t = 0.0;
                }
                let limit = base.eval_unchecked(&zeroed);
                match n {
                    CollapseIndex::Infinity => limit,
                    CollapseIndex::Finite(n) => {
                        let w = 1.0 / (*n as f64 + 1.0);
                        w * base.eval_unchecked(theta) + (1.0 - w) * limit
                    }
                }
            }
            LengthFunction::Quotient { base, delta, block } => {
                let d = base.dim();
                let mut point = alloc::vec![0.0f64; d];
                point[..*delta].copy_from_slice(theta);
                match block {
                    CosetBlock::Torus => base.eval_unchecked(&point),
                    CosetBlock::Finite(tail) => {
                        let tail_group =
                            FinAbGroup::new(tail.clone()).expect("validated at construction");
                        let mut best = f64::INFINITY;
                        for h in tail_group.elements() {
                            for (slot, (&c, &kj)) in point[*delta..]
                                .iter_mut()
                                .zip(h.coords().iter().zip(tail.iter()))
                                .map(|(s, p)| (s, p))
                            {
                                *slot = c as f64 / kj as f64;
                            }
                            best = best.min(base.eval_unchecked(&point));
                        }
                        best
                    }
                }
            }
        }
    }
}

/// One member of the collapse family built from `l`.
pub fn collapse_family(base: &LengthFunction, n: CollapseIndex, delta: usize) -> Result<LengthFunction> {
    if delta > base.dim() {
        return Err(Error::InvalidParameter("delta exceeds dimension"));
    }
    Ok(LengthFunction::Collapse {
        base: Box::new(base.clone()),
        n,
        delta,
    })
}

/// Quotient of `l` by the coordinate block `{0}^δ x (tail)`.
pub fn quotient_length(
    base: &LengthFunction,
    delta: usize,
    block: CosetBlock,
) -> Result<LengthFunction> {
    if delta > base.dim() {
        return Err(Error::UnsupportedSubgroup);
    }
    if let CosetBlock::Finite(tail) = &block {
        if tail.len() != base.dim() - delta || tail.iter().any(|&k| k == 0) {
            return Err(Error::UnsupportedSubgroup);
        }
    }
    Ok(LengthFunction::Quotient {
        base: Box::new(base.clone()),
        delta,
        block,
    })
}

/// A value together with a sound bound on its error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedValue {
    pub value: f64,
    pub error_bound: f64,
}

/// Hausdorff distance of `U_k^d` to the torus under `l`:
/// `sup_θ min_{h in U_k^d} l(θ - h)`.
///
/// The inner minimum decouples per coordinate (nearest multiple of `1/k_j`),
/// and the resulting distance vector sweeps the box `Π [0, 1/(2k_j)]`; since
/// every kind is nondecreasing in those distances the supremum sits at the
/// half-cell corner. For max-arc this is the closed form `max_j 1/(2k_j)`.
pub fn covering_radius_certified(
    group: &FinAbGroup,
    l: &LengthFunction,
) -> Result<CertifiedValue> {
    if group.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            got: group.dim(),
        });
    }
    let corner: Vec<f64> = group.moduli().iter().map(|&k| 0.5 / k as f64).collect();
    let value = l.evaluate(&corner)?;
    Ok(CertifiedValue {
        value,
        error_bound: 0.0,
    })
}

pub fn covering_radius(group: &FinAbGroup, l: &LengthFunction) -> Result<f64> {
    Ok(covering_radius_certified(group, l)?.value)
}

/// `max over the evaluation set of |l_ref(p) / l_n(p) - 1|`.
///
/// Points where both lengths vanish (the identity class) are skipped; a point
/// where `l_n` vanishes but `l_ref` does not is a degenerate length.
pub fn ratio_deviation(
    l_n: &LengthFunction,
    l_ref: &LengthFunction,
    points: &[Vec<f64>],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in points {
        let a = l_n.evaluate(p)?;
        let r = l_ref.evaluate(p)?;
        if r == 0.0 && a == 0.0 {
            continue;
        }
        if a == 0.0 {
            return Err(Error::DegenerateLength);
        }
        worst = worst.max((r / a - 1.0).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::stream;
    use rand::Rng;

    #[test]
    fn evaluate_examples() {
        let l = LengthFunction::max_arc(2);
        assert_eq!(l.evaluate(&[0.0, 0.0]).unwrap(), 0.0);
        assert!((l.evaluate(&[0.5, 0.1]).unwrap() - 0.5).abs() < 1e-15);
        let s = LengthFunction::sum_arc(2);
        assert!((s.evaluate(&[0.25, 0.25]).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            l.evaluate(&[1.2, 0.0]),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn length_axioms_sampled() {
        let kinds = [
            LengthFunction::max_arc(3),
            LengthFunction::sum_arc(3),
            LengthFunction::euclidean_arc(3),
            collapse_family(&LengthFunction::max_arc(3), CollapseIndex::Finite(4), 2).unwrap(),
        ];
        let mut rng = stream(42, 10);
        for l in &kinds {
            for _ in 0..10_000 {
                let x: Vec<f64> = (0..3).map(|_| rng.gen::<f64>()).collect();
                let y: Vec<f64> = (0..3).map(|_| rng.gen::<f64>()).collect();
                let lx = l.evaluate(&x).unwrap();
                let neg: Vec<f64> = x.iter().map(|&t| (1.0 - t) % 1.0).collect();
                assert!((l.evaluate(&neg).unwrap() - lx).abs() < 1e-12, "symmetry");
                let sum: Vec<f64> = x.iter().zip(y.iter()).map(|(a, b)| (a + b) % 1.0).collect();
                let tri = l.evaluate(&sum).unwrap();
                assert!(
                    tri <= lx + l.evaluate(&y).unwrap() + 1e-12,
                    "triangle inequality"
                );
            }
            assert_eq!(l.evaluate(&[0.0, 0.0, 0.0]).unwrap(), 0.0);
        }
    }

    #[test]
    fn covering_radius_closed_forms() {
        let z55 = FinAbGroup::new(alloc::vec![5, 5]).unwrap();
        let cr = covering_radius(&z55, &LengthFunction::max_arc(2)).unwrap();
        assert!((cr - 0.1).abs() < 1e-15);
        let z2 = FinAbGroup::new(alloc::vec![2]).unwrap();
        let cr = covering_radius(&z2, &LengthFunction::max_arc(1)).unwrap();
        assert!((cr - 0.25).abs() < 1e-15);
    }

    #[test]
    fn covering_radius_sum_arc_vs_grid_oracle() {
        // independent brute force: 700^2 torus grid, min over the 35 subgroup points
        let z57 = FinAbGroup::new(alloc::vec![5, 7]).unwrap();
        let l = LengthFunction::sum_arc(2);
        let g = 700usize;
        let mut brute: f64 = 0.0;
        let sub: Vec<Vec<f64>> = z57.elements().map(|h| z57.torus_point(&h)).collect();
        for i in 0..g {
            for j in 0..g {
                let theta = [i as f64 / g as f64, j as f64 / g as f64];
                let mut best = f64::INFINITY;
                for h in &sub {
                    let d = [theta[0] - h[0], theta[1] - h[1]];
                    best = best.min(l.eval_wrapped(&d));
                }
                brute = brute.max(best);
            }
        }
        let cr = covering_radius_certified(&z57, &l).unwrap();
        assert!(cr.error_bound <= 1e-4);
        assert!(
            (cr.value - brute).abs() < 1e-12,
            "closed form {} vs grid oracle {}",
            cr.value,
            brute
        );
        assert!((cr.value - (0.1 + 1.0 / 14.0)).abs() < 1e-12);
    }

    #[test]
    fn quotient_length_examples() {
        let l = LengthFunction::max_arc(2);
        let q = quotient_length(&l, 1, CosetBlock::Torus).unwrap();
        assert!((q.evaluate(&[0.3]).unwrap() - 0.3).abs() < 1e-15);
        let s = LengthFunction::sum_arc(2);
        let qs = quotient_length(&s, 1, CosetBlock::Torus).unwrap();
        assert!((qs.evaluate(&[0.2]).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn quotient_length_finite_matches_coset_enumeration() {
        let l = LengthFunction::sum_arc(2);
        let q = quotient_length(&l, 1, CosetBlock::Finite(alloc::vec![5])).unwrap();
        for a in 0..5u64 {
            let omega = a as f64 / 5.0;
            let mut brute = f64::INFINITY;
            for b in 0..5u64 {
                brute = brute.min(l.evaluate(&[omega, b as f64 / 5.0]).unwrap());
            }
            assert!((q.evaluate(&[omega]).unwrap() - brute).abs() < 1e-15);
        }
    }

    #[test]
    fn collapse_family_examples() {
        let l = LengthFunction::max_arc(2);
        let l0 = collapse_family(&l, CollapseIndex::Finite(0), 1).unwrap();
        let linf = collapse_family(&l, CollapseIndex::Infinity, 1).unwrap();
        let l4 = collapse_family(&l, CollapseIndex::Finite(4), 1).unwrap();
        let mut rng = stream(9, 4);
        for _ in 0..100 {
            let p: Vec<f64> = (0..2).map(|_| rng.gen::<f64>()).collect();
            assert!((l0.evaluate(&p).unwrap() - l.evaluate(&p).unwrap()).abs() < 1e-15);
        }
        assert!((linf.evaluate(&[0.3, 0.47]).unwrap() - 0.3).abs() < 1e-15);
        let v = l4.evaluate(&[0.1, 0.4]).unwrap();
        assert!((v - 0.16).abs() < 1e-15, "0.2*0.4 + 0.8*0.1 = 0.16, got {v}");
    }

    #[test]
    fn collapse_family_monotone_and_uniform_bound() {
        let l = LengthFunction::max_arc(2);
        let linf = collapse_family(&l, CollapseIndex::Infinity, 1).unwrap();
        let mut rng = stream(21, 5);
        let mut sup_l: f64 = 0.0;
        let members: Vec<LengthFunction> = (0..6)
            .map(|n| collapse_family(&l, CollapseIndex::Finite(n), 1).unwrap())
            .collect();
        for _ in 0..5_000 {
            let p: Vec<f64> = (0..2).map(|_| rng.gen::<f64>()).collect();
            let base = l.evaluate(&p).unwrap();
            sup_l = sup_l.max(base);
            let lim = linf.evaluate(&p).unwrap();
            let mut prev = f64::INFINITY;
            for (n, m) in members.iter().enumerate() {
                let v = m.evaluate(&p).unwrap();
                assert!(v <= prev + 1e-15, "pointwise monotone in n");
                assert!(v + 1e-15 >= lim, "decreases toward the limit member");
                assert!(
                    (v - lim).abs() <= sup_l / (n as f64 + 1.0) + 1e-15,
                    "uniform deviation bound"
                );
                prev = v;
            }
        }
    }

    #[test]
    fn quotient_uniform_bound_on_finite_instance() {
        // sup_K |l_n^K - l_inf| <= sup_G |l_n - l~inf|, exhaustively on U_(5,5)
        let l = LengthFunction::max_arc(2);
        let g = FinAbGroup::new(alloc::vec![5, 5]).unwrap();
        for n in [0u64, 1, 4, 9] {
            let ln = collapse_family(&l, CollapseIndex::Finite(n), 1).unwrap();
            let ltilde = collapse_family(&l, CollapseIndex::Infinity, 1).unwrap();
            let lnk = quotient_length(&ln, 1, CosetBlock::Finite(alloc::vec![5])).unwrap();
            let linf_k = quotient_length(&ltilde, 1, CosetBlock::Finite(alloc::vec![5])).unwrap();
            let mut lhs: f64 = 0.0;
            for a in 0..5u64 {
                let w = [a as f64 / 5.0];
                lhs = lhs.max((lnk.evaluate(&w).unwrap() - linf_k.evaluate(&w).unwrap()).abs());
            }
            let mut rhs: f64 = 0.0;
            for x in g.elements() {
                let p = g.torus_point(&x);
                rhs = rhs.max((ln.evaluate(&p).unwrap() - ltilde.evaluate(&p).unwrap()).abs());
            }
            assert!(lhs <= rhs + 1e-15);
        }
    }

    #[test]
    fn ratio_deviation_cases() {
        let l = LengthFunction::max_arc(1);
        let pts: Vec<Vec<f64>> = (1..8).map(|a| alloc::vec![a as f64 / 8.0]).collect();
        assert_eq!(ratio_deviation(&l, &l, &pts).unwrap(), 0.0);

        // collapse family on U_(5,5) against its limit, off the collapsed block:
        // worst representative gives exactly 1/(n+2) for max-arc.
        let base = LengthFunction::max_arc(2);
        let ltilde = collapse_family(&base, CollapseIndex::Infinity, 1).unwrap();
        let g = FinAbGroup::new(alloc::vec![5, 5]).unwrap();
        let pts: Vec<Vec<f64>> = g
            .elements()
            .filter(|x| x.coords()[0] != 0)
            .map(|x| g.torus_point(&x))
            .collect();
        for n in [0u64, 1, 4, 9, 19] {
            let ln = collapse_family(&base, CollapseIndex::Finite(n), 1).unwrap();
            let dev = ratio_deviation(&ln, &ltilde, &pts).unwrap();
            // brute-force oracle over the same points
            let mut brute: f64 = 0.0;
            for p in &pts {
                let a = ln.evaluate(p).unwrap();
                let r = ltilde.evaluate(p).unwrap();
                brute = brute.max((r / a - 1.0).abs());
            }
            assert!((dev - brute).abs() < 1e-15);
            assert!((dev - 1.0 / (n as f64 + 2.0)).abs() < 1e-12, "n={n}: {dev}");
            // bounded by sup-ratio scaling of the family weight
            let mut sup_ratio: f64 = 0.0;
            for p in &pts {
                sup_ratio =
                    sup_ratio.max(base.evaluate(p).unwrap() / ltilde.evaluate(p).unwrap());
            }
            assert!(dev <= (sup_ratio - 1.0) / (n as f64 + 1.0) + 1e-12);
        }

        // limit member deviates by zero from itself
        let dev = ratio_deviation(&ltilde, &ltilde, &pts).unwrap();
        assert_eq!(dev, 0.0);
    }

    #[test]
    fn ratio_deviation_degenerate() {
        let base = LengthFunction::max_arc(2);
        let ltilde = collapse_family(&base, CollapseIndex::Infinity, 1).unwrap();
        // a point inside the collapsed block: l~inf = 0 there but max-arc > 0
        let pts = alloc::vec![alloc::vec![0.0, 0.2]];
        assert!(matches!(
            ratio_deviation(&ltilde, &base, &pts),
            Err(Error::DegenerateLength)
        ));
    }
}
