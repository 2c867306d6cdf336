//! Finite abelian groups `Z_k^d`, their torsion embedding `U_k^d` in the torus,
//! quotient maps from the free lattice, and the self-dual pairing.
//!
//! A single integer-vector representation serves both the group and its dual;
//! which side an element lives on is decided by the operation applied to it.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::{unit_phase, C64};

/// `Z_k^d` for a vector of moduli `k_j >= 1`. A factor with `k_j = 1` collapses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAbGroup {
    k: Vec<u64>,
}

impl FinAbGroup {
    pub fn new(k: Vec<u64>) -> Result<Self> {
        if k.is_empty() || k.iter().any(|&kj| kj == 0) {
            return Err(Error::InvalidParameter("moduli must be >= 1"));
        }
        Ok(FinAbGroup { k })
    }

    pub fn cyclic_power(k: u64, d: usize) -> Result<Self> {
        Self::new(alloc::vec![k; d])
    }

    pub fn dim(&self) -> usize {
        self.k.len()
    }

    pub fn moduli(&self) -> &[u64] {
        &self.k
    }

    pub fn order(&self) -> u64 {
        self.k.iter().product()
    }

    /// Mixed-radix index of a reduced coordinate vector, last coordinate fastest.
    pub fn index_of(&self, coords: &[u64]) -> usize {
        let mut idx = 0usize;
        for (c, &kj) in coords.iter().zip(self.k.iter()) {
            idx = idx * kj as usize + *c as usize;
        }
        idx
    }

    pub fn coords_of(&self, mut index: usize) -> Vec<u64> {
        let d = self.dim();
        let mut out = alloc::vec![0u64; d];
        for j in (0..d).rev() {
            let kj = self.k[j] as usize;
            out[j] = (index % kj) as u64;
            index /= kj;
        }
        out
    }

    /// All elements of the group in mixed-radix order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let n = self.order() as usize;
        (0..n).map(move |i| GroupElement {
            group: self.clone(),
            coords: self.coords_of(i),
        })
    }

    pub fn reduce(&self, x: &[i64]) -> Result<Vec<u64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(x.iter()
            .zip(self.k.iter())
            .map(|(&xj, &kj)| xj.rem_euclid(kj as i64) as u64)
            .collect())
    }

    pub fn element(&self, x: &[i64]) -> Result<GroupElement> {
        Ok(GroupElement {
            group: self.clone(),
            coords: self.reduce(x)?,
        })
    }

    /// The torus point `(x_j / k_j)_j in [0,1)^d` representing an element of `U_k^d`.
    pub fn torus_point(&self, x: &GroupElement) -> Vec<f64> {
        x.coords
            .iter()
            .zip(self.k.iter())
            .map(|(&c, &kj)| c as f64 / kj as f64)
            .collect()
    }
}

/// Element of `Z_k^d`, coordinates reduced to `0 <= x_j < k_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    group: FinAbGroup,
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let coords = self
            .coords
            .iter()
            .zip(other.coords.iter())
            .zip(self.group.k.iter())
            .map(|((&a, &b), &kj)| (a + b) % kj)
            .collect();
        Ok(GroupElement {
            group: self.group.clone(),
            coords,
        })
    }

    pub fn neg(&self) -> GroupElement {
        let coords = self
            .coords
            .iter()
            .zip(self.group.k.iter())
            .map(|(&a, &kj)| (kj - a) % kj)
            .collect();
        GroupElement {
            group: self.group.clone(),
            coords,
        }
    }
}

/// Unreduced point of the free lattice `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LatticePoint {
    pub coords: Vec<i64>,
}

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Canonical surjection `Z^d -> Z_k^d`.
pub fn quotient_map(x: &LatticePoint, group: &FinAbGroup) -> Result<GroupElement> {
    group.element(&x.coords)
}

/// Whether `x` lies in the annihilator `kZ^d`, i.e. `k_j | x_j` for every `j`.
pub fn annihilator_contains(x: &LatticePoint, group: &FinAbGroup) -> Result<bool> {
    if x.dim() != group.dim() {
        return Err(Error::DimensionMismatch {
            expected: group.dim(),
            got: x.dim(),
        });
    }
    Ok(x.coords
        .iter()
        .zip(group.moduli().iter())
        .all(|(&xj, &kj)| xj.rem_euclid(kj as i64) == 0))
}

/// Whether the quotient map is injective on the finite set `F`: no two members
/// reduce to the same class.
pub fn injective_on(points: &[LatticePoint], group: &FinAbGroup) -> Result<bool> {
    let mut seen = BTreeSet::new();
    for p in points {
        let reduced = group.reduce(&p.coords)?;
        if !seen.insert(reduced) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dual pairing `<h, χ> = exp(2πi Σ_j h_j χ_j / k_j)` between `U_k^d` and `Z_k^d`.
///
/// `h` is read as the torus point `(h_j / k_j)_j`. Each term is reduced mod `k_j`
/// in integer arithmetic before the division, so the phase is exact.
pub fn pairing(h: &GroupElement, chi: &GroupElement) -> Result<C64> {
    if h.group != chi.group {
        return Err(Error::GroupMismatch);
    }
    Ok(unit_phase(pairing_angle(h, chi)))
}

pub(crate) fn pairing_angle(h: &GroupElement, chi: &GroupElement) -> f64 {
    let mut t = 0.0f64;
    for ((&hj, &cj), &kj) in h
        .coords
        .iter()
        .zip(chi.coords.iter())
        .zip(h.group.k.iter())
    {
        let prod = (hj as u128 * cj as u128 % kj as u128) as f64;
        t += prod / kj as f64;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{stream, SeededRng};
    use rand::Rng;

    fn g(k: &[u64]) -> FinAbGroup {
        FinAbGroup::new(k.to_vec()).unwrap()
    }

    #[test]
    fn quotient_examples() {
        let z55 = g(&[5, 5]);
        let q = quotient_map(&LatticePoint::new(alloc::vec![7, -1]), &z55).unwrap();
        assert_eq!(q.coords(), &[2, 4]);
        let q0 = quotient_map(&LatticePoint::new(alloc::vec![0, 0]), &z55).unwrap();
        assert!(q0.is_identity());
        let qk = quotient_map(&LatticePoint::new(alloc::vec![5, 10]), &z55).unwrap();
        assert!(qk.is_identity());
    }

    #[test]
    fn quotient_is_homomorphism() {
        let z = g(&[4, 6, 3]);
        let mut rng = stream(5, 0);
        for _ in 0..200 {
            let x = LatticePoint::new((0..3).map(|_| rng.gen_range(-50..50)).collect());
            let y = LatticePoint::new((0..3).map(|_| rng.gen_range(-50..50)).collect());
            let s = LatticePoint::new(
                x.coords
                    .iter()
                    .zip(y.coords.iter())
                    .map(|(a, b)| a + b)
                    .collect(),
            );
            let qx = quotient_map(&x, &z).unwrap();
            let qy = quotient_map(&y, &z).unwrap();
            assert_eq!(quotient_map(&s, &z).unwrap(), qx.add(&qy).unwrap());
        }
    }

    #[test]
    fn annihilator_examples() {
        let z55 = g(&[5, 5]);
        assert!(annihilator_contains(&LatticePoint::new(alloc::vec![5, 0]), &z55).unwrap());
        assert!(!annihilator_contains(&LatticePoint::new(alloc::vec![1, 0]), &z55).unwrap());
        assert!(annihilator_contains(&LatticePoint::new(alloc::vec![0, 0]), &z55).unwrap());
    }

    #[test]
    fn injectivity_examples() {
        let z55 = g(&[5, 5]);
        let mut box3 = Vec::new();
        for a in -1..=1i64 {
            for b in -1..=1i64 {
                box3.push(LatticePoint::new(alloc::vec![a, b]));
            }
        }
        assert!(injective_on(&box3, &z55).unwrap());
        let folded = alloc::vec![
            LatticePoint::new(alloc::vec![0, 0]),
            LatticePoint::new(alloc::vec![5, 0]),
        ];
        assert!(!injective_on(&folded, &z55).unwrap());
        assert!(injective_on(&[LatticePoint::new(alloc::vec![0, 0])], &z55).unwrap());
    }

    #[test]
    fn pairing_examples() {
        let z4 = g(&[4]);
        let h = z4.element(&[1]).unwrap();
        let chi = z4.element(&[1]).unwrap();
        let p = pairing(&h, &chi).unwrap();
        assert!((p - C64::new(0.0, 1.0)).norm() < 1e-15);

        let z3 = g(&[3]);
        let h = z3.element(&[1]).unwrap();
        let chi = z3.element(&[2]).unwrap();
        let p = pairing(&h, &chi).unwrap();
        let expected = crate::unit_phase(2.0 / 3.0);
        assert!((p - expected).norm() < 1e-15);

        let e = z3.element(&[0]).unwrap();
        for chi in z3.elements() {
            assert!((pairing(&e, &chi).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn pairing_multiplicative_and_unimodular() {
        let z = g(&[5, 7, 2]);
        let mut rng: SeededRng = stream(17, 1);
        for _ in 0..300 {
            let rand_el = |rng: &mut SeededRng| {
                let coords: Vec<i64> = (0..3).map(|_| rng.gen_range(0..100)).collect();
                z.element(&coords).unwrap()
            };
            let h = rand_el(&mut rng);
            let h2 = rand_el(&mut rng);
            let chi = rand_el(&mut rng);
            let lhs = pairing(&h.add(&h2).unwrap(), &chi).unwrap();
            let rhs = pairing(&h, &chi).unwrap() * pairing(&h2, &chi).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
            assert!((pairing(&h, &chi).unwrap().norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn annihilator_iff_pairing_trivial() {
        // exhaustive on a group of order <= 10^4
        let z = g(&[6, 4]);
        let mut rng = stream(3, 2);
        for _ in 0..100 {
            let x = LatticePoint::new((0..2).map(|_| rng.gen_range(-24..24)).collect());
            let q = quotient_map(&x, &z).unwrap();
            let in_ann = annihilator_contains(&x, &z).unwrap();
            let all_one = z
                .elements()
                .all(|h| (pairing(&h, &q).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-12);
            assert_eq!(in_ann, all_one);
        }
    }

    #[test]
    fn group_mismatch_rejected() {
        let a = g(&[4]).element(&[1]).unwrap();
        let b = g(&[5]).element(&[1]).unwrap();
        assert!(matches!(pairing(&a, &b), Err(Error::GroupMismatch)));
    }
}
