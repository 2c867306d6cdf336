//! Seeded sampling used by the empirical certificate checks.
//!
//! Everything is driven by ChaCha8 so that a (seed, stream) pair fully
//! determines the draw regardless of how work is scheduled.

use alloc::vec::Vec;

#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fuzzy_algebra::{AlgElement, SkewBicharacter};
use crate::groups::FinAbGroup;
use crate::numerics::CMatrix;
use crate::C64;

pub type SeededRng = ChaCha8Rng;

/// Independent deterministic stream for a (seed, label) pair.
pub fn stream(seed: u64, label: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed ^ label.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn uniform(rng: &mut SeededRng) -> f64 {
    rng.gen::<f64>()
}

pub fn uniform_u64(rng: &mut SeededRng, modulus: u64) -> u64 {
    rng.gen::<u64>() % modulus
}

/// Standard normal via Box-Muller.
pub fn normal(rng: &mut SeededRng) -> f64 {
    let mut u1: f64 = rng.gen();
    while u1 <= f64::MIN_POSITIVE {
        u1 = rng.gen();
    }
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (crate::TAU * u2).cos()
}

pub fn complex_normal(rng: &mut SeededRng) -> C64 {
    C64::new(normal(rng), normal(rng))
}

/// Dirichlet(1,...,1) probability vector via normalized exponentials.
pub fn dirichlet(n: usize, rng: &mut SeededRng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            let mut u: f64 = rng.gen();
            while u <= f64::MIN_POSITIVE {
                u = rng.gen();
            }
            -u.ln()
        })
        .collect();
    let s: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= s;
    }
    v
}

/// Density matrix `A†A / tr(A†A)` for complex Gaussian `A`.
pub fn density_matrix(n: usize, rng: &mut SeededRng) -> CMatrix {
    let mut a = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a.set(i, j, complex_normal(rng));
        }
    }
    let g = a.dagger().mul(&a).expect("square");
    let tr = g.trace().re;
    g.scale(C64::new(1.0 / tr, 0.0))
}

/// Random element with full support and complex Gaussian coefficients.
pub fn random_element(
    group: &FinAbGroup,
    sigma: &SkewBicharacter,
    rng: &mut SeededRng,
) -> AlgElement {
    let mut f = AlgElement::zero(group.clone(), sigma.clone());
    for x in group.elements() {
        f.set_coeff(x.coords().to_vec(), complex_normal(rng) * C64::new(0.5, 0.0));
    }
    f
}

/// Random self-adjoint element: `coeff(-x) = conj(coeff(x))`.
pub fn random_self_adjoint(
    group: &FinAbGroup,
    sigma: &SkewBicharacter,
    rng: &mut SeededRng,
) -> AlgElement {
    let f = random_element(group, sigma, rng);
    let fs = f.involution();
    f.add(&fs).expect("same context").scale(C64::new(0.5, 0.0))
}
