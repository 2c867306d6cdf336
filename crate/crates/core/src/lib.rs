//! Finite "fuzzy" quantum tori as explicit matrix algebras, their quantum-metric
//! structure, and certified upper bounds for the quantum Gromov-Hausdorff distance.
//!
//! The twisted group algebra of `Z_k^d = Z^d / kZ^d` with a skew bicharacter
//! `σ(x,y) = exp(2πi x·Sy)` is realized on `ℓ²(Z_k^d)` through its left regular
//! representation. The dual action of the torsion subgroup `U_k^d ⊂ T^d` together
//! with a continuous length function defines a Lip-norm, and the dual distance on
//! states is evaluated by linear programming for the polyhedral seminorms used in
//! the finite-metric-space approximation. Everything downstream of these kernels
//! produces *certificates*: explicit constants whose chain of inequalities bounds
//! a quantum Gromov-Hausdorff distance from above.
//!
//! The crate is `no_std`-compatible (allocation required); IO, file formats and
//! the experiment runner live in the companion CLI crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod collapse;
pub mod error;
pub mod fuzzy_algebra;
pub mod ghbounds;
pub mod groups;
pub mod lengths;
pub mod numerics;
pub mod qmetric;
pub mod quadrature;
pub mod sampling;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

pub(crate) const TAU: f64 = core::f64::consts::TAU;

/// `exp(2πi t)` with the argument reduced mod 1 first, so that large rational
/// multiples keep full precision.
pub fn unit_phase(t: f64) -> C64 {
    #[cfg(not(any(feature = "std", test)))]
    use num_traits::Float;
    let r = t - t.floor();
    C64::new((TAU * r).cos(), (TAU * r).sin())
}
