//! Certified integrals on the torus.
//!
//! Kernel-weighted length integrals `∫ F_N^{⊗d} · l dλ` are reduced to exact
//! one-dimensional objects: the Fourier pairing for `d = 1` (the arc function
//! has closed-form coefficients), the layer-cake identity
//! `∫ F^{⊗d}·max_j arc(θ_j) = ∫_0^{1/2} (1 - H(t)^d) dt` with
//! `H(t) = ∫_{-t}^{t} F_N` in closed form for max-arc, and coordinate
//! separation for sum-arc. Whatever ends up one-dimensional is integrated by a
//! rectangle rule whose error is certified through an explicit Lipschitz bound.

#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::lengths::{CertifiedValue, CollapseIndex, LengthFunction};

/// Rectangle-rule mean of a periodic function on `[0,1)` with a caller-supplied
/// Lipschitz constant; the certificate is `lip / (2 M)`.
pub fn periodic_mean_certified<F: Fn(f64) -> f64>(
    f: F,
    points: usize,
    lipschitz: f64,
) -> CertifiedValue {
    let m = points.max(1);
    let mut acc = 0.0f64;
    for i in 0..m {
        acc += f((i as f64 + 0.5) / m as f64);
    }
    CertifiedValue {
        value: acc / m as f64,
        error_bound: lipschitz / (2.0 * m as f64),
    }
}

/// Rectangle rule on `[a, b]`.
fn interval_mean_certified<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    points: usize,
    lipschitz: f64,
) -> CertifiedValue {
    let m = points.max(1);
    let h = (b - a) / m as f64;
    let mut acc = 0.0f64;
    for i in 0..m {
        acc += f(a + (i as f64 + 0.5) * h);
    }
    CertifiedValue {
        value: acc * h,
        error_bound: lipschitz * (b - a) * h / 2.0,
    }
}

/// Fejér coefficient `1 - |m|/(N+1)` on `{-N..N}`.
pub fn fejer_coefficient(order: usize, m: i64) -> f64 {
    let n1 = order as f64 + 1.0;
    let a = m.unsigned_abs() as f64;
    if a > order as f64 {
        0.0
    } else {
        1.0 - a / n1
    }
}

/// One-dimensional Fejér kernel value `F_N(θ) = Σ (1-|m|/(N+1)) e^{2πimθ}`.
pub fn fejer_value(order: usize, theta: f64) -> f64 {
    let mut acc = 1.0f64;
    for m in 1..=order {
        acc += 2.0 * fejer_coefficient(order, m as i64) * (crate::TAU * m as f64 * theta).cos();
    }
    acc
}

/// `H(t) = ∫_{-t}^{t} F_N = 2t + (2/π) Σ_m (c_m / m) sin(2πmt)`, the kernel
/// mass of the arc ball of radius `t`.
fn fejer_ball_mass(order: usize, t: f64) -> f64 {
    let mut acc = 2.0 * t;
    for m in 1..=order {
        acc += 2.0 * fejer_coefficient(order, m as i64) * (crate::TAU * m as f64 * t).sin()
            / (core::f64::consts::PI * m as f64);
    }
    acc
}

/// Exact Fourier coefficients of `arc(θ) = min(θ, 1-θ)`:
/// `arc^(0) = 1/4`, `arc^(m) = -1/(π² m²)` for odd `m`, else 0.
fn arc_coefficient(m: i64) -> f64 {
    if m == 0 {
        0.25
    } else if m % 2 != 0 {
        -1.0 / (core::f64::consts::PI * core::f64::consts::PI * (m * m) as f64)
    } else {
        0.0
    }
}

/// `∫_T F_N · arc dλ` by the exact coefficient pairing.
pub fn fejer_arc_integral(order: usize) -> f64 {
    let mut acc = 0.25; // m = 0 term
    let mut m = 1i64;
    while m <= order as i64 {
        acc += 2.0 * fejer_coefficient(order, m) * arc_coefficient(m);
        m += 1;
    }
    acc
}

const LAYER_POINTS: usize = 2_000_000;

/// Certified `∫_{T^d} F_N^{⊗d}(θ) · l(θ) dλ(θ)` for the supported length kinds.
///
/// Euclidean-arc in dimension ≥ 2 returns a certified upper bound through the
/// sum-arc majorant (sound for kernel-order selection).
pub fn fejer_length_integral(order: usize, l: &LengthFunction) -> Result<CertifiedValue> {
    let d = l.dim();
    match l {
        LengthFunction::MaxArc { .. }
        | LengthFunction::SumArc { .. }
        | LengthFunction::EuclideanArc { .. }
            if d == 1 =>
        {
            Ok(CertifiedValue {
                value: fejer_arc_integral(order),
                error_bound: 1e-12,
            })
        }
        LengthFunction::MaxArc { .. } => {
            // layer cake: ∫ F^{⊗d} max = ∫_0^{1/2} (1 - H(t)^d) dt
            let dd = d as f64;
            let lip = dd * 2.0 * (order as f64 + 1.0);
            let cv = interval_mean_certified(
                |t| 1.0 - fejer_ball_mass(order, t).clamp(0.0, 1.0).powi(d as i32),
                0.0,
                0.5,
                LAYER_POINTS,
                lip,
            );
            Ok(cv)
        }
        LengthFunction::SumArc { .. } => Ok(CertifiedValue {
            value: d as f64 * fejer_arc_integral(order),
            error_bound: 1e-12 * d as f64,
        }),
        LengthFunction::EuclideanArc { .. } => {
            let sum = d as f64 * fejer_arc_integral(order);
            Ok(CertifiedValue {
                value: sum,
                error_bound: 1e-12 * d as f64,
            })
        }
        LengthFunction::Collapse { base, n, delta } => {
            // linear in the two pieces; the limit piece only sees the first
            // δ coordinates (the others integrate the kernel to 1)
            let quotient = restrict_to_block(base, *delta)?;
            let limit_part = if quotient.dim() == 0 {
                CertifiedValue {
                    value: 0.0,
                    error_bound: 0.0,
                }
            } else {
                fejer_length_integral(order, &quotient)?
            };
            match n {
                CollapseIndex::Infinity => Ok(limit_part),
                CollapseIndex::Finite(n) => {
                    let w = 1.0 / (*n as f64 + 1.0);
                    let base_part = fejer_length_integral(order, base)?;
                    Ok(CertifiedValue {
                        value: w * base_part.value + (1.0 - w) * limit_part.value,
                        error_bound: w * base_part.error_bound
                            + (1.0 - w) * limit_part.error_bound,
                    })
                }
            }
        }
        LengthFunction::Quotient { .. } => Err(Error::InvalidParameter(
            "kernel integrals of quotient lengths are taken on the quotient torus",
        )),
    }
}

/// `ω1 ↦ l(ω1, 0)` as a length on the first `delta` coordinates.
fn restrict_to_block(base: &LengthFunction, delta: usize) -> Result<LengthFunction> {
    if delta == 0 {
        return Ok(LengthFunction::SumArc { d: 0 });
    }
    match base {
        LengthFunction::MaxArc { .. } => Ok(LengthFunction::MaxArc { d: delta }),
        LengthFunction::SumArc { .. } => Ok(LengthFunction::SumArc { d: delta }),
        LengthFunction::EuclideanArc { .. } => Ok(LengthFunction::EuclideanArc { d: delta }),
        _ => Err(Error::InvalidParameter(
            "collapse base must be an analytic kind",
        )),
    }
}

/// Least Fejér order whose certified length integral is at most `target`.
pub fn least_fejer_order(
    l: &LengthFunction,
    target: f64,
    cap: usize,
) -> Result<(usize, CertifiedValue)> {
    for order in 1..=cap {
        let cv = fejer_length_integral(order, l)?;
        if cv.value + cv.error_bound <= target {
            return Ok((order, cv));
        }
    }
    Err(Error::KernelOrderCapExceeded { cap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fejer_value_closed_forms() {
        // F_1(θ) = 1 + cos(2πθ)
        assert!((fejer_value(1, 0.0) - 2.0).abs() < 1e-14);
        assert!(fejer_value(1, 0.5).abs() < 1e-14);
        // F_N(0) = N+1
        assert!((fejer_value(7, 0.0) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn fejer_nonnegative_and_mean_one() {
        for order in [1usize, 3, 8] {
            let cv = periodic_mean_certified(|t| fejer_value(order, t), 10_000, 0.0);
            assert!((cv.value - 1.0).abs() < 1e-10);
            for i in 0..10_000 {
                let t = i as f64 / 10_000.0;
                assert!(fejer_value(order, t) >= -1e-10);
            }
        }
    }

    #[test]
    fn arc_integral_matches_quadrature() {
        // frozen from an independent 1e5-point oracle run
        assert!((fejer_arc_integral(3) - 0.092389269890).abs() < 1e-9);
        assert!((fejer_arc_integral(10) - 0.043024532818).abs() < 1e-9);
        for order in [1usize, 2, 5] {
            let q = periodic_mean_certified(
                |t| fejer_value(order, t) * crate::lengths::arc(t),
                200_000,
                0.0,
            );
            assert!((fejer_arc_integral(order) - q.value).abs() < 1e-8);
        }
        // integrals decrease in the order
        let mut prev = f64::INFINITY;
        for order in 1..=12 {
            let v = fejer_arc_integral(order);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn least_order_one_dim() {
        let l = LengthFunction::max_arc(1);
        let (order, cv) = least_fejer_order(&l, 1.0 / 9.0, 64).unwrap();
        assert_eq!(order, 3);
        assert!(cv.error_bound < 1e-6);
    }

    #[test]
    fn max_arc_two_dim_layer_cake() {
        // frozen from an independent 2000^2 brute-force quadrature
        let l = LengthFunction::max_arc(2);
        let cv = fejer_length_integral(5, &l).unwrap();
        assert!(
            (cv.value - 0.104600761).abs() < 1e-5,
            "layer cake {} vs brute oracle",
            cv.value
        );
        let (order, _) = least_fejer_order(&l, 1.0 / 9.0, 64).unwrap();
        assert_eq!(order, 5);
    }

    #[test]
    fn sum_arc_separates() {
        let l = LengthFunction::sum_arc(3);
        let cv = fejer_length_integral(4, &l).unwrap();
        assert!((cv.value - 3.0 * fejer_arc_integral(4)).abs() < 1e-12);
    }

    #[test]
    fn collapse_integral_combines() {
        let base = LengthFunction::max_arc(2);
        let fam = crate::lengths::collapse_family(&base, CollapseIndex::Finite(4), 1).unwrap();
        let cv = fejer_length_integral(3, &fam).unwrap();
        let full = fejer_length_integral(3, &base).unwrap().value;
        let lim = fejer_arc_integral(3);
        assert!((cv.value - (0.2 * full + 0.8 * lim)).abs() < 1e-9);
    }

    #[test]
    fn cap_exceeded() {
        let l = LengthFunction::max_arc(1);
        assert!(matches!(
            least_fejer_order(&l, 1e-9, 4),
            Err(Error::KernelOrderCapExceeded { cap: 4 })
        ));
    }
}
