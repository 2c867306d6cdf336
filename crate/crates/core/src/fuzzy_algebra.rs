//! Twisted group algebras `C*(Z_k^d, σ[S])` realized as matrix algebras.
//!
//! The bicharacter is `σ(x,y) = exp(2πi x·Sy)` for an antisymmetric `S`; it is
//! well defined on `Z_k^d` exactly when `S[i][j]·gcd(k_i,k_j)` is an integer.
//! The product convention is
//!
//! ```text
//! (f ⋆ g)(x) = Σ_y f(y) g(x-y) σ(y, x-y),     δ_a ⋆ δ_b = σ(a,b) δ_{a+b},
//! ```
//!
//! which makes `δ_0` the unit and reproduces the commutation relation
//! `δ_a δ_b = σ(a,b)² δ_b δ_a`. The C*-norm is the operator norm of the left
//! regular representation on `ℓ²(Z_k^d)`; `cstar_norm` evaluates it through a
//! sparsity-preserving unitary change of basis (a partial Fourier transform
//! over a coordinate block on which σ is trivial), which block-diagonalizes the
//! same operator. The dense representation stays available as `regular_representation`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[cfg(not(any(feature = "std", test)))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::groups::{pairing, FinAbGroup, GroupElement, LatticePoint};
use crate::numerics::{operator_norm, CMatrix};
use crate::{unit_phase, C64};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Antisymmetric real `d×d` matrix `S` inducing `σ[S](x,y) = exp(2πi x·Sy)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewBicharacter {
    d: usize,
    s: Vec<f64>, // row-major
}

pub const ANTISYMMETRY_TOL: f64 = 1e-14;
pub const INTEGRALITY_TOL: f64 = 1e-9;

impl SkewBicharacter {
    pub fn new(d: usize, s: Vec<f64>) -> Result<Self> {
        if s.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                got: s.len(),
            });
        }
        if s.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut res: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                res = res.max((s[i * d + j] + s[j * d + i]).abs());
            }
        }
        if res > ANTISYMMETRY_TOL {
            return Err(Error::NotAntisymmetric { residual: res });
        }
        Ok(SkewBicharacter { d, s })
    }

    pub fn zero(d: usize) -> Self {
        SkewBicharacter {
            d,
            s: alloc::vec![0.0; d * d],
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.s[i * self.d + j]
    }

    /// Checks the integrality condition making `σ[S]` well defined on `Z_k^d`.
    pub fn validate_on(&self, group: &FinAbGroup) -> Result<()> {
        if group.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: group.dim(),
            });
        }
        let k = group.moduli();
        for i in 0..self.d {
            for j in 0..self.d {
                let g = gcd(k[i], k[j]) as f64;
                let v = self.entry(i, j) * g;
                let res = (v - v.round()).abs();
                if res > INTEGRALITY_TOL {
                    return Err(Error::NotABicharacter { i, j, residual: res });
                }
            }
        }
        Ok(())
    }

    /// `x·Sy` for integer vectors.
    fn form(&self, x: &[i64], y: &[i64]) -> f64 {
        let mut t = 0.0f64;
        for i in 0..self.d {
            if x[i] == 0 {
                continue;
            }
            let mut row = 0.0f64;
            for j in 0..self.d {
                row += self.entry(i, j) * y[j] as f64;
            }
            t += x[i] as f64 * row;
        }
        t
    }

    /// `σ(x,y)` on integer coordinate vectors.
    pub fn sigma_coords(&self, x: &[i64], y: &[i64]) -> C64 {
        unit_phase(self.form(x, y))
    }

    /// Pointwise gap `max_{|x|∞,|y|∞ <= n} |σ[S](x,y) - σ[S'](x,y)|` on the lattice.
    pub fn pointwise_gap(&self, other: &SkewBicharacter, n: i64) -> f64 {
        assert_eq!(self.d, other.d);
        let mut worst: f64 = 0.0;
        let mut x = alloc::vec![-n; self.d];
        loop {
            let mut y = alloc::vec![-n; self.d];
            loop {
                let g = (self.sigma_coords(&x, &y) - other.sigma_coords(&x, &y)).norm();
                worst = worst.max(g);
                if !incr(&mut y, n) {
                    break;
                }
            }
            if !incr(&mut x, n) {
                break;
            }
        }
        worst
    }
}

fn incr(v: &mut [i64], n: i64) -> bool {
    for j in (0..v.len()).rev() {
        if v[j] < n {
            v[j] += 1;
            for w in v.iter_mut().skip(j + 1) {
                *w = -n;
            }
            return true;
        }
    }
    false
}

/// `σ(x,y)` for group elements sharing a group.
pub fn sigma(s: &SkewBicharacter, x: &GroupElement, y: &GroupElement) -> Result<C64> {
    if x.group() != y.group() {
        return Err(Error::GroupMismatch);
    }
    let xi: Vec<i64> = x.coords().iter().map(|&c| c as i64).collect();
    let yi: Vec<i64> = y.coords().iter().map(|&c| c as i64).collect();
    Ok(s.sigma_coords(&xi, &yi))
}

/// Element of the twisted group algebra of `Z_k^d`: finitely many complex
/// coefficients indexed by reduced coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgElement {
    group: FinAbGroup,
    sigma: SkewBicharacter,
    coeffs: BTreeMap<Vec<u64>, C64>,
}

const COEFF_PRUNE: f64 = 0.0; // keep exact zeros out, everything else stays

impl AlgElement {
    pub fn zero(group: FinAbGroup, sigma: SkewBicharacter) -> Self {
        AlgElement {
            group,
            sigma,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn delta(group: FinAbGroup, sigma: SkewBicharacter, x: &[i64]) -> Result<Self> {
        let mut f = Self::zero(group, sigma);
        let reduced = f.group.reduce(x)?;
        f.coeffs.insert(reduced, C64::new(1.0, 0.0));
        Ok(f)
    }

    pub fn unit(group: FinAbGroup, sigma: SkewBicharacter) -> Self {
        let d = group.dim();
        Self::delta(group, sigma, &alloc::vec![0i64; d]).expect("zero vector reduces")
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn bicharacter(&self) -> &SkewBicharacter {
        &self.sigma
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Vec<u64>, &C64)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, x: &[u64]) -> C64 {
        self.coeffs
            .get(x)
            .copied()
            .unwrap_or_else(|| C64::new(0.0, 0.0))
    }

    pub fn set_coeff(&mut self, x: Vec<u64>, v: C64) {
        if v.norm() > COEFF_PRUNE {
            self.coeffs.insert(x, v);
        } else {
            self.coeffs.remove(&x);
        }
    }

    fn same_context(&self, other: &AlgElement) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        if self.sigma != other.sigma {
            return Err(Error::BicharacterMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &AlgElement) -> Result<AlgElement> {
        self.same_context(other)?;
        let mut out = self.clone();
        for (x, v) in other.coeffs.iter() {
            let nv = out.coeff(x) + v;
            out.set_coeff(x.clone(), nv);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &AlgElement) -> Result<AlgElement> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> AlgElement {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v *= s;
        }
        out
    }

    /// Max coefficient distance to another element.
    pub fn coeff_distance(&self, other: &AlgElement) -> f64 {
        let mut worst: f64 = 0.0;
        for (x, v) in self.coeffs.iter() {
            worst = worst.max((*v - other.coeff(x)).norm());
        }
        for (x, v) in other.coeffs.iter() {
            worst = worst.max((*v - self.coeff(x)).norm());
        }
        worst
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.coeff_distance(&self.involution()) <= tol
    }

    /// `f*(x) = conj(f(-x))`.
    pub fn involution(&self) -> AlgElement {
        let mut out = AlgElement::zero(self.group.clone(), self.sigma.clone());
        for (x, v) in self.coeffs.iter() {
            let neg: Vec<u64> = x
                .iter()
                .zip(self.group.moduli().iter())
                .map(|(&c, &k)| (k - c) % k)
                .collect();
            out.set_coeff(neg, v.conj());
        }
        out
    }
}

/// Twisted convolution `(f ⋆ g)(x) = Σ_y f(y) g(x-y) σ(y, x-y)`.
pub fn twisted_product(f: &AlgElement, g: &AlgElement) -> Result<AlgElement> {
    f.same_context(g)?;
    let group = &f.group;
    let k = group.moduli();
    let mut out = AlgElement::zero(group.clone(), f.sigma.clone());
    for (y, fy) in f.coeffs.iter() {
        let yi: Vec<i64> = y.iter().map(|&c| c as i64).collect();
        for (z, gz) in g.coeffs.iter() {
            // x = y + z, so x - y = z
            let zi: Vec<i64> = z.iter().map(|&c| c as i64).collect();
            let x: Vec<u64> = y
                .iter()
                .zip(z.iter())
                .zip(k.iter())
                .map(|((&a, &b), &kj)| (a + b) % kj)
                .collect();
            let phase = f.sigma.sigma_coords(&yi, &zi);
            let nv = out.coeff(&x) + *fy * *gz * phase;
            out.set_coeff(x, nv);
        }
    }
    Ok(out)
}

/// Dual action `(α_g f)(χ) = <g, χ> f(χ)` of `g ∈ U_k^d`.
pub fn dual_action(g: &GroupElement, f: &AlgElement) -> Result<AlgElement> {
    if g.group() != &f.group {
        return Err(Error::GroupMismatch);
    }
    let mut out = AlgElement::zero(f.group.clone(), f.sigma.clone());
    for (x, v) in f.coeffs.iter() {
        let chi = f.group.element(&x.iter().map(|&c| c as i64).collect::<Vec<_>>())?;
        out.set_coeff(x.clone(), *v * pairing(g, &chi)?);
    }
    Ok(out)
}

/// Left regular representation on `ℓ²(Z_k^d)`: `λ(f) e_z = Σ_a f(a) σ(a,z) e_{z+a}`.
///
/// Multiplicative (`λ(f⋆g) = λ(f)λ(g)`) and *-compatible (`λ(f*) = λ(f)†`).
pub fn regular_representation(f: &AlgElement) -> Result<CMatrix> {
    let group = &f.group;
    let n = group.order();
    if n > (1u64 << 22) {
        return Err(Error::InfiniteSupport);
    }
    let n = n as usize;
    let mut m = CMatrix::zeros(n, n);
    let k = group.moduli();
    for (a, v) in f.coeffs.iter() {
        let ai: Vec<i64> = a.iter().map(|&c| c as i64).collect();
        for col in 0..n {
            let z = group.coords_of(col);
            let zi: Vec<i64> = z.iter().map(|&c| c as i64).collect();
            let target: Vec<u64> = z
                .iter()
                .zip(a.iter())
                .zip(k.iter())
                .map(|((&zc, &ac), &kj)| (zc + ac) % kj)
                .collect();
            let row = group.index_of(&target);
            m.add_to(row, col, *v * f.sigma.sigma_coords(&ai, &zi));
        }
    }
    Ok(m)
}

/// Largest coordinate block `A` (greedy, largest moduli first) on which every
/// `S` entry is an integer, so the restricted right translations commute and a
/// partial Fourier transform block-diagonalizes every `λ(f)`.
fn isotropic_block(sigma: &SkewBicharacter, group: &FinAbGroup) -> Vec<usize> {
    let d = sigma.dim();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by_key(|&j| core::cmp::Reverse(group.moduli()[j]));
    let mut block: Vec<usize> = Vec::new();
    for j in order {
        let ok = block.iter().chain(core::iter::once(&j)).all(|&i| {
            let v = sigma.entry(i, j);
            let w = sigma.entry(j, i);
            (v - v.round()).abs() <= INTEGRALITY_TOL && (w - w.round()).abs() <= INTEGRALITY_TOL
        });
        if ok {
            block.push(j);
        }
    }
    block.sort_unstable();
    block
}

struct DisjointSet(Vec<usize>);

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// C*-norm: operator norm of the left regular representation.
///
/// In the partial-Fourier basis indexed by `(z0, m)` (cosets of the block
/// subgroup × its dual) each `λ(δ_a)` maps a basis vector to a single basis
/// vector with a phase, so `λ(f)` splits into the connected components of that
/// monomial action; the norm is the max of the per-block operator norms. With
/// an empty block this degenerates to the dense regular representation.
pub fn cstar_norm(f: &AlgElement) -> Result<f64> {
    f.sigma.validate_on(&f.group)?;
    if f.coeffs.is_empty() {
        return Ok(0.0);
    }
    let group = &f.group;
    let k = group.moduli();
    let d = group.dim();
    let n = group.order() as usize;
    let block = isotropic_block(&f.sigma, group);
    if block.is_empty() {
        return operator_norm(&regular_representation(f)?);
    }
    let in_block = {
        let mut b = alloc::vec![false; d];
        for &j in &block {
            b[j] = true;
        }
        b
    };

    // Basis vector index = mixed-radix over full coordinates, where block
    // coordinates hold the dual index m and the rest hold the coset label z0.
    // λ(δ_a): (z0, m) -> (z0 + a_offblock, m - t(a)) with phase
    // σ(a, z0) · exp(2πi Σ_{j∈A} m'_j a_j / k_j), t(a)_j = k_j (a·S e_j).
    struct Move {
        coeff: C64,
        shift_off: Vec<u64>, // added to non-block coords
        t: Vec<i64>,         // subtracted from m on block coords (index by j)
        a_block: Vec<u64>,   // a_j mod k_j on block coords
        sigma_row: Vec<f64>, // (a·S e_j) for all j, for σ(a, z0)
    }
    let mut moves: Vec<Move> = Vec::with_capacity(f.coeffs.len());
    for (a, v) in f.coeffs.iter() {
        let ai: Vec<i64> = a.iter().map(|&c| c as i64).collect();
        let mut sigma_row = alloc::vec![0.0f64; d];
        for j in 0..d {
            let mut acc = 0.0;
            for i in 0..d {
                acc += ai[i] as f64 * f.sigma.entry(i, j);
            }
            sigma_row[j] = acc;
        }
        let mut t = alloc::vec![0i64; d];
        for &j in &block {
            let v = sigma_row[j] * k[j] as f64;
            let r = v.round();
            if (v - r).abs() > 1e-6 {
                // σ not well defined for this block after all; fall back.
                return operator_norm(&regular_representation(f)?);
            }
            t[j] = r as i64;
        }
        moves.push(Move {
            coeff: *v,
            shift_off: a
                .iter()
                .enumerate()
                .map(|(j, &c)| if in_block[j] { 0 } else { c })
                .collect(),
            t,
            a_block: a
                .iter()
                .enumerate()
                .map(|(j, &c)| if in_block[j] { c } else { 0 })
                .collect(),
            sigma_row,
        });
    }

    // Connected components of the index set under the moves.
    let mut dsu = DisjointSet::new(n);
    let mut targets: Vec<Vec<(usize, C64)>> = alloc::vec![Vec::new(); n];
    for src in 0..n {
        let w = group.coords_of(src); // block coords = m, off-block = z0
        for mv in moves.iter() {
            let mut dst = alloc::vec![0u64; d];
            for j in 0..d {
                if in_block[j] {
                    let m_new = (w[j] as i64 - mv.t[j]).rem_euclid(k[j] as i64) as u64;
                    dst[j] = m_new;
                } else {
                    dst[j] = (w[j] + mv.shift_off[j]) % k[j];
                }
            }
            // σ(a, z0): z0 has zeros on the block
            let mut phase_t = 0.0f64;
            for j in 0..d {
                if !in_block[j] {
                    phase_t += mv.sigma_row[j] * w[j] as f64;
                }
            }
            // exp(2πi Σ_{j∈A} m'_j a_j / k_j)
            for j in 0..d {
                if in_block[j] {
                    let mj = dst[j] as u128;
                    let aj = mv.a_block[j] as u128;
                    phase_t += ((mj * aj) % k[j] as u128) as f64 / k[j] as f64;
                }
            }
            let di = group.index_of(&dst);
            targets[src].push((di, mv.coeff * unit_phase(phase_t)));
            dsu.union(src, di);
        }
    }

    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        members.entry(dsu.find(i)).or_default().push(i);
    }
    let mut worst: f64 = 0.0;
    for (_, idxs) in members {
        let mut local = BTreeMap::new();
        for (pos, &i) in idxs.iter().enumerate() {
            local.insert(i, pos);
        }
        let sz = idxs.len();
        let mut b = CMatrix::zeros(sz, sz);
        for &src in &idxs {
            let col = local[&src];
            for &(dst, coeff) in &targets[src] {
                b.add_to(local[&dst], col, coeff);
            }
        }
        worst = worst.max(operator_norm(&b)?);
    }
    Ok(worst)
}

/// Dimension of the center: the count of `y` with `σ(y, e_j)² = 1` for each of
/// the `d` canonical generators. The algebra is a full matrix algebra exactly
/// when this is 1.
pub fn center_dimension(sigma: &SkewBicharacter, group: &FinAbGroup) -> Result<u64> {
    sigma.validate_on(group)?;
    let d = group.dim();
    let mut count = 0u64;
    for y in group.elements() {
        let yi: Vec<i64> = y.coords().iter().map(|&c| c as i64).collect();
        let central = (0..d).all(|j| {
            let mut e = alloc::vec![0i64; d];
            e[j] = 1;
            // σ(y, e_j)^2 = exp(4πi y·S e_j) = 1 iff 2 y·S e_j ∈ Z
            let v = 2.0 * sigma_form(sigma, &yi, &e);
            (v - v.round()).abs() <= 1e-9
        });
        if central {
            count += 1;
        }
    }
    Ok(count)
}

fn sigma_form(sigma: &SkewBicharacter, x: &[i64], y: &[i64]) -> f64 {
    let d = sigma.dim();
    let mut t = 0.0;
    for i in 0..d {
        if x[i] == 0 {
            continue;
        }
        for j in 0..d {
            t += x[i] as f64 * sigma.entry(i, j) * y[j] as f64;
        }
    }
    t
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2u64;
    while q * q <= p {
        if p % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

/// The numerators `m_j = min{ m in 1..p-1 : ψ_j <= m/p }`, clamped to `p-1`
/// when `ψ_j` exceeds `(p-1)/p` (the constraint set is then empty but the
/// approximation bound `|ψ_j - m_j/p| <= 1/p` still holds at the endpoint).
pub fn full_matrix_numerators(psi: &[f64], p: u64) -> Result<Vec<u64>> {
    if !is_prime(p) || p <= 2 {
        return Err(Error::InvalidParameter("p must be a prime > 2"));
    }
    if psi.iter().any(|&x| !(0.0..1.0).contains(&x)) {
        return Err(Error::InvalidParameter("psi entries must lie in [0,1)"));
    }
    Ok(psi
        .iter()
        .map(|&x| {
            let m = (x * p as f64).ceil() as u64;
            m.clamp(1, p - 1)
        })
        .collect())
}

/// Block-diagonal antisymmetric matrix with 2x2 blocks `(m_j/p)·[[0,-1],[1,0]]`,
/// valid on `Z_p^d` and guaranteeing a trivial center for odd primes.
pub fn full_matrix_bicharacter(psi: &[f64], p: u64) -> Result<SkewBicharacter> {
    let half = psi.len();
    if half == 0 {
        return Err(Error::InvalidParameter("psi must be nonempty"));
    }
    let d = 2 * half;
    let nums = full_matrix_numerators(psi, p)?;
    let mut s = alloc::vec![0.0f64; d * d];
    for (j, &m) in nums.iter().enumerate() {
        let v = m as f64 / p as f64;
        let r = 2 * j;
        s[r * d + (r + 1)] = -v;
        s[(r + 1) * d + r] = v;
    }
    SkewBicharacter::new(d, s)
}

/// Coefficient map on the free lattice `Z^d`: an element of the limit algebra
/// presented by its finitely many Fourier coefficients. Only the operations
/// that never need the infinite-dimensional norm live here.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeElement {
    d: usize,
    coeffs: BTreeMap<Vec<i64>, C64>,
}

impl LatticeElement {
    pub fn zero(d: usize) -> Self {
        LatticeElement {
            d,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn delta(x: Vec<i64>) -> Self {
        let mut f = Self::zero(x.len());
        f.coeffs.insert(x, C64::new(1.0, 0.0));
        f
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Vec<i64>, &C64)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.coeffs
            .keys()
            .map(|x| LatticePoint::new(x.clone()))
            .collect()
    }

    pub fn set_coeff(&mut self, x: Vec<i64>, v: C64) {
        assert_eq!(x.len(), self.d);
        if v.norm() > 0.0 {
            self.coeffs.insert(x, v);
        } else {
            self.coeffs.remove(&x);
        }
    }

    pub fn coeff(&self, x: &[i64]) -> C64 {
        self.coeffs
            .get(x)
            .copied()
            .unwrap_or_else(|| C64::new(0.0, 0.0))
    }

    pub fn add(&self, other: &LatticeElement) -> Result<LatticeElement> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: other.d,
            });
        }
        let mut out = self.clone();
        for (x, v) in other.coeffs.iter() {
            let nv = out.coeff(x) + v;
            out.set_coeff(x.clone(), nv);
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> LatticeElement {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v *= s;
        }
        out
    }

    /// `f*(x) = conj(f(-x))`.
    pub fn involution(&self) -> LatticeElement {
        let mut out = LatticeElement::zero(self.d);
        for (x, v) in self.coeffs.iter() {
            out.set_coeff(x.iter().map(|&c| -c).collect(), v.conj());
        }
        out
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        let star = self.involution();
        let mut worst: f64 = 0.0;
        for (x, v) in self.coeffs.iter() {
            worst = worst.max((*v - star.coeff(x)).norm());
        }
        worst <= tol
    }

    /// `sup over the grid of |Σ_x f(x) e^{2πi x·θ}|` — the commutative sup-norm
    /// estimate used as the untwisted limit oracle.
    pub fn commutative_sup(&self, grid_per_dim: usize) -> f64 {
        let d = self.d;
        let mut idx = alloc::vec![0usize; d];
        let mut best: f64 = 0.0;
        loop {
            let mut acc = C64::new(0.0, 0.0);
            for (x, v) in self.coeffs.iter() {
                let mut t = 0.0f64;
                for j in 0..d {
                    t += x[j] as f64 * idx[j] as f64 / grid_per_dim as f64;
                }
                acc += *v * unit_phase(t);
            }
            best = best.max(acc.norm());
            let mut j = d;
            loop {
                if j == 0 {
                    return best;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < grid_per_dim {
                    break;
                }
                idx[j] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_element, random_self_adjoint, stream};

    fn lambda_matrix() -> Vec<f64> {
        alloc::vec![0.0, -1.0, 1.0, 0.0]
    }

    fn scaled_lambda(num: f64, den: f64) -> SkewBicharacter {
        let s: Vec<f64> = lambda_matrix().iter().map(|x| x * num / den).collect();
        SkewBicharacter::new(2, s).unwrap()
    }

    fn z(k: &[u64]) -> FinAbGroup {
        FinAbGroup::new(k.to_vec()).unwrap()
    }

    #[test]
    fn sigma_examples() {
        let g = z(&[5, 5]);
        let s = scaled_lambda(1.0, 5.0);
        s.validate_on(&g).unwrap();
        let x = g.element(&[1, 0]).unwrap();
        let y = g.element(&[0, 1]).unwrap();
        // x·Sy = (1,0)·S(0,1) = S[0][1] = -1/5
        let v = sigma(&s, &x, &y).unwrap();
        assert!((v - crate::unit_phase(-0.2)).norm() < 1e-14);
        for e in g.elements().take(10) {
            assert!((sigma(&s, &e, &e).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
        let zero = SkewBicharacter::zero(2);
        assert!((sigma(&zero, &x, &y).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn integrality_enforced() {
        let g = z(&[5, 5]);
        let bad = scaled_lambda(1.0, 3.0);
        assert!(matches!(
            bad.validate_on(&g),
            Err(Error::NotABicharacter { .. })
        ));
    }

    #[test]
    fn product_unit_and_deltas() {
        let g = z(&[5, 5]);
        let s = SkewBicharacter::zero(2);
        let da = AlgElement::delta(g.clone(), s.clone(), &[1, 2]).unwrap();
        let db = AlgElement::delta(g.clone(), s.clone(), &[3, 4]).unwrap();
        let prod = twisted_product(&da, &db).unwrap();
        assert_eq!(prod.support_len(), 1);
        assert!((prod.coeff(&[4, 1]) - C64::new(1.0, 0.0)).norm() < 1e-15);

        let unit = AlgElement::unit(g.clone(), s.clone());
        let mut rng = stream(1, 1);
        let f = random_element(&g, &s, &mut rng);
        let uf = twisted_product(&unit, &f).unwrap();
        assert_eq!(uf.coeff_distance(&f), 0.0);
    }

    #[test]
    fn commutation_relation() {
        // δ_a δ_b = σ(a,b)^2 δ_b δ_a, coefficientwise
        let g = z(&[5, 5]);
        let s = scaled_lambda(1.0, 5.0);
        let a = [1i64, 0];
        let b = [0i64, 1];
        let da = AlgElement::delta(g.clone(), s.clone(), &a).unwrap();
        let db = AlgElement::delta(g.clone(), s.clone(), &b).unwrap();
        let lhs = twisted_product(&da, &db).unwrap();
        let sig = s.sigma_coords(&a, &b);
        let rhs = twisted_product(&db, &da).unwrap().scale(sig * sig);
        assert!(lhs.coeff_distance(&rhs) < 1e-12);
        // σ((1,0),(0,1))^2 = exp(-4πi/5)
        assert!((sig * sig - crate::unit_phase(-0.4)).norm() < 1e-14);
    }

    #[test]
    fn involution_properties() {
        let g = z(&[4, 3]);
        let s = SkewBicharacter::zero(2);
        let da = AlgElement::delta(g.clone(), s.clone(), &[1, 2]).unwrap();
        let star = da.involution();
        assert!((star.coeff(&[3, 1]) - C64::new(1.0, 0.0)).norm() < 1e-15);

        let mut rng = stream(2, 2);
        let f = random_element(&g, &s, &mut rng);
        let gg = random_element(&g, &s, &mut rng);
        assert_eq!(f.involution().involution().coeff_distance(&f), 0.0);
        let lhs = twisted_product(&f, &gg).unwrap().involution();
        let rhs = twisted_product(&gg.involution(), &f.involution()).unwrap();
        assert!(lhs.coeff_distance(&rhs) < 1e-12);
    }

    #[test]
    fn associativity_random() {
        let g = z(&[5, 5]);
        let s = scaled_lambda(2.0, 5.0);
        let mut rng = stream(3, 3);
        for _ in 0..10 {
            let f = random_element(&g, &s, &mut rng);
            let h = random_element(&g, &s, &mut rng);
            let e = random_element(&g, &s, &mut rng);
            let lhs = twisted_product(&twisted_product(&f, &h).unwrap(), &e).unwrap();
            let rhs = twisted_product(&f, &twisted_product(&h, &e).unwrap()).unwrap();
            assert!(lhs.coeff_distance(&rhs) < 1e-11);
        }
    }

    #[test]
    fn regular_representation_properties() {
        let g = z(&[3, 4]);
        let s = SkewBicharacter::zero(2);
        let unit = AlgElement::unit(g.clone(), s.clone());
        let id = regular_representation(&unit).unwrap();
        assert!((id.sub(&CMatrix::identity(12)).unwrap()).frobenius_norm() < 1e-14);

        let mut rng = stream(4, 4);
        let s2 = {
            // S = (1/2)Λ' valid on (4,4)? use zeros on (3,4): gcd constraints force integers
            SkewBicharacter::zero(2)
        };
        let f = random_element(&g, &s2, &mut rng);
        let h = random_element(&g, &s2, &mut rng);
        let lf = regular_representation(&f).unwrap();
        let lh = regular_representation(&h).unwrap();
        let lfh = regular_representation(&twisted_product(&f, &h).unwrap()).unwrap();
        assert!(lf.mul(&lh).unwrap().sub(&lfh).unwrap().frobenius_norm() < 1e-10);
        let lstar = regular_representation(&f.involution()).unwrap();
        assert!(lstar.sub(&lf.dagger()).unwrap().frobenius_norm() < 1e-12);

        // λ(δ_a) unitary
        let da = AlgElement::delta(g, s2, &[2, 3]).unwrap();
        let u = regular_representation(&da).unwrap();
        let gram = u.dagger().mul(&u).unwrap();
        assert!(gram.sub(&CMatrix::identity(12)).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn twisted_regular_representation_multiplicative() {
        let g = z(&[5, 5]);
        let s = scaled_lambda(2.0, 5.0);
        let mut rng = stream(5, 5);
        let f = random_element(&g, &s, &mut rng);
        let h = random_element(&g, &s, &mut rng);
        let lf = regular_representation(&f).unwrap();
        let lh = regular_representation(&h).unwrap();
        let lfh = regular_representation(&twisted_product(&f, &h).unwrap()).unwrap();
        assert!(lf.mul(&lh).unwrap().sub(&lfh).unwrap().frobenius_norm() < 1e-9);
    }

    #[test]
    fn cstar_norm_matches_dense_and_dft() {
        let mut rng = stream(6, 6);
        // commutative: block path degenerates to the Fourier diagonal
        let g = z(&[5]);
        let s0 = SkewBicharacter::zero(1);
        for _ in 0..10 {
            let f = random_element(&g, &s0, &mut rng);
            let fast = cstar_norm(&f).unwrap();
            let dense = operator_norm(&regular_representation(&f).unwrap()).unwrap();
            // independent oracle: max |DFT| over the dual grid
            let mut dft: f64 = 0.0;
            for m in 0..5u64 {
                let mut acc = C64::new(0.0, 0.0);
                for (x, v) in f.coeffs() {
                    acc += *v * crate::unit_phase(-(m as f64) * x[0] as f64 / 5.0);
                }
                dft = dft.max(acc.norm());
            }
            assert!((fast - dense).abs() < 1e-9);
            assert!((fast - dft).abs() < 1e-9);
        }
        // twisted: block path vs dense regular representation
        let g2 = z(&[5, 5]);
        let s = scaled_lambda(2.0, 5.0);
        for _ in 0..6 {
            let f = random_element(&g2, &s, &mut rng);
            let fast = cstar_norm(&f).unwrap();
            let dense = operator_norm(&regular_representation(&f).unwrap()).unwrap();
            assert!(
                (fast - dense).abs() < 1e-9,
                "block {fast} vs dense {dense}"
            );
        }
    }

    #[test]
    fn cstar_norm_examples() {
        let g = z(&[5]);
        let s0 = SkewBicharacter::zero(1);
        let da = AlgElement::delta(g.clone(), s0.clone(), &[2]).unwrap();
        assert!((cstar_norm(&da).unwrap() - 1.0).abs() < 1e-12);
        // ||δ_1 + δ_{-1}|| = max_m |2cos(2πm/5)| = 2
        let f = AlgElement::delta(g.clone(), s0.clone(), &[1])
            .unwrap()
            .add(&AlgElement::delta(g, s0, &[-1]).unwrap())
            .unwrap();
        assert!((cstar_norm(&f).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cstar_identity_random() {
        let g = z(&[5, 5]);
        let s = scaled_lambda(2.0, 5.0);
        let mut rng = stream(7, 7);
        for _ in 0..5 {
            let f = random_element(&g, &s, &mut rng);
            let n1 = cstar_norm(&twisted_product(&f.involution(), &f).unwrap()).unwrap();
            let n2 = cstar_norm(&f).unwrap();
            assert!((n1 - n2 * n2).abs() <= 1e-9 * n2 * n2);
        }
    }

    #[test]
    fn dual_action_properties() {
        let g = z(&[5, 5]);
        let s = scaled_lambda(2.0, 5.0);
        let mut rng = stream(8, 8);
        let f = random_self_adjoint(&g, &s, &mut rng);
        let e = g.element(&[0, 0]).unwrap();
        assert_eq!(dual_action(&e, &f).unwrap().coeff_distance(&f), 0.0);

        let gpt = g.element(&[2, 3]).unwrap();
        let chi = [1i64, 4];
        let dchi = AlgElement::delta(g.clone(), s.clone(), &chi).unwrap();
        let moved = dual_action(&gpt, &dchi).unwrap();
        let chie = g.element(&chi).unwrap();
        let expect = dchi.scale(pairing(&gpt, &chie).unwrap());
        assert!(moved.coeff_distance(&expect) < 1e-15);

        // isometric
        let n0 = cstar_norm(&f).unwrap();
        let n1 = cstar_norm(&dual_action(&gpt, &f).unwrap()).unwrap();
        assert!((n0 - n1).abs() < 1e-10 * n0.max(1.0));
        // automorphism: α_g(f ⋆ h) = α_g f ⋆ α_g h
        let h = random_element(&g, &s, &mut rng);
        let lhs = dual_action(&gpt, &twisted_product(&f, &h).unwrap()).unwrap();
        let rhs = twisted_product(
            &dual_action(&gpt, &f).unwrap(),
            &dual_action(&gpt, &h).unwrap(),
        )
        .unwrap();
        assert!(lhs.coeff_distance(&rhs) < 1e-12);
    }

    #[test]
    fn center_examples() {
        let g55 = z(&[5, 5]);
        assert_eq!(center_dimension(&SkewBicharacter::zero(2), &g55).unwrap(), 25);
        assert_eq!(center_dimension(&scaled_lambda(2.0, 5.0), &g55).unwrap(), 1);
        let g44 = z(&[4, 4]);
        assert_eq!(center_dimension(&scaled_lambda(1.0, 4.0), &g44).unwrap(), 4);
    }

    #[test]
    fn full_matrix_data() {
        assert_eq!(full_matrix_numerators(&[0.375], 5).unwrap(), alloc::vec![2]);
        assert_eq!(full_matrix_numerators(&[0.0], 5).unwrap(), alloc::vec![1]);
        assert_eq!(full_matrix_numerators(&[0.375], 11).unwrap(), alloc::vec![5]);
        // clamped case: 0.9 > 2/3
        assert_eq!(full_matrix_numerators(&[0.9], 3).unwrap(), alloc::vec![2]);
        for p in [3u64, 5, 7, 11, 13] {
            for psi in [0.0, 0.375, 0.9] {
                let nums = full_matrix_numerators(&[psi], p).unwrap();
                assert!((psi - nums[0] as f64 / p as f64).abs() <= 1.0 / p as f64 + 1e-15);
            }
        }
        assert!(full_matrix_bicharacter(&[0.1], 4).is_err());
        assert!(full_matrix_bicharacter(&[0.1], 2).is_err());
    }

    #[test]
    fn full_matrix_centers_trivial() {
        for p in [3u64, 5, 7, 11, 13] {
            for psi in [0.0f64, 0.375, 0.9] {
                for half in [1usize, 2] {
                    let psis = alloc::vec![psi; half];
                    let s = full_matrix_bicharacter(&psis, p).unwrap();
                    let g = FinAbGroup::cyclic_power(p, 2 * half).unwrap();
                    s.validate_on(&g).unwrap();
                    assert_eq!(center_dimension(&s, &g).unwrap(), 1, "p={p} psi={psi}");
                }
            }
        }
    }

    #[test]
    fn lattice_element_basics() {
        let f = LatticeElement::delta(alloc::vec![1])
            .add(&LatticeElement::delta(alloc::vec![-1]))
            .unwrap();
        assert!(f.is_self_adjoint(0.0));
        // sup of |2cos(2πθ)| is 2
        assert!((f.commutative_sup(512) - 2.0).abs() < 1e-10);
    }
}
