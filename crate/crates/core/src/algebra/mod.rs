//! Dense Clifford algebra arithmetic over Cl(p,q).
//!
//! Basis blades are encoded as bitmasks: bit `j` set means `e_{j+1}` is a
//! factor. Coefficients are stored in blade-index order `0..2^n`, so the
//! coefficient of `e_13` in any signature lives at index `0b101`.

mod notation;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{GftError, Result};

/// Largest supported `p + q`.
pub const MAX_DIMENSION: usize = 12;

/// Absolute tolerance used for structural checks (exact squares, inverses).
pub const STRUCTURAL_TOL: f64 = 1e-12;

/// The pair `(p, q)` of a Clifford algebra Cl(p,q).
///
/// Basis vectors `e_1..e_p` square to `+1`, `e_{p+1}..e_n` to `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    p: usize,
    q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        let n = p + q;
        if n > MAX_DIMENSION {
            return Err(GftError::DimensionTooLarge { p, q, n, max: MAX_DIMENSION });
        }
        Ok(Signature { p, q })
    }

    /// Euclidean signature G(n,0).
    pub fn euclidean(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    /// Anti-Euclidean signature G(0,n).
    pub fn anti_euclidean(n: usize) -> Result<Self> {
        Self::new(0, n)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// Number of basis blades, `2^n`.
    pub fn blade_count(&self) -> usize {
        1 << self.n()
    }

    /// Square of the basis vector `e_j` (1-based).
    pub fn epsilon(&self, j: usize) -> f64 {
        assert!(j >= 1 && j <= self.n(), "basis vector e{j} outside {self}");
        if j <= self.p {
            1.0
        } else {
            -1.0
        }
    }

    /// Bits of the basis vectors squaring to -1.
    fn negative_mask(&self) -> u32 {
        ((1u32 << self.n()) - 1) & !((1u32 << self.p) - 1)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{})", self.p, self.q)
    }
}

/// A basis blade `e_j` for a multi-index `j`, encoded as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BladeIndex(pub u32);

impl BladeIndex {
    pub const SCALAR: BladeIndex = BladeIndex(0);

    /// Blade from 1-based basis vector indices, which must be strictly increasing.
    pub fn from_indices(indices: &[usize]) -> BladeIndex {
        let mut bits = 0u32;
        for &j in indices {
            debug_assert!(j >= 1);
            bits |= 1 << (j - 1);
        }
        BladeIndex(bits)
    }

    /// The basis vector `e_j` (1-based).
    pub fn vector(j: usize) -> BladeIndex {
        BladeIndex(1 << (j - 1))
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    /// 1-based indices of the participating basis vectors, ascending.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    /// Sign of reversion on this blade, `(-1)^{k(k-1)/2}`.
    pub fn reversion_sign(self) -> f64 {
        let k = self.grade();
        if (k * k.saturating_sub(1) / 2).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// Geometric product of two basis blades: `e_a e_b = sign * e_{a xor b}`.
///
/// The sign counts the transpositions needed to sort the concatenated factor
/// list and contracts each repeated basis vector to its square.
pub fn blade_mul(a: BladeIndex, b: BladeIndex, sig: Signature) -> (f64, BladeIndex) {
    let mut swaps = 0u32;
    let mut rest = a.0 >> 1;
    while rest != 0 {
        swaps += (rest & b.0).count_ones();
        rest >>= 1;
    }
    let negatives = (a.0 & b.0 & sig.negative_mask()).count_ones();
    let sign = if (swaps + negatives).is_multiple_of(2) { 1.0 } else { -1.0 };
    (sign, BladeIndex(a.0 ^ b.0))
}

/// An element of Cl(p,q) with one real coefficient per basis blade.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector {
    sig: Signature,
    coeffs: Vec<f64>,
}

impl Multivector {
    pub fn zero(sig: Signature) -> Self {
        Multivector { sig, coeffs: vec![0.0; sig.blade_count()] }
    }

    pub fn scalar(sig: Signature, value: f64) -> Self {
        Self::blade(sig, BladeIndex::SCALAR, value)
    }

    pub fn one(sig: Signature) -> Self {
        Self::scalar(sig, 1.0)
    }

    pub fn blade(sig: Signature, blade: BladeIndex, value: f64) -> Self {
        let mut mv = Self::zero(sig);
        mv.coeffs[blade.0 as usize] = value;
        mv
    }

    /// The basis vector `e_j` (1-based).
    pub fn basis_vector(sig: Signature, j: usize) -> Self {
        assert!(j >= 1 && j <= sig.n(), "basis vector e{j} outside {sig}");
        Self::blade(sig, BladeIndex::vector(j), 1.0)
    }

    /// The unit blade `e_1 e_2 ... e_n`.
    pub fn pseudoscalar(sig: Signature) -> Self {
        Self::blade(sig, BladeIndex((sig.blade_count() - 1) as u32), 1.0)
    }

    pub fn from_coeffs(sig: Signature, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != sig.blade_count() {
            return Err(GftError::CoefficientCount { sig, expected: sig.blade_count(), got: coeffs.len() });
        }
        Ok(Multivector { sig, coeffs })
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn get(&self, blade: BladeIndex) -> f64 {
        self.coeffs[blade.0 as usize]
    }

    pub fn set(&mut self, blade: BladeIndex, value: f64) {
        self.coeffs[blade.0 as usize] = value;
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Nonzero `(blade, coefficient)` pairs in blade-index order.
    pub fn terms(&self) -> impl Iterator<Item = (BladeIndex, f64)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0.0).map(|(k, &c)| (BladeIndex(k as u32), c))
    }

    /// Projection onto grade `k`.
    pub fn grade(&self, k: u32) -> Self {
        let mut out = self.clone();
        for (idx, c) in out.coeffs.iter_mut().enumerate() {
            if (idx as u32).count_ones() != k {
                *c = 0.0;
            }
        }
        out
    }

    /// True if every nonzero coefficient sits on a grade-`k` blade.
    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.terms().all(|(b, _)| b.grade() == k)
    }

    pub fn scale(&self, s: f64) -> Self {
        Multivector { sig: self.sig, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Euclidean norm of the coefficient array.
    pub fn magnitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Coefficient-wise inner product.
    pub fn coeff_dot(&self, other: &Multivector) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum()
    }

    /// `magnitude(self - other)` without allocating.
    pub fn distance(&self, other: &Multivector) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    /// Geometric product, rejecting operands from different algebras.
    pub fn try_gp(&self, other: &Multivector) -> Result<Multivector> {
        if self.sig != other.sig {
            return Err(GftError::SignatureMismatch { left: self.sig, right: other.sig });
        }
        Ok(self.gp_unchecked(other))
    }

    /// Geometric product.
    ///
    /// # Panics
    ///
    /// Panics if the signatures differ; use [`Multivector::try_gp`] to get an error instead.
    pub fn gp(&self, other: &Multivector) -> Multivector {
        match self.try_gp(other) {
            Ok(mv) => mv,
            Err(e) => panic!("{e}"),
        }
    }

    fn gp_unchecked(&self, other: &Multivector) -> Multivector {
        let sig = self.sig;
        let mut out = vec![0.0; sig.blade_count()];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                let (sign, k) = blade_mul(BladeIndex(i as u32), BladeIndex(j as u32), sig);
                out[k.0 as usize] += sign * a * b;
            }
        }
        Multivector { sig, coeffs: out }
    }

    /// Reversion: the grade-`k` part is multiplied by `(-1)^{k(k-1)/2}`.
    pub fn reverse(&self) -> Multivector {
        let coeffs =
            self.coeffs.iter().enumerate().map(|(idx, &c)| c * BladeIndex(idx as u32).reversion_sign()).collect();
        Multivector { sig: self.sig, coeffs }
    }

    /// Inverse via reversion, `B^-1 = rev(B) / <B rev(B)>_0`, falling back to
    /// `B / B^2` when `B` squares to a scalar (as roots of -1 mixing grades do).
    ///
    /// Fails unless one of the two products is a scalar of magnitude above
    /// `tol`, with a non-scalar residue below `tol` times its magnitude.
    pub fn inv(&self, tol: f64) -> Result<Multivector> {
        let scalar_of = |prod: &Multivector| -> Option<f64> {
            let s = prod.scalar_part();
            if s.abs() <= tol || !s.is_finite() {
                return None;
            }
            let residue = prod.coeffs[1..].iter().map(|c| c * c).sum::<f64>().sqrt();
            (residue < tol * prod.magnitude()).then_some(s)
        };
        let rev = self.reverse();
        if let Some(s) = scalar_of(&self.gp_unchecked(&rev)) {
            return Ok(rev.scale(1.0 / s));
        }
        match scalar_of(&self.gp_unchecked(self)) {
            Some(s) => Ok(self.scale(1.0 / s)),
            None => Err(GftError::NotInvertible),
        }
    }

    /// True iff `self` squares to a negative real: the scalar part of the
    /// square is below `-tol` and every other coefficient of the square is
    /// below `tol * max(1, |self|^2)`.
    pub fn is_root_of_minus_one(&self, tol: f64) -> bool {
        let sq = self.gp_unchecked(self);
        let s0 = sq.scalar_part();
        if s0.is_nan() || s0 >= -tol {
            return false;
        }
        let limit = tol * self.magnitude().powi(2).max(1.0);
        sq.coeffs[1..].iter().all(|c| c.abs() < limit)
    }

    /// Scale-free variant of [`Multivector::is_root_of_minus_one`]: zero, or
    /// a value whose normalized direction squares to a negative real.
    pub fn is_imaginary_direction(&self, tol: f64) -> bool {
        let mag = self.magnitude();
        if mag == 0.0 {
            return true;
        }
        mag.is_finite() && self.scale(1.0 / mag).is_root_of_minus_one(tol)
    }

    /// `self * other == other * self` within `tol` (relative to the operands).
    pub fn commutes_with(&self, other: &Multivector, tol: f64) -> bool {
        let ab = self.gp(other);
        let ba = other.gp(self);
        ab.distance(&ba) <= tol * (self.magnitude() * other.magnitude()).max(1.0)
    }

    /// Parse a sum of blade terms such as `1.5 - 2*e12 + e[1,10]`.
    pub fn parse(sig: Signature, input: &str) -> Result<Multivector> {
        notation::parse(sig, input)
    }

    fn check_same_sig(&self, other: &Multivector) {
        assert_eq!(self.sig, other.sig, "signature mismatch: {} vs {}", self.sig, other.sig);
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        notation::write(self, f)
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        self.check_same_sig(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&Multivector> for Multivector {
    fn sub_assign(&mut self, rhs: &Multivector) {
        self.check_same_sig(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Add<&Multivector> for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(mut self, rhs: Multivector) -> Multivector {
        self += &rhs;
        self
    }
}

impl Sub<&Multivector> for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(mut self, rhs: Multivector) -> Multivector {
        self -= &rhs;
        self
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(mut self) -> Multivector {
        for c in &mut self.coeffs {
            *c = -*c;
        }
        self
    }
}

impl Mul<&Multivector> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.gp(rhs)
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        self.gp(&rhs)
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(mut self, rhs: f64) -> Multivector {
        for c in &mut self.coeffs {
            *c *= rhs;
        }
        self
    }
}
