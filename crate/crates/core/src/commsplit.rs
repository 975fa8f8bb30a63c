//! Splitting multivectors into parts that commute or anticommute with
//! invertible generators, and moving them through products of exponentials.
//!
//! For invertible `B`, `A = A0 + A1` with `A0 = (A + B^-1 A B)/2` commuting
//! with `B` and `A1 = (A - B^-1 A B)/2` anticommuting with it. Splitting
//! repeatedly against an ordered generator list yields one component per
//! multi-index `j in {0,1}^d`.
//!
//! A zero generator performs no split: everything commutes with `e^0 = 1`.

use std::fmt;

use crate::algebra::{Multivector, STRUCTURAL_TOL};
use crate::error::{GftError, Result};
use crate::exponential::{exp_imag, exp_imag_unchecked};

/// Largest generator count for which components are materialized densely.
pub const MAX_SPLIT_GENERATORS: usize = 12;

/// Components whose magnitude falls below this fraction of the input are
/// dropped from term lists.
pub const NEGLIGIBLE: f64 = 1e-13;

/// A multi-index `j in {0,1}^d`; bit `k` holds `j_{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplitIndex {
    mask: u32,
    len: usize,
}

impl SplitIndex {
    pub fn zeros(len: usize) -> Self {
        SplitIndex { mask: 0, len }
    }

    pub fn from_mask(mask: u32, len: usize) -> Self {
        assert!(len <= 32 && (len == 32 || mask >> len == 0), "mask {mask:#b} wider than {len}");
        SplitIndex { mask, len }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut mask = 0;
        for (k, &b) in bits.iter().enumerate() {
            assert!(b <= 1, "split index entries are 0 or 1");
            mask |= (b as u32) << k;
        }
        SplitIndex { mask, len: bits.len() }
    }

    /// Every index of length `len`, in mask order.
    pub fn all(len: usize) -> impl Iterator<Item = SplitIndex> {
        (0..1u32 << len).map(move |mask| SplitIndex { mask, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    /// `j_{k+1}` for 0-based `k`.
    pub fn get(&self, k: usize) -> u8 {
        ((self.mask >> k) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.len).map(|k| self.get(k)).collect()
    }

    /// `|j|`, the number of ones.
    pub fn weight(&self) -> u32 {
        self.mask.count_ones()
    }

    /// `(-1)^{j_{k+1}}`.
    pub fn sign(&self, k: usize) -> f64 {
        if self.get(k) == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for SplitIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for k in 0..self.len {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", self.get(k))?;
        }
        f.write_str(")")
    }
}

/// Order in which a generator list is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Split against `B_1` first, then `B_2`, ...
    Forward,
    /// Split against `B_d` first, then `B_{d-1}`, ...
    Backward,
}

/// A prepared generator: its normalized inverse, or `None` for zero.
#[derive(Debug, Clone)]
struct Splitter {
    unit: Multivector,
    inv: Multivector,
}

impl Splitter {
    fn new(gen: &Multivector) -> Result<Option<Self>> {
        let mag = gen.magnitude();
        if mag == 0.0 {
            return Ok(None);
        }
        let unit = gen.scale(1.0 / mag);
        let inv = unit.inv(STRUCTURAL_TOL)?;
        Ok(Some(Splitter { unit, inv }))
    }

    fn split(&self, a: &Multivector) -> (Multivector, Multivector) {
        let conj = self.inv.gp(a).gp(&self.unit);
        ((a + &conj).scale(0.5), (a - &conj).scale(0.5))
    }
}

fn split_with(split: &Option<Splitter>, a: &Multivector) -> (Multivector, Multivector) {
    match split {
        Some(s) => s.split(a),
        None => (a.clone(), Multivector::zero(a.sig())),
    }
}

/// Commuting and anticommuting parts of `a` with respect to `b`.
pub fn split_pair(a: &Multivector, b: &Multivector) -> Result<(Multivector, Multivector)> {
    if a.sig() != b.sig() {
        return Err(GftError::SignatureMismatch { left: a.sig(), right: b.sig() });
    }
    Ok(split_with(&Splitter::new(b)?, a))
}

/// Dense map from [`SplitIndex`] to component.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitComponents {
    len: usize,
    components: Vec<Multivector>,
}

impl SplitComponents {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, j: SplitIndex) -> &Multivector {
        assert_eq!(j.len(), self.len, "split index length");
        &self.components[j.mask() as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (SplitIndex, &Multivector)> {
        let len = self.len;
        self.components.iter().enumerate().map(move |(m, c)| (SplitIndex::from_mask(m as u32, len), c))
    }

    /// Sum of all components; reconstructs the input.
    pub fn sum(&self) -> Multivector {
        let mut acc = Multivector::zero(self.components[0].sig());
        for c in &self.components {
            acc += c;
        }
        acc
    }
}

fn prepare(gens: &[Multivector]) -> Result<Vec<Option<Splitter>>> {
    if gens.len() > MAX_SPLIT_GENERATORS {
        return Err(GftError::TooManyGenerators { got: gens.len(), max: MAX_SPLIT_GENERATORS });
    }
    gens.iter().map(Splitter::new).collect()
}

fn split_prepared(a: &Multivector, splitters: &[Option<Splitter>], dir: Direction) -> SplitComponents {
    let d = splitters.len();
    let mut comps = vec![Multivector::zero(a.sig()); 1 << d];
    comps[0] = a.clone();
    let order: Vec<usize> = match dir {
        Direction::Forward => (0..d).collect(),
        Direction::Backward => (0..d).rev().collect(),
    };
    // After processing a set S of generators, only masks inside S are populated.
    let mut populated: Vec<u32> = vec![0];
    for k in order {
        let bit = 1u32 << k;
        let mut next = Vec::with_capacity(populated.len() * 2);
        for &m in &populated {
            let (c0, c1) = split_with(&splitters[k], &comps[m as usize]);
            comps[m as usize] = c0;
            comps[(m | bit) as usize] = c1;
            next.push(m);
            next.push(m | bit);
        }
        populated = next;
    }
    SplitComponents { len: d, components: comps }
}

/// Nested split of `a` against an ordered generator list.
pub fn split_multi(a: &Multivector, gens: &[Multivector], dir: Direction) -> Result<SplitComponents> {
    for g in gens {
        if g.sig() != a.sig() {
            return Err(GftError::SignatureMismatch { left: a.sig(), right: g.sig() });
        }
    }
    Ok(split_prepared(a, &prepare(gens)?, dir))
}

/// One summand `component * prod_k e^{-(-1)^{j_k} f_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapTerm {
    pub component: Multivector,
    pub signs: SplitIndex,
}

/// Moves `a` from the right of `prod_k e^{-f_k}` to its left:
/// `prod_k e^{-f_k} a = sum_j a_{c^j(<-F)} prod_k e^{-(-1)^{j_k} f_k}`.
///
/// Components that vanish are omitted.
pub fn swap_through_exponentials(fvals: &[Multivector], a: &Multivector) -> Result<Vec<SwapTerm>> {
    for f in fvals {
        if !f.is_imaginary_direction(STRUCTURAL_TOL) {
            return Err(GftError::NotImaginary);
        }
    }
    let comps = split_multi(a, fvals, Direction::Backward)?;
    let floor = NEGLIGIBLE * a.magnitude();
    Ok(comps
        .iter()
        .filter(|(_, c)| c.magnitude() > floor)
        .map(|(signs, c)| SwapTerm { component: c.clone(), signs })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Lower,
    Upper,
}

/// A strictly lower or upper triangular `{0,1}` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularSignMatrix {
    d: usize,
    entries: Vec<u8>,
    orientation: Orientation,
}

impl TriangularSignMatrix {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.entries[row * self.d + col]
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// Row `l` (0-based) as a multi-index.
    pub fn row(&self, l: usize) -> SplitIndex {
        SplitIndex::from_bits(&self.entries[l * self.d..(l + 1) * self.d])
    }

    /// Column sums mod 2.
    pub fn column_parity(&self) -> SplitIndex {
        let bits: Vec<u8> = (0..self.d).map(|k| (0..self.d).map(|l| self.get(l, k)).sum::<u8>() % 2).collect();
        SplitIndex::from_bits(&bits)
    }

    fn free_positions(d: usize, orientation: Orientation) -> Vec<(usize, usize)> {
        let mut pos = Vec::new();
        for r in 0..d {
            for c in 0..d {
                let free = match orientation {
                    Orientation::Lower => c < r,
                    Orientation::Upper => c > r,
                };
                if free {
                    pos.push((r, c));
                }
            }
        }
        pos
    }

    /// Every strictly triangular matrix of the given size, lexicographic in
    /// the row-major entries.
    pub fn all(d: usize, orientation: Orientation) -> Vec<TriangularSignMatrix> {
        let free = Self::free_positions(d, orientation);
        let count = free.len();
        let mut out: Vec<TriangularSignMatrix> = (0..1u64 << count)
            .map(|mask| {
                let mut entries = vec![0u8; d * d];
                for (b, &(r, c)) in free.iter().enumerate() {
                    entries[r * d + c] = ((mask >> b) & 1) as u8;
                }
                TriangularSignMatrix { d, entries, orientation }
            })
            .collect();
        out.sort_by(|a, b| a.entries.cmp(&b.entries));
        out
    }
}

impl fmt::Display for TriangularSignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in 0..self.d {
            if l > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", self.row(l))?;
        }
        Ok(())
    }
}

/// All strictly triangular `d x d` matrices whose column parities equal `j`.
pub fn enumerate_triangular(d: usize, j: SplitIndex, orientation: Orientation) -> Vec<TriangularSignMatrix> {
    assert_eq!(d, j.len(), "split index length must equal the matrix size");
    TriangularSignMatrix::all(d, orientation).into_iter().filter(|m| m.column_parity() == j).collect()
}

/// One summand of the shift split.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftTerm {
    pub matrix: TriangularSignMatrix,
    pub signs: SplitIndex,
    pub factor: Multivector,
}

/// Splits `prod_l e^{-f_l(x0 + y)}` into terms pairing a factor built from
/// `e^{-f_l(x0)}` with sign flips of the `f_l(y)` exponentials.
///
/// `exponents` are the values `f_l(x0, u)`; `generators` are the elements the
/// `e^{-f_l(y, u)}` factors are split against, normally the kernel
/// directions. With `Lower` orientation the result satisfies
/// `prod_l e^{-f_l(x0+y)} = sum factor * prod_l e^{-(-1)^{j_l} f_l(y)}`, each
/// factor being `prod_l (e^{-f_l(x0)})_{c^{(J)_l}(<- g_1..g_l, 0..0)}`. With
/// `Upper` it satisfies `prod_l e^{-f_l(y+x0)} = sum prod_l e^{-(-1)^{j_l} f_l(y)} * factor`
/// with `prod_l (e^{-f_l(x0)})_{c^{(J)_l}(-> 0..0, g_l..g_d)}`.
///
/// Terms whose factor vanishes are omitted.
pub fn shift_exponential_terms_with(
    exponents: &[Multivector],
    generators: &[Multivector],
    orientation: Orientation,
) -> Result<Vec<ShiftTerm>> {
    let d = exponents.len();
    if generators.len() != d {
        return Err(GftError::LengthMismatch { expected: d, got: generators.len() });
    }
    if d == 0 {
        return Ok(Vec::new());
    }
    for f in exponents {
        if !f.is_imaginary_direction(STRUCTURAL_TOL) {
            return Err(GftError::NotImaginary);
        }
    }
    let sig = exponents[0].sig();
    let splitters = prepare(generators)?;

    // Components of each e^{-f_l(x0)} against its padded generator list.
    let per_row: Vec<SplitComponents> = (0..d)
        .map(|l| {
            let e = exp_imag_unchecked(&exponents[l]);
            let padded: Vec<Option<Splitter>> = (0..d)
                .map(|k| {
                    let active = match orientation {
                        Orientation::Lower => k <= l,
                        Orientation::Upper => k >= l,
                    };
                    if active {
                        splitters[k].clone()
                    } else {
                        None
                    }
                })
                .collect();
            let dir = match orientation {
                Orientation::Lower => Direction::Backward,
                Orientation::Upper => Direction::Forward,
            };
            split_prepared(&e, &padded, dir)
        })
        .collect();

    let mut terms = Vec::new();
    for matrix in TriangularSignMatrix::all(d, orientation) {
        let mut factor = Multivector::one(sig);
        for (l, comps) in per_row.iter().enumerate() {
            let part = comps.get(matrix.row(l));
            if part.magnitude() <= NEGLIGIBLE {
                factor = Multivector::zero(sig);
                break;
            }
            factor = factor.gp(part);
        }
        if factor.magnitude() > NEGLIGIBLE {
            let signs = matrix.column_parity();
            terms.push(ShiftTerm { matrix, signs, factor });
        }
    }
    Ok(terms)
}

/// [`shift_exponential_terms_with`] splitting against the exponents themselves.
///
/// Only meaningful when no `f_l(x0, u)` vanishes while `f_l(y, u)` does not.
pub fn shift_exponential_terms(exponents: &[Multivector], orientation: Orientation) -> Result<Vec<ShiftTerm>> {
    shift_exponential_terms_with(exponents, exponents, orientation)
}

/// `prod_k e^{-s_k f_k}` with `s_k = (-1)^{j_k}`.
pub fn signed_exponential_product(fvals: &[Multivector], signs: SplitIndex) -> Result<Multivector> {
    let sig = match fvals.first() {
        Some(f) => f.sig(),
        None => return Err(GftError::InvalidArgument("empty exponent list has no signature".into())),
    };
    let mut acc = Multivector::one(sig);
    for (k, f) in fvals.iter().enumerate() {
        acc = acc.gp(&exp_imag(&f.scale(signs.sign(k)), STRUCTURAL_TOL)?);
    }
    Ok(acc)
}
