#![allow(dead_code)]

use gft_core::{BladeIndex, Multivector, Signature};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn sig(p: usize, q: usize) -> Signature {
    Signature::new(p, q).unwrap()
}

pub fn random_mv(s: Signature, rng: &mut impl Rng) -> Multivector {
    Multivector::from_coeffs(s, (0..s.blade_count()).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
}

pub fn mv_from(s: Signature, coeffs: &[f64]) -> Multivector {
    Multivector::from_coeffs(s, coeffs[..s.blade_count()].to_vec()).unwrap()
}

/// Product of two basis blades from their index lists: concatenate, bubble
/// sort counting transpositions, then cancel equal neighbours with their
/// squares. Works on lists, not bitmasks.
pub fn blade_product_oracle(a: &[usize], b: &[usize], s: Signature) -> (f64, Vec<usize>) {
    let mut list: Vec<usize> = a.iter().chain(b).copied().collect();
    let mut sign = 1.0;
    for i in 0..list.len() {
        for j in 0..list.len() - 1 - i {
            if list[j] > list[j + 1] {
                list.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    let mut out = Vec::new();
    let mut k = 0;
    while k < list.len() {
        if k + 1 < list.len() && list[k] == list[k + 1] {
            sign *= s.epsilon(list[k]);
            k += 2;
        } else {
            out.push(list[k]);
            k += 1;
        }
    }
    (sign, out)
}

/// Geometric product assembled from [`blade_product_oracle`].
pub fn gp_oracle(x: &Multivector, y: &Multivector) -> Multivector {
    let s = x.sig();
    let mut out = Multivector::zero(s);
    for (ba, ca) in x.terms() {
        for (bb, cb) in y.terms() {
            let (sign, idx) = blade_product_oracle(&ba.indices(), &bb.indices(), s);
            let blade = BladeIndex::from_indices(&idx);
            out.set(blade, out.get(blade) + sign * ca * cb);
        }
    }
    out
}

/// Square of a basis blade, from the oracle.
pub fn blade_square(blade: BladeIndex, s: Signature) -> f64 {
    let idx = blade.indices();
    blade_product_oracle(&idx, &idx, s).0
}

/// Random element `sum c_i b_i` over mutually anticommuting basis blades
/// that each square to -1, scaled to have `sqrt(-f^2) = radius`. Its
/// Euclidean norm equals `radius`.
pub fn random_elliptic_root(s: Signature, radius: f64, rng: &mut impl Rng) -> Multivector {
    let mut candidates: Vec<BladeIndex> =
        (1..s.blade_count() as u32).map(BladeIndex).filter(|&b| blade_square(b, s) == -1.0).collect();
    assert!(!candidates.is_empty(), "{s} has no blade squaring to -1");
    candidates.shuffle(rng);
    let mut chosen: Vec<BladeIndex> = Vec::new();
    for b in candidates {
        let anticommutes = |c: &BladeIndex| {
            let (s1, _) = blade_product_oracle(&b.indices(), &c.indices(), s);
            let (s2, _) = blade_product_oracle(&c.indices(), &b.indices(), s);
            s1 == -s2
        };
        if chosen.iter().all(anticommutes) && rng.random_bool(0.7) || chosen.is_empty() {
            chosen.push(b);
        }
    }
    let coeffs: Vec<f64> = chosen.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
    let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut f = Multivector::zero(s);
    for (b, c) in chosen.iter().zip(&coeffs) {
        f.set(*b, c * radius / norm);
    }
    f
}
