//! Bilinear transform kernels `f(x, u) = x^T M u` with multivector entries,
//! the standard presets, and the structural checks run on them.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{BladeIndex, Multivector, Signature};
use crate::commsplit::SplitIndex;
use crate::error::{GftError, Result};

/// Which side of the transformed field a kernel multiplies from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl FromStr for Side {
    type Err = GftError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(GftError::InvalidArgument(format!("side must be 'left' or 'right', got '{other}'"))),
        }
    }
}

/// An `m x m` matrix of multivectors; entry `(j, l)` is `f(e_j, e_l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    sig: Signature,
    m: usize,
    entries: Vec<Multivector>,
}

impl KernelMatrix {
    pub fn zero(sig: Signature, m: usize) -> Self {
        KernelMatrix { sig, m, entries: vec![Multivector::zero(sig); m * m] }
    }

    /// `value * Id`.
    pub fn diagonal(value: &Multivector, m: usize) -> Self {
        let mut k = Self::zero(value.sig(), m);
        for j in 0..m {
            k.set(j, j, value.clone());
        }
        k
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> &Multivector {
        &self.entries[row * self.m + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Multivector) {
        assert_eq!(value.sig(), self.sig, "kernel entry signature");
        self.entries[row * self.m + col] = value;
    }

    /// Nonzero entries as `(row, col, value)`, 0-based, row-major.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &Multivector)> {
        let m = self.m;
        self.entries.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(move |(k, v)| (k / m, k % m, v))
    }

    pub fn negated(&self) -> Self {
        KernelMatrix { sig: self.sig, m: self.m, entries: self.entries.iter().map(|e| -e).collect() }
    }

    /// `x^T M u`.
    pub fn eval(&self, x: &[f64], u: &[f64]) -> Result<Multivector> {
        for len in [x.len(), u.len()] {
            if len != self.m {
                return Err(GftError::DimensionMismatch { expected: self.m, got: len });
            }
        }
        let mut out = Multivector::zero(self.sig);
        self.eval_into(x, u, &mut out);
        Ok(out)
    }

    /// Unchecked evaluation into a preallocated buffer.
    pub(crate) fn eval_into(&self, x: &[f64], u: &[f64], out: &mut Multivector) {
        let acc = out.coeffs_mut();
        acc.iter_mut().for_each(|c| *c = 0.0);
        for (k, entry) in self.entries.iter().enumerate() {
            let w = x[k / self.m] * u[k % self.m];
            if w == 0.0 {
                continue;
            }
            for (a, &c) in acc.iter_mut().zip(entry.coeffs()) {
                *a += w * c;
            }
        }
    }
}

/// Ordered left and right kernel sets over one signature.
#[derive(Debug, Clone, PartialEq)]
pub struct GftSpec {
    sig: Signature,
    m: usize,
    left: Vec<KernelMatrix>,
    right: Vec<KernelMatrix>,
}

impl GftSpec {
    pub fn new(sig: Signature, m: usize, left: Vec<KernelMatrix>, right: Vec<KernelMatrix>) -> Result<Self> {
        if m == 0 {
            return Err(GftError::InvalidArgument("spatial dimension must be at least 1".into()));
        }
        for k in left.iter().chain(&right) {
            if k.sig() != sig {
                return Err(GftError::SignatureMismatch { left: sig, right: k.sig() });
            }
            if k.dim() != m {
                return Err(GftError::DimensionMismatch { expected: m, got: k.dim() });
            }
        }
        Ok(GftSpec { sig, m, left, right })
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn left(&self) -> &[KernelMatrix] {
        &self.left
    }

    pub fn right(&self) -> &[KernelMatrix] {
        &self.right
    }

    pub fn side(&self, side: Side) -> &[KernelMatrix] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// Number of left kernels.
    pub fn mu(&self) -> usize {
        self.left.len()
    }

    /// Total number of kernels.
    pub fn nu(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// Kernel values at `(x, u)` for one side.
    pub fn eval_side(&self, side: Side, x: &[f64], u: &[f64]) -> Result<Vec<Multivector>> {
        self.side(side).iter().map(|k| k.eval(x, u)).collect()
    }

    /// Flips the sign of left kernel `l` where `j_l = 1` and right kernel
    /// `l` where `k_l = 1`.
    pub fn negate(&self, j: SplitIndex, k: SplitIndex) -> Result<GftSpec> {
        if j.len() != self.mu() {
            return Err(GftError::LengthMismatch { expected: self.mu(), got: j.len() });
        }
        if k.len() != self.right.len() {
            return Err(GftError::LengthMismatch { expected: self.right.len(), got: k.len() });
        }
        let flip = |set: &[KernelMatrix], idx: SplitIndex| -> Vec<KernelMatrix> {
            set.iter()
                .enumerate()
                .map(|(l, kern)| if idx.get(l) == 1 { kern.negated() } else { kern.clone() })
                .collect()
        };
        Ok(GftSpec { sig: self.sig, m: self.m, left: flip(&self.left, j), right: flip(&self.right, k) })
    }
}

/// The transforms covered by the general definition.
#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    /// `f = 2 pi i_n x.u` on the right, G(n,0), `n = 2, 3 (mod 4)`.
    Clifford(usize),
    /// `f_k = 2 pi e_k x_k u_k` on the right, G(0,n).
    Buelow(usize),
    /// `f_1 = 2 pi i x_1 u_1` left, `f_2 = 2 pi j x_2 u_2` right, with
    /// `i -> e1`, `j -> e2` in G(0,2).
    Quaternionic,
    /// `f_1 = e4 x4 u4` left, `f_2 = eps_4 e4 i4 (x1u1 + x2u2 + x3u3)` right, G(3,1).
    Spacetime,
    /// `+-1/2 (x.u) B` and `+-1/2 (x.u) iB` in G(4,0) for a unit bivector `B`.
    ColorImage(Multivector),
    /// `f = -x ^ u` on the left, G(0,n).
    Cylindrical(usize),
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Clifford(_) => "clifford",
            Preset::Buelow(_) => "buelow",
            Preset::Quaternionic => "quaternionic",
            Preset::Spacetime => "spacetime",
            Preset::ColorImage(_) => "color-image",
            Preset::Cylindrical(_) => "cylindrical",
        }
    }

    /// Default color-image bivector `e12`.
    pub fn default_color_bivector() -> Multivector {
        Multivector::blade(Signature::new(4, 0).expect("G(4,0)"), BladeIndex::from_indices(&[1, 2]), 1.0)
    }

    pub fn signature(&self) -> Result<Signature> {
        match *self {
            Preset::Clifford(n) => Signature::euclidean(n),
            Preset::Buelow(n) | Preset::Cylindrical(n) => Signature::anti_euclidean(n),
            Preset::Quaternionic => Signature::anti_euclidean(2),
            Preset::Spacetime => Signature::new(3, 1),
            Preset::ColorImage(_) => Signature::euclidean(4),
        }
    }

    pub fn build(&self) -> Result<GftSpec> {
        let sig = self.signature()?;
        let two_pi = 2.0 * PI;
        match self {
            Preset::Clifford(n) => {
                let n = *n;
                if n % 4 != 2 && n % 4 != 3 {
                    return Err(GftError::UnsupportedSignature {
                        preset: self.to_string(),
                        reason: format!("needs n = 2 or 3 (mod 4), got n = {n}"),
                    });
                }
                let kernel = KernelMatrix::diagonal(&Multivector::pseudoscalar(sig).scale(two_pi), n);
                GftSpec::new(sig, n, vec![], vec![kernel])
            }
            Preset::Buelow(n) => {
                let n = *n;
                if n == 0 {
                    return Err(unsupported(self, "needs n >= 1"));
                }
                let right = (1..=n)
                    .map(|k| {
                        let mut m = KernelMatrix::zero(sig, n);
                        m.set(k - 1, k - 1, Multivector::basis_vector(sig, k).scale(two_pi));
                        m
                    })
                    .collect();
                GftSpec::new(sig, n, vec![], right)
            }
            Preset::Quaternionic => {
                let mut m1 = KernelMatrix::zero(sig, 2);
                m1.set(0, 0, Multivector::basis_vector(sig, 1).scale(two_pi));
                let mut m2 = KernelMatrix::zero(sig, 2);
                m2.set(1, 1, Multivector::basis_vector(sig, 2).scale(two_pi));
                GftSpec::new(sig, 2, vec![m1], vec![m2])
            }
            Preset::Spacetime => {
                let e4 = Multivector::basis_vector(sig, 4);
                let mut m1 = KernelMatrix::zero(sig, 4);
                m1.set(3, 3, e4.clone());
                let spatial = e4.gp(&Multivector::pseudoscalar(sig)).scale(sig.epsilon(4));
                let mut m2 = KernelMatrix::zero(sig, 4);
                for j in 0..3 {
                    m2.set(j, j, spatial.clone());
                }
                GftSpec::new(sig, 4, vec![m1], vec![m2])
            }
            Preset::ColorImage(b) => {
                check_unit_bivector(b)?;
                let ib = Multivector::pseudoscalar(sig).gp(b);
                let half = |v: &Multivector, s: f64| KernelMatrix::diagonal(&v.scale(0.5 * s), 2);
                GftSpec::new(sig, 2, vec![half(b, 1.0), half(&ib, 1.0)], vec![half(b, -1.0), half(&ib, -1.0)])
            }
            Preset::Cylindrical(n) => {
                let n = *n;
                if n < 2 {
                    return Err(unsupported(self, "needs n >= 2"));
                }
                let mut m = KernelMatrix::zero(sig, n);
                for l in 1..=n {
                    for j in 1..=n {
                        if l != j {
                            let el_ej = Multivector::basis_vector(sig, l).gp(&Multivector::basis_vector(sig, j));
                            m.set(l - 1, j - 1, -el_ej);
                        }
                    }
                }
                GftSpec::new(sig, n, vec![m], vec![])
            }
        }
    }
}

fn unsupported(p: &Preset, reason: &str) -> GftError {
    GftError::UnsupportedSignature { preset: p.to_string(), reason: reason.into() }
}

/// Requires a pure bivector of G(4,0) squaring to -1.
pub fn check_unit_bivector(b: &Multivector) -> Result<()> {
    let g40 = Signature::euclidean(4)?;
    let reason = if b.sig() != g40 {
        Some(format!("bivector must live in {g40}, got {}", b.sig()))
    } else if !b.is_homogeneous(2) {
        Some(format!("'{b}' is not a pure bivector"))
    } else {
        let sq = b.gp(b);
        if sq.distance(&Multivector::scalar(g40, -1.0)) > 1e-9 {
            Some(format!("'{b}' squares to {sq}, not -1"))
        } else {
            None
        }
    };
    match reason {
        Some(r) => Err(GftError::UnsupportedSignature { preset: "color-image".into(), reason: r }),
        None => Ok(()),
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Clifford(n) | Preset::Buelow(n) | Preset::Cylindrical(n) => write!(f, "{}:{n}", self.name()),
            Preset::ColorImage(b) if *b == Preset::default_color_bivector() => f.write_str(self.name()),
            Preset::ColorImage(b) => write!(f, "{}:{b}", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

impl FromStr for Preset {
    type Err = GftError;

    /// `clifford:N`, `buelow:N`, `quaternionic`, `spacetime`,
    /// `color-image[:BIVECTOR]`, `cylindrical:N`. Parametrized presets
    /// default to `N = 2`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let dim = |arg: Option<&str>| -> Result<usize> {
            match arg {
                None => Ok(2),
                Some(a) => a.parse().map_err(|_| GftError::UnknownPreset(s.to_string())),
            }
        };
        let no_arg = |p: Preset| if arg.is_some() { Err(GftError::UnknownPreset(s.to_string())) } else { Ok(p) };
        match name {
            "clifford" => Ok(Preset::Clifford(dim(arg)?)),
            "buelow" | "bulow" | "sommen-buelow" => Ok(Preset::Buelow(dim(arg)?)),
            "cylindrical" => Ok(Preset::Cylindrical(dim(arg)?)),
            "quaternionic" => no_arg(Preset::Quaternionic),
            "spacetime" => no_arg(Preset::Spacetime),
            "color-image" | "color_image" => match arg {
                None => Ok(Preset::ColorImage(Preset::default_color_bivector())),
                Some(b) => Ok(Preset::ColorImage(Multivector::parse(Signature::euclidean(4)?, b)?)),
            },
            _ => Err(GftError::UnknownPreset(s.to_string())),
        }
    }
}

/// Builds the named preset.
pub fn preset(p: &Preset) -> Result<GftSpec> {
    p.build()
}

/// A kernel value that is neither zero nor a square root of -1.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub side: Side,
    pub index: usize,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub value: Multivector,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub samples_checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates every kernel at every sample and records values outside
/// `I^{p,q} ∪ {0}`.
pub fn validate_spec(spec: &GftSpec, samples: &[(Vec<f64>, Vec<f64>)]) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    for (x, u) in samples {
        for side in [Side::Left, Side::Right] {
            for (index, kernel) in spec.side(side).iter().enumerate() {
                let value = kernel.eval(x, u)?;
                if !value.is_imaginary_direction(1e-9) {
                    report.violations.push(Violation { side, index, x: x.clone(), u: u.clone(), value });
                }
            }
        }
        report.samples_checked += 1;
    }
    Ok(report)
}

/// How the kernel values on one side depend on `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Separability {
    /// Every kernel is a real function times a constant direction. The
    /// directions are unit-normalized; an all-zero kernel has direction 0.
    Constant(Vec<Multivector>),
    /// Every kernel factors as `(c.x) (r.u)`: the direction depends on `u`
    /// only. Separable, but the constant-direction machinery does not apply.
    UDependent,
    NotSeparable,
}

fn parallel(a: &Multivector, dir: &Multivector) -> bool {
    // dir is unit: a - (a.dir) dir is the part of a orthogonal to dir
    let proj = a.coeff_dot(dir);
    let resid = (a - &dir.scale(proj)).magnitude();
    resid <= 1e-10 * a.magnitude()
}

fn constant_direction(k: &KernelMatrix) -> Option<Multivector> {
    let mut dir: Option<Multivector> = None;
    for (_, _, v) in k.nonzero_entries() {
        match &dir {
            None => dir = Some(v.scale(1.0 / v.magnitude())),
            Some(d) => {
                if !parallel(v, d) {
                    return None;
                }
            }
        }
    }
    Some(dir.unwrap_or_else(|| Multivector::zero(k.sig())))
}

/// True if the matrix is `c r^T` for a real column `c` and a multivector row `r`.
fn is_rank_one(k: &KernelMatrix) -> bool {
    let m = k.dim();
    let rows: Vec<Vec<f64>> = (0..m).map(|r| (0..m).flat_map(|c| k.get(r, c).coeffs().to_vec()).collect()).collect();
    let pivot = match rows.iter().find(|r| r.iter().any(|&v| v != 0.0)) {
        Some(p) => p.clone(),
        None => return true,
    };
    let pnorm2: f64 = pivot.iter().map(|v| v * v).sum();
    rows.iter().all(|row| {
        let t: f64 = row.iter().zip(&pivot).map(|(a, b)| a * b).sum::<f64>() / pnorm2;
        let resid: f64 = row.iter().zip(&pivot).map(|(a, b)| (a - t * b).powi(2)).sum::<f64>().sqrt();
        let norm: f64 = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        resid <= 1e-10 * norm.max(f64::MIN_POSITIVE)
    })
}

pub fn separability(spec: &GftSpec, side: Side) -> Separability {
    let kernels = spec.side(side);
    let dirs: Option<Vec<Multivector>> = kernels.iter().map(constant_direction).collect();
    match dirs {
        Some(d) => Separability::Constant(d),
        None if kernels.iter().all(is_rank_one) => Separability::UDependent,
        None => Separability::NotSeparable,
    }
}

/// Structural separability: every kernel's nonzero entries are real
/// multiples of one common direction.
pub fn is_separable(spec: &GftSpec, side: Side) -> bool {
    matches!(separability(spec, side), Separability::Constant(_))
}

/// Constant kernel directions for one side.
pub fn directions(spec: &GftSpec, side: Side) -> Result<Vec<Multivector>> {
    match separability(spec, side) {
        Separability::Constant(d) => Ok(d),
        _ => Err(GftError::NotSeparable(side)),
    }
}
