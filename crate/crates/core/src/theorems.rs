//! Numeric checks of the transform's calculation rules.
//!
//! Each check computes both sides of an identity independently on sampled
//! data and reports the largest node-wise difference. Both sides are exact
//! for the discrete sums, so residuals sit at rounding level.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Multivector, Signature, STRUCTURAL_TOL};
use crate::commsplit::{
    shift_exponential_terms_with, split_multi, Direction, Orientation, ShiftTerm, SplitIndex, TriangularSignMatrix,
};
use crate::error::{GftError, Result};
use crate::exponential::exp_imag;
use crate::kernels::{directions, GftSpec, Preset, Side};
use crate::transform::{default_freqs, gft, gft_at, FreqGrid, Grid, SampledField};

/// Default tolerance for linearity.
pub const LINEARITY_TOL: f64 = 1e-12;
/// Default tolerance for every other check.
pub const THEOREM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pass,
    Fail,
    Skip(String),
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => f.write_str("PASS"),
            Status::Fail => f.write_str("FAIL"),
            Status::Skip(reason) => write!(f, "SKIP({reason})"),
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub name: String,
    /// Largest magnitude of the left-hand side over the frequency nodes.
    pub lhs_norm: f64,
    pub rhs_norm: f64,
    /// Largest magnitude of `lhs - rhs` over the frequency nodes.
    pub residual: f64,
    /// `tol * max(1, lhs_norm)`; the check passes iff `residual <= bound`.
    pub bound: f64,
    pub status: Status,
    /// Largest number of nonzero summands on the right-hand side.
    pub terms: Option<usize>,
}

impl TheoremReport {
    fn judge(name: impl Into<String>, lhs_norm: f64, rhs_norm: f64, residual: f64, tol: f64) -> Self {
        let bound = tol * lhs_norm.max(1.0);
        let status = if residual <= bound { Status::Pass } else { Status::Fail };
        TheoremReport { name: name.into(), lhs_norm, rhs_norm, residual, bound, status, terms: None }
    }

    /// Compares two value lists node by node.
    pub fn compare(name: impl Into<String>, lhs: &[Multivector], rhs: &[Multivector], tol: f64) -> Self {
        assert_eq!(lhs.len(), rhs.len(), "both sides need one value per frequency");
        let max_mag = |v: &[Multivector]| v.iter().map(Multivector::magnitude).fold(0.0, f64::max);
        let residual = lhs.iter().zip(rhs).map(|(a, b)| a.distance(b)).fold(0.0, f64::max);
        Self::judge(name, max_mag(lhs), max_mag(rhs), residual, tol)
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        TheoremReport {
            name: name.into(),
            lhs_norm: 0.0,
            rhs_norm: 0.0,
            residual: 0.0,
            bound: 0.0,
            status: Status::Skip(reason.into()),
            terms: None,
        }
    }

    fn with_terms(mut self, terms: usize) -> Self {
        self.terms = Some(terms);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "THEOREM {} residual={:e} bound={:e} {}", self.name, self.residual, self.bound, self.status)
    }
}

/// The fields of a serialized report line.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportLine {
    pub name: String,
    pub residual: f64,
    pub bound: f64,
    pub status: Status,
}

impl FromStr for ReportLine {
    type Err = GftError;

    fn from_str(line: &str) -> Result<Self> {
        let bad = |reason: &str| GftError::Parse { input: line.to_string(), reason: reason.into() };
        let rest = line.trim().strip_prefix("THEOREM ").ok_or_else(|| bad("missing 'THEOREM' prefix"))?;
        let mut parts = rest.splitn(4, ' ');
        let name = parts.next().filter(|s| !s.is_empty()).ok_or_else(|| bad("missing name"))?;
        let mut number = |key: &str| -> Result<f64> {
            parts
                .next()
                .and_then(|p| p.strip_prefix(key))
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| bad(&format!("missing or bad '{key}' field")))
        };
        let residual = number("residual=")?;
        let bound = number("bound=")?;
        let status = match parts.next() {
            Some("PASS") => Status::Pass,
            Some("FAIL") => Status::Fail,
            Some(s) if s.starts_with("SKIP(") && s.ends_with(')') => Status::Skip(s[5..s.len() - 1].to_string()),
            _ => return Err(bad("status must be PASS, FAIL or SKIP(reason)")),
        };
        Ok(ReportLine { name: name.to_string(), residual, bound, status })
    }
}

/// `F(bB + cC) = b F(B) + c F(C)`.
pub fn check_linearity(
    spec: &GftSpec,
    b_field: &SampledField,
    c_field: &SampledField,
    b: f64,
    c: f64,
    freqs: &FreqGrid,
    tol: f64,
) -> Result<TheoremReport> {
    let combined = b_field.combine(b, c_field, c)?;
    let lhs = gft(spec, &combined, freqs)?;
    let fb = gft(spec, b_field, freqs)?;
    let fc = gft(spec, c_field, freqs)?;
    let rhs = fb.combine(b, &fc, c)?;
    Ok(TheoremReport::compare("linearity", lhs.data(), rhs.data(), tol))
}

/// Scale factors whose resampled grids coincide with the original nodes.
pub const ALIGNED_SCALES: [f64; 6] = [1.0, -1.0, 2.0, -2.0, 0.5, -0.5];

/// `A(x) = B(a x)` sampled exactly: the node `x_k` of `B` becomes the node
/// `x_k / a` of `A`, with axes reversed when `a < 0`.
pub fn rescaled_field(b: &SampledField, a: f64) -> Result<SampledField> {
    if !ALIGNED_SCALES.contains(&a) {
        return Err(GftError::MisalignedScale(a));
    }
    let g = b.grid();
    let origin = g
        .dims()
        .iter()
        .zip(g.origin().iter().zip(g.spacing()))
        .map(|(&n, (&o, &dx))| if a > 0.0 { o / a } else { (o + (n - 1) as f64 * dx) / a })
        .collect();
    let spacing = g.spacing().iter().map(|dx| dx / a.abs()).collect();
    let grid = Grid::new(g.dims().to_vec(), origin, spacing)?;
    let data = (0..grid.len())
        .map(|i| {
            let mut idx = grid.multi_index(i);
            if a < 0.0 {
                for (k, v) in idx.iter_mut().enumerate() {
                    *v = g.dims()[k] - 1 - *v;
                }
            }
            b.at(&idx).expect("index in range").clone()
        })
        .collect();
    SampledField::new(b.sig(), grid, data)
}

/// `F(A)(u) = |a|^{-m} F(B)(u / a)` for `A(x) = B(a x)`.
pub fn check_scaling(spec: &GftSpec, b: &SampledField, a: f64, freqs: &FreqGrid, tol: f64) -> Result<TheoremReport> {
    let a_field = rescaled_field(b, a)?;
    let lhs = gft(spec, &a_field, freqs)?;
    let scaled: Vec<Vec<f64>> = freqs.points().into_iter().map(|u| u.iter().map(|v| v / a).collect()).collect();
    let weight = a.abs().powi(-(spec.dim() as i32));
    let rhs: Vec<Multivector> = gft_at(spec, b, &scaled)?.into_iter().map(|v| v.scale(weight)).collect();
    Ok(TheoremReport::compare(format!("scaling[a={a}]"), lhs.data(), &rhs, tol))
}

/// Spectra of `B` under sign-flipped kernel sets, computed on demand.
struct NegatedSpectra<'a> {
    spec: &'a GftSpec,
    field: &'a SampledField,
    freqs: &'a FreqGrid,
    cache: HashMap<(u32, u32), Vec<Multivector>>,
}

impl<'a> NegatedSpectra<'a> {
    fn new(spec: &'a GftSpec, field: &'a SampledField, freqs: &'a FreqGrid) -> Self {
        NegatedSpectra { spec, field, freqs, cache: HashMap::new() }
    }

    fn get(&mut self, j: SplitIndex, k: SplitIndex) -> Result<&[Multivector]> {
        let key = (j.mask(), k.mask());
        if !self.cache.contains_key(&key) {
            let negated = self.spec.negate(j, k)?;
            let values = gft(&negated, self.field, self.freqs)?.into_data();
            self.cache.insert(key, values);
        }
        Ok(&self.cache[&key])
    }
}

fn product_field(b: &SampledField, c: &Multivector, side: Side) -> Result<SampledField> {
    if c.sig() != b.sig() {
        return Err(GftError::SignatureMismatch { left: b.sig(), right: c.sig() });
    }
    b.map(|v| match side {
        Side::Left => c.gp(v),
        Side::Right => v.gp(c),
    })
}

fn negligible(v: &Multivector, reference: &Multivector) -> bool {
    v.magnitude() <= STRUCTURAL_TOL * reference.magnitude().max(1.0)
}

/// `F(CB)(u) = sum_j C_{c^j(<- F1)} F_{F1(j),F2}(B)(u)` for a left separable
/// transform.
pub fn check_left_product(
    spec: &GftSpec,
    c: &Multivector,
    b: &SampledField,
    freqs: &FreqGrid,
    tol: f64,
) -> Result<TheoremReport> {
    let dirs = directions(spec, Side::Left)?;
    let lhs = gft(spec, &product_field(b, c, Side::Left)?, freqs)?;
    let comps = split_multi(c, &dirs, Direction::Backward)?;
    let mut spectra = NegatedSpectra::new(spec, b, freqs);
    let mut rhs = vec![Multivector::zero(spec.sig()); freqs.len()];
    let mut terms = 0;
    for (j, cj) in comps.iter() {
        if negligible(cj, c) {
            continue;
        }
        terms += 1;
        let values = spectra.get(j, SplitIndex::zeros(spec.right().len()))?;
        for (acc, v) in rhs.iter_mut().zip(values) {
            *acc += &cj.gp(v);
        }
    }
    Ok(TheoremReport::compare("left-product", lhs.data(), &rhs, tol).with_terms(terms))
}

/// `F(BC)(u) = sum_k F_{F1,F2(k)}(B)(u) C_{c^k(-> F2)}` for a right
/// separable transform.
pub fn check_right_product(
    spec: &GftSpec,
    c: &Multivector,
    b: &SampledField,
    freqs: &FreqGrid,
    tol: f64,
) -> Result<TheoremReport> {
    let dirs = directions(spec, Side::Right)?;
    let lhs = gft(spec, &product_field(b, c, Side::Right)?, freqs)?;
    let comps = split_multi(c, &dirs, Direction::Forward)?;
    let mut spectra = NegatedSpectra::new(spec, b, freqs);
    let mut rhs = vec![Multivector::zero(spec.sig()); freqs.len()];
    let mut terms = 0;
    for (k, ck) in comps.iter() {
        if negligible(ck, c) {
            continue;
        }
        terms += 1;
        let values = spectra.get(SplitIndex::zeros(spec.mu()), k)?;
        for (acc, v) in rhs.iter_mut().zip(values) {
            *acc += &v.gp(ck);
        }
    }
    Ok(TheoremReport::compare("right-product", lhs.data(), &rhs, tol).with_terms(terms))
}

/// `A(x) = B(x - x0)` on the grid of `B`.
///
/// `x0` must be a whole number of grid steps on every axis, and no nonzero
/// sample of `B` may leave the grid.
pub fn shifted_field(b: &SampledField, x0: &[f64]) -> Result<SampledField> {
    let g = b.grid();
    if x0.len() != g.dim() {
        return Err(GftError::DimensionMismatch { expected: g.dim(), got: x0.len() });
    }
    let off_grid = || GftError::OffGridShift { x0: x0.to_vec() };
    let mut steps = Vec::with_capacity(x0.len());
    for (v, dx) in x0.iter().zip(g.spacing()) {
        let s = v / dx;
        if !s.is_finite() || (s - s.round()).abs() > 1e-9 {
            return Err(off_grid());
        }
        steps.push(s.round() as i64);
    }
    let mut data = vec![Multivector::zero(b.sig()); g.len()];
    for (i, v) in b.data().iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let target: Option<Vec<usize>> =
            g.multi_index(i).iter().zip(&steps).map(|(&k, &s)| usize::try_from(k as i64 + s).ok()).collect();
        let flat = target.and_then(|t| g.flat_index(&t)).ok_or_else(off_grid)?;
        data[flat] = v.clone();
    }
    SampledField::new(b.sig(), g.clone(), data)
}

fn side_terms(
    sig: Signature,
    exponents: &[Multivector],
    dirs: &[Multivector],
    orientation: Orientation,
) -> Result<Vec<ShiftTerm>> {
    if exponents.is_empty() {
        // an empty side contributes the single term 1
        return Ok(vec![ShiftTerm {
            matrix: TriangularSignMatrix::all(0, orientation).remove(0),
            signs: SplitIndex::zeros(0),
            factor: Multivector::one(sig),
        }]);
    }
    shift_exponential_terms_with(exponents, dirs, orientation)
}

fn mutually_commuting(dirs: &[Multivector]) -> bool {
    dirs.iter().enumerate().all(|(a, da)| dirs[a + 1..].iter().all(|db| da.commutes_with(db, STRUCTURAL_TOL)))
}

/// Largest number of right-hand-side terms the shift rule can produce:
/// one per pair of strictly lower and strictly upper triangular matrices.
pub fn shift_term_limit(mu: usize, nu: usize) -> usize {
    let tri = |d: usize| 1usize << (d * d.saturating_sub(1) / 2);
    tri(mu) * tri(nu - mu)
}

/// Shift rule: `F(A)(u)` for `A(x) = B(x - x0)` as the sum over sign
/// vectors and triangular matrices of
/// `[prod_l e^{-f_l(x0,u)}]_J F_{F1(j),F2(k)}(B)(u) [prod_l e^{-f_l(x0,u)}]_K`.
///
/// When the left kernels commute among themselves and so do the right ones,
/// the sum collapses to `prod e^{-f_l(x0,u)} F(B)(u) prod e^{-f_l(x0,u)}`;
/// that form is checked too and the report carries the larger residual.
pub fn check_shift(spec: &GftSpec, b: &SampledField, x0: &[f64], freqs: &FreqGrid, tol: f64) -> Result<TheoremReport> {
    let left_dirs = directions(spec, Side::Left)?;
    let right_dirs = directions(spec, Side::Right)?;
    let a_field = shifted_field(b, x0)?;
    let lhs = gft(spec, &a_field, freqs)?;
    let sig = spec.sig();

    let mut spectra = NegatedSpectra::new(spec, b, freqs);
    let mut rhs = Vec::with_capacity(freqs.len());
    let mut terms = 0;
    for (node, u) in freqs.points().iter().enumerate() {
        let left_exp = spec.eval_side(Side::Left, x0, u)?;
        let right_exp = spec.eval_side(Side::Right, x0, u)?;
        let lt = side_terms(sig, &left_exp, &left_dirs, Orientation::Lower)?;
        let rt = side_terms(sig, &right_exp, &right_dirs, Orientation::Upper)?;
        terms = terms.max(lt.len() * rt.len());
        let mut acc = Multivector::zero(sig);
        for l in &lt {
            for r in &rt {
                let fb = &spectra.get(l.signs, r.signs)?[node];
                acc += &l.factor.gp(fb).gp(&r.factor);
            }
        }
        rhs.push(acc);
    }
    let full = TheoremReport::compare("shift", lhs.data(), &rhs, tol).with_terms(terms);

    if !(mutually_commuting(&left_dirs) && mutually_commuting(&right_dirs)) {
        return Ok(full);
    }
    let plain = spectra.get(SplitIndex::zeros(spec.mu()), SplitIndex::zeros(spec.right().len()))?.to_vec();
    let mut collapsed = Vec::with_capacity(freqs.len());
    for (u, fb) in freqs.points().iter().zip(&plain) {
        let mut v = fb.clone();
        for f in spec.eval_side(Side::Left, x0, u)?.iter().rev() {
            v = exp_imag(f, STRUCTURAL_TOL)?.gp(&v);
        }
        for f in &spec.eval_side(Side::Right, x0, u)? {
            v = v.gp(&exp_imag(f, STRUCTURAL_TOL)?);
        }
        collapsed.push(v);
    }
    let short = TheoremReport::compare("shift", lhs.data(), &collapsed, tol);
    Ok(if short.residual > full.residual { short.with_terms(terms) } else { full })
}

/// `|F(B)(u)| <= 2^nu sum_x |B(x)| dV` at every frequency node.
pub fn check_existence_bound(spec: &GftSpec, b: &SampledField, freqs: &FreqGrid, tol: f64) -> Result<TheoremReport> {
    let spectrum = gft(spec, b, freqs)?;
    let peak = spectrum.max_magnitude();
    let limit = 2f64.powi(spec.nu() as i32) * b.l1_norm();
    Ok(TheoremReport::judge("existence", peak, limit, (peak - limit).max(0.0), tol))
}

/// The checks run by [`run_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    Linearity,
    Scaling,
    LeftProduct,
    RightProduct,
    Shift,
    Existence,
}

impl Theorem {
    pub const ALL: [Theorem; 6] = [
        Theorem::Linearity,
        Theorem::Scaling,
        Theorem::LeftProduct,
        Theorem::RightProduct,
        Theorem::Shift,
        Theorem::Existence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Linearity => "linearity",
            Theorem::Scaling => "scaling",
            Theorem::LeftProduct => "left-product",
            Theorem::RightProduct => "right-product",
            Theorem::Shift => "shift",
            Theorem::Existence => "existence",
        }
    }

    pub fn default_tol(self) -> f64 {
        match self {
            Theorem::Linearity => LINEARITY_TOL,
            _ => THEOREM_TOL,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = GftError;
    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| GftError::InvalidArgument(format!("unknown theorem '{s}'")))
    }
}

/// Random data settings for [`run_suite`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Nodes per axis; transforms with four or more axes use at most 4.
    pub size: usize,
    /// Overrides every check's default tolerance.
    pub tol: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, size: 8, tol: None }
    }
}

/// Scale factors exercised by the suite.
pub const SUITE_SCALES: [f64; 3] = [-1.0, 2.0, 0.5];

/// Presets covered by `--preset all`.
pub fn suite_presets() -> Vec<Preset> {
    vec![
        Preset::Clifford(2),
        Preset::Clifford(3),
        Preset::Buelow(2),
        Preset::Buelow(3),
        Preset::Quaternionic,
        Preset::Spacetime,
        Preset::ColorImage(Preset::default_color_bivector()),
        Preset::Cylindrical(2),
        Preset::Cylindrical(3),
    ]
}

pub fn random_multivector(sig: Signature, rng: &mut impl Rng) -> Multivector {
    let coeffs = (0..sig.blade_count()).map(|_| rng.random_range(-1.0..1.0)).collect();
    Multivector::from_coeffs(sig, coeffs).expect("coefficient count matches")
}

/// Random field that vanishes outside the inner index range
/// `[n/4, n - n/4)` on every axis, leaving room for shifts of up to `n/4`
/// steps.
pub fn random_supported_field(sig: Signature, grid: &Grid, rng: &mut impl Rng) -> SampledField {
    let data = (0..grid.len())
        .map(|i| {
            let inside = grid.multi_index(i).iter().zip(grid.dims()).all(|(&k, &n)| k >= n / 4 && k < n - n / 4);
            if inside {
                random_multivector(sig, rng)
            } else {
                Multivector::zero(sig)
            }
        })
        .collect();
    SampledField::new(sig, grid.clone(), data).expect("data matches grid")
}

fn skip_reason(err: &GftError) -> Option<String> {
    match err {
        GftError::NotSeparable(side) => Some(format!("{side} kernels not separable")),
        _ => None,
    }
}

/// Runs the selected checks on random data for one preset.
///
/// Checks whose preconditions fail for the preset (non-separable kernels)
/// are reported as skipped; other errors are returned.
pub fn run_suite(preset: &Preset, theorems: &[Theorem], cfg: &SuiteConfig) -> Result<Vec<TheoremReport>> {
    let spec = preset.build()?;
    let m = spec.dim();
    let n = if m >= 4 { cfg.size.min(4) } else { cfg.size };
    if n < 2 {
        return Err(GftError::InvalidArgument(format!("suite grids need at least 2 nodes per axis, got {n}")));
    }
    let grid = Grid::centered(m, n)?;
    let freqs = default_freqs(&grid, 1.0)?;
    let sig = spec.sig();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let b = random_supported_field(sig, &grid, &mut rng);

    let mut reports = Vec::new();
    for &theorem in theorems {
        let tol = cfg.tol.unwrap_or(theorem.default_tol());
        let outcome: Result<Vec<TheoremReport>> = match theorem {
            Theorem::Linearity => {
                let c = random_supported_field(sig, &grid, &mut rng);
                let (x, y) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
                check_linearity(&spec, &b, &c, x, y, &freqs, tol).map(|r| vec![r])
            }
            Theorem::Scaling => SUITE_SCALES.iter().map(|&a| check_scaling(&spec, &b, a, &freqs, tol)).collect(),
            Theorem::LeftProduct => {
                let c = random_multivector(sig, &mut rng);
                check_left_product(&spec, &c, &b, &freqs, tol).map(|r| vec![r])
            }
            Theorem::RightProduct => {
                let c = random_multivector(sig, &mut rng);
                check_right_product(&spec, &c, &b, &freqs, tol).map(|r| vec![r])
            }
            Theorem::Shift => {
                let reach = (n / 4).max(1) as i64;
                let x0: Vec<f64> = (0..m)
                    .map(|_| {
                        let s = rng.random_range(1..=reach);
                        (if rng.random_bool(0.5) { -s } else { s }) as f64
                    })
                    .collect();
                check_shift(&spec, &b, &x0, &freqs, tol).map(|r| vec![r])
            }
            Theorem::Existence => check_existence_bound(&spec, &b, &freqs, tol).map(|r| vec![r]),
        };
        match outcome {
            Ok(rs) => reports.extend(rs),
            Err(e) => match skip_reason(&e) {
                Some(reason) => reports.push(TheoremReport::skipped(theorem.name(), reason)),
                None => return Err(e),
            },
        }
    }
    Ok(reports)
}
