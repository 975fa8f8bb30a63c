//! Sampled multivector fields and the discretized transform.
//!
//! The integral is replaced by a Riemann sum over grid nodes with weight
//! `prod_k dx_k`, so every pointwise identity of the continuous transform
//! holds exactly for the sums as well.

use rayon::prelude::*;

use crate::algebra::{Multivector, Signature};
use crate::error::{GftError, Result};
use crate::exponential::exp_imag_unchecked;
use crate::kernels::{GftSpec, KernelMatrix, Side};

/// Kernel values are accepted when their normalized direction squares to -1
/// within this tolerance.
pub const KERNEL_TOL: f64 = 1e-9;

/// A regular rectangular grid, nodes at `origin + idx * spacing`, stored
/// row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dims: Vec<usize>,
    origin: Vec<f64>,
    spacing: Vec<f64>,
}

/// Frequency grids share the layout of spatial grids.
pub type FreqGrid = Grid;

impl Grid {
    pub fn new(dims: Vec<usize>, origin: Vec<f64>, spacing: Vec<f64>) -> Result<Self> {
        let m = dims.len();
        if m == 0 {
            return Err(GftError::InvalidGrid("grid needs at least one axis".into()));
        }
        if origin.len() != m || spacing.len() != m {
            return Err(GftError::InvalidGrid(format!(
                "{m} extents but {} origin and {} spacing values",
                origin.len(),
                spacing.len()
            )));
        }
        if dims.contains(&0) {
            return Err(GftError::InvalidGrid(format!("extents must be at least 1, got {dims:?}")));
        }
        if dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).is_none() {
            return Err(GftError::InvalidGrid(format!("grid {dims:?} has too many nodes")));
        }
        if let Some(s) = spacing.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return Err(GftError::InvalidGrid(format!("spacing must be positive and finite, got {s}")));
        }
        if let Some(o) = origin.iter().find(|o| !o.is_finite()) {
            return Err(GftError::InvalidGrid(format!("origin must be finite, got {o}")));
        }
        Ok(Grid { dims, origin, spacing })
    }

    /// `n` nodes per axis with unit spacing, centered so that index `n/2` is
    /// the coordinate origin.
    pub fn centered(m: usize, n: usize) -> Result<Self> {
        Grid::new(vec![n; m], vec![-((n / 2) as f64); m], vec![1.0; m])
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadrature weight `prod_k dx_k`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for k in (0..self.dim()).rev() {
            idx[k] = flat % self.dims[k];
            flat /= self.dims[k];
        }
        idx
    }

    /// Row-major position of a multi-index, or `None` when out of range.
    pub fn flat_index(&self, idx: &[usize]) -> Option<usize> {
        if idx.len() != self.dim() {
            return None;
        }
        let mut flat = 0;
        for (k, &i) in idx.iter().enumerate() {
            if i >= self.dims[k] {
                return None;
            }
            flat = flat * self.dims[k] + i;
        }
        Some(flat)
    }

    /// Coordinates of node `flat`.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat).iter().enumerate().map(|(k, &i)| self.origin[k] + i as f64 * self.spacing[k]).collect()
    }

    /// All node coordinates in storage order.
    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }
}

/// Frequency grid for a field grid: `du_k = scale / (dims_k dx_k)`, with
/// `u = 0` at index `dims_k / 2` on every axis.
pub fn default_freqs(grid: &Grid, scale: f64) -> Result<FreqGrid> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(GftError::InvalidArgument(format!("frequency scale must be positive, got {scale}")));
    }
    let spacing: Vec<f64> = grid.dims.iter().zip(&grid.spacing).map(|(&n, &dx)| scale / (n as f64 * dx)).collect();
    let origin = grid.dims.iter().zip(&spacing).map(|(&n, &du)| -((n / 2) as f64) * du).collect();
    Grid::new(grid.dims.clone(), origin, spacing)
}

/// One multivector per grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    sig: Signature,
    grid: Grid,
    data: Vec<Multivector>,
}

/// Transform values on a frequency grid.
pub type Spectrum = SampledField;

impl SampledField {
    pub fn new(sig: Signature, grid: Grid, data: Vec<Multivector>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(GftError::LengthMismatch { expected: grid.len(), got: data.len() });
        }
        if let Some(bad) = data.iter().find(|v| v.sig() != sig) {
            return Err(GftError::SignatureMismatch { left: sig, right: bad.sig() });
        }
        Ok(SampledField { sig, grid, data })
    }

    pub fn zeros(sig: Signature, grid: Grid) -> Self {
        let data = vec![Multivector::zero(sig); grid.len()];
        SampledField { sig, grid, data }
    }

    /// Samples `f` at every node.
    pub fn from_fn(sig: Signature, grid: Grid, mut f: impl FnMut(&[f64]) -> Multivector) -> Result<Self> {
        let data = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
        SampledField::new(sig, grid, data)
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn data(&self) -> &[Multivector] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Multivector] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Multivector> {
        self.data
    }

    /// Value at a multi-index.
    pub fn at(&self, idx: &[usize]) -> Option<&Multivector> {
        self.grid.flat_index(idx).map(|i| &self.data[i])
    }

    /// Node-wise map, keeping grid and signature.
    pub fn map(&self, f: impl Fn(&Multivector) -> Multivector) -> Result<Self> {
        SampledField::new(self.sig, self.grid.clone(), self.data.iter().map(f).collect())
    }

    /// Node-wise linear combination `b self + c other` on a shared grid.
    pub fn combine(&self, b: f64, other: &SampledField, c: f64) -> Result<Self> {
        self.check_compatible(other)?;
        let data = self.data.iter().zip(&other.data).map(|(x, y)| &x.scale(b) + &y.scale(c)).collect();
        SampledField::new(self.sig, self.grid.clone(), data)
    }

    pub fn check_compatible(&self, other: &SampledField) -> Result<()> {
        if self.sig != other.sig {
            return Err(GftError::SignatureMismatch { left: self.sig, right: other.sig });
        }
        if self.grid != other.grid {
            return Err(GftError::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }

    /// Largest node-wise distance to `other`.
    pub fn max_distance(&self, other: &SampledField) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a.distance(b)).fold(0.0, f64::max))
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(Multivector::magnitude).fold(0.0, f64::max)
    }

    /// Quadrature of `|A|`: `sum_x |A(x)| prod dx`.
    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(Multivector::magnitude).sum::<f64>() * self.grid.cell_volume()
    }
}

/// Product `prod_l e^{-f_l(x,u)}` over one kernel list, validating each
/// kernel value on the way.
fn exponential_product(
    side: Side,
    kernels: &[KernelMatrix],
    x: &[f64],
    u: &[f64],
    scratch: &mut Multivector,
) -> Result<Option<Multivector>> {
    let mut acc: Option<Multivector> = None;
    for (index, k) in kernels.iter().enumerate() {
        k.eval_into(x, u, scratch);
        if scratch.is_zero() {
            continue;
        }
        if !scratch.is_imaginary_direction(KERNEL_TOL) {
            return Err(GftError::KernelNotImaginary {
                side,
                index,
                x: x.to_vec(),
                u: u.to_vec(),
                value: scratch.to_string(),
            });
        }
        let e = exp_imag_unchecked(scratch);
        acc = Some(match acc {
            None => e,
            Some(a) => a.gp(&e),
        });
    }
    Ok(acc)
}

fn check_inputs(spec: &GftSpec, field: &SampledField) -> Result<()> {
    if spec.sig() != field.sig() {
        return Err(GftError::SignatureMismatch { left: spec.sig(), right: field.sig() });
    }
    if spec.dim() != field.dim() {
        return Err(GftError::DimensionMismatch { expected: spec.dim(), got: field.dim() });
    }
    Ok(())
}

/// Transform value at one frequency, summing the given nonzero nodes in order.
fn gft_single(spec: &GftSpec, nodes: &[(Vec<f64>, &Multivector)], volume: f64, u: &[f64]) -> Result<Multivector> {
    let sig = spec.sig();
    let mut acc = Multivector::zero(sig);
    let mut scratch = Multivector::zero(sig);
    for (x, a) in nodes {
        let left = exponential_product(Side::Left, spec.left(), x, u, &mut scratch)?;
        let right = exponential_product(Side::Right, spec.right(), x, u, &mut scratch)?;
        let term = match (left, right) {
            (None, None) => (*a).clone(),
            (Some(l), None) => l.gp(a),
            (None, Some(r)) => a.gp(&r),
            (Some(l), Some(r)) => l.gp(a).gp(&r),
        };
        acc += &term;
    }
    Ok(acc.scale(volume))
}

/// Transform of `field` evaluated at arbitrary frequency points.
///
/// Frequencies are processed in parallel; the spatial sum for each one runs
/// sequentially in storage order, so results do not depend on the thread
/// count.
pub fn gft_at(spec: &GftSpec, field: &SampledField, freqs: &[Vec<f64>]) -> Result<Vec<Multivector>> {
    check_inputs(spec, field)?;
    if let Some(u) = freqs.iter().find(|u| u.len() != spec.dim()) {
        return Err(GftError::DimensionMismatch { expected: spec.dim(), got: u.len() });
    }
    let grid = field.grid();
    let nodes: Vec<(Vec<f64>, &Multivector)> =
        field.data().iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(i, a)| (grid.point(i), a)).collect();
    let volume = grid.cell_volume();
    freqs.par_iter().map(|u| gft_single(spec, &nodes, volume, u)).collect()
}

/// Transform of `field` on a frequency grid.
pub fn gft(spec: &GftSpec, field: &SampledField, freqs: &FreqGrid) -> Result<Spectrum> {
    check_inputs(spec, field)?;
    if freqs.dim() != spec.dim() {
        return Err(GftError::DimensionMismatch { expected: spec.dim(), got: freqs.dim() });
    }
    let values = gft_at(spec, field, &freqs.points())?;
    SampledField::new(spec.sig(), freqs.clone(), values)
}

/// Reference complex DFT used to cross-check the transform.
pub mod oracle {
    use std::f64::consts::PI;

    use num_complex::Complex64;

    use super::Grid;
    use crate::error::{GftError, Result};

    /// Direct sum `sum_x e^{-2 pi i x.u} c(x) prod dx` over a sampled
    /// complex field, one value per frequency node.
    pub fn dft_complex_oracle(values: &[Complex64], grid: &Grid, freqs: &Grid) -> Result<Vec<Complex64>> {
        if values.len() != grid.len() {
            return Err(GftError::LengthMismatch { expected: grid.len(), got: values.len() });
        }
        if grid.dim() != freqs.dim() {
            return Err(GftError::DimensionMismatch { expected: grid.dim(), got: freqs.dim() });
        }
        let xs = grid.points();
        let volume = grid.cell_volume();
        Ok(freqs
            .points()
            .iter()
            .map(|u| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (x, c) in xs.iter().zip(values) {
                    let phase: f64 = x.iter().zip(u).map(|(a, b)| a * b).sum();
                    acc += Complex64::from_polar(1.0, -2.0 * PI * phase) * c;
                }
                acc * volume
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BladeIndex;
    use crate::kernels::Preset;

    #[test]
    fn grid_indexing() {
        let g = Grid::new(vec![2, 3], vec![-1.0, 0.5], vec![0.5, 2.0]).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.multi_index(4), vec![1, 1]);
        assert_eq!(g.flat_index(&[1, 1]), Some(4));
        assert_eq!(g.flat_index(&[2, 0]), None);
        assert_eq!(g.point(5), vec![-0.5, 4.5]);
        assert_eq!(g.cell_volume(), 1.0);
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(vec![], vec![], vec![]).is_err());
        assert!(Grid::new(vec![2], vec![0.0], vec![0.0]).is_err());
        assert!(Grid::new(vec![2], vec![0.0], vec![-1.0]).is_err());
        assert!(Grid::new(vec![0], vec![0.0], vec![1.0]).is_err());
        assert!(Grid::new(vec![2, 2], vec![0.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn default_frequency_grids() {
        let g = Grid::new(vec![8, 8], vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let f = default_freqs(&g, 1.0).unwrap();
        assert_eq!(f.spacing(), &[0.125, 0.125]);
        assert_eq!(f.point(f.flat_index(&[4, 4]).unwrap()), vec![0.0, 0.0]);

        let g = Grid::new(vec![5], vec![0.0], vec![0.5]).unwrap();
        let f = default_freqs(&g, 1.0).unwrap();
        assert!((f.spacing()[0] - 0.4).abs() < 1e-15);
        assert_eq!(f.point(2), vec![0.0]);
        assert!(default_freqs(&g, 0.0).is_err());
    }

    #[test]
    fn zero_and_constant_fields() {
        let spec = Preset::Quaternionic.build().unwrap();
        let grid = Grid::new(vec![3, 4], vec![-1.0, -2.0], vec![0.5, 0.25]).unwrap();
        let freqs = default_freqs(&grid, 1.0).unwrap();
        let zero = SampledField::zeros(spec.sig(), grid.clone());
        assert!(gft(&spec, &zero, &freqs).unwrap().data().iter().all(Multivector::is_zero));

        let a0 = Multivector::parse(spec.sig(), "1 - 2*e1 + 0.5*e12").unwrap();
        let field = SampledField::from_fn(spec.sig(), grid.clone(), |_| a0.clone()).unwrap();
        let at_zero = gft_at(&spec, &field, &[vec![0.0, 0.0]]).unwrap();
        let expected = a0.scale(grid.cell_volume() * 12.0);
        assert!(at_zero[0].distance(&expected) < 1e-14);
    }

    #[test]
    fn rejects_mismatched_inputs() {
        let spec = Preset::Clifford(2).build().unwrap();
        let grid = Grid::centered(3, 2).unwrap();
        let field = SampledField::zeros(spec.sig(), grid.clone());
        assert!(matches!(gft(&spec, &field, &grid), Err(GftError::DimensionMismatch { .. })));
        let other = SampledField::zeros(Signature::new(0, 2).unwrap(), Grid::centered(2, 2).unwrap());
        assert!(matches!(gft_at(&spec, &other, &[vec![0.0, 0.0]]), Err(GftError::SignatureMismatch { .. })));
    }

    #[test]
    fn invalid_kernel_is_reported_with_location() {
        let s = Signature::new(2, 0).unwrap();
        let mut k = KernelMatrix::zero(s, 1);
        k.set(0, 0, Multivector::basis_vector(s, 1));
        let spec = GftSpec::new(s, 1, vec![], vec![k]).unwrap();
        let grid = Grid::new(vec![2], vec![0.0], vec![1.0]).unwrap();
        let field = SampledField::from_fn(s, grid, |_| Multivector::one(s)).unwrap();
        // u = 0 makes every kernel value vanish
        assert!(gft_at(&spec, &field, &[vec![0.0]]).is_ok());
        match gft_at(&spec, &field, &[vec![0.5]]) {
            Err(GftError::KernelNotImaginary { side: Side::Right, index: 0, x, u, .. }) => {
                assert_eq!(x, vec![1.0]);
                assert_eq!(u, vec![0.5]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_node_kernel_product_order() {
        // one node at x = (1, 1): spectrum = e^{-2 pi e1 u1} A e^{-2 pi e2 u2}
        let spec = Preset::Quaternionic.build().unwrap();
        let s = spec.sig();
        let grid = Grid::new(vec![1, 1], vec![1.0, 1.0], vec![1.0, 1.0]).unwrap();
        let a = Multivector::parse(s, "0.3 + e2 - 2*e12").unwrap();
        let field = SampledField::new(s, grid, vec![a.clone()]).unwrap();
        let u = vec![0.1, 0.35];
        let got = gft_at(&spec, &field, std::slice::from_ref(&u)).unwrap().remove(0);

        let rot = |blade: usize, t: f64| {
            let mut m = Multivector::scalar(s, t.cos());
            m.set(BladeIndex::vector(blade), -t.sin());
            m
        };
        let two_pi = 2.0 * std::f64::consts::PI;
        let expected = rot(1, two_pi * u[0]).gp(&a).gp(&rot(2, two_pi * u[1]));
        assert!(got.distance(&expected) < 1e-14);
    }

    #[test]
    fn oracle_basics() {
        use num_complex::Complex64;
        let grid = Grid::new(vec![3, 3], vec![-1.0, -1.0], vec![0.5, 0.5]).unwrap();
        let freqs = default_freqs(&grid, 1.0).unwrap();
        let mut delta = vec![Complex64::new(0.0, 0.0); 9];
        delta[4] = Complex64::new(1.0, 0.0);
        // node 4 sits at (-0.5, -0.5), so the phase varies with u
        let out = oracle::dft_complex_oracle(&delta, &grid, &freqs).unwrap();
        assert!(out.iter().all(|c| (c.norm() - 0.25).abs() < 1e-15));

        let origin_grid = Grid::new(vec![3], vec![-2.0], vec![2.0]).unwrap();
        let mut delta = vec![Complex64::new(0.0, 0.0); 3];
        delta[1] = Complex64::new(1.0, 0.0);
        let out = oracle::dft_complex_oracle(&delta, &origin_grid, &default_freqs(&origin_grid, 1.0).unwrap()).unwrap();
        assert!(out.iter().all(|c| (c - Complex64::new(2.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let spec = Preset::ColorImage(Preset::default_color_bivector()).build().unwrap();
        let s = spec.sig();
        let grid = Grid::centered(2, 6).unwrap();
        let field = SampledField::from_fn(s, grid.clone(), |x| {
            Multivector::from_coeffs(s, (0..16).map(|k| (x[0] * 1.3 + x[1] * 0.7 + k as f64).sin()).collect()).unwrap()
        })
        .unwrap();
        let freqs = default_freqs(&grid, 1.0).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| gft(&spec, &field, &freqs).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
