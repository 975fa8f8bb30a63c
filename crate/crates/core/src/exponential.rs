//! Multivector exponentials.
//!
//! [`exp_series`] sums the power series for any multivector. [`exp_imag`]
//! evaluates `e^{-f}` in closed form for `f` zero or a real multiple of a
//! square root of -1, where `f^2 = -r^2` gives `e^{-f} = cos r - (f/r) sin r`.

use crate::algebra::Multivector;
use crate::error::{GftError, Result};

/// Truncation control for [`exp_series`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpOptions {
    /// Summation stops after the first term with magnitude below this.
    pub tol: f64,
    pub max_terms: usize,
}

impl ExpOptions {
    pub fn new(tol: f64, max_terms: usize) -> Result<Self> {
        if tol.is_nan() || tol <= 0.0 || max_terms == 0 {
            return Err(GftError::InvalidArgument(format!(
                "exp options need tol > 0 and max_terms >= 1 (got {tol}, {max_terms})"
            )));
        }
        Ok(ExpOptions { tol, max_terms })
    }
}

impl Default for ExpOptions {
    fn default() -> Self {
        ExpOptions { tol: 1e-18, max_terms: 500 }
    }
}

/// Below this `r`, `f/r` is numerically meaningless and `e^{-f} = 1 - f`
/// to first order.
const SMALL_ROOT: f64 = 1e-14;

/// Power series `sum_j A^j / j!`, summed in ascending `j`.
pub fn exp_series(a: &Multivector, opts: ExpOptions) -> Result<Multivector> {
    let mut sum = Multivector::one(a.sig());
    let mut term = Multivector::one(a.sig());
    for j in 1..=opts.max_terms {
        term = term.gp(a).scale(1.0 / j as f64);
        sum += &term;
        let mag = term.magnitude();
        if mag < opts.tol {
            return Ok(sum);
        }
        if !mag.is_finite() {
            break;
        }
    }
    Err(GftError::NoConvergence { max_terms: opts.max_terms, last: term.magnitude() })
}

/// Closed-form `e^{-f}` for `f` zero or squaring to a negative real.
///
/// `r` is taken from the square itself, `r = sqrt(-<f^2>_0)`. The check on
/// `f` is made on its normalized direction, so it does not depend on scale.
/// Callers wanting `e^{+f}` pass `-f`.
pub fn exp_imag(f: &Multivector, tol: f64) -> Result<Multivector> {
    if f.is_zero() {
        return Ok(Multivector::one(f.sig()));
    }
    if !f.is_imaginary_direction(tol) {
        return Err(GftError::NotImaginary);
    }
    Ok(exp_imag_unchecked(f))
}

/// [`exp_imag`] without the square-root-of-minus-one check.
pub(crate) fn exp_imag_unchecked(f: &Multivector) -> Multivector {
    let r = (-f.gp(f).scalar_part()).max(0.0).sqrt();
    let mut out = if r < SMALL_ROOT { -f } else { f.scale(-r.sin() / r) };
    out.coeffs_mut()[0] += if r < SMALL_ROOT { 1.0 } else { r.cos() };
    out
}
