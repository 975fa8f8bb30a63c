//! General geometric Fourier transforms over real Clifford algebras `Cl(p,q)`.
//!
//! The transform of a multivector field `A` on `R^m` is
//!
//! ```text
//! F(A)(u) = ∫ prod_l e^{-f_l(x,u)} A(x) prod_k e^{-g_k(x,u)} dx
//! ```
//!
//! where each kernel `f_l`, `g_k` is bilinear in `(x, u)` and takes values
//! that are zero or square roots of -1. The crate provides the algebra, the
//! exponentials, the commutator splits used by the calculation rules, the
//! kernel presets, a sampled transform, and numeric checks of the rules.

pub mod algebra;
pub mod commsplit;
pub mod error;
pub mod exponential;
pub mod kernels;
pub mod theorems;
pub mod transform;

pub use algebra::{BladeIndex, Multivector, Signature};
pub use commsplit::{Direction, Orientation, SplitIndex, TriangularSignMatrix};
pub use error::{GftError, Result};
pub use kernels::{GftSpec, KernelMatrix, Preset, Side};
pub use theorems::TheoremReport;
pub use transform::{gft, FreqGrid, Grid, SampledField, Spectrum};
