use thiserror::Error;

use crate::algebra::Signature;
use crate::kernels::Side;

pub type Result<T, E = GftError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GftError {
    #[error("signature G({p},{q}) has dimension {n}, above the supported maximum of {max}")]
    DimensionTooLarge { p: usize, q: usize, n: usize, max: usize },

    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: Signature, right: Signature },

    #[error("expected {expected} coefficients for {sig}, got {got}")]
    CoefficientCount { sig: Signature, expected: usize, got: usize },

    #[error("multivector is not invertible by reversion")]
    NotInvertible,

    #[error("value is neither zero nor a real multiple of a square root of -1")]
    NotImaginary,

    #[error("{side} kernel {index} is not a square root of -1 at x={x:?}, u={u:?} (value {value})")]
    KernelNotImaginary { side: Side, index: usize, x: Vec<f64>, u: Vec<f64>, value: String },

    #[error("exponential series did not converge within {max_terms} terms (last term magnitude {last})")]
    NoConvergence { max_terms: usize, last: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("unsupported signature for preset {preset}: {reason}")]
    UnsupportedSignature { preset: String, reason: String },

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("the {0} kernel set is not separable with constant directions")]
    NotSeparable(Side),

    #[error("shift {x0:?} moves nonzero samples off the grid or is not a whole number of grid steps")]
    OffGridShift { x0: Vec<f64> },

    #[error("scale factor {0} is not one of ±1, ±2, ±1/2")]
    MisalignedScale(f64),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("too many split generators: {got} (maximum {max})")]
    TooManyGenerators { got: usize, max: usize },

    #[error("cannot parse multivector '{input}': {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
