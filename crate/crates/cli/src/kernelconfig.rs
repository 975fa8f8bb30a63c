//! Kernel sets described in TOML.
//!
//! ```toml
//! p = 0
//! q = 2
//! m = 2
//!
//! [[kernel]]
//! side = "left"
//! entries = [{ row = 1, col = 1, value = "6.283185307179586*e1" }]
//!
//! [[kernel]]
//! side = "right"
//! entries = [{ row = 2, col = 2, value = "6.283185307179586*e2" }]
//! ```
//!
//! Each `[[kernel]]` table is one matrix `M` of `f(x, u) = x^T M u`; rows and
//! columns are 1-based. Kernels of each side are applied in file order.

use serde::{Deserialize, Serialize};

use gft_core::{GftError, GftSpec, KernelMatrix, Multivector, Side, Signature};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Kernel {
    pub side: String,
    #[serde(default)]
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    pub p: usize,
    pub q: usize,
    pub m: usize,
    #[serde(default, rename = "kernel")]
    pub kernels: Vec<Kernel>,
}

#[derive(Debug)]
pub enum ConfigError {
    Toml(String),
    Invalid(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Toml(msg) => write!(f, "kernel config: {msg}"),
            ConfigError::Invalid(msg) => write!(f, "kernel config: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl From<GftError> for ConfigError {
    fn from(e: GftError) -> Self {
        ConfigError::Invalid(e.to_string())
    }
}

impl KernelConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Toml(e.to_string()))
    }

    pub fn emit(&self) -> String {
        toml::to_string(self).expect("kernel config serializes")
    }

    pub fn to_spec(&self) -> Result<GftSpec, ConfigError> {
        let sig = Signature::new(self.p, self.q)?;
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for (k, kernel) in self.kernels.iter().enumerate() {
            let side: Side =
                kernel.side.parse().map_err(|e: GftError| ConfigError::Invalid(format!("kernel {}: {e}", k + 1)))?;
            let mut matrix = KernelMatrix::zero(sig, self.m);
            for e in &kernel.entries {
                if e.row == 0 || e.col == 0 || e.row > self.m || e.col > self.m {
                    return Err(ConfigError::Invalid(format!(
                        "kernel {}: entry ({}, {}) outside the {}x{} matrix (indices are 1-based)",
                        k + 1,
                        e.row,
                        e.col,
                        self.m,
                        self.m
                    )));
                }
                let value = Multivector::parse(sig, &e.value)
                    .map_err(|err| ConfigError::Invalid(format!("kernel {}: {err}", k + 1)))?;
                let slot = matrix.get(e.row - 1, e.col - 1) + &value;
                matrix.set(e.row - 1, e.col - 1, slot);
            }
            match side {
                Side::Left => left.push(matrix),
                Side::Right => right.push(matrix),
            }
        }
        Ok(GftSpec::new(sig, self.m, left, right)?)
    }

    /// Config listing the left kernels first, then the right ones.
    pub fn from_spec(spec: &GftSpec) -> Self {
        let sig = spec.sig();
        let describe = |side: Side, k: &KernelMatrix| Kernel {
            side: side.to_string(),
            entries: k
                .nonzero_entries()
                .map(|(row, col, v)| Entry { row: row + 1, col: col + 1, value: v.to_string() })
                .collect(),
        };
        let kernels = spec
            .left()
            .iter()
            .map(|k| describe(Side::Left, k))
            .chain(spec.right().iter().map(|k| describe(Side::Right, k)))
            .collect();
        KernelConfig { p: sig.p(), q: sig.q(), m: spec.dim(), kernels }
    }
}
