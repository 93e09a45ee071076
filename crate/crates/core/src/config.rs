//! JSON model files: complex numbers as `[re, im]`, matrices as row-major flat lists.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "dim": 2,
//!   "hamiltonian": [[0.5, 0], [0, 0], [0, 0], [-0.5, 0]],
//!   "jumps": [[[0, 0], [0, 0], [0.8, 0], [0, 0]]]
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::ComplexMatrix;
use crate::qms::{DensityMatrix, GKSLModel};
use crate::scalar::{c, Real};

pub const SCHEMA_VERSION: u32 = 1;

pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub schema_version: u32,
    pub dim: usize,
    pub hamiltonian: Vec<ComplexPair>,
    #[serde(default)]
    pub jumps: Vec<Vec<ComplexPair>>,
    /// Invariant state to use instead of solving L_*(ρ) = 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<ComplexPair>>,
    /// f descriptors such as `"kms"` or `"power:0.3"`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub metrics: Vec<String>,
    /// Seed the model was drawn with, when it came from a campaign.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn field_error(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("field `{field}`: {msg}"))
}

fn to_matrix<T: Real>(field: &str, dim: usize, entries: &[ComplexPair]) -> Result<ComplexMatrix<T>> {
    if entries.len() != dim * dim {
        return Err(field_error(field, format!("expected {} entries for dim {dim}, found {}", dim * dim, entries.len())));
    }
    if let Some(k) = entries.iter().position(|z| !z[0].is_finite() || !z[1].is_finite()) {
        return Err(field_error(field, format!("entry {k} is not finite")));
    }
    let data = entries.iter().map(|z| c(T::lit(z[0]), T::lit(z[1]))).collect();
    ComplexMatrix::from_vec(dim, dim, data)
}

fn to_pairs<T: Real>(m: &ComplexMatrix<T>) -> Vec<ComplexPair> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push([m[(i, j)].re.f64(), m[(i, j)].im.f64()]);
        }
    }
    out
}

impl ModelConfig {
    /// Parses and validates; syntax errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Checks the schema version, matrix sizes and Hermiticity of H and ρ.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(field_error(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        if self.dim == 0 {
            return Err(field_error("dim", "must be at least 1"));
        }
        self.model::<f64>()?;
        self.state::<f64>()?;
        for (k, m) in self.metrics.iter().enumerate() {
            crate::monotone::FDescriptor::parse(m).map_err(|e| field_error(&format!("metrics[{k}]"), e))?;
        }
        Ok(())
    }

    pub fn model<T: Real>(&self) -> Result<GKSLModel<T>> {
        let h = to_matrix::<T>("hamiltonian", self.dim, &self.hamiltonian)?;
        let jumps = self
            .jumps
            .iter()
            .enumerate()
            .map(|(k, v)| to_matrix(&format!("jumps[{k}]"), self.dim, v))
            .collect::<Result<Vec<_>>>()?;
        GKSLModel::new(h, jumps).map_err(|e| match e {
            Error::NotHermitian { asymmetry, .. } => {
                field_error("hamiltonian", format!("not Hermitian (asymmetry {asymmetry:.3e})"))
            }
            other => other,
        })
    }

    /// The explicit state, if the file has one.
    pub fn state<T: Real>(&self) -> Result<Option<DensityMatrix<T>>> {
        self.rho
            .as_ref()
            .map(|r| {
                let m = to_matrix::<T>("rho", self.dim, r)?;
                DensityMatrix::new(m).map_err(|e| field_error("rho", e))
            })
            .transpose()
    }

    pub fn from_model<T: Real>(model: &GKSLModel<T>, rho: Option<&DensityMatrix<T>>, seed: Option<u64>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            dim: model.dim(),
            hamiltonian: to_pairs(model.hamiltonian()),
            jumps: model.jumps().iter().map(to_pairs).collect(),
            rho: rho.map(|r| to_pairs(r.matrix())),
            metrics: Vec::new(),
            seed,
        }
    }
}
