use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monotone::FDescriptor;

/// Names of the campaign properties, in report order.
pub const PROPERTIES: [&str; 12] = [
    "gap_comparison",
    "contractivity",
    "decay_equivalence",
    "transpose_symmetry",
    "alpha_curve",
    "moreau_identity",
    "om1_bound",
    "loewner_order",
    "metric_closed_forms",
    "detailed_balance_collapse",
    "strict_gap",
    "degenerate_ground_state",
];

/// Default tolerance for every named tolerance a campaign understands.
pub fn default_tolerances() -> BTreeMap<String, f64> {
    [
        ("gap_comparison", 1e-7),
        ("contractivity", 1e-8),
        ("decay_equivalence", 1e-4),
        ("transpose_symmetry", 1e-7),
        ("alpha_curve", 1e-7),
        ("moreau_identity", 1e-8),
        ("om1_bound", 1e-9),
        ("loewner_order", 1e-10),
        ("kms_closed_form", 1e-11),
        ("bkm_closed_form", 1e-9),
        ("detailed_balance_collapse", 1e-7),
        ("strict_gap", 1e-3),
        ("degenerate_kernel", 1e-9),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

/// How many models or samples each property uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sizes {
    pub decay_models: usize,
    pub decay_samples: usize,
    pub transpose_models: usize,
    pub curve_models: usize,
    pub moreau_triples: usize,
    pub sandwich_states: usize,
    pub order_pairs: usize,
    pub closed_form_triples: usize,
    pub balanced_models: usize,
    pub search_draws: usize,
    pub degenerate_models: usize,
}

impl Default for Sizes {
    fn default() -> Self {
        Self {
            decay_models: 20,
            decay_samples: 200,
            transpose_models: 50,
            curve_models: 50,
            moreau_triples: 50,
            sandwich_states: 50,
            order_pairs: 50,
            closed_form_triples: 100,
            balanced_models: 20,
            search_draws: 500,
            degenerate_models: 10,
        }
    }
}

/// Replaces the random models of the model-based properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OverrideModel {
    /// Depolarizing qubit with unit decay rate.
    Depolarizing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    /// Required before running; the CLI may supply it from `--seed`.
    pub seed: Option<u64>,
    pub n_models: usize,
    pub dims: Vec<usize>,
    /// f descriptors, e.g. `"kms"` or `"power:0.3"`.
    pub f_suite: Vec<String>,
    pub t_grid: Vec<f64>,
    /// Overrides of [`default_tolerances`].
    pub tolerances: BTreeMap<String, f64>,
    pub sizes: Sizes,
    pub override_model: Option<OverrideModel>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        let mut f_suite: Vec<String> = (0..=10).map(|k| format!("power:{}", k as f64 / 10.0)).collect();
        f_suite.extend(["kms".to_string(), "bkm".to_string()]);
        Self {
            seed: None,
            n_models: 200,
            dims: vec![2, 3, 4],
            f_suite,
            t_grid: vec![0.1, 1.0, 10.0],
            tolerances: BTreeMap::new(),
            sizes: Sizes::default(),
            override_model: None,
        }
    }
}

impl CampaignConfig {
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

    pub fn validate(&self) -> Result<()> {
        if self.n_models == 0 {
            return Err(Error::Config("n_models must be at least 1".into()));
        }
        if self.dims.is_empty() || self.dims.iter().any(|d| !(2..=8).contains(d)) {
            return Err(Error::Config(format!("dims must be a non-empty subset of 2..=8, got {:?}", self.dims)));
        }
        if self.f_suite.is_empty() {
            return Err(Error::Config("f_suite is empty".into()));
        }
        self.functions()?;
        if self.t_grid.is_empty() || self.t_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(Error::Config(format!("t_grid must be non-empty and nonnegative, got {:?}", self.t_grid)));
        }
        let known = default_tolerances();
        for (k, v) in &self.tolerances {
            if !known.contains_key(k) {
                return Err(Error::Config(format!("unknown tolerance {k:?}")));
            }
            if !(v.is_finite() && *v >= 0.0) {
                return Err(Error::Config(format!("tolerance {k:?} must be nonnegative, got {v}")));
            }
        }
        Ok(())
    }

    pub fn functions(&self) -> Result<Vec<FDescriptor>> {
        self.f_suite
            .iter()
            .enumerate()
            .map(|(k, s)| FDescriptor::parse(s).map_err(|e| Error::Config(format!("f_suite[{k}]: {e}"))))
            .collect()
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| default_tolerances()[name])
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}
