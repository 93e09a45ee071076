use std::fmt::Write;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::config::ModelConfig;

/// Outcome of one property on one model (or sample).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub index: usize,
    pub dim: usize,
    /// Which f (or sub-check) produced the worst margin.
    pub label: String,
    /// Observed quantity at the worst check.
    pub value: f64,
    /// Bound it was compared with.
    pub bound: f64,
    /// Slack; negative means violated.
    pub margin: f64,
    pub error: Option<String>,
    #[serde(skip)]
    pub model: Option<ModelConfig>,
}

impl Sample {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.margin >= 0.0
    }

    pub fn failed(index: usize, dim: usize, label: impl Into<String>, error: impl ToString) -> Self {
        Self {
            index,
            dim,
            label: label.into(),
            value: f64::NAN,
            bound: f64::NAN,
            margin: f64::NEG_INFINITY,
            error: Some(error.to_string()),
            model: None,
        }
    }

    pub fn with_model(mut self, model: Option<ModelConfig>) -> Self {
        self.model = model;
        self
    }
}

/// A failing sample with enough information to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub property: String,
    pub campaign_seed: u64,
    pub index: usize,
    pub label: String,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub error: Option<String>,
    pub model: Option<ModelConfig>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    pub samples: Vec<Sample>,
    pub worst_margin: f64,
    pub tolerance: f64,
    /// Extra summary, e.g. the best strict-gap margin.
    pub note: Option<String>,
    pub counterexample: Option<Counterexample>,
}

impl PropertyResult {
    /// A property with no samples fails.
    pub fn from_samples(name: &str, seed: u64, tolerance: f64, samples: Vec<Sample>, note: Option<String>) -> Self {
        let worst = samples.iter().min_by(|a, b| a.margin.total_cmp(&b.margin));
        let worst_margin = worst.map_or(f64::NEG_INFINITY, |s| s.margin);
        let passed = !samples.is_empty() && samples.iter().all(Sample::passed);
        let counterexample = if passed {
            None
        } else {
            worst.map(|s| Counterexample {
                property: name.to_string(),
                campaign_seed: seed,
                index: s.index,
                label: s.label.clone(),
                value: s.value,
                bound: s.bound,
                margin: s.margin,
                error: s.error.clone(),
                model: s.model.clone(),
            })
        };
        let note = if samples.is_empty() { Some("no samples executed".into()) } else { note };
        Self { name: name.to_string(), passed, samples, worst_margin, tolerance, note, counterexample }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignReport {
    pub seed: u64,
    pub properties: Vec<PropertyResult>,
    /// Random model draws discarded before acceptance.
    pub rejected_draws: usize,
    /// Wall-clock time for the shared model pool and then per property;
    /// not part of the text or CSV output.
    pub timing: Vec<(String, Duration)>,
}

fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.16e}")
    }
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyResult> {
        self.properties.iter().filter(|p| !p.passed)
    }

    /// Human-readable summary; identical campaigns give identical text.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "campaign seed {}", self.seed).unwrap();
        writeln!(s, "rejected draws {}", self.rejected_draws).unwrap();
        for p in &self.properties {
            let status = if p.passed { "PASS" } else { "FAIL" };
            write!(
                s,
                "{status} {:<26} samples {:>4}  worst margin {}  tolerance {:e}",
                p.name,
                p.samples.len(),
                num(p.worst_margin),
                p.tolerance
            )
            .unwrap();
            if let Some(n) = &p.note {
                write!(s, "  ({n})").unwrap();
            }
            s.push('\n');
            if let Some(c) = &p.counterexample {
                write!(s, "     counterexample: sample {} [{}] value {} bound {}", c.index, c.label, num(c.value), num(c.bound))
                    .unwrap();
                if let Some(e) = &c.error {
                    write!(s, " error: {e}").unwrap();
                }
                s.push('\n');
            }
        }
        let failed = self.failures().count();
        writeln!(s, "{} of {} properties passed", self.properties.len() - failed, self.properties.len()).unwrap();
        s
    }

    /// One row per property and sample.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("property,sample,dim,label,value,bound,margin,passed\n");
        for p in &self.properties {
            for x in &p.samples {
                writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    p.name,
                    x.index,
                    x.dim,
                    x.label.replace(',', ";"),
                    num(x.value),
                    num(x.bound),
                    num(x.margin),
                    x.passed()
                )
                .unwrap();
            }
        }
        s
    }

    pub fn counterexamples_json(&self) -> String {
        let all: Vec<&Counterexample> = self.properties.iter().filter_map(|p| p.counterexample.as_ref()).collect();
        serde_json::to_string_pretty(&all).expect("plain data serializes")
    }
}
