//! Experiment configuration.
//!
//! An [`ExperimentSpec`] fully determines a run: data source, model,
//! attacks, explainers and seeds. Specs serialize to JSON, are accepted by
//! `sweep --config`, and are embedded verbatim in every run manifest so a
//! run can be replayed from its output directory alone.

use serde::{Deserialize, Serialize};

use crate::attacks::AttackSpec;
use crate::error::{Error, Result};
use crate::shapley::Batching;

use super::synth::SynthTemplate;

/// Where the rows come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetSource {
    /// CSV file plus schema JSON, both by path.
    Csv { path: String, schema: String },
    /// Generated data; `seed` is a base seed that replicates derive from.
    Synthetic {
        template: SynthTemplate,
        n: usize,
        seed: u64,
    },
}

/// Which scoring model to use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelSpec {
    /// Linear model averaging all scoring features equally.
    EqualWeights,
    /// Fixed linear model.
    Linear { weights: Vec<f64>, intercept: f64 },
    /// Logistic regression fitted per replicate on a seeded split.
    Logistic {
        train_fraction: f64,
        learning_rate: f64,
        epochs: usize,
    },
}

impl ModelSpec {
    pub fn logistic_default() -> Self {
        ModelSpec::Logistic {
            train_fraction: 0.8,
            learning_rate: 0.1,
            epochs: 2000,
        }
    }
}

/// Attribution method used in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExplainMethod {
    /// Full coalition enumeration.
    Exact,
    /// Weighted least-squares estimator.
    Kernel,
    /// Closed form for the scoring features plus the residual route for a
    /// single protected feature.
    Linear,
}

impl ExplainMethod {
    pub fn label(self) -> &'static str {
        match self {
            ExplainMethod::Exact => "exact",
            ExplainMethod::Kernel => "kernel",
            ExplainMethod::Linear => "linear",
        }
    }
}

fn default_max_coalitions() -> usize {
    4096
}

/// One explainer configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplainerSpec {
    pub method: ExplainMethod,
    #[serde(default)]
    pub batching: Batching,
    #[serde(default = "default_max_coalitions")]
    pub max_coalitions: usize,
}

impl ExplainerSpec {
    pub fn exact(batching: Batching) -> Self {
        ExplainerSpec {
            method: ExplainMethod::Exact,
            batching,
            max_coalitions: default_max_coalitions(),
        }
    }

    pub fn kernel(batching: Batching) -> Self {
        ExplainerSpec {
            method: ExplainMethod::Kernel,
            batching,
            max_coalitions: default_max_coalitions(),
        }
    }

    pub fn linear() -> Self {
        ExplainerSpec {
            method: ExplainMethod::Linear,
            batching: Batching::MegaBatch,
            max_coalitions: default_max_coalitions(),
        }
    }
}

fn default_true() -> bool {
    true
}

fn default_explain_sample() -> usize {
    100
}

fn default_background() -> usize {
    100
}

fn default_replicates() -> usize {
    1
}

/// Complete description of one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub dataset: DatasetSource,
    pub model: ModelSpec,
    /// Min-max-normalize scoring features before anything else.
    #[serde(default = "default_true")]
    pub normalize: bool,
    /// Protected features driving the attack; empty means all protected
    /// features declared by the schema.
    #[serde(default)]
    pub protected: Vec<String>,
    pub attacks: Vec<AttackSpec>,
    pub explainers: Vec<ExplainerSpec>,
    /// Number of instances explained per replicate.
    #[serde(default = "default_explain_sample")]
    pub explain_sample: usize,
    /// Background sample size for the value function.
    #[serde(default = "default_background")]
    pub background_size: usize,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    /// Decision threshold for fairness blocks; `None` skips them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.attacks.is_empty() {
            return Err(Error::Config("experiment lists no attacks".into()));
        }
        if self.explainers.is_empty() {
            return Err(Error::Config("experiment lists no explainers".into()));
        }
        if self.explain_sample == 0 {
            return Err(Error::Config("explain_sample must be positive".into()));
        }
        if self.background_size == 0 {
            return Err(Error::Config("background_size must be positive".into()));
        }
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be positive".into()));
        }
        for attack in &self.attacks {
            attack.validate()?;
        }
        if let ModelSpec::Logistic { train_fraction, .. } = self.model {
            if !(train_fraction > 0.0 && train_fraction < 1.0) {
                return Err(Error::Config(format!(
                    "train_fraction must lie in (0, 1), got {train_fraction}"
                )));
            }
        }
        Ok(())
    }

    pub fn from_json_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let spec: ExperimentSpec = serde_json::from_str(&text)?;
        spec.validate()?;
        Ok(spec)
    }

    /// Table label for an attack: kernel name, decorated with the region
    /// when one is set (e.g. `dominance@0.15`).
    pub fn attack_label(attack: &AttackSpec) -> String {
        match attack.modifiers.region {
            Some(r) => format!("{}@{r}", attack.label()),
            None => attack.label(),
        }
    }
}
