//! Declarative description of a tabular dataset.
//!
//! A schema lists every column the loader should touch, assigns each a
//! role, and fixes the two pieces of context the rest of the pipeline
//! needs: which direction of the score is "superior" and which protected
//! value denotes the privileged group.

use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};

/// How a column participates in the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureRole {
    /// Numeric input to the scoring model.
    Scoring,
    /// Group-membership column; never visible to the scoring model.
    Protected,
    /// Binary ground-truth outcome (0/1); used for fitting and fairness.
    Label,
    /// Carried through untouched (identifiers, free text); excluded from the
    /// feature matrix.
    Id,
}

/// Whether larger or smaller scores are better for the scored individual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    #[default]
    HigherIsSuperior,
    LowerIsSuperior,
}

impl Direction {
    /// True when score `a` is at least as good as score `b`.
    pub fn at_least_as_superior(self, a: f64, b: f64) -> bool {
        match self {
            Direction::HigherIsSuperior => a >= b,
            Direction::LowerIsSuperior => a <= b,
        }
    }
}

/// One column declaration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    pub role: FeatureRole,
    /// Per-feature override of the schema-wide privileged value. Only
    /// meaningful for protected features.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub privileged_value: Option<String>,
}

impl FeatureSpec {
    pub fn new(name: impl Into<String>, role: FeatureRole) -> Self {
        FeatureSpec {
            name: name.into(),
            role,
            privileged_value: None,
        }
    }
}

fn default_privileged() -> String {
    "1".to_string()
}

/// Column declarations plus scoring direction and privileged value.
///
/// The feature matrix built from a schema keeps scoring and protected
/// columns, in declaration order; label and id columns are carried
/// separately or dropped.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub features: Vec<FeatureSpec>,
    #[serde(default)]
    pub direction: Direction,
    /// Raw cell value that marks the privileged group in a protected
    /// column, unless the feature overrides it.
    #[serde(default = "default_privileged")]
    pub privileged_value: String,
}

impl FeatureSchema {
    pub fn new(features: Vec<FeatureSpec>, direction: Direction) -> Result<Self> {
        let schema = FeatureSchema {
            features,
            direction,
            privileged_value: default_privileged(),
        };
        schema.validate()?;
        Ok(schema)
    }

    /// Read and validate a schema from a JSON file.
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let schema: FeatureSchema =
            serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?;
        schema.validate()?;
        Ok(schema)
    }

    /// Check structural invariants: unique names, at least one scoring
    /// feature, at most one label.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for f in &self.features {
            if !seen.insert(f.name.as_str()) {
                return Err(Error::Schema(format!("duplicate feature name \"{}\"", f.name)));
            }
        }
        if self.scoring_names().is_empty() {
            return Err(Error::Schema("schema declares no scoring feature".into()));
        }
        let labels = self
            .features
            .iter()
            .filter(|f| f.role == FeatureRole::Label)
            .count();
        if labels > 1 {
            return Err(Error::Schema(format!("schema declares {labels} label features")));
        }
        Ok(())
    }

    /// Features that enter the matrix (scoring + protected), in order.
    pub fn matrix_features(&self) -> Vec<&FeatureSpec> {
        self.features
            .iter()
            .filter(|f| matches!(f.role, FeatureRole::Scoring | FeatureRole::Protected))
            .collect()
    }

    /// Names of matrix features, in matrix-column order.
    pub fn matrix_names(&self) -> Vec<String> {
        self.matrix_features()
            .iter()
            .map(|f| f.name.clone())
            .collect()
    }

    /// Matrix-column indices of scoring features.
    pub fn scoring_indices(&self) -> Vec<usize> {
        self.matrix_features()
            .iter()
            .enumerate()
            .filter(|(_, f)| f.role == FeatureRole::Scoring)
            .map(|(i, _)| i)
            .collect()
    }

    /// Matrix-column indices of protected features.
    pub fn protected_indices(&self) -> Vec<usize> {
        self.matrix_features()
            .iter()
            .enumerate()
            .filter(|(_, f)| f.role == FeatureRole::Protected)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn scoring_names(&self) -> Vec<String> {
        self.features
            .iter()
            .filter(|f| f.role == FeatureRole::Scoring)
            .map(|f| f.name.clone())
            .collect()
    }

    pub fn protected_names(&self) -> Vec<String> {
        self.features
            .iter()
            .filter(|f| f.role == FeatureRole::Protected)
            .map(|f| f.name.clone())
            .collect()
    }

    pub fn label_feature(&self) -> Option<&FeatureSpec> {
        self.features.iter().find(|f| f.role == FeatureRole::Label)
    }

    /// Matrix-column index of a named matrix feature.
    pub fn matrix_index(&self, name: &str) -> Option<usize> {
        self.matrix_features().iter().position(|f| f.name == name)
    }

    /// The feature declaration for `name`, if any.
    pub fn feature(&self, name: &str) -> Option<&FeatureSpec> {
        self.features.iter().find(|f| f.name == name)
    }

    /// Privileged raw value for a protected feature (per-feature override or
    /// schema default).
    pub fn privileged_value_for<'a>(&'a self, feature: &'a FeatureSpec) -> &'a str {
        feature
            .privileged_value
            .as_deref()
            .unwrap_or(&self.privileged_value)
    }
}
