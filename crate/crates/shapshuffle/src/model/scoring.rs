//! Scoring models and batch scoring.
//!
//! A [`ScoringModel`] reads only the scoring columns of a batch; protected
//! columns never enter the dot product, which is what makes the protected
//! attribution questions downstream well posed.

use ndarray::Array1;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::dataset::Dataset;
use crate::model::schema::Direction;

/// Link function applied on top of the linear score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Linear,
    Logistic,
}

/// Linear or logistic model over the scoring features of a schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoringModel {
    pub kind: ModelKind,
    /// One weight per scoring feature, in schema order.
    pub weights: Vec<f64>,
    pub intercept: f64,
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl ScoringModel {
    pub fn linear(weights: Vec<f64>, intercept: f64) -> Self {
        ScoringModel {
            kind: ModelKind::Linear,
            weights,
            intercept,
        }
    }

    pub fn logistic(weights: Vec<f64>, intercept: f64) -> Self {
        ScoringModel {
            kind: ModelKind::Logistic,
            weights,
            intercept,
        }
    }

    /// Linear model averaging `k` scoring features with equal weight 1/k.
    pub fn equal_weights(k: usize) -> Self {
        ScoringModel::linear(vec![1.0 / k as f64; k], 0.0)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Score every row of a batch. Only scoring columns are read.
    pub fn score_batch(&self, data: &Dataset) -> Result<Array1<f64>> {
        let scoring = data.schema().scoring_indices();
        if scoring.len() != self.weights.len() {
            return Err(Error::Dimension(format!(
                "model has {} weights but schema declares {} scoring features",
                self.weights.len(),
                scoring.len()
            )));
        }
        let rows = data.rows();
        let mut out = Array1::zeros(data.n_rows());
        for (i, row_score) in out.iter_mut().enumerate() {
            let mut z = self.intercept;
            for (w, &col) in self.weights.iter().zip(&scoring) {
                z += w * rows[(i, col)];
            }
            *row_score = match self.kind {
                ModelKind::Linear => z,
                ModelKind::Logistic => sigmoid(z),
            };
        }
        Ok(out)
    }
}

/// Anything that maps a batch to one score per row.
///
/// Implemented by plain models and by adversarially wrapped models; the
/// attribution engines only see this interface, so they cannot tell a
/// shuffled scorer from an honest one except through its outputs.
pub trait BatchScorer {
    fn score(&self, data: &Dataset) -> Result<Array1<f64>>;
}

impl BatchScorer for ScoringModel {
    fn score(&self, data: &Dataset) -> Result<Array1<f64>> {
        self.score_batch(data)
    }
}

impl<T: BatchScorer + ?Sized> BatchScorer for &T {
    fn score(&self, data: &Dataset) -> Result<Array1<f64>> {
        (**self).score(data)
    }
}

/// Summary statistics of a background sample: per-column means and the mean
/// model output. Matrix columns follow the schema's matrix order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BackgroundStats {
    pub feature_means: Vec<f64>,
    pub mean_output: f64,
}

impl BackgroundStats {
    pub fn compute(model: &ScoringModel, background: &Dataset) -> Result<Self> {
        let scores = model.score_batch(background)?;
        let means = crate::model::dataset::column_means(&background.rows());
        Ok(BackgroundStats {
            feature_means: means.to_vec(),
            mean_output: scores.mean().unwrap_or(0.0),
        })
    }
}

/// Turn scores into 0/1 decisions at threshold `tau`.
///
/// Under `HigherIsSuperior` a score of exactly `tau` is positive; under
/// `LowerIsSuperior` the decision is `score <= tau`.
pub fn threshold_classify(scores: &[f64], tau: f64, direction: Direction) -> Vec<u8> {
    scores
        .iter()
        .map(|&y| match direction {
            Direction::HigherIsSuperior => u8::from(y >= tau),
            Direction::LowerIsSuperior => u8::from(y <= tau),
        })
        .collect()
}
