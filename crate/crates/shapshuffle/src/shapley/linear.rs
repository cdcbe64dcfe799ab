//! Closed-form attribution for linear models, and the residual route that
//! extends it to protected features of a wrapped scorer.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::model::{BackgroundStats, BatchScorer, Dataset, ModelKind, ScoringModel};
use crate::shapley::AttributionMatrix;

/// Closed-form Shapley attribution for a linear model over a whole batch.
///
/// Under feature independence the attribution of scoring feature `j` for
/// row `i` is `beta_j * (x_ij - E[X_j])` with the expectation taken from
/// the background sample. Protected columns get exactly zero: the model
/// never reads them.
pub fn linear_shap(
    model: &ScoringModel,
    data: &Dataset,
    stats: &BackgroundStats,
) -> Result<AttributionMatrix> {
    if model.kind != ModelKind::Linear {
        return Err(Error::Capability(
            "closed-form attribution requires a linear model".into(),
        ));
    }
    let scoring = data.schema().scoring_indices();
    if scoring.len() != model.weights.len() {
        return Err(Error::Dimension(format!(
            "model has {} weights but schema declares {} scoring features",
            model.weights.len(),
            scoring.len()
        )));
    }
    if stats.feature_means.len() != data.n_features() {
        return Err(Error::Dimension(format!(
            "background stats cover {} features but data has {}",
            stats.feature_means.len(),
            data.n_features()
        )));
    }

    let n = data.n_rows();
    let d = data.n_features();
    let rows = data.rows();
    let mut values = Array2::zeros((n, d));
    for (w, &col) in model.weights.iter().zip(&scoring) {
        let mean = stats.feature_means[col];
        for i in 0..n {
            values[(i, col)] = w * (rows[(i, col)] - mean);
        }
    }

    Ok(AttributionMatrix {
        feature_names: data.feature_names(),
        ids: (0..n).collect(),
        values,
        base_values: vec![stats.mean_output; n],
    })
}

/// Residual attribution of a wrapped scorer's hidden behavior, plus the
/// bound that certifies it.
#[derive(Debug, Clone)]
pub struct ResidualOutcome {
    /// Per-row residual `f_wrapped(X) - f(X)`, each scorer called once on
    /// the whole batch.
    pub per_row: Array1<f64>,
    pub mean_abs: f64,
    pub max_abs: f64,
    /// `mean_abs <= max_abs` always; carried so reports can assert it.
    pub bound_holds: bool,
}

/// Attribute everything the wrapper changed to the protected feature.
///
/// The base model is linear in its scoring features, so any difference
/// between the wrapped and unwrapped output on the same batch is the
/// protected feature's doing. Both scorers see the batch exactly once.
pub fn residual_protected_attribution(
    f: &dyn BatchScorer,
    f_wrapped: &dyn BatchScorer,
    data: &Dataset,
) -> Result<ResidualOutcome> {
    let honest = f.score(data)?;
    let wrapped = f_wrapped.score(data)?;
    let per_row = &wrapped - &honest;
    let mean_abs = per_row.iter().map(|v| v.abs()).sum::<f64>() / per_row.len() as f64;
    let max_abs = per_row.iter().map(|v| v.abs()).fold(0.0, f64::max);
    Ok(ResidualOutcome {
        mean_abs,
        max_abs,
        bound_holds: mean_abs <= max_abs,
        per_row,
    })
}
