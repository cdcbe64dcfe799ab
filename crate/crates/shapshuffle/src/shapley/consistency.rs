//! Consistency-check defense.
//!
//! Exact Shapley values satisfy local accuracy: base value plus the sum of
//! attributions reconstructs the model output for the explained instance —
//! *as seen by the explainer's batches*. A deployed scorer that shuffles
//! within batches breaks the equality between that reconstruction and the
//! score the instance actually receives in deployment, so a gap beyond
//! numerical tolerance flags manipulation.

use crate::error::{Error, Result};
use crate::model::{BatchScorer, Dataset};

/// Outcome of comparing an explanation against deployed behavior.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ConsistencyOutcome {
    /// `base + sum(phi)` from the explanation.
    pub reconstruction: f64,
    /// Score the instance received inside the deployed batch.
    pub observed: f64,
    pub gap: f64,
    pub flagged: bool,
}

/// Compare an instance's explanation with the score it receives when the
/// deployed batch is scored as a whole.
pub fn consistency_check(
    phi: &[f64],
    base_value: f64,
    deployed_scorer: &dyn BatchScorer,
    deployed_batch: &Dataset,
    instance: usize,
    tolerance: f64,
) -> Result<ConsistencyOutcome> {
    if instance >= deployed_batch.n_rows() {
        return Err(Error::Dimension(format!(
            "instance {instance} out of bounds for a batch of {}",
            deployed_batch.n_rows()
        )));
    }
    if tolerance < 0.0 {
        return Err(Error::Config(format!(
            "tolerance must be non-negative, got {tolerance}"
        )));
    }
    let reconstruction = base_value + phi.iter().sum::<f64>();
    let observed = deployed_scorer.score(deployed_batch)?[instance];
    let gap = (reconstruction - observed).abs();
    Ok(ConsistencyOutcome {
        reconstruction,
        observed,
        gap,
        flagged: gap > tolerance,
    })
}
