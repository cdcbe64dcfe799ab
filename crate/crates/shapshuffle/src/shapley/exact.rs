//! Exact Shapley values by full coalition enumeration.

use ndarray::ArrayView1;

use crate::error::{Error, Result};
use crate::model::BatchScorer;
use crate::shapley::value::{values_for_coalitions, Coalition, ValueFunctionConfig};
use crate::shapley::Explanation;

/// Exact Shapley attribution for one instance.
///
/// Enumerates all `2^d` coalitions and combines marginal contributions with
/// the standard weights `|S|! (d - |S| - 1)! / d!`. Cost grows as
/// `O(2^d)` scorer batches (or one mega-batch of `2^d * n_background`
/// rows), so the feature count is capped by `cfg.max_exact_features`.
pub fn exact_shapley(
    f: &dyn BatchScorer,
    x: &ArrayView1<'_, f64>,
    cfg: &ValueFunctionConfig,
) -> Result<Explanation> {
    cfg.check_instance(x)?;
    if cfg.max_exact_features > 16 {
        return Err(Error::Config(format!(
            "max_exact_features is capped at 16, got {}",
            cfg.max_exact_features
        )));
    }
    let d = x.len();
    if d > cfg.max_exact_features {
        return Err(Error::Capability(format!(
            "exact enumeration over {d} features exceeds the limit of {}",
            cfg.max_exact_features
        )));
    }

    let coalitions: Vec<Coalition> = (0..1u64 << d).map(Coalition).collect();
    let values = values_for_coalitions(f, x, &coalitions, cfg)?;

    // w[s] = s! (d-1-s)! / d!; d <= 16 keeps every factorial exact in f64.
    let mut factorial = [1.0f64; 17];
    for i in 1..=16 {
        factorial[i] = factorial[i - 1] * i as f64;
    }
    let weight: Vec<f64> = (0..d)
        .map(|s| factorial[s] * factorial[d - 1 - s] / factorial[d])
        .collect();

    let mut phi = vec![0.0f64; d];
    for mask in 0..1u64 << d {
        let s = mask.count_ones() as usize;
        for (j, phi_j) in phi.iter_mut().enumerate() {
            if mask & (1 << j) == 0 {
                let with_j = (mask | (1 << j)) as usize;
                *phi_j += weight[s] * (values[with_j] - values[mask as usize]);
            }
        }
    }

    Ok(Explanation {
        phi,
        base_value: values[0],
    })
}
