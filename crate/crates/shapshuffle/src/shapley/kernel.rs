//! Kernel-weighted least-squares Shapley estimator.
//!
//! Attributions solve a weighted regression of coalition values on
//! coalition indicators, with two hard constraints folded in by
//! substitution: the intercept equals `v(empty)` and the attributions sum
//! to `v(full) - v(empty)`. With every proper coalition enumerated the
//! estimate coincides with exact Shapley values; otherwise coalitions are
//! sampled by size from the kernel weight distribution in
//! complement pairs, and multiplicity counts become the regression weights.

use ndarray::ArrayView1;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::BatchScorer;
use crate::shapley::solve::solve_dense;
use crate::shapley::value::{values_for_coalitions, Coalition, ValueFunctionConfig};
use crate::shapley::Explanation;

/// Coalition budget and sampling seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingConfig {
    /// Evaluate every proper coalition when there are at most this many;
    /// otherwise sample until this many distinct coalitions are collected.
    pub max_coalitions: usize,
    pub seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            max_coalitions: 4096,
            seed: 0,
        }
    }
}

/// Kernel weight (up to normalization) for a coalition of size `s` out of
/// `d` features: `(d - 1) / (C(d, s) * s * (d - s))`.
fn kernel_weight(d: usize, s: usize) -> f64 {
    let mut binom = 1.0f64;
    for i in 0..s {
        binom *= (d - i) as f64 / (i + 1) as f64;
    }
    (d as f64 - 1.0) / (binom * s as f64 * (d - s) as f64)
}

/// Collect the proper coalitions to evaluate, with their regression
/// weights. Full enumeration when affordable, paired sampling otherwise.
fn collect_coalitions(d: usize, sampling: &SamplingConfig) -> Vec<(Coalition, f64)> {
    let full = Coalition::full(d).0;
    let total_proper = if d < 63 { (1u128 << d) - 2 } else { u128::MAX };
    if total_proper <= sampling.max_coalitions as u128 {
        return (1..full)
            .map(|mask| (Coalition(mask), kernel_weight(d, mask.count_ones() as usize)))
            .collect();
    }

    // Distribution over sizes 1..d-1 proportional to (d-1)/(s(d-s)); the
    // per-size weight then lives in the sampling frequency, so each drawn
    // coalition simply counts 1.
    let size_weights: Vec<f64> = (1..d)
        .map(|s| (d as f64 - 1.0) / (s as f64 * (d - s) as f64))
        .collect();
    let total: f64 = size_weights.iter().sum();
    let cumulative: Vec<f64> = size_weights
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w / total;
            Some(*acc)
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let mut counts: BTreeMap<u64, f64> = BTreeMap::new();
    while counts.len() < sampling.max_coalitions {
        let u = rng.random::<f64>();
        let s = cumulative.iter().position(|&c| u < c).unwrap_or(d - 2) + 1;
        let members = rand::seq::index::sample(&mut rng, d, s);
        let mut mask = 0u64;
        for j in members {
            mask |= 1 << j;
        }
        // Paired with its complement: halves the variance of the
        // efficiency-constrained estimate at no extra sampling cost.
        *counts.entry(mask).or_insert(0.0) += 1.0;
        *counts.entry(full ^ mask).or_insert(0.0) += 1.0;
    }
    counts.into_iter().map(|(m, w)| (Coalition(m), w)).collect()
}

/// Kernel Shapley estimate for one instance.
pub fn kernel_shap(
    f: &dyn BatchScorer,
    x: &ArrayView1<'_, f64>,
    cfg: &ValueFunctionConfig,
    sampling: &SamplingConfig,
) -> Result<Explanation> {
    cfg.check_instance(x)?;
    let d = x.len();
    if d > 62 {
        return Err(Error::Capability(format!(
            "kernel estimation supports at most 62 features, got {d}"
        )));
    }
    if d >= 2 && sampling.max_coalitions < 2 * d {
        return Err(Error::Config(format!(
            "max_coalitions {} is too small for {d} features (need at least {})",
            sampling.max_coalitions,
            2 * d
        )));
    }

    if d == 1 {
        let values = values_for_coalitions(f, x, &[Coalition::EMPTY, Coalition::full(1)], cfg)?;
        return Ok(Explanation {
            phi: vec![values[1] - values[0]],
            base_value: values[0],
        });
    }

    let weighted = collect_coalitions(d, sampling);
    let mut coalitions = Vec::with_capacity(weighted.len() + 2);
    coalitions.push(Coalition::EMPTY);
    coalitions.push(Coalition::full(d));
    coalitions.extend(weighted.iter().map(|(c, _)| *c));
    let values = values_for_coalitions(f, x, &coalitions, cfg)?;
    let v_empty = values[0];
    let delta = values[1] - v_empty;

    // Normalize weights so the normal-equation entries stay O(1) and the
    // singularity tolerance is scale-free.
    let weight_sum: f64 = weighted.iter().map(|(_, w)| w).sum();

    // Substitute the efficiency constraint: unknowns are phi_0..phi_{d-2},
    // with phi_{d-1} = delta - sum(others). For coalition z the regressor
    // becomes a_j = z_j - z_{d-1} and the target v(z) - v(empty) - z_{d-1} * delta.
    let k = d - 1;
    let mut normal = vec![vec![0.0f64; k]; k];
    let mut rhs = vec![0.0f64; k];
    let mut design_row = vec![0.0f64; k];
    for ((coalition, raw_w), value) in weighted.iter().zip(values.iter().skip(2)) {
        let w = raw_w / weight_sum;
        let z_last = f64::from(coalition.contains(k));
        for (j, a_j) in design_row.iter_mut().enumerate() {
            *a_j = f64::from(coalition.contains(j)) - z_last;
        }
        let target = value - v_empty - z_last * delta;
        for i in 0..k {
            if design_row[i] == 0.0 {
                continue;
            }
            rhs[i] += w * design_row[i] * target;
            for j in 0..k {
                normal[i][j] += w * design_row[i] * design_row[j];
            }
        }
    }

    let theta = match solve_dense(normal.clone(), rhs.clone()) {
        Some(t) => t,
        None => {
            log::warn!(
                "kernel normal equations singular for d={d}; retrying with ridge 1e-9"
            );
            let mut ridged = normal;
            for (i, row) in ridged.iter_mut().enumerate() {
                row[i] += 1e-9;
            }
            solve_dense(ridged, rhs).ok_or_else(|| {
                Error::Numeric("kernel regression is singular even with ridge".into())
            })?
        }
    };

    let mut phi = theta;
    let partial: f64 = phi.iter().sum();
    phi.push(delta - partial);
    Ok(Explanation {
        phi,
        base_value: v_empty,
    })
}
