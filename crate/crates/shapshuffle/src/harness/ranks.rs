//! Rank histograms: how often each feature tops an attribution.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::shapley::AttributionMatrix;

/// For each feature, the share of instances where its |attribution| ranks
/// first, second, third, or lower. Shares per bucket sum to 1 across
/// features; shares per feature sum to 1 across buckets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankHistogram {
    pub feature_names: Vec<String>,
    pub top1: Vec<f64>,
    pub top2: Vec<f64>,
    pub top3: Vec<f64>,
    pub rest: Vec<f64>,
}

impl RankHistogram {
    /// Top-1 share of a named feature.
    pub fn top1_share(&self, feature: &str) -> Option<f64> {
        let j = self.feature_names.iter().position(|f| f == feature)?;
        Some(self.top1[j])
    }
}

/// Compute the rank histogram of an attribution matrix.
///
/// Per instance, features are ranked by |attribution| descending; ties
/// resolve toward the earlier column, matching the stable order used
/// everywhere else.
pub fn rank_histogram(matrix: &AttributionMatrix) -> Result<RankHistogram> {
    let n = matrix.n_instances();
    if n == 0 {
        return Err(Error::Dimension(
            "rank histogram needs at least one instance".into(),
        ));
    }
    let d = matrix.feature_names.len();
    let mut counts = vec![[0usize; 4]; d];
    let mut order: Vec<usize> = (0..d).collect();
    for i in 0..n {
        order.sort_by(|&a, &b| {
            matrix.values[(i, b)]
                .abs()
                .total_cmp(&matrix.values[(i, a)].abs())
                .then(a.cmp(&b))
        });
        for (rank, &feature) in order.iter().enumerate() {
            counts[feature][rank.min(3)] += 1;
        }
        // Restore ascending order so ties resolve identically every row.
        order.sort_unstable();
    }
    let share = |bucket: usize| -> Vec<f64> {
        counts.iter().map(|c| c[bucket] as f64 / n as f64).collect()
    };
    Ok(RankHistogram {
        feature_names: matrix.feature_names.clone(),
        top1: share(0),
        top2: share(1),
        top3: share(2),
        rest: share(3),
    })
}
