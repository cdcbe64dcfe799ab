//! Group-fairness metrics over thresholded decisions.
//!
//! All metrics compare an unprivileged and a privileged group. Rates whose
//! denominator is zero are reported as `None` rather than silently patched,
//! so callers always know when a metric was undefined.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Confusion counts for one group. Without ground truth only `n` and
/// `predicted_positive` are meaningful.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupCounts {
    pub n: usize,
    pub predicted_positive: usize,
    pub true_positive: usize,
    pub false_positive: usize,
    pub true_negative: usize,
    pub false_negative: usize,
}

impl GroupCounts {
    /// Positive prediction rate, `None` for an empty group.
    pub fn positive_rate(&self) -> Option<f64> {
        (self.n > 0).then(|| self.predicted_positive as f64 / self.n as f64)
    }

    /// True-positive rate, `None` when the group has no positives.
    pub fn true_positive_rate(&self) -> Option<f64> {
        let positives = self.true_positive + self.false_negative;
        (positives > 0).then(|| self.true_positive as f64 / positives as f64)
    }

    /// False-positive rate, `None` when the group has no negatives.
    pub fn false_positive_rate(&self) -> Option<f64> {
        let negatives = self.false_positive + self.true_negative;
        (negatives > 0).then(|| self.false_positive as f64 / negatives as f64)
    }

    /// Ground-truth positives.
    pub fn actual_positive(&self) -> usize {
        self.true_positive + self.false_negative
    }
}

/// Per-group confusion statistics for one batch of decisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupStats {
    pub privileged: GroupCounts,
    pub unprivileged: GroupCounts,
    /// Whether ground-truth labels were available.
    pub labeled: bool,
}

/// Tally decisions into per-group confusion counts.
///
/// `y_true` may be absent; label-dependent metrics then come out `None`.
pub fn group_confusion(
    y_true: Option<&[u8]>,
    y_pred: &[u8],
    privileged: &[bool],
) -> Result<GroupStats> {
    if y_pred.len() != privileged.len() {
        return Err(Error::Dimension(format!(
            "{} predictions but {} group flags",
            y_pred.len(),
            privileged.len()
        )));
    }
    if let Some(t) = y_true {
        if t.len() != y_pred.len() {
            return Err(Error::Dimension(format!(
                "{} labels but {} predictions",
                t.len(),
                y_pred.len()
            )));
        }
    }
    let mut stats = GroupStats {
        privileged: GroupCounts::default(),
        unprivileged: GroupCounts::default(),
        labeled: y_true.is_some(),
    };
    for i in 0..y_pred.len() {
        let group = if privileged[i] {
            &mut stats.privileged
        } else {
            &mut stats.unprivileged
        };
        group.n += 1;
        let pred = y_pred[i] != 0;
        if pred {
            group.predicted_positive += 1;
        }
        if let Some(t) = y_true {
            let truth = t[i] != 0;
            match (truth, pred) {
                (true, true) => group.true_positive += 1,
                (true, false) => group.false_negative += 1,
                (false, true) => group.false_positive += 1,
                (false, false) => group.true_negative += 1,
            }
        }
    }
    Ok(stats)
}

/// The five fairness metrics. Differences are unprivileged minus
/// privileged; a negative difference means the privileged group is ahead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FairnessReport {
    /// Statistical parity difference: PR_u - PR_p.
    pub statistical_parity_difference: Option<f64>,
    /// Equal opportunity difference: TPR_u - TPR_p.
    pub equal_opportunity_difference: Option<f64>,
    /// Average odds difference: mean of FPR and TPR differences.
    pub average_odds_difference: Option<f64>,
    /// Disparate impact: PR_u / PR_p.
    pub disparate_impact: Option<f64>,
    /// Between-group Theil index over benefits `b = y_pred - y_true + 1`.
    pub theil_between_groups: Option<f64>,
}

/// Compute all five metrics from group statistics.
pub fn compute_fairness_metrics(stats: &GroupStats) -> FairnessReport {
    let p = &stats.privileged;
    let u = &stats.unprivileged;

    let diff = |a: Option<f64>, b: Option<f64>| Some(a? - b?);

    let spd = diff(u.positive_rate(), p.positive_rate());
    let eod = if stats.labeled {
        diff(u.true_positive_rate(), p.true_positive_rate())
    } else {
        None
    };
    let aod = if stats.labeled {
        let fpr = diff(u.false_positive_rate(), p.false_positive_rate());
        let tpr = diff(u.true_positive_rate(), p.true_positive_rate());
        match (fpr, tpr) {
            (Some(f), Some(t)) => Some(0.5 * (f + t)),
            _ => None,
        }
    } else {
        None
    };
    let di = match (u.positive_rate(), p.positive_rate()) {
        (Some(pu), Some(pp)) if pp > 0.0 => Some(pu / pp),
        _ => None,
    };

    FairnessReport {
        statistical_parity_difference: spd,
        equal_opportunity_difference: eod,
        average_odds_difference: aod,
        disparate_impact: di,
        theil_between_groups: theil_between(stats),
    }
}

/// Between-group Theil index over per-row benefits `b = y_pred - y_true + 1`.
///
/// Group benefit totals follow from the confusion counts:
/// `sum_b = (predicted_positive - actual_positive) + n`. The index is
/// `sum_g (n_g / n) * (mu_g / mu) * ln(mu_g / mu)`, zero when both groups
/// enjoy the same mean benefit, and undefined without labels, with an empty
/// group, or when the overall mean benefit is zero.
fn theil_between(stats: &GroupStats) -> Option<f64> {
    if !stats.labeled {
        return None;
    }
    let p = &stats.privileged;
    let u = &stats.unprivileged;
    if p.n == 0 || u.n == 0 {
        return None;
    }
    let sum = |g: &GroupCounts| g.predicted_positive as f64 - g.actual_positive() as f64 + g.n as f64;
    let n = (p.n + u.n) as f64;
    let mu = (sum(p) + sum(u)) / n;
    if mu <= 0.0 {
        return None;
    }
    let term = |g: &GroupCounts| {
        let mu_g = sum(g) / g.n as f64;
        let ratio = mu_g / mu;
        if ratio <= 0.0 {
            0.0 // lim x->0 of x ln x
        } else {
            (g.n as f64 / n) * ratio * ratio.ln()
        }
    };
    Some(term(p) + term(u))
}

/// Per-metric change in unfairness between two reports.
///
/// Unfairness distances are |SPD|, |EOD|, |AOD|, |1 - DI| and the Theil
/// index itself; each drop is `dist(after) - dist(before)`, so positive
/// values mean the second report is less fair. A metric undefined on either
/// side yields `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FairnessDrops {
    pub statistical_parity: Option<f64>,
    pub equal_opportunity: Option<f64>,
    pub average_odds: Option<f64>,
    pub disparate_impact: Option<f64>,
    pub theil: Option<f64>,
}

/// Compare fairness before and after an intervention (typically: honest
/// model vs attacked model on the same batch).
pub fn fairness_drop(before: &FairnessReport, after: &FairnessReport) -> FairnessDrops {
    let abs_drop = |b: Option<f64>, a: Option<f64>| Some(a?.abs() - b?.abs());
    FairnessDrops {
        statistical_parity: abs_drop(
            before.statistical_parity_difference,
            after.statistical_parity_difference,
        ),
        equal_opportunity: abs_drop(
            before.equal_opportunity_difference,
            after.equal_opportunity_difference,
        ),
        average_odds: abs_drop(
            before.average_odds_difference,
            after.average_odds_difference,
        ),
        disparate_impact: match (before.disparate_impact, after.disparate_impact) {
            (Some(b), Some(a)) => Some((1.0 - a).abs() - (1.0 - b).abs()),
            _ => None,
        },
        theil: match (before.theil_between_groups, after.theil_between_groups) {
            (Some(b), Some(a)) => Some(a - b),
            _ => None,
        },
    }
}

impl FairnessDrops {
    /// All defined drops as (metric name, value) pairs.
    pub fn entries(&self) -> Vec<(&'static str, Option<f64>)> {
        vec![
            ("statistical_parity", self.statistical_parity),
            ("equal_opportunity", self.equal_opportunity),
            ("average_odds", self.average_odds),
            ("disparate_impact", self.disparate_impact),
            ("theil", self.theil),
        ]
    }

    /// Whether any defined drop exceeds `threshold`.
    pub fn any_exceeds(&self, threshold: f64) -> bool {
        self.entries()
            .iter()
            .any(|(_, v)| v.is_some_and(|d| d > threshold))
    }
}
