//! Interventional coalition value function.
//!
//! The value of a coalition `S` for an instance `x` is the mean model
//! output over a background sample where the features in `S` are fixed to
//! `x`'s values and the rest keep their background values.
//!
//! How those evaluations are batched is observable by the scorer and
//! therefore a modeling decision, not an implementation detail: an
//! adversarial scorer that shuffles within each scored batch behaves
//! differently under [`Batching::PerCoalition`] (many small, internally
//! homogeneous batches) than under [`Batching::MegaBatch`] (one
//! concatenated batch mixing all coalitions).

use ndarray::{s, Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BatchScorer, Dataset};

/// How coalition evaluations are presented to the scorer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Batching {
    /// One scorer call per coalition.
    PerCoalition,
    /// All coalitions concatenated into a single scorer call.
    #[default]
    MegaBatch,
}

/// A feature subset encoded as a bitmask over matrix columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition(pub u64);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    /// The grand coalition over `d` features.
    pub fn full(d: usize) -> Coalition {
        assert!(d < 64, "coalition masks support at most 63 features");
        Coalition((1u64 << d) - 1)
    }

    pub fn from_members(members: &[usize]) -> Coalition {
        let mut mask = 0u64;
        for &j in members {
            assert!(j < 64);
            mask |= 1 << j;
        }
        Coalition(mask)
    }

    pub fn contains(self, feature: usize) -> bool {
        feature < 64 && self.0 & (1 << feature) != 0
    }

    pub fn with(self, feature: usize) -> Coalition {
        Coalition(self.0 | (1 << feature))
    }

    pub fn size(self) -> usize {
        self.0.count_ones() as usize
    }
}

/// Everything the value function needs besides the scorer and instance.
#[derive(Debug, Clone)]
pub struct ValueFunctionConfig {
    pub background: Dataset,
    pub batching: Batching,
    /// Upper bound on feature count accepted by exact enumeration.
    pub max_exact_features: usize,
}

impl ValueFunctionConfig {
    pub fn new(background: Dataset) -> Self {
        ValueFunctionConfig {
            background,
            batching: Batching::default(),
            max_exact_features: 16,
        }
    }

    pub fn with_batching(mut self, batching: Batching) -> Self {
        self.batching = batching;
        self
    }

    pub(crate) fn check_instance(&self, x: &ArrayView1<'_, f64>) -> Result<()> {
        if x.len() != self.background.n_features() {
            return Err(Error::Dimension(format!(
                "instance has {} features but background has {}",
                x.len(),
                self.background.n_features()
            )));
        }
        Ok(())
    }
}

/// Background rows with coalition features overwritten by `x`'s values.
pub(crate) fn imputed_batch(
    x: &ArrayView1<'_, f64>,
    coalition: Coalition,
    background: &Dataset,
) -> Array2<f64> {
    let mut out = background.rows().to_owned();
    for j in 0..x.len() {
        if coalition.contains(j) {
            out.column_mut(j).fill(x[j]);
        }
    }
    out
}

/// Value of one coalition: a single scorer call on the imputed background.
pub fn coalition_value(
    f: &dyn BatchScorer,
    x: &ArrayView1<'_, f64>,
    coalition: Coalition,
    cfg: &ValueFunctionConfig,
) -> Result<f64> {
    cfg.check_instance(x)?;
    if coalition.0 >> x.len() != 0 {
        return Err(Error::Dimension(format!(
            "coalition {:#b} references features beyond {}",
            coalition.0,
            x.len()
        )));
    }
    let batch = cfg
        .background
        .with_rows(imputed_batch(x, coalition, &cfg.background))?;
    let scores = f.score(&batch)?;
    Ok(scores.mean().unwrap_or(0.0))
}

/// Values for many coalitions, honoring the configured batching.
pub(crate) fn values_for_coalitions(
    f: &dyn BatchScorer,
    x: &ArrayView1<'_, f64>,
    coalitions: &[Coalition],
    cfg: &ValueFunctionConfig,
) -> Result<Vec<f64>> {
    match cfg.batching {
        Batching::PerCoalition => coalitions
            .iter()
            .map(|&c| coalition_value(f, x, c, cfg))
            .collect(),
        Batching::MegaBatch => {
            cfg.check_instance(x)?;
            let n_bg = cfg.background.n_rows();
            let d = cfg.background.n_features();
            let mut rows = Array2::zeros((coalitions.len() * n_bg, d));
            for (i, &c) in coalitions.iter().enumerate() {
                rows.slice_mut(s![i * n_bg..(i + 1) * n_bg, ..])
                    .assign(&imputed_batch(x, c, &cfg.background));
            }
            let batch = cfg.background.with_rows(rows)?;
            let scores = f.score(&batch)?;
            Ok((0..coalitions.len())
                .map(|i| {
                    scores
                        .slice(s![i * n_bg..(i + 1) * n_bg])
                        .mean()
                        .unwrap_or(0.0)
                })
                .collect())
        }
    }
}
