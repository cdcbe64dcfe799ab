//! Logistic-regression fitting via full-batch gradient descent.
//!
//! Deterministic for a fixed seed: the train/held-out split is a seeded
//! shuffle, and gradient descent itself has no randomness.

use ndarray::Array1;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::dataset::Dataset;
use crate::model::scoring::{sigmoid, ScoringModel};

/// Gradient-descent settings.
#[derive(Debug, Clone)]
pub struct LogisticHyper {
    pub learning_rate: f64,
    pub epochs: usize,
    /// Seed for the train/held-out shuffle.
    pub seed: u64,
}

impl Default for LogisticHyper {
    fn default() -> Self {
        LogisticHyper {
            learning_rate: 0.1,
            epochs: 2000,
            seed: 0,
        }
    }
}

/// Fitted model plus the split that produced it.
#[derive(Debug, Clone)]
pub struct FitOutcome {
    pub model: ScoringModel,
    /// Row indices used for fitting, in shuffled order.
    pub train_indices: Vec<usize>,
    /// Remaining row indices, in shuffled order.
    pub held_out: Vec<usize>,
}

/// Fit a logistic model on `floor(train_fraction * n)` rows.
///
/// Requires labels with both classes present in the training split.
pub fn fit_logistic(data: &Dataset, train_fraction: f64, hyper: &LogisticHyper) -> Result<FitOutcome> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Config(format!(
            "train_fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let labels = data
        .labels()
        .ok_or_else(|| Error::Fit("dataset has no label column".into()))?;
    let n = data.n_rows();
    let n_train = (train_fraction * n as f64).floor() as usize;
    if n_train == 0 || n_train == n {
        return Err(Error::Fit(format!(
            "split of {n} rows at fraction {train_fraction} leaves an empty side"
        )));
    }

    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(hyper.seed);
    indices.shuffle(&mut rng);
    let (train_indices, held_out) = indices.split_at(n_train);

    let train_labels: Vec<u8> = train_indices.iter().map(|&i| labels[i]).collect();
    if train_labels.iter().all(|&l| l == 0) || train_labels.iter().all(|&l| l == 1) {
        return Err(Error::Fit("training split contains a single class".into()));
    }

    let scoring = data.schema().scoring_indices();
    let d = scoring.len();
    let rows = data.rows();
    let m = train_indices.len() as f64;

    let mut weights = Array1::<f64>::zeros(d);
    let mut intercept = 0.0f64;
    for _ in 0..hyper.epochs {
        let mut grad_w = Array1::<f64>::zeros(d);
        let mut grad_b = 0.0f64;
        for (&i, &label) in train_indices.iter().zip(&train_labels) {
            let mut z = intercept;
            for (j, &col) in scoring.iter().enumerate() {
                z += weights[j] * rows[(i, col)];
            }
            let err = sigmoid(z) - f64::from(label);
            for (j, &col) in scoring.iter().enumerate() {
                grad_w[j] += err * rows[(i, col)];
            }
            grad_b += err;
        }
        weights.iter_mut().zip(grad_w.iter()).for_each(|(w, g)| {
            *w -= hyper.learning_rate * g / m;
        });
        intercept -= hyper.learning_rate * grad_b / m;
    }
    if weights.iter().any(|w| !w.is_finite()) || !intercept.is_finite() {
        return Err(Error::Numeric("logistic fit diverged".into()));
    }

    Ok(FitOutcome {
        model: ScoringModel::logistic(weights.to_vec(), intercept),
        train_indices: train_indices.to_vec(),
        held_out: held_out.to_vec(),
    })
}
