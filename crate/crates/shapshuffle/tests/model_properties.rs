//! Property-based tests for the data and scoring layer.

use ndarray::Array2;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shapshuffle::model::{
    Dataset, Direction, FeatureRole, FeatureSchema, FeatureSpec, ScoringModel,
};

fn mixed_schema(d_scoring: usize) -> FeatureSchema {
    let mut features: Vec<FeatureSpec> = (0..d_scoring)
        .map(|j| FeatureSpec::new(format!("s{j}"), FeatureRole::Scoring))
        .collect();
    features.push(FeatureSpec::new("prot", FeatureRole::Protected));
    FeatureSchema::new(features, Direction::HigherIsSuperior).unwrap()
}

proptest! {
    /// Scores never read protected columns: perturbing them arbitrarily
    /// leaves every output bit unchanged.
    #[test]
    fn protected_columns_are_score_inert(
        seed in any::<u64>(),
        d_scoring in 1usize..=5,
        n in 1usize..=30,
        logistic in any::<bool>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let schema = mixed_schema(d_scoring);
        let d = d_scoring + 1;
        let mut rows = Array2::zeros((n, d));
        for r in 0..n {
            for c in 0..d {
                rows[(r, c)] = rng.random_range(-5.0..5.0);
            }
        }
        let weights: Vec<f64> = (0..d_scoring).map(|_| rng.random_range(-2.0..2.0)).collect();
        let model = if logistic {
            ScoringModel::logistic(weights, rng.random_range(-1.0..1.0))
        } else {
            ScoringModel::linear(weights, rng.random_range(-1.0..1.0))
        };

        let data = Dataset::new(rows.clone(), schema.clone(), None).unwrap();
        let baseline = model.score_batch(&data).unwrap();

        for r in 0..n {
            rows[(r, d_scoring)] = rng.random_range(-100.0..100.0);
        }
        let perturbed = Dataset::new(rows, schema, None).unwrap();
        let shifted = model.score_batch(&perturbed).unwrap();
        prop_assert_eq!(baseline, shifted);
    }

    /// Min-max normalization is idempotent on scoring columns and leaves
    /// protected columns alone.
    #[test]
    fn normalization_is_idempotent(
        seed in any::<u64>(),
        d_scoring in 1usize..=5,
        n in 2usize..=30,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let schema = mixed_schema(d_scoring);
        let d = d_scoring + 1;
        let mut rows = Array2::zeros((n, d));
        for r in 0..n {
            for c in 0..d {
                rows[(r, c)] = rng.random_range(-5.0..5.0);
            }
        }
        let data = Dataset::new(rows, schema, None).unwrap();
        let once = data.minmax_normalize();
        let twice = once.minmax_normalize();
        prop_assert_eq!(once.rows(), twice.rows());
        // Protected column untouched by normalization.
        for r in 0..n {
            prop_assert_eq!(once.rows()[(r, d_scoring)], data.rows()[(r, d_scoring)]);
        }
    }

    /// Logistic outputs live strictly inside (0,1); linear outputs are
    /// finite for finite inputs. Inputs are kept where |w·x| stays below
    /// ~36, past which the sigmoid is not distinguishable from 0 or 1 in
    /// f64 at all.
    #[test]
    fn score_ranges_hold(
        seed in any::<u64>(),
        d_scoring in 1usize..=5,
        n in 1usize..=30,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let schema = mixed_schema(d_scoring);
        let d = d_scoring + 1;
        let mut rows = Array2::zeros((n, d));
        for r in 0..n {
            for c in 0..d {
                rows[(r, c)] = rng.random_range(-2.0..2.0);
            }
        }
        let data = Dataset::new(rows, schema, None).unwrap();
        let weights: Vec<f64> = (0..d_scoring).map(|_| rng.random_range(-3.0..3.0)).collect();
        let intercept = rng.random_range(-2.0..2.0);

        let logistic = ScoringModel::logistic(weights.clone(), intercept)
            .score_batch(&data)
            .unwrap();
        for &s in &logistic {
            prop_assert!(s > 0.0 && s < 1.0, "logistic output {}", s);
        }
        let linear = ScoringModel::linear(weights, intercept)
            .score_batch(&data)
            .unwrap();
        for &s in &linear {
            prop_assert!(s.is_finite());
        }
    }
}
