//! Property-based tests for the attribution engines: efficiency, symmetry,
//! dummy features, estimator determinism, and the per-coalition blindness
//! guarantee on random configurations.

use ndarray::{Array1, Array2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shapshuffle::attacks::{AdversarialScorer, AttackSpec};
use shapshuffle::model::{
    BackgroundStats, Dataset, Direction, FeatureRole, FeatureSchema, FeatureSpec, ScoringModel,
};
use shapshuffle::shapley::{
    coalition_value, exact_shapley, kernel_shap, linear_shap, Batching, Coalition, SamplingConfig,
    ValueFunctionConfig,
};

fn all_scoring_schema(d: usize) -> FeatureSchema {
    FeatureSchema::new(
        (0..d)
            .map(|j| FeatureSpec::new(format!("f{j}"), FeatureRole::Scoring))
            .collect(),
        Direction::HigherIsSuperior,
    )
    .unwrap()
}

fn random_background(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Dataset {
    let mut rows = Array2::zeros((n, d));
    for r in 0..n {
        for c in 0..d {
            rows[(r, c)] = rng.random_range(-3.0..3.0);
        }
    }
    Dataset::new(rows, all_scoring_schema(d), None).unwrap()
}

proptest! {
    /// Exact attributions sum to v(full) - v(empty) and the base value is
    /// v(empty), for linear and logistic scorers alike.
    #[test]
    fn exact_shapley_is_efficient(
        seed in any::<u64>(),
        d in 1usize..=6,
        n_bg in 2usize..=10,
        logistic in any::<bool>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
        let intercept = rng.random_range(-1.0..1.0);
        let model = if logistic {
            ScoringModel::logistic(weights, intercept)
        } else {
            ScoringModel::linear(weights, intercept)
        };
        let background = random_background(&mut rng, n_bg, d);
        let x = Array1::from(
            (0..d).map(|_| rng.random_range(-3.0..3.0)).collect::<Vec<f64>>(),
        );
        let cfg = ValueFunctionConfig::new(background);
        let explanation = exact_shapley(&model, &x.view(), &cfg).unwrap();
        let v_empty = coalition_value(&model, &x.view(), Coalition::EMPTY, &cfg).unwrap();
        let v_full = coalition_value(&model, &x.view(), Coalition::full(d), &cfg).unwrap();
        let sum: f64 = explanation.phi.iter().sum();
        prop_assert!((sum - (v_full - v_empty)).abs() <= 1e-9, "sum {} vs {}", sum, v_full - v_empty);
        prop_assert!((explanation.base_value - v_empty).abs() <= 1e-9);
    }

    /// Two features with identical columns in both the instance and the
    /// background, treated identically by the scorer, receive equal
    /// attributions.
    #[test]
    fn exact_shapley_is_symmetric(
        seed in any::<u64>(),
        d in 2usize..=5,
        n_bg in 2usize..=8,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut weights: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
        weights[1] = weights[0];
        let model = ScoringModel::linear(weights, rng.random_range(-1.0..1.0));
        let mut rows = Array2::zeros((n_bg, d));
        for r in 0..n_bg {
            for c in 0..d {
                rows[(r, c)] = rng.random_range(-3.0..3.0);
            }
            rows[(r, 1)] = rows[(r, 0)];
        }
        let background = Dataset::new(rows, all_scoring_schema(d), None).unwrap();
        let mut x: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
        x[1] = x[0];
        let x = Array1::from(x);
        let cfg = ValueFunctionConfig::new(background);
        let explanation = exact_shapley(&model, &x.view(), &cfg).unwrap();
        prop_assert!(
            (explanation.phi[0] - explanation.phi[1]).abs() <= 1e-12,
            "twin features got {} and {}", explanation.phi[0], explanation.phi[1]
        );
    }

    /// A feature the scorer provably ignores — zero weight, or a protected
    /// column — gets exactly zero attribution.
    #[test]
    fn exact_shapley_zeroes_dummies(
        seed in any::<u64>(),
        d in 2usize..=5,
        n_bg in 2usize..=8,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut weights: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
        weights[0] = 0.0;
        let model = ScoringModel::linear(weights, rng.random_range(-1.0..1.0));
        let background = random_background(&mut rng, n_bg, d);
        let x = Array1::from(
            (0..d).map(|_| rng.random_range(-3.0..3.0)).collect::<Vec<f64>>(),
        );
        let cfg = ValueFunctionConfig::new(background);
        let explanation = exact_shapley(&model, &x.view(), &cfg).unwrap();
        prop_assert!(explanation.phi[0].abs() == 0.0, "dummy got {}", explanation.phi[0]);
    }

    /// The closed linear form and exact enumeration agree on linear models
    /// over the same background.
    #[test]
    fn linear_shap_matches_exact_on_linear_models(
        seed in any::<u64>(),
        d in 1usize..=6,
        n_bg in 2usize..=10,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
        let model = ScoringModel::linear(weights, rng.random_range(-1.0..1.0));
        let background = random_background(&mut rng, n_bg, d);
        let x: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();

        let stats = BackgroundStats::compute(&model, &background).unwrap();
        let x_data = background
            .with_rows(Array2::from_shape_vec((1, d), x.clone()).unwrap())
            .unwrap();
        let closed = linear_shap(&model, &x_data, &stats).unwrap();

        let cfg = ValueFunctionConfig::new(background);
        let x = Array1::from(x);
        let exact = exact_shapley(&model, &x.view(), &cfg).unwrap();
        for j in 0..d {
            prop_assert!(
                (exact.phi[j] - closed.values[(0, j)]).abs() <= 1e-9,
                "feature {}: exact {} vs closed {}", j, exact.phi[j], closed.values[(0, j)]
            );
        }
    }

    /// Per-coalition batching makes every attack invisible: the protected
    /// feature stays at zero and no attribution moves, on random shapes and
    /// attack parameters.
    #[test]
    fn per_coalition_blindness_on_random_configurations(
        seed in any::<u64>(),
        d_scoring in 1usize..=4,
        n_bg in 2usize..=8,
        attack_choice in 0u8..3,
        param in 0.0..=1.0f64,
        higher in any::<bool>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let direction = if higher {
            Direction::HigherIsSuperior
        } else {
            Direction::LowerIsSuperior
        };
        let mut features: Vec<FeatureSpec> = (0..d_scoring)
            .map(|j| FeatureSpec::new(format!("s{j}"), FeatureRole::Scoring))
            .collect();
        features.push(FeatureSpec::new("prot", FeatureRole::Protected));
        let schema = FeatureSchema::new(features, direction).unwrap();
        let d = d_scoring + 1;
        let mut rows = Array2::zeros((n_bg, d));
        for r in 0..n_bg {
            for c in 0..d_scoring {
                rows[(r, c)] = rng.random_range(-3.0..3.0);
            }
            rows[(r, d_scoring)] = f64::from(rng.random::<bool>());
        }
        let background = Dataset::new(rows, schema, None).unwrap();
        let weights: Vec<f64> = (0..d_scoring).map(|_| rng.random_range(-2.0..2.0)).collect();
        let model = ScoringModel::linear(weights, rng.random_range(-1.0..1.0));
        let attack = match attack_choice {
            0 => AttackSpec::dominance(),
            1 => AttackSpec::mixing(param),
            _ => AttackSpec::swapping(param),
        };
        let scorer = AdversarialScorer::new(
            model.clone(),
            vec!["prot".to_string()],
            attack,
            rng.random(),
            direction,
        )
        .unwrap();

        let mut x: Vec<f64> = (0..d_scoring).map(|_| rng.random_range(-3.0..3.0)).collect();
        x.push(f64::from(rng.random::<bool>()));
        let x = Array1::from(x);
        let cfg = ValueFunctionConfig::new(background).with_batching(Batching::PerCoalition);
        let honest = exact_shapley(&model, &x.view(), &cfg).unwrap();
        let attacked = exact_shapley(&scorer, &x.view(), &cfg).unwrap();
        prop_assert!(attacked.phi[d_scoring].abs() < 1e-10);
        for j in 0..d {
            prop_assert!(
                (attacked.phi[j] - honest.phi[j]).abs() < 1e-10,
                "feature {} moved from {} to {}", j, honest.phi[j], attacked.phi[j]
            );
        }
    }

    /// The sampled kernel path is a pure function of its seed: same seed,
    /// bit-identical attributions; and the efficiency constraint holds even
    /// under sampling.
    #[test]
    fn kernel_shap_is_seed_deterministic_and_efficient(
        seed in any::<u64>(),
        sampling_seed in any::<u64>(),
    ) {
        let d = 12usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
        let model = ScoringModel::logistic(weights, rng.random_range(-1.0..1.0));
        let background = random_background(&mut rng, 6, d);
        let x = Array1::from(
            (0..d).map(|_| rng.random_range(-3.0..3.0)).collect::<Vec<f64>>(),
        );
        let cfg = ValueFunctionConfig::new(background);
        let sampling = SamplingConfig { max_coalitions: 64, seed: sampling_seed };
        let first = kernel_shap(&model, &x.view(), &cfg, &sampling).unwrap();
        let second = kernel_shap(&model, &x.view(), &cfg, &sampling).unwrap();
        prop_assert_eq!(&first.phi, &second.phi);
        prop_assert_eq!(first.base_value, second.base_value);

        let v_empty = coalition_value(&model, &x.view(), Coalition::EMPTY, &cfg).unwrap();
        let v_full = coalition_value(&model, &x.view(), Coalition::full(d), &cfg).unwrap();
        let sum: f64 = first.phi.iter().sum();
        prop_assert!((sum - (v_full - v_empty)).abs() <= 1e-9);
    }
}
