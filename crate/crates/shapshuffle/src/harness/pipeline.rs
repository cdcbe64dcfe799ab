//! Experiment pipelines: from a spec to aggregated tables.
//!
//! Every randomized step draws from a seed derived from (spec seed,
//! replicate, role), so runs are reproducible regardless of thread count
//! and any cell can be recomputed in isolation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::attacks::{AdversarialScorer, AttackSpec};
use crate::error::{Error, Result};
use crate::fairness::{
    compute_fairness_metrics, fairness_drop, group_confusion, FairnessDrops, FairnessReport,
};
use crate::model::{
    fit_logistic, load_csv, threshold_classify, BackgroundStats, Dataset, FeatureSchema,
    LogisticHyper, ModelKind, ScoringModel,
};
use crate::seeding::derive_seed;
use crate::shapley::{
    exact_shapley, kernel_shap, linear_shap, residual_protected_attribution, AttributionMatrix,
    Explanation, SamplingConfig, ValueFunctionConfig,
};

use super::ranks::{rank_histogram, RankHistogram};
use super::spec::{DatasetSource, ExperimentSpec, ExplainMethod, ExplainerSpec, ModelSpec};
use super::synth::synth_dataset;

/// Everything one replicate needs: loaded data, fitted model, background
/// sample and row selections.
#[derive(Debug, Clone)]
pub struct Prepared {
    /// Full dataset after optional normalization.
    pub data: Dataset,
    pub model: ScoringModel,
    pub background: Dataset,
    /// Rows that get explained.
    pub explain_rows: Vec<usize>,
    /// Rows scored as the deployed batch (held-out split when the model
    /// was fitted, all rows otherwise).
    pub eval_rows: Vec<usize>,
    pub protected: Vec<String>,
    /// Seed all of this replicate's randomness derives from.
    pub rep_seed: u64,
}

/// Load data, fit the model and draw the background for one replicate.
pub fn prepare_replicate(spec: &ExperimentSpec, replicate: usize) -> Result<Prepared> {
    let rep_seed = derive_seed(spec.seed, 1 + replicate as u64);
    let raw = match &spec.dataset {
        DatasetSource::Csv { path, schema } => {
            let schema = FeatureSchema::from_json_file(schema)?;
            load_csv(path, &schema)?
        }
        DatasetSource::Synthetic { template, n, seed } => {
            synth_dataset(*template, *n, derive_seed(*seed, replicate as u64))?
        }
    };
    let data = if spec.normalize {
        raw.minmax_normalize()
    } else {
        raw
    };

    let protected = if spec.protected.is_empty() {
        data.schema().protected_names()
    } else {
        spec.protected.clone()
    };
    if protected.is_empty() {
        return Err(Error::Schema(
            "experiment needs at least one protected feature".into(),
        ));
    }
    for name in &protected {
        data.privileged_mask(name)?;
    }

    let n_scoring = data.schema().scoring_indices().len();
    let all_rows: Vec<usize> = (0..data.n_rows()).collect();
    let (model, train_rows, eval_rows) = match &spec.model {
        ModelSpec::EqualWeights => (
            ScoringModel::equal_weights(n_scoring),
            all_rows.clone(),
            all_rows.clone(),
        ),
        ModelSpec::Linear { weights, intercept } => (
            ScoringModel::linear(weights.clone(), *intercept),
            all_rows.clone(),
            all_rows.clone(),
        ),
        ModelSpec::Logistic {
            train_fraction,
            learning_rate,
            epochs,
        } => {
            let fit = fit_logistic(
                &data,
                *train_fraction,
                &LogisticHyper {
                    learning_rate: *learning_rate,
                    epochs: *epochs,
                    seed: derive_seed(rep_seed, 11),
                },
            )?;
            (fit.model, fit.train_indices, fit.held_out)
        }
    };

    // Background sample: training rows only, so explanations of held-out
    // instances never peek at them.
    let k = spec.background_size.min(train_rows.len());
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(rep_seed, 7));
    let mut chosen: Vec<usize> = rand::seq::index::sample(&mut rng, train_rows.len(), k)
        .into_iter()
        .map(|i| train_rows[i])
        .collect();
    chosen.sort_unstable();
    let background = data.select_rows(&chosen)?;

    let explain_rows: Vec<usize> = eval_rows
        .iter()
        .copied()
        .take(spec.explain_sample)
        .collect();

    Ok(Prepared {
        data,
        model,
        background,
        explain_rows,
        eval_rows,
        protected,
        rep_seed,
    })
}

/// Wrap the replicate's model in an attack.
pub fn build_scorer(prep: &Prepared, attack: &AttackSpec) -> Result<AdversarialScorer> {
    AdversarialScorer::new(
        prep.model.clone(),
        prep.protected.clone(),
        attack.clone(),
        prep.rep_seed,
        prep.data.schema().direction,
    )
}

/// Explain this replicate's sample against one (possibly attacked) scorer.
pub fn explain_cell(
    prep: &Prepared,
    scorer: &AdversarialScorer,
    explainer: &ExplainerSpec,
) -> Result<AttributionMatrix> {
    match explainer.method {
        ExplainMethod::Linear => explain_linear(prep, scorer),
        ExplainMethod::Exact | ExplainMethod::Kernel => {
            let cfg =
                ValueFunctionConfig::new(prep.background.clone()).with_batching(explainer.batching);
            let rows: Result<Vec<(usize, Explanation)>> = prep
                .explain_rows
                .par_iter()
                .map(|&i| {
                    let x = prep.data.instance(i).to_owned();
                    let e = match explainer.method {
                        ExplainMethod::Exact => exact_shapley(scorer, &x.view(), &cfg)?,
                        _ => kernel_shap(
                            scorer,
                            &x.view(),
                            &cfg,
                            &SamplingConfig {
                                max_coalitions: explainer.max_coalitions,
                                seed: derive_seed(prep.rep_seed, 0x4B00_0000 + i as u64),
                            },
                        )?,
                    };
                    Ok((i, e))
                })
                .collect();
            Ok(AttributionMatrix::from_explanations(
                prep.data.feature_names(),
                rows?,
            ))
        }
    }
}

/// Closed-form attribution for scoring features plus the residual route for
/// the protected feature.
fn explain_linear(prep: &Prepared, scorer: &AdversarialScorer) -> Result<AttributionMatrix> {
    if prep.model.kind != ModelKind::Linear {
        return Err(Error::Capability(
            "the closed-form explainer requires a linear model".into(),
        ));
    }
    if prep.protected.len() != 1 {
        return Err(Error::Capability(
            "the residual route supports exactly one protected feature".into(),
        ));
    }
    let subset = prep.data.select_rows(&prep.explain_rows)?;
    let stats = BackgroundStats::compute(&prep.model, &prep.background)?;
    let mut matrix = linear_shap(&prep.model, &subset, &stats)?;
    matrix.ids = prep.explain_rows.clone();
    let residual = residual_protected_attribution(&prep.model, scorer, &subset)?;
    let p_col = subset
        .schema()
        .matrix_index(&prep.protected[0])
        .expect("validated protected feature");
    for (i, r) in residual.per_row.iter().enumerate() {
        matrix.values[(i, p_col)] = *r;
    }
    Ok(matrix)
}

/// Fairness of honest vs attacked decisions on the deployed batch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FairnessAudit {
    pub before: FairnessReport,
    pub after: FairnessReport,
    pub drops: FairnessDrops,
}

/// Score the evaluation rows as one deployed batch with and without the
/// attack, threshold both, and compare fairness.
pub fn fairness_audit(prep: &Prepared, scorer: &AdversarialScorer, tau: f64) -> Result<FairnessAudit> {
    let batch = prep.data.select_rows(&prep.eval_rows)?;
    let direction = prep.data.schema().direction;
    let honest = prep.model.score_batch(&batch)?;
    let attacked = scorer.score_batch(&batch)?;
    let decisions_before =
        threshold_classify(honest.as_slice().expect("contiguous"), tau, direction);
    let decisions_after =
        threshold_classify(attacked.as_slice().expect("contiguous"), tau, direction);
    let mask = batch.intersection_privileged_mask(&prep.protected)?;
    let before =
        compute_fairness_metrics(&group_confusion(batch.labels(), &decisions_before, &mask)?);
    let after =
        compute_fairness_metrics(&group_confusion(batch.labels(), &decisions_after, &mask)?);
    Ok(FairnessAudit {
        before,
        after,
        drops: fairness_drop(&before, &after),
    })
}

/// One aggregated sweep measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub attack: String,
    pub param: Option<f64>,
    pub explainer: String,
    pub feature: String,
    pub mean_abs_phi: f64,
}

/// Sweep results: one row per (attack, explainer, feature), averaged over
/// replicates. Cells whose explainer rejected the configuration are listed
/// in `errors` instead.
#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    pub feature_names: Vec<String>,
    pub protected: Vec<String>,
    pub rows: Vec<SweepRow>,
    pub errors: Vec<String>,
}

impl SweepTable {
    /// Mean |phi| of one feature under one attack and explainer.
    pub fn lookup(&self, attack: &str, explainer: &str, feature: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.attack == attack && r.explainer == explainer && r.feature == feature)
            .map(|r| r.mean_abs_phi)
    }
}

/// Run the full attack x explainer sweep.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<SweepTable> {
    spec.validate()?;
    let n_cells = spec.attacks.len() * spec.explainers.len();
    let mut sums: Vec<Option<Vec<f64>>> = vec![None; n_cells];
    let mut counts = vec![0usize; n_cells];
    let mut errors = Vec::new();
    let mut feature_names = Vec::new();
    let mut protected = Vec::new();

    for replicate in 0..spec.replicates {
        let prep = prepare_replicate(spec, replicate)?;
        if replicate == 0 {
            feature_names = prep.data.feature_names();
            protected = prep.protected.clone();
        }
        for (ai, attack) in spec.attacks.iter().enumerate() {
            let scorer = build_scorer(&prep, attack)?;
            for (ei, explainer) in spec.explainers.iter().enumerate() {
                let cell = ai * spec.explainers.len() + ei;
                match explain_cell(&prep, &scorer, explainer) {
                    Ok(matrix) => {
                        let mean_abs = matrix.mean_abs();
                        let slot = sums[cell].get_or_insert_with(|| vec![0.0; mean_abs.len()]);
                        for (acc, v) in slot.iter_mut().zip(&mean_abs) {
                            *acc += v;
                        }
                        counts[cell] += 1;
                    }
                    Err(e) => {
                        if replicate == 0 {
                            errors.push(format!(
                                "attack {} / explainer {}: {e}",
                                ExperimentSpec::attack_label(attack),
                                explainer.method.label()
                            ));
                        }
                    }
                }
            }
        }
    }

    let mut rows = Vec::new();
    for (ai, attack) in spec.attacks.iter().enumerate() {
        for (ei, explainer) in spec.explainers.iter().enumerate() {
            let cell = ai * spec.explainers.len() + ei;
            let Some(sum) = &sums[cell] else { continue };
            let n = counts[cell] as f64;
            for (j, feature) in feature_names.iter().enumerate() {
                rows.push(SweepRow {
                    attack: ExperimentSpec::attack_label(attack),
                    param: attack.kind.as_ref().and_then(|k| k.param()),
                    explainer: explainer.method.label().to_string(),
                    feature: feature.clone(),
                    mean_abs_phi: sum[j] / n,
                });
            }
        }
    }

    Ok(SweepTable {
        feature_names,
        protected,
        rows,
        errors,
    })
}

/// One attack's attribution profile in a region study.
#[derive(Debug, Clone, Serialize)]
pub struct RegionCell {
    pub attack: String,
    pub mean_abs_phi: Vec<f64>,
    pub histogram: RankHistogram,
}

/// Region-study results: per-attack rank histograms from one replicate.
#[derive(Debug, Clone, Serialize)]
pub struct RegionOutcome {
    pub feature_names: Vec<String>,
    pub protected: Vec<String>,
    pub cells: Vec<RegionCell>,
}

/// Explain every attack with the first configured explainer and collect
/// attribution rank histograms (single replicate).
pub fn run_region_study(spec: &ExperimentSpec) -> Result<RegionOutcome> {
    spec.validate()?;
    let prep = prepare_replicate(spec, 0)?;
    let explainer = &spec.explainers[0];
    let mut cells = Vec::new();
    for attack in &spec.attacks {
        let scorer = build_scorer(&prep, attack)?;
        let matrix = explain_cell(&prep, &scorer, explainer)?;
        cells.push(RegionCell {
            attack: ExperimentSpec::attack_label(attack),
            mean_abs_phi: matrix.mean_abs(),
            histogram: rank_histogram(&matrix)?,
        });
    }
    Ok(RegionOutcome {
        feature_names: prep.data.feature_names(),
        protected: prep.protected.clone(),
        cells,
    })
}

/// Grid setup: one base experiment crossed with protected-feature sets and
/// a palette of half-batch attacks.
#[derive(Debug, Clone, Serialize)]
pub struct GridConfig {
    pub base: ExperimentSpec,
    pub protected_sets: Vec<Vec<String>>,
    /// Palette applied independently as top and bottom half; `None` leaves
    /// that half untouched.
    pub halves: Vec<Option<AttackSpec>>,
}

/// One grid cell: a (protected set, top, bottom) combination.
#[derive(Debug, Clone, Serialize)]
pub struct GridCell {
    pub protected: Vec<String>,
    pub top: String,
    pub bottom: String,
    pub mean_abs_phi: Vec<f64>,
    pub histogram: RankHistogram,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fairness: Option<FairnessAudit>,
}

/// Grid results over all cells.
#[derive(Debug, Clone, Serialize)]
pub struct GridOutcome {
    pub feature_names: Vec<String>,
    pub cells: Vec<GridCell>,
}

fn half_label(half: &Option<AttackSpec>) -> String {
    half.as_ref().map_or_else(|| "none".to_string(), |s| s.label())
}

/// Run the hybrid-attack grid: every (top, bottom) pair from the palette,
/// for every protected-feature set, explained with the first configured
/// explainer; fairness is audited when the base spec sets a threshold.
pub fn run_hybrid_grid(cfg: &GridConfig) -> Result<GridOutcome> {
    cfg.base.validate()?;
    if cfg.protected_sets.is_empty() || cfg.halves.is_empty() {
        return Err(Error::Config(
            "grid needs at least one protected set and one half option".into(),
        ));
    }
    let mut cells = Vec::new();
    let mut feature_names = Vec::new();
    for set in &cfg.protected_sets {
        let mut spec = cfg.base.clone();
        spec.protected = set.clone();
        let prep = prepare_replicate(&spec, 0)?;
        if feature_names.is_empty() {
            feature_names = prep.data.feature_names();
        }
        for top in &cfg.halves {
            for bottom in &cfg.halves {
                let attack = AttackSpec::hybrid(top.clone(), bottom.clone());
                let scorer = build_scorer(&prep, &attack)?;
                let matrix = explain_cell(&prep, &scorer, &cfg.base.explainers[0])?;
                let fairness = match cfg.base.threshold {
                    Some(tau) => Some(fairness_audit(&prep, &scorer, tau)?),
                    None => None,
                };
                cells.push(GridCell {
                    protected: set.clone(),
                    top: half_label(top),
                    bottom: half_label(bottom),
                    mean_abs_phi: matrix.mean_abs(),
                    histogram: rank_histogram(&matrix)?,
                    fairness,
                });
            }
        }
    }
    Ok(GridOutcome {
        feature_names,
        cells,
    })
}
