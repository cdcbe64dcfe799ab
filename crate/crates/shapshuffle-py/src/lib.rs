//! Python bindings for the shapshuffle library.
//!
//! The compiled module is named `shapshuffle_py`. Classes wrap the Rust
//! types one-to-one; operations with structured results return plain dicts
//! and lists, so the module has no Python-side dependencies.
//!
//! Build the importable shared library with
//! `cargo build --release -p shapshuffle-py --features extension-module`
//! and copy `libshapshuffle_py.so` onto `sys.path` as `shapshuffle_py.so`.

use ndarray::{Array1, Array2};
use pyo3::exceptions::{PyIOError, PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use shapshuffle::attacks::{apply_spec, prepare_sorted_view, AdversarialScorer, AttackSpec};
use shapshuffle::fairness::{
    compute_fairness_metrics, fairness_drop, group_confusion, FairnessDrops, FairnessReport,
};
use shapshuffle::harness::{synth_dataset, SynthTemplate};
use shapshuffle::model::{
    load_csv, threshold_classify, BackgroundStats, BatchScorer, Dataset as CoreDataset, Direction,
    FeatureRole, FeatureSchema, FeatureSpec, ScoringModel,
};
use shapshuffle::shapley::{
    consistency_check as check_consistency, exact_shapley, kernel_shap, linear_shap,
    residual_protected_attribution, Batching, SamplingConfig, ValueFunctionConfig,
};
use shapshuffle::Error as LibError;

fn lib_err(e: LibError) -> PyErr {
    // Unreadable files surface as OSError even when the csv reader is the
    // layer that tripped over them; everything else is a value problem.
    let is_io = match &e {
        LibError::Io(_) => true,
        LibError::Csv(c) => c.is_io_error(),
        _ => false,
    };
    if is_io {
        PyIOError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn parse_direction(name: &str) -> PyResult<Direction> {
    match name {
        "higher_is_superior" => Ok(Direction::HigherIsSuperior),
        "lower_is_superior" => Ok(Direction::LowerIsSuperior),
        other => Err(PyValueError::new_err(format!(
            "unknown direction {other:?}; expected higher_is_superior or lower_is_superior"
        ))),
    }
}

fn direction_name(direction: Direction) -> &'static str {
    match direction {
        Direction::HigherIsSuperior => "higher_is_superior",
        Direction::LowerIsSuperior => "lower_is_superior",
    }
}

fn parse_role(name: &str) -> PyResult<FeatureRole> {
    match name {
        "scoring" => Ok(FeatureRole::Scoring),
        "protected" => Ok(FeatureRole::Protected),
        "label" => Ok(FeatureRole::Label),
        "id" => Ok(FeatureRole::Id),
        other => Err(PyValueError::new_err(format!(
            "unknown feature role {other:?}; expected scoring, protected, label or id"
        ))),
    }
}

fn parse_template(name: &str) -> PyResult<SynthTemplate> {
    match name {
        "admission" => Ok(SynthTemplate::Admission),
        "diabetes" => Ok(SynthTemplate::Diabetes),
        "credit" => Ok(SynthTemplate::Credit),
        other => Err(PyValueError::new_err(format!(
            "unknown template {other:?}; expected admission, diabetes or credit"
        ))),
    }
}

fn parse_batching(name: &str) -> PyResult<Batching> {
    match name {
        "per_coalition" => Ok(Batching::PerCoalition),
        "mega_batch" => Ok(Batching::MegaBatch),
        other => Err(PyValueError::new_err(format!(
            "unknown batching {other:?}; expected per_coalition or mega_batch"
        ))),
    }
}

fn matrix_from_rows(rows: Vec<Vec<f64>>) -> PyResult<Array2<f64>> {
    let n = rows.len();
    let d = rows.first().map_or(0, Vec::len);
    let mut flat = Vec::with_capacity(n * d);
    for (i, row) in rows.into_iter().enumerate() {
        if row.len() != d {
            return Err(PyValueError::new_err(format!(
                "row {i} has {} values but row 0 has {d}",
                row.len()
            )));
        }
        flat.extend(row);
    }
    Array2::from_shape_vec((n, d), flat)
        .map_err(|e| PyValueError::new_err(format!("bad matrix shape: {e}")))
}

/// Column declarations plus scoring direction and privileged value.
#[pyclass(module = "shapshuffle_py", skip_from_py_object)]
#[derive(Clone)]
pub struct Schema {
    inner: FeatureSchema,
}

#[pymethods]
impl Schema {
    /// `features` is a list of `(name, role)` pairs with roles `scoring`,
    /// `protected`, `label` or `id`, in column order.
    #[new]
    #[pyo3(signature = (features, direction = "higher_is_superior", privileged_value = "1"))]
    fn new(
        features: Vec<(String, String)>,
        direction: &str,
        privileged_value: &str,
    ) -> PyResult<Self> {
        let specs = features
            .into_iter()
            .map(|(name, role)| Ok(FeatureSpec::new(name, parse_role(&role)?)))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = FeatureSchema {
            features: specs,
            direction: parse_direction(direction)?,
            privileged_value: privileged_value.to_string(),
        };
        inner.validate().map_err(lib_err)?;
        Ok(Schema { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner: FeatureSchema = serde_json::from_str(text)
            .map_err(|e| PyValueError::new_err(format!("bad schema JSON: {e}")))?;
        inner.validate().map_err(lib_err)?;
        Ok(Schema { inner })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.inner)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Names of the matrix columns (scoring + protected), in order.
    #[getter]
    fn feature_names(&self) -> Vec<String> {
        self.inner.matrix_names()
    }

    #[getter]
    fn scoring_features(&self) -> Vec<String> {
        self.inner.scoring_names()
    }

    #[getter]
    fn protected_features(&self) -> Vec<String> {
        self.inner.protected_names()
    }

    #[getter]
    fn direction(&self) -> &'static str {
        direction_name(self.inner.direction)
    }

    #[getter]
    fn privileged_value(&self) -> String {
        self.inner.privileged_value.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Schema(features={:?}, direction={:?})",
            self.inner.matrix_names(),
            direction_name(self.inner.direction)
        )
    }
}

/// A numeric batch: rows × matrix features, optional 0/1 labels, schema.
#[pyclass(module = "shapshuffle_py", skip_from_py_object)]
#[derive(Clone)]
pub struct Dataset {
    inner: CoreDataset,
}

#[pymethods]
impl Dataset {
    #[new]
    #[pyo3(signature = (schema, rows, labels = None))]
    fn new(schema: &Schema, rows: Vec<Vec<f64>>, labels: Option<Vec<u8>>) -> PyResult<Self> {
        let matrix = matrix_from_rows(rows)?;
        let inner = CoreDataset::new(matrix, schema.inner.clone(), labels).map_err(lib_err)?;
        Ok(Dataset { inner })
    }

    /// Load a CSV file (header row required) against a schema.
    #[staticmethod]
    fn from_csv(path: &str, schema: &Schema) -> PyResult<Self> {
        let inner = load_csv(path, &schema.inner).map_err(lib_err)?;
        Ok(Dataset { inner })
    }

    /// Generate one of the built-in synthetic templates: `admission`,
    /// `diabetes` or `credit`.
    #[staticmethod]
    #[pyo3(signature = (template, n, seed = 0))]
    fn synthetic(template: &str, n: usize, seed: u64) -> PyResult<Self> {
        let inner = synth_dataset(parse_template(template)?, n, seed).map_err(lib_err)?;
        Ok(Dataset { inner })
    }

    /// Min-max-normalize scoring columns into [0, 1]; protected columns are
    /// untouched.
    fn normalized(&self) -> Dataset {
        Dataset {
            inner: self.inner.minmax_normalize(),
        }
    }

    #[getter]
    fn n_rows(&self) -> usize {
        self.inner.n_rows()
    }

    #[getter]
    fn n_features(&self) -> usize {
        self.inner.n_features()
    }

    #[getter]
    fn feature_names(&self) -> Vec<String> {
        self.inner.feature_names()
    }

    #[getter]
    fn labels(&self) -> Option<Vec<u8>> {
        self.inner.labels().map(<[u8]>::to_vec)
    }

    #[getter]
    fn schema(&self) -> Schema {
        Schema {
            inner: self.inner.schema().clone(),
        }
    }

    /// The full matrix as a list of row lists.
    fn to_rows(&self) -> Vec<Vec<f64>> {
        self.inner
            .rows()
            .rows()
            .into_iter()
            .map(|r| r.to_vec())
            .collect()
    }

    fn instance(&self, index: usize) -> PyResult<Vec<f64>> {
        if index >= self.inner.n_rows() {
            return Err(PyIndexError::new_err(format!(
                "row {index} out of bounds for {} rows",
                self.inner.n_rows()
            )));
        }
        Ok(self.inner.instance(index).to_vec())
    }

    /// Privileged mask for one or more protected features; with several,
    /// a row is privileged only if it is privileged under every feature.
    fn privileged_mask(&self, features: Vec<String>) -> PyResult<Vec<bool>> {
        self.inner
            .intersection_privileged_mask(&features)
            .map_err(lib_err)
    }

    fn select(&self, indices: Vec<usize>) -> PyResult<Dataset> {
        let inner = self.inner.select_rows(&indices).map_err(lib_err)?;
        Ok(Dataset { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.n_rows()
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset(n_rows={}, features={:?})",
            self.inner.n_rows(),
            self.inner.feature_names()
        )
    }
}

/// Linear or logistic model over the scoring features of a schema.
#[pyclass(module = "shapshuffle_py", skip_from_py_object)]
#[derive(Clone)]
pub struct Model {
    inner: ScoringModel,
}

#[pymethods]
impl Model {
    #[staticmethod]
    #[pyo3(signature = (weights, intercept = 0.0))]
    fn linear(weights: Vec<f64>, intercept: f64) -> Model {
        Model {
            inner: ScoringModel::linear(weights, intercept),
        }
    }

    #[staticmethod]
    #[pyo3(signature = (weights, intercept = 0.0))]
    fn logistic(weights: Vec<f64>, intercept: f64) -> Model {
        Model {
            inner: ScoringModel::logistic(weights, intercept),
        }
    }

    /// Linear model averaging `k` scoring features with weight 1/k each.
    #[staticmethod]
    fn equal_weights(k: usize) -> Model {
        Model {
            inner: ScoringModel::equal_weights(k),
        }
    }

    /// One honest score per row; protected columns are never read.
    fn score(&self, data: &Dataset) -> PyResult<Vec<f64>> {
        Ok(self
            .inner
            .score_batch(&data.inner)
            .map_err(lib_err)?
            .to_vec())
    }

    /// Wrap the model in a batch-level shuffling attack driven by the given
    /// protected features.
    #[pyo3(signature = (protected, attack, seed = 0, direction = "higher_is_superior"))]
    fn attacked(
        &self,
        protected: Vec<String>,
        attack: &Attack,
        seed: u64,
        direction: &str,
    ) -> PyResult<AttackedModel> {
        let inner = AdversarialScorer::new(
            self.inner.clone(),
            protected,
            attack.inner.clone(),
            seed,
            parse_direction(direction)?,
        )
        .map_err(lib_err)?;
        Ok(AttackedModel { inner })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner.kind {
            shapshuffle::model::ModelKind::Linear => "linear",
            shapshuffle::model::ModelKind::Logistic => "logistic",
        }
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights.clone()
    }

    #[getter]
    fn intercept(&self) -> f64 {
        self.inner.intercept
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(kind={:?}, weights={:?}, intercept={})",
            self.kind(),
            self.inner.weights,
            self.inner.intercept
        )
    }
}

/// A model wrapped by a score-shuffling attack: same score multiset per
/// batch, adversarial assignment to rows.
#[pyclass(module = "shapshuffle_py")]
pub struct AttackedModel {
    inner: AdversarialScorer,
}

#[pymethods]
impl AttackedModel {
    fn score(&self, data: &Dataset) -> PyResult<Vec<f64>> {
        Ok(self.inner.score(&data.inner).map_err(lib_err)?.to_vec())
    }

    fn __repr__(&self) -> String {
        "AttackedModel(...)".to_string()
    }
}

/// A shuffle attack: one kernel with optional modifiers, or a hybrid of
/// two kernels for the top and bottom half of the sorted batch.
#[pyclass(module = "shapshuffle_py", skip_from_py_object)]
#[derive(Clone)]
pub struct Attack {
    inner: AttackSpec,
}

impl Attack {
    fn checked(inner: AttackSpec) -> PyResult<Attack> {
        inner.validate().map_err(lib_err)?;
        Ok(Attack { inner })
    }
}

#[pymethods]
impl Attack {
    /// The identity: scores pass through untouched.
    #[staticmethod]
    fn none() -> Attack {
        Attack {
            inner: AttackSpec::none(),
        }
    }

    /// Privileged rows take the best scores, preserving within-group order.
    #[staticmethod]
    fn dominance() -> Attack {
        Attack {
            inner: AttackSpec::dominance(),
        }
    }

    /// Merge the group queues, flipping a coin with `head_prob` for the
    /// privileged side at each step. `coin` is `literal` (tails merges
    /// neutrally) or `bernoulli` (tails favors the unprivileged side).
    #[staticmethod]
    #[pyo3(signature = (head_prob, coin = "literal"))]
    fn mixing(head_prob: f64, coin: &str) -> PyResult<Attack> {
        let coin_variant = match coin {
            "literal" => shapshuffle::attacks::CoinVariant::Literal,
            "bernoulli" => shapshuffle::attacks::CoinVariant::Bernoulli,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown coin {other:?}; expected literal or bernoulli"
                )))
            }
        };
        Attack::checked(AttackSpec::single(
            shapshuffle::attacks::AttackKind::Mixing {
                head_prob,
                coin_variant,
            },
        ))
    }

    /// Bubble privileged rows upward with passes starting at the sorted
    /// position addressed by `quantile`.
    #[staticmethod]
    #[pyo3(signature = (quantile, single_step = false))]
    fn swapping(quantile: f64, single_step: bool) -> PyResult<Attack> {
        Attack::checked(AttackSpec::single(
            shapshuffle::attacks::AttackKind::Swapping {
                quantile,
                single_step,
            },
        ))
    }

    /// Independent kernels for the top and bottom half of the sorted batch.
    #[staticmethod]
    #[pyo3(signature = (top = None, bottom = None))]
    fn hybrid(top: Option<&Attack>, bottom: Option<&Attack>) -> PyResult<Attack> {
        Attack::checked(AttackSpec::hybrid(
            top.map(|a| a.inner.clone()),
            bottom.map(|a| a.inner.clone()),
        ))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Attack> {
        let inner: AttackSpec = serde_json::from_str(text)
            .map_err(|e| PyValueError::new_err(format!("bad attack JSON: {e}")))?;
        Attack::checked(inner)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.inner)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Restrict the attack to the top `region` fraction of sorted positions.
    fn with_region(&self, region: f64) -> PyResult<Attack> {
        Attack::checked(self.inner.clone().with_region(region))
    }

    /// Execute each elementary shuffle action only with this probability.
    fn with_frequency(&self, frequency: f64) -> PyResult<Attack> {
        Attack::checked(self.inner.clone().with_frequency(frequency))
    }

    /// Cap the number of executed elementary actions.
    fn with_max_count(&self, max_count: u64) -> PyResult<Attack> {
        Attack::checked(self.inner.clone().with_max_count(max_count))
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label()
    }

    fn __repr__(&self) -> String {
        format!("Attack({:?})", self.inner.label())
    }
}

/// Attribution of one instance: per-feature values plus the base value.
#[pyclass(module = "shapshuffle_py", skip_from_py_object)]
#[derive(Clone)]
pub struct Explanation {
    #[pyo3(get)]
    pub phi: Vec<f64>,
    #[pyo3(get)]
    pub base_value: f64,
}

#[pymethods]
impl Explanation {
    /// `base + sum(phi)`: the output the explanation claims.
    fn reconstruction(&self) -> f64 {
        self.base_value + self.phi.iter().sum::<f64>()
    }

    fn __repr__(&self) -> String {
        format!(
            "Explanation(phi={:?}, base_value={})",
            self.phi, self.base_value
        )
    }
}

/// Borrow either a [`Model`] or an [`AttackedModel`] as a batch scorer.
enum ScorerRef<'py> {
    Honest(PyRef<'py, Model>),
    Attacked(PyRef<'py, AttackedModel>),
}

impl ScorerRef<'_> {
    fn as_dyn(&self) -> &dyn BatchScorer {
        match self {
            ScorerRef::Honest(m) => &m.inner,
            ScorerRef::Attacked(m) => &m.inner,
        }
    }
}

fn borrow_scorer<'py>(obj: &Bound<'py, PyAny>) -> PyResult<ScorerRef<'py>> {
    if let Ok(model) = obj.extract::<PyRef<'py, Model>>() {
        return Ok(ScorerRef::Honest(model));
    }
    if let Ok(attacked) = obj.extract::<PyRef<'py, AttackedModel>>() {
        return Ok(ScorerRef::Attacked(attacked));
    }
    Err(PyValueError::new_err(
        "expected a Model or AttackedModel as the scorer",
    ))
}

/// Apply an attack directly to a score vector.
fn shuffle_scores_impl(
    scores: Vec<f64>,
    privileged: Vec<bool>,
    attack: &Attack,
    seed: u64,
    direction: &str,
) -> PyResult<Vec<f64>> {
    if scores.len() != privileged.len() {
        return Err(PyValueError::new_err(format!(
            "{} scores but {} group flags",
            scores.len(),
            privileged.len()
        )));
    }
    attack.inner.validate().map_err(lib_err)?;
    let view = prepare_sorted_view(&scores, &privileged, parse_direction(direction)?);
    Ok(apply_spec(&view, &attack.inner, seed))
}

/// Shuffle a score vector with an attack, without any model in the loop.
#[pyfunction]
#[pyo3(signature = (scores, privileged, attack, seed = 0, direction = "higher_is_superior"))]
fn shuffle_scores(
    scores: Vec<f64>,
    privileged: Vec<bool>,
    attack: &Attack,
    seed: u64,
    direction: &str,
) -> PyResult<Vec<f64>> {
    shuffle_scores_impl(scores, privileged, attack, seed, direction)
}

fn explain_impl(
    f: &dyn BatchScorer,
    background: &CoreDataset,
    x: Vec<f64>,
    method: &str,
    batching: Batching,
    max_coalitions: usize,
    seed: u64,
) -> PyResult<Explanation> {
    let x = Array1::from(x);
    let cfg = ValueFunctionConfig::new(background.clone()).with_batching(batching);
    let explanation = match method {
        "exact" => exact_shapley(f, &x.view(), &cfg),
        "kernel" => kernel_shap(
            f,
            &x.view(),
            &cfg,
            &SamplingConfig {
                max_coalitions,
                seed,
            },
        ),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown method {other:?}; expected exact or kernel"
            )))
        }
    }
    .map_err(lib_err)?;
    Ok(Explanation {
        phi: explanation.phi,
        base_value: explanation.base_value,
    })
}

/// Shapley attribution of one instance against a background sample.
///
/// `scorer` is a `Model` or `AttackedModel`; `batching` controls whether
/// coalition evaluations reach the scorer one batch per coalition
/// (`per_coalition`) or concatenated into one call (`mega_batch`).
#[pyfunction]
#[pyo3(signature = (scorer, background, x, method = "exact", batching = "mega_batch",
                    max_coalitions = 4096, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn explain_instance(
    scorer: &Bound<'_, PyAny>,
    background: &Dataset,
    x: Vec<f64>,
    method: &str,
    batching: &str,
    max_coalitions: usize,
    seed: u64,
) -> PyResult<Explanation> {
    let scorer = borrow_scorer(scorer)?;
    explain_impl(
        scorer.as_dyn(),
        &background.inner,
        x,
        method,
        parse_batching(batching)?,
        max_coalitions,
        seed,
    )
}

/// Closed-form attribution of every row of `data` under a linear model.
///
/// Returns a dict with `feature_names`, `values` (list of rows), and
/// `base_values`.
#[pyfunction]
fn linear_attributions<'py>(
    py: Python<'py>,
    model: &Model,
    data: &Dataset,
    background: &Dataset,
) -> PyResult<Bound<'py, PyDict>> {
    let stats = BackgroundStats::compute(&model.inner, &background.inner).map_err(lib_err)?;
    let matrix = linear_shap(&model.inner, &data.inner, &stats).map_err(lib_err)?;
    let values: Vec<Vec<f64>> = matrix
        .values
        .rows()
        .into_iter()
        .map(|r| r.to_vec())
        .collect();
    let dict = PyDict::new(py);
    dict.set_item("feature_names", matrix.feature_names)?;
    dict.set_item("values", values)?;
    dict.set_item("base_values", matrix.base_values)?;
    Ok(dict)
}

/// Difference between a wrapped scorer and its honest base on a batch: the
/// protected feature's attribution under the residual route, with summary
/// statistics and the shift bound.
#[pyfunction]
fn residual_attribution<'py>(
    py: Python<'py>,
    model: &Model,
    scorer: &Bound<'_, PyAny>,
    data: &Dataset,
) -> PyResult<Bound<'py, PyDict>> {
    let scorer = borrow_scorer(scorer)?;
    let outcome = residual_protected_attribution(&model.inner, scorer.as_dyn(), &data.inner)
        .map_err(lib_err)?;
    let dict = PyDict::new(py);
    dict.set_item("per_row", outcome.per_row.to_vec())?;
    dict.set_item("mean_abs", outcome.mean_abs)?;
    dict.set_item("max_abs", outcome.max_abs)?;
    dict.set_item("bound_holds", outcome.bound_holds)?;
    Ok(dict)
}

/// Compare an explanation's reconstruction with the score its instance
/// receives when the deployed batch is scored as a whole.
#[pyfunction]
#[pyo3(signature = (explanation, scorer, data, instance, tolerance = 1e-3))]
fn consistency_check<'py>(
    py: Python<'py>,
    explanation: &Explanation,
    scorer: &Bound<'_, PyAny>,
    data: &Dataset,
    instance: usize,
    tolerance: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let scorer = borrow_scorer(scorer)?;
    let outcome = check_consistency(
        &explanation.phi,
        explanation.base_value,
        scorer.as_dyn(),
        &data.inner,
        instance,
        tolerance,
    )
    .map_err(lib_err)?;
    let dict = PyDict::new(py);
    dict.set_item("reconstruction", outcome.reconstruction)?;
    dict.set_item("observed", outcome.observed)?;
    dict.set_item("gap", outcome.gap)?;
    dict.set_item("flagged", outcome.flagged)?;
    Ok(dict)
}

fn report_to_dict<'py>(py: Python<'py>, report: &FairnessReport) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item(
        "statistical_parity_difference",
        report.statistical_parity_difference,
    )?;
    dict.set_item(
        "equal_opportunity_difference",
        report.equal_opportunity_difference,
    )?;
    dict.set_item("average_odds_difference", report.average_odds_difference)?;
    dict.set_item("disparate_impact", report.disparate_impact)?;
    dict.set_item("theil_between_groups", report.theil_between_groups)?;
    Ok(dict)
}

fn drops_to_dict<'py>(py: Python<'py>, drops: &FairnessDrops) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    for (name, value) in drops.entries() {
        dict.set_item(name, value)?;
    }
    Ok(dict)
}

fn report_impl(
    scores: &[f64],
    privileged: &[bool],
    threshold: f64,
    labels: Option<&[u8]>,
    direction: Direction,
) -> PyResult<FairnessReport> {
    let decisions = threshold_classify(scores, threshold, direction);
    let stats = group_confusion(labels, &decisions, privileged).map_err(lib_err)?;
    Ok(compute_fairness_metrics(&stats))
}

/// The five group-fairness metrics of thresholded decisions.
///
/// Without `labels` the label-dependent metrics come out `None`.
#[pyfunction]
#[pyo3(signature = (scores, privileged, threshold, labels = None,
                    direction = "higher_is_superior"))]
fn fairness_report<'py>(
    py: Python<'py>,
    scores: Vec<f64>,
    privileged: Vec<bool>,
    threshold: f64,
    labels: Option<Vec<u8>>,
    direction: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let report = report_impl(
        &scores,
        &privileged,
        threshold,
        labels.as_deref(),
        parse_direction(direction)?,
    )?;
    report_to_dict(py, &report)
}

/// Fairness before and after an intervention on the same batch, plus the
/// per-metric drops (positive drop = less fair afterwards).
#[pyfunction]
#[pyo3(signature = (before_scores, after_scores, privileged, threshold, labels = None,
                    direction = "higher_is_superior"))]
#[allow(clippy::too_many_arguments)]
fn fairness_comparison<'py>(
    py: Python<'py>,
    before_scores: Vec<f64>,
    after_scores: Vec<f64>,
    privileged: Vec<bool>,
    threshold: f64,
    labels: Option<Vec<u8>>,
    direction: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let direction = parse_direction(direction)?;
    let before = report_impl(
        &before_scores,
        &privileged,
        threshold,
        labels.as_deref(),
        direction,
    )?;
    let after = report_impl(
        &after_scores,
        &privileged,
        threshold,
        labels.as_deref(),
        direction,
    )?;
    let drops = fairness_drop(&before, &after);
    let dict = PyDict::new(py);
    dict.set_item("before", report_to_dict(py, &before)?)?;
    dict.set_item("after", report_to_dict(py, &after)?)?;
    dict.set_item("drops", drops_to_dict(py, &drops)?)?;
    Ok(dict)
}

#[pymodule]
fn shapshuffle_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Schema>()?;
    m.add_class::<Dataset>()?;
    m.add_class::<Model>()?;
    m.add_class::<AttackedModel>()?;
    m.add_class::<Attack>()?;
    m.add_class::<Explanation>()?;
    m.add_function(wrap_pyfunction!(shuffle_scores, m)?)?;
    m.add_function(wrap_pyfunction!(explain_instance, m)?)?;
    m.add_function(wrap_pyfunction!(linear_attributions, m)?)?;
    m.add_function(wrap_pyfunction!(residual_attribution, m)?)?;
    m.add_function(wrap_pyfunction!(consistency_check, m)?)?;
    m.add_function(wrap_pyfunction!(fairness_report, m)?)?;
    m.add_function(wrap_pyfunction!(fairness_comparison, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
