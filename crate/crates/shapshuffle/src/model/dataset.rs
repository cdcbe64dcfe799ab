//! In-memory feature matrix plus the schema that produced it.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::schema::{FeatureRole, FeatureSchema};

/// A loaded batch: numeric matrix (rows x matrix features), optional binary
/// labels, and the schema describing the columns.
///
/// Protected columns are stored as integer codes in f64: the privileged raw
/// value maps to 1, the remaining distinct raw values map to 0, 2, 3, ... in
/// sorted order. Only the privileged/unprivileged distinction carries
/// meaning downstream; other codes exist so batches hash deterministically.
#[derive(Debug, Clone)]
pub struct Dataset {
    rows: Array2<f64>,
    labels: Option<Vec<u8>>,
    schema: FeatureSchema,
}

impl Dataset {
    /// Wrap an existing matrix. Validates shape, finiteness and label length.
    pub fn new(rows: Array2<f64>, schema: FeatureSchema, labels: Option<Vec<u8>>) -> Result<Self> {
        schema.validate()?;
        let width = schema.matrix_features().len();
        if rows.ncols() != width {
            return Err(Error::Dimension(format!(
                "matrix has {} columns but schema declares {} matrix features",
                rows.ncols(),
                width
            )));
        }
        if rows.nrows() == 0 {
            return Err(Error::Schema("dataset has no rows".into()));
        }
        if let Some(bad) = rows.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("non-finite cell value {bad}")));
        }
        if let Some(l) = &labels {
            if l.len() != rows.nrows() {
                return Err(Error::Dimension(format!(
                    "{} labels for {} rows",
                    l.len(),
                    rows.nrows()
                )));
            }
        }
        Ok(Dataset { rows, labels, schema })
    }

    /// Replace the matrix, keeping the schema and dropping labels. Used for
    /// synthetic batches (coalition imputation, attacked copies).
    pub fn with_rows(&self, rows: Array2<f64>) -> Result<Self> {
        Dataset::new(rows, self.schema.clone(), None)
    }

    pub fn n_rows(&self) -> usize {
        self.rows.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.rows.ncols()
    }

    pub fn rows(&self) -> ArrayView2<'_, f64> {
        self.rows.view()
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn labels(&self) -> Option<&[u8]> {
        self.labels.as_deref()
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.schema.matrix_names()
    }

    pub fn column(&self, index: usize) -> ArrayView1<'_, f64> {
        self.rows.column(index)
    }

    pub fn instance(&self, index: usize) -> ArrayView1<'_, f64> {
        self.rows.row(index)
    }

    /// Privileged-group mask for one protected feature (code == 1).
    pub fn privileged_mask(&self, feature: &str) -> Result<Vec<bool>> {
        let spec = self
            .schema
            .feature(feature)
            .ok_or_else(|| Error::Schema(format!("unknown feature \"{feature}\"")))?;
        if spec.role != FeatureRole::Protected {
            return Err(Error::Schema(format!(
                "feature \"{feature}\" is not protected"
            )));
        }
        let col = self.schema.matrix_index(feature).expect("protected feature is in matrix");
        Ok(self.rows.column(col).iter().map(|&v| v == 1.0).collect())
    }

    /// Privileged mask for a set of protected features: a row is privileged
    /// only if it is privileged under every feature in the set.
    pub fn intersection_privileged_mask(&self, features: &[String]) -> Result<Vec<bool>> {
        if features.is_empty() {
            return Err(Error::Config("empty protected feature set".into()));
        }
        let mut mask = vec![true; self.n_rows()];
        for f in features {
            let m = self.privileged_mask(f)?;
            for (slot, v) in mask.iter_mut().zip(m) {
                *slot &= v;
            }
        }
        Ok(mask)
    }

    /// New dataset containing the given rows (labels subset accordingly).
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Dimension("row selection is empty".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n_rows()) {
            return Err(Error::Dimension(format!(
                "row index {bad} out of bounds for {} rows",
                self.n_rows()
            )));
        }
        let mut rows = Array2::zeros((indices.len(), self.n_features()));
        for (r, &i) in indices.iter().enumerate() {
            rows.row_mut(r).assign(&self.rows.row(i));
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| indices.iter().map(|&i| l[i]).collect());
        Dataset::new(rows, self.schema.clone(), labels)
    }

    /// Min-max-normalize the scoring columns into [0, 1]; protected columns
    /// are untouched. A constant column maps to all zeros. Idempotent.
    pub fn minmax_normalize(&self) -> Dataset {
        let mut rows = self.rows.clone();
        for &col in &self.schema.scoring_indices() {
            let view = self.rows.column(col);
            let min = view.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = view.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let span = max - min;
            let mut out = rows.column_mut(col);
            if span == 0.0 {
                out.fill(0.0);
            } else {
                out.iter_mut().for_each(|v| *v = (*v - min) / span);
            }
        }
        Dataset {
            rows,
            labels: self.labels.clone(),
            schema: self.schema.clone(),
        }
    }
}

/// Load a CSV file against a schema.
///
/// Every schema feature must appear in the header (extra CSV columns are
/// ignored). Scoring columns parse as f64; protected columns are encoded as
/// described on [`Dataset`]; the label column must contain 0/1.
pub fn load_csv(path: impl AsRef<Path>, schema: &FeatureSchema) -> Result<Dataset> {
    schema.validate()?;
    let mut reader = csv::Reader::from_path(path.as_ref())?;
    let headers = reader.headers()?.clone();
    let position = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("missing column \"{name}\" in CSV header")))
    };

    // Resolve every declared feature up front so header problems surface
    // before any row parsing.
    let mut columns = Vec::new();
    for f in &schema.features {
        columns.push((f, position(&f.name)?));
    }

    let mut records = Vec::new();
    for record in reader.records() {
        records.push(record?);
    }
    if records.is_empty() {
        return Err(Error::Schema("CSV contains no data rows".into()));
    }
    let n = records.len();

    let cell = |record: &csv::StringRecord, row: usize, idx: usize, name: &str| -> Result<String> {
        record
            .get(idx)
            .map(|s| s.trim().to_string())
            .ok_or_else(|| Error::Parse {
                row: row + 1,
                message: format!("row too short for column \"{name}\""),
            })
    };

    let matrix_specs = schema.matrix_features();
    let mut rows = Array2::zeros((n, matrix_specs.len()));
    let mut labels: Option<Vec<u8>> = None;

    let mut matrix_col = 0usize;
    for (spec, csv_idx) in &columns {
        match spec.role {
            FeatureRole::Scoring => {
                for (r, record) in records.iter().enumerate() {
                    let raw = cell(record, r, *csv_idx, &spec.name)?;
                    let value: f64 = raw.parse().map_err(|_| Error::Parse {
                        row: r + 1,
                        message: format!("column \"{}\": \"{raw}\" is not a number", spec.name),
                    })?;
                    if !value.is_finite() {
                        return Err(Error::Parse {
                            row: r + 1,
                            message: format!("column \"{}\": non-finite value", spec.name),
                        });
                    }
                    rows[(r, matrix_col)] = value;
                }
                matrix_col += 1;
            }
            FeatureRole::Protected => {
                let privileged = schema.privileged_value_for(spec).to_string();
                let mut raw_values = Vec::with_capacity(n);
                for (r, record) in records.iter().enumerate() {
                    raw_values.push(cell(record, r, *csv_idx, &spec.name)?);
                }
                // Deterministic codes: privileged -> 1, everything else gets
                // 0, 2, 3, ... by sorted raw value.
                let others: BTreeSet<&String> =
                    raw_values.iter().filter(|v| **v != privileged).collect();
                let code_of = |raw: &String| -> f64 {
                    if *raw == privileged {
                        return 1.0;
                    }
                    let rank = others.iter().position(|o| *o == raw).unwrap();
                    if rank == 0 {
                        0.0
                    } else {
                        (rank + 1) as f64
                    }
                };
                for (r, raw) in raw_values.iter().enumerate() {
                    rows[(r, matrix_col)] = code_of(raw);
                }
                matrix_col += 1;
            }
            FeatureRole::Label => {
                let mut out = Vec::with_capacity(n);
                for (r, record) in records.iter().enumerate() {
                    let raw = cell(record, r, *csv_idx, &spec.name)?;
                    let value: f64 = raw.parse().map_err(|_| Error::Parse {
                        row: r + 1,
                        message: format!("label \"{}\": \"{raw}\" is not a number", spec.name),
                    })?;
                    if value != 0.0 && value != 1.0 {
                        return Err(Error::Parse {
                            row: r + 1,
                            message: format!("label \"{}\": expected 0 or 1, got {raw}", spec.name),
                        });
                    }
                    out.push(value as u8);
                }
                labels = Some(out);
            }
            FeatureRole::Id => {}
        }
    }

    Dataset::new(rows, schema.clone(), labels)
}

/// Column means of a matrix, as a vector.
pub fn column_means(rows: &ArrayView2<'_, f64>) -> Array1<f64> {
    rows.mean_axis(ndarray::Axis(0))
        .expect("mean of a non-empty matrix")
}
