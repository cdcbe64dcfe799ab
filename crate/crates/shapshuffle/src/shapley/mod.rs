//! Shapley-value attribution engines and the consistency defense.

mod consistency;
mod exact;
mod kernel;
mod linear;
mod solve;
mod value;

use ndarray::Array2;
use serde::Serialize;
use std::io::Write;

use crate::error::Result;

pub use consistency::{consistency_check, ConsistencyOutcome};
pub use exact::exact_shapley;
pub use kernel::{kernel_shap, SamplingConfig};
pub use linear::{linear_shap, residual_protected_attribution, ResidualOutcome};
pub use value::{coalition_value, Batching, Coalition, ValueFunctionConfig};

/// Attribution of one instance: per-feature values plus the base value
/// (the value of the empty coalition).
#[derive(Debug, Clone, PartialEq)]
pub struct Explanation {
    pub phi: Vec<f64>,
    pub base_value: f64,
}

impl Explanation {
    /// `base + sum(phi)`: what the explanation claims the output is.
    pub fn reconstruction(&self) -> f64 {
        self.base_value + self.phi.iter().sum::<f64>()
    }
}

/// Attributions for a set of instances, one row each.
#[derive(Debug, Clone)]
pub struct AttributionMatrix {
    pub feature_names: Vec<String>,
    /// Original row index of each explained instance.
    pub ids: Vec<usize>,
    /// `ids.len() x feature_names.len()` attribution values.
    pub values: Array2<f64>,
    pub base_values: Vec<f64>,
}

impl AttributionMatrix {
    pub fn from_explanations(
        feature_names: Vec<String>,
        rows: Vec<(usize, Explanation)>,
    ) -> Self {
        let d = feature_names.len();
        let mut values = Array2::zeros((rows.len(), d));
        let mut ids = Vec::with_capacity(rows.len());
        let mut base_values = Vec::with_capacity(rows.len());
        for (i, (id, e)) in rows.into_iter().enumerate() {
            assert_eq!(e.phi.len(), d, "explanation width mismatch");
            values.row_mut(i).assign(&ndarray::Array1::from(e.phi));
            ids.push(id);
            base_values.push(e.base_value);
        }
        AttributionMatrix {
            feature_names,
            ids,
            values,
            base_values,
        }
    }

    pub fn n_instances(&self) -> usize {
        self.ids.len()
    }

    /// Mean absolute attribution per feature.
    pub fn mean_abs(&self) -> Vec<f64> {
        let n = self.n_instances().max(1) as f64;
        (0..self.feature_names.len())
            .map(|j| self.values.column(j).iter().map(|v| v.abs()).sum::<f64>() / n)
            .collect()
    }

    /// Mean absolute attribution of one named feature.
    pub fn mean_abs_for(&self, feature: &str) -> Option<f64> {
        let j = self.feature_names.iter().position(|f| f == feature)?;
        Some(self.mean_abs()[j])
    }

    /// Write as CSV: `id,base,<feature...>`, one row per instance.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "id,base")?;
        for name in &self.feature_names {
            write!(w, ",{name}")?;
        }
        writeln!(w)?;
        for i in 0..self.n_instances() {
            write!(w, "{},{}", self.ids[i], self.base_values[i])?;
            for j in 0..self.feature_names.len() {
                write!(w, ",{}", self.values[(i, j)])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Metadata accompanying an attribution matrix on disk.
#[derive(Debug, Clone, Serialize)]
pub struct ExplanationMeta {
    pub method: String,
    pub batching: Batching,
    pub background_size: usize,
    pub seed: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_aggregates_and_serializes() {
        let m = AttributionMatrix::from_explanations(
            vec!["a".into(), "b".into()],
            vec![
                (0, Explanation { phi: vec![0.5, -0.5], base_value: 1.0 }),
                (3, Explanation { phi: vec![0.1, 0.3], base_value: 1.0 }),
            ],
        );
        assert_eq!(m.n_instances(), 2);
        assert_eq!(m.mean_abs(), [0.3, 0.4]);
        assert_eq!(m.mean_abs_for("b"), Some(0.4));
        assert_eq!(m.mean_abs_for("zz"), None);

        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("id,base,a,b"));
        assert_eq!(lines.next(), Some("0,1,0.5,-0.5"));
        assert_eq!(lines.next(), Some("3,1,0.1,0.3"));
    }

    #[test]
    fn reconstruction_sums_base_and_phi() {
        let e = Explanation { phi: vec![0.25, 0.25], base_value: 0.5 };
        assert_eq!(e.reconstruction(), 1.0);
    }
}
