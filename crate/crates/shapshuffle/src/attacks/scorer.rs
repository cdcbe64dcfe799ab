//! The adversarial scorer: an honest model wrapped in a score shuffle.

use ndarray::Array1;

use crate::attacks::kernels::apply_spec;
use crate::attacks::spec::AttackSpec;
use crate::attacks::view::prepare_sorted_view;
use crate::error::{Error, Result};
use crate::model::{BatchScorer, Dataset, Direction, ScoringModel};
use crate::seeding::hash_columns;

/// A scoring model whose batch outputs are permuted according to the
/// protected column(s) before being returned.
///
/// The wrapper reproduces a deployed-system attack faithfully:
///
/// - the base model never sees protected columns, and the shuffle never
///   changes a score's value, only which row receives it;
/// - randomness is keyed by a hash of the protected columns combined with
///   the global seed, so scoring the same batch twice gives identical
///   output, but different batches shuffle independently;
/// - degenerate batches (a single row, or protected columns that are
///   constant) pass through untouched, because group membership conveys no
///   information there.
///
/// With several protected features the privileged group is their
/// intersection: a row counts as privileged only if it is privileged under
/// every listed feature.
pub struct AdversarialScorer {
    base: ScoringModel,
    protected: Vec<String>,
    spec: AttackSpec,
    global_seed: u64,
    direction: Direction,
}

impl AdversarialScorer {
    pub fn new(
        base: ScoringModel,
        protected: Vec<String>,
        spec: AttackSpec,
        global_seed: u64,
        direction: Direction,
    ) -> Result<Self> {
        if protected.is_empty() {
            return Err(Error::Config(
                "adversarial scorer needs at least one protected feature".into(),
            ));
        }
        spec.validate()?;
        Ok(AdversarialScorer {
            base,
            protected,
            spec,
            global_seed,
            direction,
        })
    }

    pub fn base(&self) -> &ScoringModel {
        &self.base
    }

    pub fn spec(&self) -> &AttackSpec {
        &self.spec
    }

    pub fn protected(&self) -> &[String] {
        &self.protected
    }

    /// Score a batch and shuffle the result per the attack spec.
    pub fn score_batch(&self, data: &Dataset) -> Result<Array1<f64>> {
        let honest = self.base.score_batch(data)?;
        if data.n_rows() == 1 {
            return Ok(honest);
        }

        // Collect the protected columns; verify roles while at it.
        let mut columns = Vec::with_capacity(self.protected.len());
        for name in &self.protected {
            data.privileged_mask(name)?; // role + existence check
            let idx = data
                .schema()
                .matrix_index(name)
                .expect("validated protected feature");
            columns.push(data.column(idx).to_vec());
        }

        // A batch whose protected columns are all constant carries no group
        // signal; the shuffle operator is skipped entirely.
        if columns
            .iter()
            .all(|col| col.iter().all(|&v| v == col[0]))
        {
            return Ok(honest);
        }

        let privileged = data.intersection_privileged_mask(&self.protected)?;
        let column_refs: Vec<&[f64]> = columns.iter().map(|c| c.as_slice()).collect();
        let seed = hash_columns(&column_refs) ^ self.global_seed;
        let view = prepare_sorted_view(honest.as_slice().expect("contiguous"), &privileged, self.direction);
        Ok(Array1::from(apply_spec(&view, &self.spec, seed)))
    }
}

impl BatchScorer for AdversarialScorer {
    fn score(&self, data: &Dataset) -> Result<Array1<f64>> {
        self.score_batch(data)
    }
}
