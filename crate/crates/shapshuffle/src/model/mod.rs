//! Data loading, schemas, and scoring models.

mod dataset;
mod logistic;
mod schema;
mod scoring;

pub use dataset::{column_means, load_csv, Dataset};
pub use logistic::{fit_logistic, FitOutcome, LogisticHyper};
pub use schema::{Direction, FeatureRole, FeatureSchema, FeatureSpec};
pub use scoring::{threshold_classify, BackgroundStats, BatchScorer, ModelKind, ScoringModel};
