//! Experiment harness: synthetic data, experiment specs, pipelines,
//! reporting and the built-in reference experiments.

pub mod experiments;
pub mod pipeline;
pub mod ranks;
pub mod report;
pub mod spec;
pub mod svg;
pub mod synth;

pub use experiments::{
    admission_sweep_spec, credit_region_spec, diabetes_grid_config, run_named, NamedExperiment,
    RunOptions,
};
pub use pipeline::{
    build_scorer, explain_cell, fairness_audit, prepare_replicate, run_hybrid_grid,
    run_region_study, run_sweep, FairnessAudit, GridCell, GridConfig, GridOutcome, Prepared,
    RegionCell, RegionOutcome, SweepRow, SweepTable,
};
pub use ranks::{rank_histogram, RankHistogram};
pub use report::{write_json, write_ranks_csv, write_string, write_sweep_csv, Manifest};
pub use spec::{DatasetSource, ExperimentSpec, ExplainMethod, ExplainerSpec, ModelSpec};
pub use svg::{bar_chart, line_chart, slope_chart};
pub use synth::{synth_dataset, SynthTemplate};
