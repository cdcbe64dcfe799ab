//! Three self-contained, desk-scale reference experiments.
//!
//! Each one builds its spec from a single seed, runs the matching
//! pipeline, and writes tables, charts and a manifest into an output
//! directory. They double as end-to-end exercises of the whole stack:
//! synthetic data, model fitting, attacks, explainers and fairness.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::attacks::AttackSpec;
use crate::error::{Error, Result};
use crate::seeding::derive_seed;
use crate::shapley::Batching;

use super::pipeline::{run_hybrid_grid, run_region_study, run_sweep, GridConfig, SweepTable};
use super::report::{write_json, write_ranks_csv, write_string, write_sweep_csv, Manifest};
use super::spec::{DatasetSource, ExperimentSpec, ExplainerSpec, ModelSpec};
use super::svg::{bar_chart, line_chart, slope_chart};
use super::synth::SynthTemplate;

/// The built-in experiments runnable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedExperiment {
    /// Attack-parameter sweep on generated admission data.
    AdmissionSweep,
    /// Hybrid attack grid with fairness audit on generated diabetes data.
    DiabetesGrid,
    /// Region-modifier evasion study on generated credit data.
    CreditRegion,
}

impl NamedExperiment {
    pub const ALL: [NamedExperiment; 3] = [
        NamedExperiment::AdmissionSweep,
        NamedExperiment::DiabetesGrid,
        NamedExperiment::CreditRegion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedExperiment::AdmissionSweep => "admission-sweep",
            NamedExperiment::DiabetesGrid => "diabetes-grid",
            NamedExperiment::CreditRegion => "credit-region",
        }
    }
}

impl fmt::Display for NamedExperiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedExperiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedExperiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown experiment {s:?}; expected one of admission-sweep, diabetes-grid, credit-region"
                ))
            })
    }
}

/// Where to write and how to seed a named experiment.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub seed: u64,
    /// Override the experiment's default replicate count.
    pub replicates: Option<usize>,
}

/// Run a named experiment and return every file written (manifest last).
pub fn run_named(which: NamedExperiment, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    match which {
        NamedExperiment::AdmissionSweep => run_admission(opts),
        NamedExperiment::DiabetesGrid => run_diabetes(opts),
        NamedExperiment::CreditRegion => run_credit(opts),
    }
}

/// Spec for the admission sweep: equal-weight scoring over four admission
/// signals, the full kernel palette swept over its parameter, estimator
/// and closed-form explainers side by side.
pub fn admission_sweep_spec(seed: u64, replicates: usize) -> ExperimentSpec {
    let mut attacks = vec![AttackSpec::none(), AttackSpec::dominance()];
    for i in 0..=5 {
        attacks.push(AttackSpec::mixing(0.5 + 0.1 * i as f64));
    }
    for i in 0..=5 {
        attacks.push(AttackSpec::swapping(0.2 * i as f64));
    }
    ExperimentSpec {
        dataset: DatasetSource::Synthetic {
            template: SynthTemplate::Admission,
            n: 500,
            seed: derive_seed(seed, 101),
        },
        model: ModelSpec::EqualWeights,
        normalize: true,
        protected: vec![],
        attacks,
        explainers: vec![ExplainerSpec::kernel(Batching::MegaBatch), ExplainerSpec::linear()],
        explain_sample: 100,
        background_size: 100,
        replicates,
        threshold: None,
        seed,
    }
}

/// Grid setup for the diabetes study: a fitted logistic model, two
/// protected-feature sets, and four half-batch options crossed top x
/// bottom, with a fairness audit at a strict decision threshold.
pub fn diabetes_grid_config(seed: u64) -> GridConfig {
    let base = ExperimentSpec {
        dataset: DatasetSource::Synthetic {
            template: SynthTemplate::Diabetes,
            n: 520,
            seed: derive_seed(seed, 202),
        },
        model: ModelSpec::logistic_default(),
        normalize: true,
        protected: vec![],
        attacks: vec![AttackSpec::none()],
        explainers: vec![ExplainerSpec::kernel(Batching::MegaBatch)],
        explain_sample: 40,
        background_size: 100,
        replicates: 1,
        threshold: Some(0.9),
        seed,
    };
    GridConfig {
        base,
        protected_sets: vec![vec!["Sex".into()], vec!["Sex".into(), "AgeGroup".into()]],
        halves: vec![
            None,
            Some(AttackSpec::dominance()),
            Some(AttackSpec::mixing(0.8)),
            Some(AttackSpec::swapping(0.0)),
        ],
    }
}

/// Spec for the credit region study: a single lower-is-better scoring
/// feature, dominance with and without a top-region restriction.
pub fn credit_region_spec(seed: u64) -> ExperimentSpec {
    ExperimentSpec {
        dataset: DatasetSource::Synthetic {
            template: SynthTemplate::Credit,
            n: 1000,
            seed: derive_seed(seed, 303),
        },
        model: ModelSpec::Linear {
            weights: vec![1.0],
            intercept: 0.0,
        },
        normalize: true,
        protected: vec!["Gender".into()],
        attacks: vec![
            AttackSpec::none(),
            AttackSpec::dominance(),
            AttackSpec::dominance().with_region(0.15),
        ],
        explainers: vec![ExplainerSpec::kernel(Batching::MegaBatch)],
        explain_sample: 100,
        background_size: 100,
        replicates: 1,
        threshold: None,
        seed,
    }
}

/// Points (parameter, protected mean |phi|) for one attack family and
/// explainer, sorted by parameter.
fn family_series(table: &SweepTable, family: &str, explainer: &str, feature: &str) -> Vec<(f64, f64)> {
    let mut points: Vec<(f64, f64)> = table
        .rows
        .iter()
        .filter(|r| r.attack == family && r.explainer == explainer && r.feature == feature)
        .filter_map(|r| r.param.map(|p| (p, r.mean_abs_phi)))
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    points
}

fn run_admission(opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let spec = admission_sweep_spec(opts.seed, opts.replicates.unwrap_or(3));
    let table = run_sweep(&spec)?;
    let mut manifest = Manifest::new("audit admission-sweep", opts.seed, &spec)?;
    let mut written = Vec::new();

    let csv_path = opts.out_dir.join("sweep.csv");
    write_sweep_csv(&csv_path, &table)?;
    manifest.record(&csv_path);
    written.push(csv_path);

    let protected = table
        .protected
        .first()
        .cloned()
        .unwrap_or_else(|| "protected".to_string());
    let mut series = Vec::new();
    for family in ["mixing", "swapping"] {
        for explainer in ["kernel", "linear"] {
            let pts = family_series(&table, family, explainer, &protected);
            if !pts.is_empty() {
                series.push((format!("{family}/{explainer}"), pts));
            }
        }
    }
    // Dominance has no parameter; draw it as a flat reference line.
    if let Some(level) = table.lookup("dominance", "kernel", &protected) {
        series.push(("dominance/kernel".to_string(), vec![(0.0, level), (1.0, level)]));
    }
    let chart = line_chart(
        "Protected-feature attribution under shuffling attacks",
        "attack parameter",
        "mean |phi| (protected)",
        &series,
    );
    let svg_path = opts.out_dir.join("protected_attribution.svg");
    write_string(&svg_path, &chart)?;
    manifest.record(&svg_path);
    written.push(svg_path);

    written.push(manifest.write(&opts.out_dir)?);
    Ok(written)
}

fn run_diabetes(opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let mut cfg = diabetes_grid_config(opts.seed);
    if let Some(r) = opts.replicates {
        cfg.base.replicates = r;
    }
    let outcome = run_hybrid_grid(&cfg)?;
    let mut manifest = Manifest::new("audit diabetes-grid", opts.seed, &cfg)?;
    let mut written = Vec::new();

    let grid_path = opts.out_dir.join("grid.json");
    write_json(&grid_path, &outcome)?;
    manifest.record(&grid_path);
    written.push(grid_path);

    let entries: Vec<(String, super::ranks::RankHistogram)> = outcome
        .cells
        .iter()
        .map(|c| {
            (
                format!("{}/{}+{}", c.protected.join("&"), c.top, c.bottom),
                c.histogram.clone(),
            )
        })
        .collect();
    let ranks_path = opts.out_dir.join("ranks.csv");
    write_ranks_csv(&ranks_path, &entries)?;
    manifest.record(&ranks_path);
    written.push(ranks_path);

    // Fairness slope for the loudest single-set cell: dominance on top,
    // mixing below.
    let showcase = outcome.cells.iter().find(|c| {
        c.protected == ["Sex".to_string()] && c.top == "dominance" && c.bottom == "mixing"
    });
    if let Some(cell) = showcase {
        if let Some(audit) = &cell.fairness {
            let mut metrics = Vec::new();
            let mut push = |name: &str, b: Option<f64>, a: Option<f64>| {
                if let (Some(b), Some(a)) = (b, a) {
                    metrics.push((name.to_string(), b, a));
                }
            };
            push(
                "SPD",
                audit.before.statistical_parity_difference,
                audit.after.statistical_parity_difference,
            );
            push(
                "EOD",
                audit.before.equal_opportunity_difference,
                audit.after.equal_opportunity_difference,
            );
            push(
                "AOD",
                audit.before.average_odds_difference,
                audit.after.average_odds_difference,
            );
            push(
                "DI",
                audit.before.disparate_impact,
                audit.after.disparate_impact,
            );
            push(
                "Theil",
                audit.before.theil_between_groups,
                audit.after.theil_between_groups,
            );
            let chart = slope_chart(
                "Group fairness before and after the hybrid attack",
                "honest",
                "attacked",
                &metrics,
            );
            let svg_path = opts.out_dir.join("fairness.svg");
            write_string(&svg_path, &chart)?;
            manifest.record(&svg_path);
            written.push(svg_path);
        }
    }

    written.push(manifest.write(&opts.out_dir)?);
    Ok(written)
}

fn run_credit(opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let spec = credit_region_spec(opts.seed);
    let outcome = run_region_study(&spec)?;
    let mut manifest = Manifest::new("audit credit-region", opts.seed, &spec)?;
    let mut written = Vec::new();

    let json_path = opts.out_dir.join("region.json");
    write_json(&json_path, &outcome)?;
    manifest.record(&json_path);
    written.push(json_path);

    let entries: Vec<(String, super::ranks::RankHistogram)> = outcome
        .cells
        .iter()
        .map(|c| (c.attack.clone(), c.histogram.clone()))
        .collect();
    let ranks_path = opts.out_dir.join("ranks.csv");
    write_ranks_csv(&ranks_path, &entries)?;
    manifest.record(&ranks_path);
    written.push(ranks_path);

    let protected = &outcome.protected[0];
    let labels: Vec<String> = outcome.cells.iter().map(|c| c.attack.clone()).collect();
    let values: Vec<f64> = outcome
        .cells
        .iter()
        .map(|c| c.histogram.top1_share(protected).unwrap_or(0.0))
        .collect();
    let chart = bar_chart(
        "How often the protected feature ranks first",
        "top-1 share",
        &labels,
        &values,
    );
    let svg_path = opts.out_dir.join("region.svg");
    write_string(&svg_path, &chart)?;
    manifest.record(&svg_path);
    written.push(svg_path);

    written.push(manifest.write(&opts.out_dir)?);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for e in NamedExperiment::ALL {
            assert_eq!(e.name().parse::<NamedExperiment>().unwrap(), e);
        }
        assert!("unknown".parse::<NamedExperiment>().is_err());
    }

    #[test]
    fn specs_validate() {
        admission_sweep_spec(7, 2).validate().unwrap();
        diabetes_grid_config(7).base.validate().unwrap();
        credit_region_spec(7).validate().unwrap();
    }

    #[test]
    fn admission_palette_covers_both_families() {
        let spec = admission_sweep_spec(0, 1);
        assert_eq!(spec.attacks.len(), 14);
        let labels: Vec<String> = spec.attacks.iter().map(|a| a.label()).collect();
        assert_eq!(labels.iter().filter(|l| *l == "mixing").count(), 6);
        assert_eq!(labels.iter().filter(|l| *l == "swapping").count(), 6);
    }

    #[test]
    fn credit_region_runs_end_to_end() {
        let dir = tempfile::tempdir().unwrap();
        let opts = RunOptions {
            out_dir: dir.path().to_path_buf(),
            seed: 9,
            replicates: None,
        };
        let written = run_named(NamedExperiment::CreditRegion, &opts).unwrap();
        assert_eq!(written.len(), 4);
        for path in &written {
            assert!(path.exists(), "missing {}", path.display());
        }
        let manifest: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&written[3]).unwrap()).unwrap();
        assert_eq!(manifest["command"], "audit credit-region");
        assert_eq!(
            manifest["outputs"],
            serde_json::json!(["region.json", "ranks.csv", "region.svg"])
        );
    }
}
