//! Command-line front end.
//!
//! Five subcommands cover the library surface: `attack` scores a CSV batch
//! through a shuffling wrapper, `explain` attributes those scores,
//! `fairness` audits decisions before and after an attack, `audit` runs
//! one of the built-in experiments, and `sweep` runs a custom experiment
//! spec. Exit codes: 0 success, 1 usage or configuration error, 2 data or
//! schema error, 3 capability or numeric failure.
//!
//! Precedence everywhere: built-in defaults, then config files, then
//! flags.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::attacks::{AttackKind, AttackSpec, CoinVariant};
use crate::error::{Error, Result};
use crate::harness::{
    build_scorer, explain_cell, fairness_audit, run_named, run_sweep, write_json, write_string,
    write_sweep_csv, ExplainMethod, ExplainerSpec, ExperimentSpec, Manifest, NamedExperiment,
    Prepared, RunOptions,
};
use crate::model::{load_csv, FeatureSchema, ScoringModel};
use crate::seeding::derive_seed;
use crate::shapley::{Batching, ExplanationMeta};

/// Data-agnostic shuffling attacks on batch scorers, and the attribution
/// machinery that exposes them.
#[derive(Debug, Parser)]
#[command(name = "shapshuffle", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every random choice; overrides seeds from config files.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for per-instance explanation (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Log progress details to stderr.
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score a CSV batch through an attacked scorer.
    Attack(AttackArgs),
    /// Attribute scores of an honest or attacked scorer.
    Explain(ExplainArgs),
    /// Compare group fairness before and after an attack.
    Fairness(FairnessArgs),
    /// Run one of the built-in experiments.
    Audit(AuditArgs),
    /// Run a custom experiment spec.
    Sweep(SweepArgs),
}

/// Flags shared by every command that reads a CSV batch.
#[derive(Debug, Args)]
struct DataArgs {
    /// Input CSV (header row required).
    #[arg(long)]
    input: PathBuf,

    /// Schema JSON describing the columns.
    #[arg(long)]
    schema: PathBuf,

    /// Scoring model JSON; defaults to an equal-weight average of the
    /// scoring features.
    #[arg(long)]
    model: Option<PathBuf>,

    /// Skip min-max normalization of scoring features.
    #[arg(long)]
    raw: bool,

    /// Protected features driving the attack (repeatable); defaults to
    /// all protected features in the schema.
    #[arg(long)]
    protected: Vec<String>,
}

/// Flags that assemble an attack; `--spec` loads a JSON file and the
/// other flags override it.
#[derive(Debug, Args)]
struct AttackFlags {
    /// Attack spec JSON file.
    #[arg(long)]
    spec: Option<PathBuf>,

    /// Attack kernel: none, dominance, mixing or swapping.
    #[arg(long)]
    attack: Option<String>,

    /// Kernel parameter: head probability (mixing) or quantile (swapping).
    #[arg(long)]
    param: Option<f64>,

    /// Mixing coin: literal or bernoulli.
    #[arg(long)]
    coin: Option<String>,

    /// Restrict swapping passes to one step per element.
    #[arg(long)]
    single_step: bool,

    /// Attack only the top fraction of sorted positions.
    #[arg(long)]
    region: Option<f64>,

    /// Execute each elementary action only with this probability.
    #[arg(long)]
    frequency: Option<f64>,

    /// Cap on executed elementary actions.
    #[arg(long)]
    max_count: Option<u64>,

    /// Kernel for the top half of a hybrid attack.
    #[arg(long)]
    hybrid_top: Option<String>,

    /// Kernel for the bottom half of a hybrid attack.
    #[arg(long)]
    hybrid_bottom: Option<String>,
}

#[derive(Debug, Args)]
struct AttackArgs {
    #[command(flatten)]
    data: DataArgs,

    #[command(flatten)]
    attack: AttackFlags,

    /// Output CSV of honest and attacked scores.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ExplainArgs {
    #[command(flatten)]
    data: DataArgs,

    #[command(flatten)]
    attack: AttackFlags,

    /// Attribution method: exact, kernel or linear.
    #[arg(long, default_value = "kernel")]
    method: String,

    /// How coalition batches reach the scorer: per-coalition or
    /// mega-batch.
    #[arg(long, default_value = "mega-batch")]
    batching: String,

    /// Coalition budget for the kernel estimator.
    #[arg(long, default_value_t = 4096)]
    max_coalitions: usize,

    /// Background sample size for the value function.
    #[arg(long, default_value_t = 100)]
    background_size: usize,

    /// Number of rows to explain (from the top of the file).
    #[arg(long, default_value_t = 100)]
    sample: usize,

    /// Output directory (attributions.csv, metadata.json, manifest.json).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct FairnessArgs {
    #[command(flatten)]
    data: DataArgs,

    #[command(flatten)]
    attack: AttackFlags,

    /// Decision threshold applied to the scores.
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,

    /// Output JSON report (before, after, drops).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct AuditArgs {
    /// Experiment name: admission-sweep, diabetes-grid or credit-region.
    #[arg(long)]
    experiment: String,

    /// Output directory; defaults to the experiment name.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Override the experiment's replicate count.
    #[arg(long)]
    replicates: Option<usize>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Experiment spec JSON.
    #[arg(long)]
    config: PathBuf,

    /// Output directory for sweep.csv and manifest.json.
    #[arg(long)]
    out: PathBuf,
}

/// Parse argv, dispatch, and map errors to exit codes.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    init_logging(cli.verbose);
    if cli.threads > 0 {
        // Ignore failure: the global pool can only be sized once per
        // process, which is exactly the semantics a repeated flag wants.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn init_logging(verbose: bool) {
    let default = if verbose { "debug" } else { "warn" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(default))
        .format_timestamp(None)
        .try_init();
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => 1,
        Error::Schema(_)
        | Error::Parse { .. }
        | Error::Dimension(_)
        | Error::Io(_)
        | Error::Csv(_)
        | Error::Json(_) => 2,
        Error::Capability(_) | Error::Fit(_) | Error::Numeric(_) => 3,
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    let seed = cli.seed.unwrap_or(0);
    match &cli.command {
        Command::Attack(args) => cmd_attack(args, seed),
        Command::Explain(args) => cmd_explain(args, seed),
        Command::Fairness(args) => cmd_fairness(args, seed),
        Command::Audit(args) => cmd_audit(args, cli.seed),
        Command::Sweep(args) => cmd_sweep(args, cli.seed),
    }
}

fn parse_kernel(name: &str, flags: &AttackFlags) -> Result<AttackSpec> {
    let coin = match flags.coin.as_deref() {
        None | Some("literal") => CoinVariant::Literal,
        Some("bernoulli") => CoinVariant::Bernoulli,
        Some(other) => {
            return Err(Error::Config(format!(
                "unknown coin variant {other:?}; expected literal or bernoulli"
            )))
        }
    };
    match name {
        "none" => Ok(AttackSpec::none()),
        "dominance" => Ok(AttackSpec::dominance()),
        "mixing" => Ok(AttackSpec::single(AttackKind::Mixing {
            head_prob: flags.param.unwrap_or(1.0),
            coin_variant: coin,
        })),
        "swapping" => Ok(AttackSpec::single(AttackKind::Swapping {
            quantile: flags.param.unwrap_or(1.0),
            single_step: flags.single_step,
        })),
        other => Err(Error::Config(format!(
            "unknown attack {other:?}; expected none, dominance, mixing or swapping"
        ))),
    }
}

/// Assemble the attack: config file first, flags override.
fn resolve_attack(flags: &AttackFlags) -> Result<AttackSpec> {
    let mut spec = match &flags.spec {
        Some(path) => AttackSpec::from_json_file(path)?,
        None => AttackSpec::none(),
    };
    if flags.hybrid_top.is_some() || flags.hybrid_bottom.is_some() {
        let half = |name: &Option<String>| -> Result<Option<AttackSpec>> {
            name.as_deref()
                .filter(|n| *n != "none")
                .map(|n| parse_kernel(n, flags))
                .transpose()
        };
        spec = AttackSpec::hybrid(half(&flags.hybrid_top)?, half(&flags.hybrid_bottom)?);
    } else if let Some(kind) = &flags.attack {
        spec = parse_kernel(kind, flags)?;
    }
    if let Some(region) = flags.region {
        spec = spec.with_region(region);
    }
    if let Some(frequency) = flags.frequency {
        spec = spec.with_frequency(frequency);
    }
    if let Some(max_count) = flags.max_count {
        spec = spec.with_max_count(max_count);
    }
    spec.validate()?;
    Ok(spec)
}

/// Load the batch, resolve the model and draw a background sample —
/// everything the library pipelines expect, minus any train/test split.
fn prepare_cli(
    data: &DataArgs,
    seed: u64,
    background_size: usize,
    sample: usize,
) -> Result<Prepared> {
    let schema = FeatureSchema::from_json_file(&data.schema)?;
    let raw = load_csv(&data.input, &schema)?;
    let loaded = if data.raw { raw } else { raw.minmax_normalize() };

    let protected = if data.protected.is_empty() {
        loaded.schema().protected_names()
    } else {
        data.protected.clone()
    };
    if protected.is_empty() {
        return Err(Error::Schema(
            "the schema declares no protected features and none were given".into(),
        ));
    }
    for name in &protected {
        loaded.privileged_mask(name)?;
    }

    let model = match &data.model {
        Some(path) => ScoringModel::from_json_file(path)?,
        None => ScoringModel::equal_weights(loaded.schema().scoring_indices().len()),
    };

    let n = loaded.n_rows();
    let k = background_size.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 7));
    let mut chosen: Vec<usize> = rand::seq::index::sample(&mut rng, n, k).into_iter().collect();
    chosen.sort_unstable();
    let background = loaded.select_rows(&chosen)?;

    Ok(Prepared {
        background,
        explain_rows: (0..n).take(sample).collect(),
        eval_rows: (0..n).collect(),
        protected,
        rep_seed: seed,
        data: loaded,
        model,
    })
}

/// Serializable record of the resolved inputs, embedded in manifests.
#[derive(Debug, Serialize)]
struct ResolvedInputs<'a> {
    input: String,
    schema: String,
    model: Option<String>,
    normalize: bool,
    protected: &'a [String],
    attack: &'a AttackSpec,
}

impl<'a> ResolvedInputs<'a> {
    fn new(data: &DataArgs, prep: &'a Prepared, attack: &'a AttackSpec) -> Self {
        ResolvedInputs {
            input: data.input.display().to_string(),
            schema: data.schema.display().to_string(),
            model: data.model.as_ref().map(|p| p.display().to_string()),
            normalize: !data.raw,
            protected: &prep.protected,
            attack,
        }
    }
}

fn manifest_dir(out: &Path) -> PathBuf {
    out.parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map_or_else(|| PathBuf::from("."), Path::to_path_buf)
}

fn cmd_attack(args: &AttackArgs, seed: u64) -> Result<()> {
    let attack = resolve_attack(&args.attack)?;
    let prep = prepare_cli(&args.data, seed, 1, usize::MAX)?;
    let scorer = build_scorer(&prep, &attack)?;
    let honest = prep.model.score_batch(&prep.data)?;
    let attacked = scorer.score_batch(&prep.data)?;

    let mut out = String::from("id,honest,attacked\n");
    for i in 0..prep.data.n_rows() {
        out.push_str(&format!("{i},{},{}\n", honest[i], attacked[i]));
    }
    write_string(&args.out, &out)?;

    let mut manifest = Manifest::new("attack", seed, &ResolvedInputs::new(&args.data, &prep, &attack))?;
    manifest.record(&args.out);
    manifest.write(&manifest_dir(&args.out))?;
    Ok(())
}

fn parse_method(name: &str) -> Result<ExplainMethod> {
    match name {
        "exact" => Ok(ExplainMethod::Exact),
        "kernel" => Ok(ExplainMethod::Kernel),
        "linear" => Ok(ExplainMethod::Linear),
        other => Err(Error::Config(format!(
            "unknown method {other:?}; expected exact, kernel or linear"
        ))),
    }
}

fn parse_batching(name: &str) -> Result<Batching> {
    match name {
        "per-coalition" | "per_coalition" => Ok(Batching::PerCoalition),
        "mega-batch" | "mega_batch" => Ok(Batching::MegaBatch),
        other => Err(Error::Config(format!(
            "unknown batching {other:?}; expected per-coalition or mega-batch"
        ))),
    }
}

fn cmd_explain(args: &ExplainArgs, seed: u64) -> Result<()> {
    let attack = resolve_attack(&args.attack)?;
    let explainer = ExplainerSpec {
        method: parse_method(&args.method)?,
        batching: parse_batching(&args.batching)?,
        max_coalitions: args.max_coalitions,
    };
    let prep = prepare_cli(&args.data, seed, args.background_size, args.sample)?;
    let scorer = build_scorer(&prep, &attack)?;
    let matrix = explain_cell(&prep, &scorer, &explainer)?;

    let csv_path = args.out.join("attributions.csv");
    if let Some(parent) = csv_path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    matrix.write_csv(BufWriter::new(File::create(&csv_path)?))?;

    let meta = ExplanationMeta {
        method: explainer.method.label().to_string(),
        batching: explainer.batching,
        background_size: prep.background.n_rows(),
        seed,
    };
    let meta_path = args.out.join("metadata.json");
    write_json(&meta_path, &meta)?;

    let mut manifest =
        Manifest::new("explain", seed, &ResolvedInputs::new(&args.data, &prep, &attack))?;
    manifest.record(&csv_path);
    manifest.record(&meta_path);
    manifest.write(&args.out)?;
    Ok(())
}

fn cmd_fairness(args: &FairnessArgs, seed: u64) -> Result<()> {
    let attack = resolve_attack(&args.attack)?;
    let prep = prepare_cli(&args.data, seed, 1, usize::MAX)?;
    let scorer = build_scorer(&prep, &attack)?;
    let audit = fairness_audit(&prep, &scorer, args.threshold)?;
    write_json(&args.out, &audit)?;

    let mut manifest =
        Manifest::new("fairness", seed, &ResolvedInputs::new(&args.data, &prep, &attack))?;
    manifest.record(&args.out);
    manifest.write(&manifest_dir(&args.out))?;
    Ok(())
}

fn cmd_audit(args: &AuditArgs, seed: Option<u64>) -> Result<()> {
    let which: NamedExperiment = args.experiment.parse()?;
    let out_dir = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(which.name()));
    std::fs::create_dir_all(&out_dir)?;
    let opts = RunOptions {
        out_dir,
        seed: seed.unwrap_or(0),
        replicates: args.replicates,
    };
    let written = run_named(which, &opts)?;
    for path in &written {
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, seed: Option<u64>) -> Result<()> {
    let mut spec = ExperimentSpec::from_json_file(&args.config)?;
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    let table = run_sweep(&spec)?;
    for error in &table.errors {
        log::warn!("sweep cell skipped: {error}");
    }
    std::fs::create_dir_all(&args.out)?;
    let csv_path = args.out.join("sweep.csv");
    write_sweep_csv(&csv_path, &table)?;
    let mut manifest = Manifest::new("sweep", spec.seed, &spec)?;
    manifest.record(&csv_path);
    manifest.write(&args.out)?;
    println!("{}", csv_path.display());
    Ok(())
}
