//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for usage, configuration and input errors,
//! 3 when every trial of some row hit the budget cap, 1 when results could
//! not be written.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use bestarm_core::generators::apply_permutation;
use bestarm_core::Algorithm;
use clap::{Args, Parser, Subcommand};

use crate::config::{ExperimentConfig, GeneratorSpec, InstanceSource, MAX_DELTA};
use crate::error::HarnessError;
use crate::harness::{compare_suite, entropy_scaling_probe, run_trials, RunSettings, TrialSummary};
use crate::report::{self, Metadata, OutputFormat};
use crate::schema::instance_json;

const EXIT_ALL_ABORTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bestarm", version, about = "Best-arm identification experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write an instance JSON file from a generator spec.
    Gen(GenArgs),
    /// Print gaps, groups, gap entropy and complexity bounds of an instance.
    Analyze(AnalyzeArgs),
    /// Run each algorithm at each δ and write a results table.
    Run(ExperimentArgs),
    /// Paired comparison of two or more algorithms.
    Compare(ExperimentArgs),
    /// Track sample counts against H (ln 1/δ + Ent) on max-entropy instances.
    Probe(ProbeArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Generator spec, e.g. two-arm:0.5, clustered:4x0.5,1x0.25, max-entropy:3,
    /// random:N:MIN_GAP:MAX_GAP:SEED.
    spec: String,
    /// Shuffle the arms with this seed.
    #[arg(long)]
    permutation_seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Instance JSON file or generator spec.
    #[arg(long)]
    instance: String,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    /// Also write the analysis as JSON to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CommonArgs {
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Apply a fresh random arm permutation in every trial.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    permute: Option<bool>,
    #[arg(long)]
    budget_cap: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Output path; the extension is replaced by .csv / .json.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Both)]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Experiment config JSON; flags given alongside override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Instance JSON file or generator spec.
    #[arg(long)]
    instance: Option<String>,
    #[arg(long = "algo")]
    algorithms: Vec<String>,
    #[arg(long = "delta")]
    deltas: Vec<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    /// Comma-separated ascending list of m values.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
    m_list: Vec<u32>,
    #[arg(long = "algo", default_value = "exp-gap-entropy-oracle")]
    algorithm: String,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    #[command(flatten)]
    common: CommonArgs,
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<i32, HarnessError> {
    match command {
        Command::Gen(args) => cmd_gen(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Run(args) => cmd_run(args, false),
        Command::Compare(args) => cmd_run(args, true),
        Command::Probe(args) => cmd_probe(args),
    }
}

fn cmd_gen(args: GenArgs) -> Result<i32, HarnessError> {
    let spec = GeneratorSpec::parse_compact(&args.spec)
        .ok_or_else(|| HarnessError::Config(format!("unknown generator spec {:?}", args.spec)))??;
    let mut instance = spec.build()?;
    if let Some(seed) = args.permutation_seed {
        instance = apply_permutation(&instance, seed);
    }
    let text = instance_json(&instance);
    match args.out {
        Some(path) => {
            fs::write(&path, text).map_err(|source| HarnessError::Write { path, source })?
        }
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<i32, HarnessError> {
    if !(args.delta > 0.0 && args.delta < 1.0) {
        return Err(HarnessError::Config(format!("delta {} is outside (0, 1)", args.delta)));
    }
    let instance = InstanceSource::from_arg(&args.instance)?.load()?;
    let analysis = report::analyze(&instance, args.delta)?;
    print!("{}", report::analysis_text(&analysis));
    if let Some(path) = args.json {
        let mut text = serde_json::to_string_pretty(&analysis).expect("analysis serializes");
        text.push('\n');
        fs::write(&path, text).map_err(|source| HarnessError::Write { path, source })?;
    }
    Ok(0)
}

fn build_config(args: &ExperimentArgs) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = match (&args.config, &args.instance) {
        (Some(path), _) => ExperimentConfig::load(path)?,
        (None, Some(inst)) => ExperimentConfig::new(InstanceSource::from_arg(inst)?),
        (None, None) => {
            return Err(HarnessError::Config("either --config or --instance is required".into()))
        }
    };
    if args.config.is_some() {
        if let Some(inst) = &args.instance {
            cfg.instance = InstanceSource::from_arg(inst)?;
        }
    }
    if !args.algorithms.is_empty() {
        cfg.algorithms = args.algorithms.clone();
    }
    if !args.deltas.is_empty() {
        cfg.deltas = args.deltas.clone();
    }
    let c = &args.common;
    if let Some(t) = c.trials {
        cfg.trials = t;
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(p) = c.permute {
        cfg.permute = p;
    }
    if let Some(b) = c.budget_cap {
        cfg.budget_cap = b;
    }
    if let Some(n) = c.threads {
        cfg.threads = n;
    }
    Ok(cfg)
}

fn finish(rows: &[TrialSummary]) -> i32 {
    for row in rows {
        println!("{}", report::summary_line(row));
    }
    if rows.iter().any(|r| r.trials > 0 && r.aborts == r.trials) {
        eprintln!("error: every trial of at least one row hit the budget cap");
        EXIT_ALL_ABORTED
    } else {
        0
    }
}

fn cmd_run(args: ExperimentArgs, compare: bool) -> Result<i32, HarnessError> {
    let cfg = build_config(&args)?;
    if compare && cfg.algorithms.len() < 2 {
        return Err(HarnessError::Config("compare: >= 2 algorithms required".into()));
    }
    let (_, warnings) = cfg.validate()?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let meta = Metadata::new(cfg.seed, &cfg.identity_json());
    let (rows, json) = if compare {
        let cmp = compare_suite(&cfg)?;
        let json = report::comparison_json(&cmp, &meta);
        for r in &cmp.rankings {
            let order: Vec<&str> = r.order.iter().map(|(name, _)| name.as_str()).collect();
            println!("ranking delta={}: {}", r.delta, order.join(" < "));
        }
        (cmp.rows, json)
    } else {
        let rows = run_trials(&cfg)?;
        let json = report::summaries_json(&rows, &meta);
        (rows, json)
    };
    let csv = report::summaries_csv(&rows, &meta);
    report::write_outputs(&args.common.out, args.common.format, &csv, &json)?;
    Ok(finish(&rows))
}

fn cmd_probe(args: ProbeArgs) -> Result<i32, HarnessError> {
    let algorithm: Algorithm = args
        .algorithm
        .parse()
        .map_err(|e| HarnessError::Config(format!("{e}")))?;
    if !(args.delta > 0.0 && args.delta <= MAX_DELTA) {
        return Err(HarnessError::Config(format!(
            "delta {} is outside (0, {MAX_DELTA}]",
            args.delta
        )));
    }
    let defaults = ExperimentConfig::new(InstanceSource::Generator(GeneratorSpec::MaxEntropy {
        m: 1,
        permutation_seed: None,
    }));
    let c = &args.common;
    let settings = RunSettings {
        trials: c.trials.unwrap_or(defaults.trials),
        seed: c.seed.unwrap_or(defaults.seed),
        permute: c.permute.unwrap_or(defaults.permute),
        budget_cap: c.budget_cap.unwrap_or(defaults.budget_cap),
        threads: c.threads.unwrap_or(defaults.threads),
    };
    if settings.trials == 0 || settings.threads == 0 {
        return Err(HarnessError::Config("trials and threads must be at least 1".into()));
    }
    let report = entropy_scaling_probe(&args.m_list, algorithm, args.delta, &settings)?;
    let identity = serde_json::json!({
        "probe": args.m_list,
        "algorithm": algorithm.name(),
        "delta": args.delta,
        "trials": settings.trials,
        "seed": settings.seed,
        "permute": settings.permute,
        "budget_cap": settings.budget_cap,
    });
    let meta = Metadata::new(settings.seed, &identity.to_string());
    let csv = report::probe_csv(&report, &meta);
    let json = report::probe_json(&report, &meta);
    report::write_outputs(&c.out, c.format, &csv, &json)?;
    let rows: Vec<TrialSummary> = report.rows.iter().map(|r| r.summary.clone()).collect();
    if let Some(spread) = report.ratio_spread {
        println!("bound_ratio spread {spread:.3}");
    }
    Ok(finish(&rows))
}
