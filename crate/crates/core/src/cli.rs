//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on input or validation errors, 2 on usage
//! errors. Data goes to `--out` or stdout; diagnostics only to stderr.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::experiments::{
    concentration_experiment, convergence_experiment, run_trials, with_workers, Algorithm, ExperimentConfig,
    AGGREGATE_CSV_HEADER,
};
use crate::greedy::{greedy_screen, warmup_length};
use crate::io::{items_to_jsonl, policy_to_json, read_instance, read_items, read_json, trace_to_csv, write_text};
use crate::matching::optimal_matching;
use crate::model::{sample_instance, validate_instance, ConstraintSpec, DistributionSpec};
use crate::pipeline::{learn_policy, run_pipeline, Mode, PipelineConfig};
use crate::rng::{derive_seed, DEFAULT_SEED};
use crate::thresholds::{quantile_policy_net, screen_with_policy, ThresholdsPolicy, DEFAULT_NET_CAP};

#[derive(Parser, Debug)]
#[command(name = "screening", version, about = "Online item screening with offline constrained assignment")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample an instance from a distribution file.
    Gen(GenArgs),
    /// Solve the offline assignment over an item file.
    Solve(SolveArgs),
    /// Greedy online screening of an instance.
    Greedy(GreedyArgs),
    /// Learn a thresholds policy from a training instance.
    Learn(LearnArgs),
    /// Screen items with a thresholds policy.
    Screen(ScreenArgs),
    /// Learned policy followed by greedy screening.
    Pipeline(PipelineArgs),
    /// Monte Carlo trials of one algorithm.
    Trials(TrialsArgs),
    /// Spread of the optimal value across sampled instances.
    Concentration(ConcentrationArgs),
    /// Uniform deviation of counts and values over a policy net.
    Converge(ConvergeArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    dist: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GreedyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    spec: PathBuf,
    /// Warmup is floor(delta * n / k) arrivals.
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    /// Write a per-arrival CSV trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LearnArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::ValueApprox)]
    mode: Mode,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 1.0)]
    c0: f64,
    /// Length of the stream the policy will screen (default: training length).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ScreenArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    policy: PathBuf,
    /// With a spec, the optimal value over the kept items is reported.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Write the kept items here.
    #[arg(long)]
    retained: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::ExactOpt)]
    mode: Mode,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 1.0)]
    c0: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Experiment settings shared by the sweep subcommands. Flags override the
/// `--config` file, which overrides defaults.
#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepArgs {
    /// JSON file with any of the flag values below.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    dist: Option<PathBuf>,
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    c0: Option<f64>,
    #[arg(long)]
    workers: Option<usize>,
}

impl SweepArgs {
    fn merged(self) -> Result<SweepArgs> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let file: SweepArgs = read_json(&path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let rel = |p: Option<PathBuf>| p.map(|p| if p.is_relative() { base.join(p) } else { p });
        Ok(SweepArgs {
            config: self.config,
            scenario: self.scenario.or(file.scenario),
            dist: self.dist.or(rel(file.dist)),
            spec: self.spec.or(rel(file.spec)),
            n: self.n.or(file.n),
            delta: self.delta.or(file.delta),
            trials: self.trials.or(file.trials),
            seed: self.seed.or(file.seed),
            c0: self.c0.or(file.c0),
            workers: self.workers.or(file.workers),
        })
    }

    fn dist(&self) -> Result<DistributionSpec> {
        let path = self.dist.as_ref().ok_or_else(|| Error::config("--dist is required"))?;
        let dist: DistributionSpec = read_json(path)?;
        dist.validate()?;
        Ok(dist)
    }

    fn spec(&self) -> Result<ConstraintSpec> {
        read_json(self.spec.as_ref().ok_or_else(|| Error::config("--spec is required"))?)
    }

    fn n(&self) -> Result<usize> {
        self.n.ok_or_else(|| Error::config("--n is required"))
    }

    fn trials(&self) -> usize {
        self.trials.unwrap_or(100)
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    fn workers(&self) -> usize {
        self.workers.unwrap_or(1)
    }

    fn scenario(&self, fallback: &str) -> String {
        self.scenario.clone().unwrap_or_else(|| fallback.to_string())
    }
}

#[derive(Args, Debug)]
struct TrialsArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    #[arg(long = "algo", value_enum, default_value_t = Algorithm::Greedy)]
    algorithm: Algorithm,
    /// Policy file for `policy-fixed`.
    #[arg(long)]
    policy: Option<PathBuf>,
    /// Aggregate CSV destination (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-trial JSON Lines destination.
    #[arg(long)]
    records: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConcentrationArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Full JSON report destination.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Largest policy net to build.
    #[arg(long, default_value_t = DEFAULT_NET_CAP)]
    net_cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Full JSON report destination.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_line<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable value");
    s.push('\n');
    s
}

fn load_policy(path: &Path, spec: Option<&ConstraintSpec>) -> Result<ThresholdsPolicy> {
    let policy: ThresholdsPolicy = read_json(path)?;
    if let Some(spec) = spec {
        policy.check(spec)?;
    }
    Ok(policy)
}

fn ensure_valid_instance(inst: &crate::model::Instance, spec: &ConstraintSpec, path: &Path) -> Result<()> {
    match validate_instance(inst, spec).first() {
        None => Ok(()),
        Some(v) => Err(Error::Input(format!("{}: {v}", path.display()))),
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Gen(a) => {
            let dist: DistributionSpec = read_json(&a.dist)?;
            let inst = sample_instance(&dist, a.n, a.seed)?;
            emit(a.out.as_deref(), &items_to_jsonl(inst.items()))
        }
        Command::Solve(a) => {
            let spec: ConstraintSpec = read_json(&a.spec)?;
            let items = read_items(&a.input)?;
            let sol = optimal_matching(&items, &spec).map_err(|e| Error::Input(format!("{}: {e}", a.input.display())))?;
            emit(a.out.as_deref(), &json_line(&sol))
        }
        Command::Greedy(a) => {
            let spec: ConstraintSpec = read_json(&a.spec)?;
            let inst = read_instance(&a.input)?;
            ensure_valid_instance(&inst, &spec, &a.input)?;
            if !(0.0..=1.0).contains(&a.delta) {
                return Err(Error::config(format!("--delta must lie in [0,1], got {}", a.delta)));
            }
            let warmup = warmup_length(inst.len(), spec.k(), a.delta);
            let mut result = greedy_screen(&inst, &spec, warmup, a.trace.is_some())?;
            if let Some(path) = &a.trace {
                write_text(path, &trace_to_csv(result.trace.as_deref().unwrap_or_default()))?;
                result.trace = None;
            }
            emit(a.out.as_deref(), &json_line(&result))
        }
        Command::Learn(a) => {
            let spec: ConstraintSpec = read_json(&a.spec)?;
            let train = read_instance(&a.input)?;
            ensure_valid_instance(&train, &spec, &a.input)?;
            let cfg = PipelineConfig::new(a.mode, a.delta).with_c0(a.c0);
            cfg.validate()?;
            let policy = learn_policy(&train, &spec, a.n.unwrap_or(train.len()), &cfg)?;
            emit(a.out.as_deref(), &format!("{}\n", policy_to_json(&policy)))
        }
        Command::Screen(a) => {
            let spec: Option<ConstraintSpec> = a.spec.as_deref().map(read_json).transpose()?;
            let policy = load_policy(&a.policy, spec.as_ref())?;
            let items = read_items(&a.input)?;
            let screened = screen_with_policy(&policy, &items, spec.as_ref())?;
            if let Some(path) = &a.retained {
                write_text(path, &items_to_jsonl(&screened.retained))?;
            }
            #[derive(serde::Serialize)]
            struct Report<'a> {
                retained_ids: Vec<u64>,
                #[serde(flatten)]
                stats: &'a crate::thresholds::RetentionStats,
            }
            let report = Report {
                retained_ids: screened.retained.iter().map(|c| c.id()).collect(),
                stats: &screened.stats,
            };
            emit(a.out.as_deref(), &json_line(&report))
        }
        Command::Pipeline(a) => {
            let spec: ConstraintSpec = read_json(&a.spec)?;
            let train = read_instance(&a.train)?;
            ensure_valid_instance(&train, &spec, &a.train)?;
            let stream = read_instance(&a.input)?;
            ensure_valid_instance(&stream, &spec, &a.input)?;
            let cfg = PipelineConfig::new(a.mode, a.delta).with_c0(a.c0);
            let result = run_pipeline(&train, &stream, &spec, &cfg)?;
            emit(a.out.as_deref(), &json_line(&result))
        }
        Command::Trials(a) => {
            let sweep = a.sweep.merged()?;
            let spec = sweep.spec()?;
            let mut cfg = ExperimentConfig::new(sweep.dist()?, spec.clone(), sweep.n()?, sweep.trials(), a.algorithm);
            cfg.scenario = sweep.scenario("trials");
            cfg.delta = sweep.delta.unwrap_or(0.0);
            cfg.seed = sweep.seed();
            cfg.c0 = sweep.c0.unwrap_or(1.0);
            cfg.policy = a.policy.as_deref().map(|p| load_policy(p, Some(&spec))).transpose()?;
            let stats = with_workers(sweep.workers(), || run_trials(&cfg))??;
            if let Some(path) = &a.records {
                let lines: String = stats.records.iter().map(json_line).collect();
                write_text(path, &lines)?;
            }
            let csv = format!("{AGGREGATE_CSV_HEADER}\n{}\n", stats.aggregate_row(&cfg).to_csv());
            emit(a.out.as_deref(), &csv)
        }
        Command::Concentration(a) => {
            let sweep = a.sweep.merged()?;
            let (dist, spec) = (sweep.dist()?, sweep.spec()?);
            let n = sweep.n()?;
            let stats =
                with_workers(sweep.workers(), || concentration_experiment(&dist, &spec, n, sweep.trials(), sweep.seed()))??;
            if let Some(path) = &a.report {
                write_text(path, &json_line(&stats))?;
            }
            let row = stats.aggregate_row(&sweep.scenario("concentration"), spec.d());
            emit(a.out.as_deref(), &format!("{AGGREGATE_CSV_HEADER}\n{}\n", row.to_csv()))
        }
        Command::Converge(a) => {
            let sweep = a.sweep.merged()?;
            let (dist, spec) = (sweep.dist()?, sweep.spec()?);
            let n = sweep.n()?;
            let seed = sweep.seed();
            let train = sample_instance(&dist, n, derive_seed(seed, "net", 0))?;
            let net = quantile_policy_net(&train, &spec, n, spec.k(), a.net_cap)?;
            let stats =
                with_workers(sweep.workers(), || convergence_experiment(&dist, &spec, n, sweep.trials(), &net, seed))??;
            if let Some(path) = &a.report {
                write_text(path, &json_line(&stats))?;
            }
            let row = stats.aggregate_row(&sweep.scenario("converge"));
            emit(a.out.as_deref(), &format!("{AGGREGATE_CSV_HEADER}\n{}\n", row.to_csv()))
        }
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
