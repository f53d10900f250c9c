//! Seeded Monte Carlo trials.
//!
//! Trial `i` draws its stream from `derive_seed(seed, "stream", i)` and its
//! training instance from `derive_seed(seed, "train", i)`, so algorithms run
//! with the same seed see identical data, and results do not depend on how
//! many workers execute the trials.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greedy::{greedy_screen, warmup_length};
use crate::matching::solve_unchecked;
use crate::model::{sample_instance, ConstraintSpec, DistributionSpec, Instance, Item};
use crate::pipeline::{run_pipeline, Mode, PipelineConfig};
use crate::rng::derive_seed;
use crate::stats::{binomial_se, quantile, Summary};
use crate::thresholds::{screen_with_policy, value_slack, ThresholdsPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Greedy,
    PipelineValueApprox,
    PipelineExactOpt,
    PolicyFixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "default_scenario")]
    pub scenario: String,
    pub dist: DistributionSpec,
    pub spec: ConstraintSpec,
    pub n: usize,
    #[serde(default)]
    pub delta: f64,
    pub trials: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub algorithm: Algorithm,
    #[serde(default = "default_c0")]
    pub c0: f64,
    /// Required by `policy-fixed`.
    #[serde(default)]
    pub policy: Option<ThresholdsPolicy>,
}

fn default_scenario() -> String {
    "default".to_string()
}

fn default_seed() -> u64 {
    crate::rng::DEFAULT_SEED
}

fn default_c0() -> f64 {
    1.0
}

impl ExperimentConfig {
    pub fn new(dist: DistributionSpec, spec: ConstraintSpec, n: usize, trials: usize, algorithm: Algorithm) -> Self {
        ExperimentConfig {
            scenario: default_scenario(),
            dist,
            spec,
            n,
            delta: 0.0,
            trials,
            seed: default_seed(),
            algorithm,
            c0: default_c0(),
            policy: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.dist.validate()?;
        if self.trials == 0 {
            return Err(Error::config("trials must be at least 1"));
        }
        if self.n < self.spec.k() {
            return Err(Error::config(format!("n={} is smaller than k={}", self.n, self.spec.k())));
        }
        if self.dist.d() != self.spec.d() {
            return Err(Error::config(format!(
                "distribution has {} properties but the spec has {}",
                self.dist.d(),
                self.spec.d()
            )));
        }
        match self.algorithm {
            Algorithm::Greedy => {
                if !(0.0..=1.0).contains(&self.delta) {
                    return Err(Error::config(format!("delta must lie in [0,1], got {}", self.delta)));
                }
            }
            Algorithm::PipelineValueApprox | Algorithm::PipelineExactOpt => self.pipeline_config().validate()?,
            Algorithm::PolicyFixed => match &self.policy {
                None => return Err(Error::config("policy-fixed needs a policy")),
                Some(p) => p.check(&self.spec)?,
            },
        }
        if self.algorithm != Algorithm::PolicyFixed && self.policy.is_some() {
            return Err(Error::config("a fixed policy only applies to the policy-fixed algorithm"));
        }
        Ok(())
    }

    fn pipeline_config(&self) -> PipelineConfig {
        let mode = match self.algorithm {
            Algorithm::PipelineValueApprox => Mode::ValueApprox,
            _ => Mode::ExactOpt,
        };
        PipelineConfig::new(mode, self.delta).with_c0(self.c0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub retained: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub retained_after_policy: Option<usize>,
    pub success: bool,
    pub opt_value: f64,
    pub final_value: f64,
    pub value_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregates {
    pub mean_retained: f64,
    pub std_retained: f64,
    pub min_retained: f64,
    pub max_retained: f64,
    pub mean_retained_after_policy: Option<f64>,
    pub success_rate: f64,
    pub mean_opt: f64,
    pub std_opt: f64,
    /// Largest `|retained - mean_retained|` over trials.
    pub max_dev_count: f64,
    /// Largest value gap to the full-stream optimum over trials.
    pub max_dev_value: f64,
}

impl Aggregates {
    pub fn from_records(records: &[TrialRecord]) -> Self {
        let retained: Vec<f64> = records.iter().map(|r| r.retained as f64).collect();
        let opt: Vec<f64> = records.iter().map(|r| r.opt_value).collect();
        let r = Summary::of(&retained);
        let o = Summary::of(&opt);
        let after: Vec<f64> = records.iter().filter_map(|r| r.retained_after_policy).map(|x| x as f64).collect();
        Aggregates {
            mean_retained: r.mean,
            std_retained: r.std,
            min_retained: r.min,
            max_retained: r.max,
            mean_retained_after_policy: (!after.is_empty()).then(|| Summary::of(&after).mean),
            success_rate: records.iter().filter(|r| r.success).count() as f64 / records.len() as f64,
            mean_opt: o.mean,
            std_opt: o.std,
            max_dev_count: retained.iter().map(|x| (x - r.mean).abs()).fold(0.0, f64::max),
            max_dev_value: records.iter().map(|r| r.value_gap).fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialStats {
    pub records: Vec<TrialRecord>,
    pub aggregates: Aggregates,
}

pub const AGGREGATE_CSV_HEADER: &str =
    "scenario,n,k,d,delta,trials,mean_retained,std_retained,success_rate,mean_opt,std_opt,max_dev_count,max_dev_value";

/// One aggregate CSV row; `None` fields are left empty.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub scenario: String,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub delta: f64,
    pub trials: usize,
    pub mean_retained: Option<f64>,
    pub std_retained: Option<f64>,
    pub success_rate: Option<f64>,
    pub mean_opt: Option<f64>,
    pub std_opt: Option<f64>,
    pub max_dev_count: Option<f64>,
    pub max_dev_value: Option<f64>,
}

impl AggregateRow {
    pub fn to_csv(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&self.scenario),
            self.n,
            self.k,
            self.d,
            self.delta,
            self.trials,
            opt(self.mean_retained),
            opt(self.std_retained),
            opt(self.success_rate),
            opt(self.mean_opt),
            opt(self.std_opt),
            opt(self.max_dev_count),
            opt(self.max_dev_value),
        );
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl TrialStats {
    pub fn aggregate_row(&self, cfg: &ExperimentConfig) -> AggregateRow {
        let a = &self.aggregates;
        AggregateRow {
            scenario: cfg.scenario.clone(),
            n: cfg.n,
            k: cfg.spec.k(),
            d: cfg.spec.d(),
            delta: cfg.delta,
            trials: cfg.trials,
            mean_retained: Some(a.mean_retained),
            std_retained: Some(a.std_retained),
            success_rate: Some(a.success_rate),
            mean_opt: Some(a.mean_opt),
            std_opt: Some(a.std_opt),
            max_dev_count: Some(a.max_dev_count),
            max_dev_value: Some(a.max_dev_value),
        }
    }
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::config(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(f))
}

pub fn stream_seed(root: u64, trial: usize) -> u64 {
    derive_seed(root, "stream", trial as u64)
}

pub fn train_seed(root: u64, trial: usize) -> u64 {
    derive_seed(root, "train", trial as u64)
}

fn run_one(cfg: &ExperimentConfig, trial: usize) -> Result<TrialRecord> {
    let stream = sample_instance(&cfg.dist, cfg.n, stream_seed(cfg.seed, trial))?;
    let spec = &cfg.spec;
    let record = match cfg.algorithm {
        Algorithm::Greedy => {
            let warmup = warmup_length(cfg.n, spec.k(), cfg.delta);
            let out = greedy_screen(&stream, spec, warmup, false)?;
            let full = solve_unchecked(stream.items(), spec);
            TrialRecord {
                trial,
                retained: out.retained_count,
                retained_after_policy: None,
                success: out.final_solution == full,
                opt_value: full.value(),
                final_value: out.final_solution.value(),
                value_gap: full.value() - out.final_solution.value(),
            }
        }
        Algorithm::PipelineValueApprox | Algorithm::PipelineExactOpt => {
            let train = sample_instance(&cfg.dist, cfg.n, train_seed(cfg.seed, trial))?;
            let out = run_pipeline(&train, &stream, spec, &cfg.pipeline_config())?;
            TrialRecord {
                trial,
                retained: out.retained_final,
                retained_after_policy: Some(out.retained_after_policy),
                success: out.optimal_vs_fullstream,
                opt_value: out.full_stream_value,
                final_value: out.final_solution.value(),
                value_gap: out.value_gap,
            }
        }
        Algorithm::PolicyFixed => {
            let policy = cfg.policy.as_ref().ok_or_else(|| Error::config("policy-fixed needs a policy"))?;
            let screened = screen_with_policy(policy, stream.items(), None)?;
            let sol = solve_unchecked(&screened.retained, spec);
            let full = solve_unchecked(stream.items(), spec);
            TrialRecord {
                trial,
                retained: screened.stats.total,
                retained_after_policy: Some(screened.stats.total),
                success: sol == full,
                opt_value: full.value(),
                final_value: sol.value(),
                value_gap: full.value() - sol.value(),
            }
        }
    };
    Ok(record)
}

/// Runs `cfg.trials` independent trials on the current rayon pool.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<TrialStats> {
    cfg.validate()?;
    let records = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_one(cfg, t))
        .collect::<Result<Vec<_>>>()?;
    let aggregates = Aggregates::from_records(&records);
    Ok(TrialStats { records, aggregates })
}

/// The tail levels `delta'` checked against the concentration bound.
pub const TAIL_DELTAS: [f64; 4] = [0.2, 0.1, 0.05, 0.01];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailPoint {
    pub delta_prime: f64,
    pub alpha: f64,
    /// Fraction of trials with `|OPT - mean| >= alpha`.
    pub exceedance: f64,
    /// `2 exp(-alpha^2 / (2k))`.
    pub bound: f64,
    pub binomial_se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationStats {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub opt_values: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    pub tail: Vec<TailPoint>,
}

impl ConcentrationStats {
    pub fn aggregate_row(&self, scenario: &str, d: usize) -> AggregateRow {
        let max_dev = self.opt_values.iter().map(|v| (v - self.mean).abs()).fold(0.0, f64::max);
        AggregateRow {
            scenario: scenario.to_string(),
            n: self.n,
            k: self.k,
            d,
            delta: 0.0,
            trials: self.trials,
            mean_retained: None,
            std_retained: None,
            success_rate: None,
            mean_opt: Some(self.mean),
            std_opt: Some(self.std),
            max_dev_count: None,
            max_dev_value: Some(max_dev),
        }
    }
}

fn check_common(dist: &DistributionSpec, spec: &ConstraintSpec, n: usize, trials: usize) -> Result<()> {
    dist.validate()?;
    if dist.d() != spec.d() {
        return Err(Error::config(format!("distribution has {} properties, spec has {}", dist.d(), spec.d())));
    }
    if trials == 0 {
        return Err(Error::config("trials must be at least 1"));
    }
    if n == 0 {
        return Err(Error::config("n must be at least 1"));
    }
    Ok(())
}

/// Distribution of the optimal value across independent instances, with the
/// empirical two-sided tail at `alpha = sqrt(2k ln(2/delta'))`.
pub fn concentration_experiment(
    dist: &DistributionSpec,
    spec: &ConstraintSpec,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ConcentrationStats> {
    check_common(dist, spec, n, trials)?;
    let opt_values = (0..trials)
        .into_par_iter()
        .map(|t| {
            let inst = sample_instance(dist, n, stream_seed(seed, t))?;
            Ok(solve_unchecked(inst.items(), spec).value())
        })
        .collect::<Result<Vec<f64>>>()?;
    let s = Summary::of(&opt_values);
    let k = spec.k() as f64;
    let tail = TAIL_DELTAS
        .iter()
        .map(|&delta_prime| {
            let alpha = (2.0 * k * (2.0 / delta_prime).ln()).sqrt();
            let hits = opt_values.iter().filter(|v| (*v - s.mean).abs() >= alpha).count();
            TailPoint {
                delta_prime,
                alpha,
                exceedance: hits as f64 / trials as f64,
                bound: 2.0 * (-alpha * alpha / (2.0 * k)).exp(),
                binomial_se: binomial_se(delta_prime, trials),
            }
        })
        .collect();
    Ok(ConcentrationStats { n, k: spec.k(), trials, mean: s.mean, std: s.std, opt_values, tail })
}

/// `(|R|, |R_i| per property, V)` of one policy on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyEval {
    pub total: usize,
    pub per_property: Vec<usize>,
    pub value: f64,
}

/// Evaluates every policy of `net` on `items` by screening and solving.
pub fn evaluate_net_direct(items: &[Item], spec: &ConstraintSpec, net: &[ThresholdsPolicy]) -> Vec<PolicyEval> {
    net.iter()
        .map(|policy| {
            let screened = screen_with_policy(policy, items, None).expect("screening without spec cannot fail");
            PolicyEval {
                total: screened.stats.total,
                per_property: screened.stats.per_property,
                value: solve_unchecked(&screened.retained, spec).value(),
            }
        })
        .collect()
}

/// Same as [`evaluate_net_direct`], using sorted per-property columns so
/// every policy only touches the items it keeps. With one property the value
/// is a prefix sum of the sorted values.
pub fn evaluate_net(items: &[Item], spec: &ConstraintSpec, net: &[ThresholdsPolicy]) -> Vec<PolicyEval> {
    let d = spec.d();
    let mut columns: Vec<Vec<(f64, usize)>> = vec![Vec::new(); d];
    for (idx, item) in items.iter().enumerate() {
        for &(p, v) in item.props() {
            columns[p].push((v, idx));
        }
    }
    for col in &mut columns {
        col.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    }
    let kept_in = |col: &[(f64, usize)], t: crate::thresholds::Threshold| match t {
        crate::thresholds::Threshold::Above => 0,
        crate::thresholds::Threshold::Value(t) => col.partition_point(|&(v, _)| v >= t),
    };

    if d == 1 {
        let k = spec.k();
        let col = &columns[0];
        let mut prefix = Vec::with_capacity(k.min(col.len()) + 1);
        prefix.push(0.0);
        for &(v, _) in col.iter().take(k) {
            prefix.push(prefix.last().copied().unwrap_or(0.0) + v);
        }
        return net
            .iter()
            .map(|policy| {
                let r = kept_in(col, policy.t[0]);
                PolicyEval { total: r, per_property: vec![r], value: prefix[r.min(k)] }
            })
            .collect();
    }

    let mut stamp = vec![usize::MAX; items.len()];
    let mut retained: Vec<Item> = Vec::new();
    net.iter()
        .enumerate()
        .map(|(j, policy)| {
            retained.clear();
            let mut per_property = Vec::with_capacity(d);
            let mut kept: Vec<usize> = Vec::new();
            for (p, col) in columns.iter().enumerate() {
                let r = kept_in(col, policy.t[p]);
                per_property.push(r);
                for &(_, idx) in &col[..r] {
                    if stamp[idx] != j {
                        stamp[idx] = j;
                        kept.push(idx);
                    }
                }
            }
            kept.sort_unstable();
            retained.extend(kept.iter().map(|&idx| items[idx].clone()));
            PolicyEval { total: kept.len(), per_property, value: solve_unchecked(&retained, spec).value() }
        })
        .collect()
}

/// Largest net the convergence experiment accepts.
pub const MAX_CONVERGENCE_NET: usize = 250_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationQuantiles {
    pub median: f64,
    pub q90: f64,
    pub q95: f64,
    pub max: f64,
}

impl DeviationQuantiles {
    fn of(xs: &[f64]) -> Self {
        DeviationQuantiles {
            median: quantile(xs, 0.5),
            q90: quantile(xs, 0.9),
            q95: quantile(xs, 0.95),
            max: xs.iter().copied().fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStats {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub trials: usize,
    pub calibration_trials: usize,
    pub net_size: usize,
    /// Calibrated `E|R^T|` per net policy.
    pub rho: Vec<f64>,
    /// Calibrated `E|R_i^T|` per net policy and property.
    pub rho_per_property: Vec<Vec<f64>>,
    /// Calibrated `E V^T` per net policy.
    pub nu: Vec<f64>,
    /// Largest standard error among the calibrated `nu`.
    pub nu_max_se: f64,
    /// Per trial: max over the net of `||R^T| - rho^T|`.
    pub max_dev_count: Vec<f64>,
    /// Per trial: max over the net and properties of `||R_i^T| - rho_i^T|`.
    pub max_dev_per_property: Vec<f64>,
    /// Per trial: max over the net of `|V^T - nu^T|`.
    pub max_dev_value: Vec<f64>,
    pub count_quantiles: DeviationQuantiles,
    pub per_property_quantiles: DeviationQuantiles,
    pub value_quantiles: DeviationQuantiles,
    /// Smallest `c0` with `value_slack(k, d, 0.05, c0)` at or above the 95th
    /// percentile of the value deviation.
    pub fitted_value_c0: f64,
}

impl ConvergenceStats {
    pub fn aggregate_row(&self, scenario: &str) -> AggregateRow {
        AggregateRow {
            scenario: scenario.to_string(),
            n: self.n,
            k: self.k,
            d: self.d,
            delta: 0.05,
            trials: self.trials,
            mean_retained: None,
            std_retained: None,
            success_rate: None,
            mean_opt: None,
            std_opt: None,
            max_dev_count: Some(self.count_quantiles.max),
            max_dev_value: Some(self.value_quantiles.max),
        }
    }
}

/// Calibration runs use this many times the trial budget.
pub const CALIBRATION_FACTOR: usize = 10;

/// Uniform deviation of retained counts and values over a policy net.
///
/// Expectations are estimated from `10 * trials` calibration instances drawn
/// from a separate seed stream; each of the `trials` test instances then
/// records its largest deviation over the net.
pub fn convergence_experiment(
    dist: &DistributionSpec,
    spec: &ConstraintSpec,
    n: usize,
    trials: usize,
    net: &[ThresholdsPolicy],
    seed: u64,
) -> Result<ConvergenceStats> {
    check_common(dist, spec, n, trials)?;
    if net.is_empty() {
        return Err(Error::config("policy net is empty"));
    }
    if net.len() > MAX_CONVERGENCE_NET {
        return Err(Error::Refused(format!(
            "policy net of {} exceeds the limit of {MAX_CONVERGENCE_NET}",
            net.len()
        )));
    }
    for policy in net {
        policy.check(spec)?;
    }
    let d = spec.d();
    let evaluate = |label: &str, t: usize| -> Result<Vec<PolicyEval>> {
        let inst: Instance = sample_instance(dist, n, derive_seed(seed, label, t as u64))?;
        Ok(evaluate_net(inst.items(), spec, net))
    };

    let calibration_trials = CALIBRATION_FACTOR * trials;
    let m = net.len();
    let mut rho = vec![0.0; m];
    let mut rho_pp = vec![vec![0.0; d]; m];
    let mut nu = vec![0.0; m];
    let mut nu_sq = vec![0.0; m];
    // chunks are evaluated in parallel but summed in trial order, so the
    // result does not depend on the worker count
    const CHUNK: usize = 128;
    for start in (0..calibration_trials).step_by(CHUNK) {
        let end = (start + CHUNK).min(calibration_trials);
        let chunk = (start..end)
            .into_par_iter()
            .map(|t| evaluate("calibration", t))
            .collect::<Result<Vec<_>>>()?;
        for evals in &chunk {
            for (j, e) in evals.iter().enumerate() {
                rho[j] += e.total as f64;
                for p in 0..d {
                    rho_pp[j][p] += e.per_property[p] as f64;
                }
                nu[j] += e.value;
                nu_sq[j] += e.value * e.value;
            }
        }
    }
    let c = calibration_trials as f64;
    rho.iter_mut().for_each(|x| *x /= c);
    rho_pp.iter_mut().flatten().for_each(|x| *x /= c);
    let mut nu_max_se: f64 = 0.0;
    for j in 0..m {
        let mean = nu[j] / c;
        let var = if calibration_trials > 1 { (nu_sq[j] / c - mean * mean).max(0.0) * c / (c - 1.0) } else { 0.0 };
        nu_max_se = nu_max_se.max((var / c).sqrt());
        nu[j] = mean;
    }

    let maxima = (0..trials)
        .into_par_iter()
        .map(|t| {
            let evals = evaluate("trial", t)?;
            let mut dev_count: f64 = 0.0;
            let mut dev_pp: f64 = 0.0;
            let mut dev_value: f64 = 0.0;
            for (j, e) in evals.iter().enumerate() {
                dev_count = dev_count.max((e.total as f64 - rho[j]).abs());
                for p in 0..d {
                    dev_pp = dev_pp.max((e.per_property[p] as f64 - rho_pp[j][p]).abs());
                }
                dev_value = dev_value.max((e.value - nu[j]).abs());
            }
            Ok((dev_count, dev_pp, dev_value))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_dev_count: Vec<f64> = maxima.iter().map(|x| x.0).collect();
    let max_dev_per_property: Vec<f64> = maxima.iter().map(|x| x.1).collect();
    let max_dev_value: Vec<f64> = maxima.iter().map(|x| x.2).collect();
    let value_quantiles = DeviationQuantiles::of(&max_dev_value);
    let unit = value_slack(spec.k(), d, 0.05, 1.0);
    Ok(ConvergenceStats {
        n,
        k: spec.k(),
        d,
        trials,
        calibration_trials,
        net_size: m,
        rho,
        rho_per_property: rho_pp,
        nu,
        nu_max_se,
        count_quantiles: DeviationQuantiles::of(&max_dev_count),
        per_property_quantiles: DeviationQuantiles::of(&max_dev_per_property),
        fitted_value_c0: value_quantiles.q95 / unit,
        value_quantiles,
        max_dev_count,
        max_dev_per_property,
        max_dev_value,
    })
}

/// Items uniform over `d` disjoint properties with uniform values.
pub fn lower_bound_distribution(d: usize) -> DistributionSpec {
    DistributionSpec::DisjointPropertiesUniform { d }
}

/// A run over [`lower_bound_distribution`] with one slot per property.
pub fn lower_bound_config(d: usize, n: usize, trials: usize, algorithm: Algorithm) -> Result<ExperimentConfig> {
    let spec = ConstraintSpec::unit(d)?;
    let mut cfg = ExperimentConfig::new(lower_bound_distribution(d), spec, n, trials, algorithm);
    cfg.scenario = format!("lower-bound-d{d}");
    Ok(cfg)
}
