//! Learned thresholds filter combined with greedy screening.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greedy::{warmup_length, GreedyScreener};
use crate::matching::{solve_unchecked, Solution};
use crate::model::{ensure_valid, ConstraintSpec, Instance, Item};
use crate::thresholds::{
    apply_policy, learn_optimal_thresholds, learn_topm_thresholds, retention_slack, ThresholdsPolicy,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
#[derive(clap::ValueEnum)]
pub enum Mode {
    /// Thresholds that keep exactly the training optimum.
    ValueApprox,
    /// Thresholds that keep the top `k + slack` training items of every property.
    ExactOpt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub mode: Mode,
    pub delta: f64,
    #[serde(default = "default_c0")]
    pub c0: f64,
    /// Shares of `delta` given to threshold coverage, convergence slack and
    /// the greedy warmup.
    #[serde(default = "default_split")]
    pub delta_split: [f64; 3],
}

fn default_c0() -> f64 {
    1.0
}

fn default_split() -> [f64; 3] {
    [1.0 / 3.0; 3]
}

impl PipelineConfig {
    pub fn new(mode: Mode, delta: f64) -> Self {
        PipelineConfig { mode, delta, c0: default_c0(), delta_split: default_split() }
    }

    pub fn with_c0(mut self, c0: f64) -> Self {
        self.c0 = c0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::config(format!("delta must lie in (0,1), got {}", self.delta)));
        }
        if !(self.c0 >= 0.0 && self.c0.is_finite()) {
            return Err(Error::config(format!("c0 must be a finite non-negative number, got {}", self.c0)));
        }
        if self.delta_split.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::config("delta split weights must be non-negative"));
        }
        let sum: f64 = self.delta_split.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::config(format!("delta split weights sum to {sum}, expected 1")));
        }
        Ok(())
    }

    pub fn convergence_delta(&self) -> f64 {
        self.delta * self.delta_split[1]
    }

    pub fn greedy_delta(&self) -> f64 {
        self.delta * self.delta_split[2]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineResult {
    pub policy: ThresholdsPolicy,
    pub warmup: usize,
    pub retained_after_policy: usize,
    pub retained_final: usize,
    pub retained_ids: Vec<u64>,
    pub final_solution: Solution,
    /// Whether the final solution is the optimum of the whole stream.
    pub optimal_vs_fullstream: bool,
    pub full_stream_value: f64,
    pub value_gap: f64,
}

/// Learns the policy `cfg.mode` calls for from `train`.
pub fn learn_policy(
    train: &Instance,
    spec: &ConstraintSpec,
    stream_len: usize,
    cfg: &PipelineConfig,
) -> Result<ThresholdsPolicy> {
    match cfg.mode {
        Mode::ValueApprox => learn_optimal_thresholds(train, spec),
        Mode::ExactOpt => {
            let k = spec.k();
            let slack = retention_slack(k, spec.d(), stream_len, cfg.convergence_delta(), cfg.c0);
            learn_topm_thresholds(train, spec, &vec![k + slack; spec.d()])
        }
    }
}

/// Screens `stream` with the learned policy and then greedily; the warmup
/// is counted in positions of the original stream.
pub fn screen_stream(
    policy: &ThresholdsPolicy,
    stream: &[Item],
    spec: &ConstraintSpec,
    warmup: usize,
) -> (usize, Vec<Item>, Solution) {
    let mut screener = GreedyScreener::new(spec);
    let mut passed = 0;
    for (pos, item) in stream.iter().enumerate() {
        if !apply_policy(policy, item) {
            continue;
        }
        passed += 1;
        if pos >= warmup {
            screener.offer(item);
        }
    }
    let (retained, solution) = screener.into_parts();
    (passed, retained, solution)
}

pub fn run_pipeline(
    train: &Instance,
    stream: &Instance,
    spec: &ConstraintSpec,
    cfg: &PipelineConfig,
) -> Result<PipelineResult> {
    cfg.validate()?;
    ensure_valid(stream.items(), spec)?;
    let n = stream.len();
    let policy = learn_policy(train, spec, n, cfg)?;
    let warmup = warmup_length(n, spec.k(), cfg.greedy_delta());
    let (retained_after_policy, retained, final_solution) = screen_stream(&policy, stream.items(), spec, warmup);
    let full = solve_unchecked(stream.items(), spec);
    Ok(PipelineResult {
        policy,
        warmup,
        retained_after_policy,
        retained_final: retained.len(),
        retained_ids: retained.iter().map(Item::id).collect(),
        optimal_vs_fullstream: final_solution == full,
        full_stream_value: full.value(),
        value_gap: full.value() - final_solution.value(),
        final_solution,
    })
}
