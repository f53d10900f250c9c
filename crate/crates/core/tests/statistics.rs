//! Seeded Monte Carlo checks of the experiment harness.

use screening::experiments::{concentration_experiment, convergence_experiment, run_trials, Algorithm, ExperimentConfig};
use screening::model::{ConstraintSpec, DistributionSpec};
use screening::stats::binomial_se;
use screening::thresholds::ThresholdsPolicy;

fn single() -> DistributionSpec {
    DistributionSpec::SinglePropertyUniform { d: 1 }
}

fn caps(c: &[usize]) -> ConstraintSpec {
    ConstraintSpec::new(c.to_vec()).unwrap()
}

#[test]
fn single_item_opt_has_uniform_spread() {
    let stats = concentration_experiment(&single(), &caps(&[1]), 1, 20_000, 11).unwrap();
    let expected = 1.0 / 12f64.sqrt();
    assert!((stats.std - expected).abs() <= 0.01, "std {} vs {expected}", stats.std);
    assert!((stats.mean - 0.5).abs() <= 0.01);
}

#[test]
fn tail_sits_below_bound_with_overlapping_properties() {
    let dist = DistributionSpec::OverlapBernoulli { d: 2, probs: vec![0.6, 0.5] };
    let stats = concentration_experiment(&dist, &caps(&[2, 2]), 60, 1000, 12).unwrap();
    for t in &stats.tail {
        assert!(t.exceedance <= t.bound + 3.0 * binomial_se(t.bound.min(1.0), 1000), "{t:?}");
    }
}

#[test]
fn all_zero_policy_value_matches_mean_opt() {
    let (n, k, trials) = (200, 5, 2000);
    let conc = concentration_experiment(&single(), &caps(&[k]), n, trials, 13).unwrap();
    let net = vec![ThresholdsPolicy::uniform(1, 0.0)];
    let conv = convergence_experiment(&single(), &caps(&[k]), n, 10, &net, 14).unwrap();
    let se = (conc.std * conc.std / trials as f64 + conv.nu_max_se * conv.nu_max_se).sqrt();
    assert!((conv.nu[0] - conc.mean).abs() <= 2.0 * se, "nu {} vs mean {} (se {se})", conv.nu[0], conc.mean);
}

#[test]
fn pipeline_example_scenario() {
    let mut pipe = ExperimentConfig::new(single(), caps(&[5]), 2000, 300, Algorithm::PipelineExactOpt);
    pipe.delta = 0.05;
    pipe.seed = 15;
    let mut greedy = pipe.clone();
    greedy.algorithm = Algorithm::Greedy;
    let p = run_trials(&pipe).unwrap().aggregates;
    let g = run_trials(&greedy).unwrap().aggregates;
    assert!(p.success_rate >= 0.95 - 3.0 * binomial_se(0.05, 300), "success {}", p.success_rate);
    assert!(p.mean_retained < g.mean_retained, "{} vs {}", p.mean_retained, g.mean_retained);
}

#[test]
fn greedy_success_tracks_warmup_delta() {
    for (delta, seed) in [(0.2, 16), (0.05, 17)] {
        let mut cfg = ExperimentConfig::new(single(), caps(&[3]), 600, 400, Algorithm::Greedy);
        cfg.delta = delta;
        cfg.seed = seed;
        let rate = run_trials(&cfg).unwrap().aggregates.success_rate;
        assert!(rate >= 1.0 - delta - 3.0 * binomial_se(delta, 400), "delta {delta}: {rate}");
    }
}
