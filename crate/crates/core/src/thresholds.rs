//! Thresholds policies: keep an item iff some property it possesses has a
//! value at or above that property's threshold.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::{refuse_unless, solve_unchecked};
use crate::model::{ensure_valid, is_dummy_id, ConstraintSpec, Instance, Item};

/// Per-property threshold. `Above` retains nothing for its property.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Value(f64),
    Above,
}

impl Threshold {
    pub fn admits(self, v: f64) -> bool {
        match self {
            Threshold::Value(t) => v >= t,
            Threshold::Above => false,
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Threshold::Value(t) => s.serialize_f64(*t),
            Threshold::Above => s.serialize_str("ABOVE"),
        }
    }
}

impl<'de> Deserialize<'de> for Threshold {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct ThresholdVisitor;

        impl Visitor<'_> for ThresholdVisitor {
            type Value = Threshold;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number in [0,1] or \"ABOVE\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Threshold, E> {
                if (0.0..=1.0).contains(&v) {
                    Ok(Threshold::Value(v))
                } else {
                    Err(E::custom(format!("threshold {v} outside [0,1]")))
                }
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Threshold, E> {
                self.visit_f64(v as f64)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Threshold, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Threshold, E> {
                if v == "ABOVE" {
                    Ok(Threshold::Above)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        d.deserialize_any(ThresholdVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdsPolicy {
    pub t: Vec<Threshold>,
}

impl ThresholdsPolicy {
    pub fn new(t: Vec<Threshold>) -> Self {
        ThresholdsPolicy { t }
    }

    pub fn uniform(d: usize, t: f64) -> Self {
        ThresholdsPolicy { t: vec![Threshold::Value(t); d] }
    }

    pub fn retain_all(d: usize) -> Self {
        Self::uniform(d, 0.0)
    }

    pub fn retain_none(d: usize) -> Self {
        ThresholdsPolicy { t: vec![Threshold::Above; d] }
    }

    pub fn d(&self) -> usize {
        self.t.len()
    }

    pub fn check(&self, spec: &ConstraintSpec) -> Result<()> {
        if self.t.len() != spec.d() {
            return Err(Error::config(format!(
                "policy has {} thresholds but the spec has {} properties",
                self.t.len(),
                spec.d()
            )));
        }
        Ok(())
    }

    /// True iff every threshold of `self` is at most the matching one of `other`.
    pub fn at_most(&self, other: &ThresholdsPolicy) -> bool {
        self.t.iter().zip(&other.t).all(|(a, b)| match (a, b) {
            (_, Threshold::Above) => true,
            (Threshold::Above, Threshold::Value(_)) => false,
            (Threshold::Value(x), Threshold::Value(y)) => x <= y,
        })
    }
}

/// Whether `policy` keeps `item`. Retention is item-level: a kept item may be
/// matched later to any property it possesses.
pub fn apply_policy(policy: &ThresholdsPolicy, item: &Item) -> bool {
    item.props()
        .iter()
        .any(|&(p, v)| policy.t.get(p).is_some_and(|t| t.admits(v)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetentionStats {
    /// `|R_i|`: items with property `i` whose value meets `t_i`.
    pub per_property: Vec<usize>,
    /// `|R|`: items kept by the policy.
    pub total: usize,
    /// Optimal value over the kept items, when a spec was supplied.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Screened {
    pub retained: Vec<Item>,
    pub stats: RetentionStats,
}

/// Screens `items` in order with `policy`.
pub fn screen_with_policy(
    policy: &ThresholdsPolicy,
    items: &[Item],
    spec: Option<&ConstraintSpec>,
) -> Result<Screened> {
    if let Some(spec) = spec {
        policy.check(spec)?;
        ensure_valid(items, spec)?;
    }
    let mut per_property = vec![0; policy.d()];
    let mut retained = Vec::new();
    for item in items {
        let mut kept = false;
        for &(p, v) in item.props() {
            if policy.t.get(p).is_some_and(|t| t.admits(v)) {
                per_property[p] += 1;
                kept = true;
            }
        }
        if kept {
            retained.push(item.clone());
        }
    }
    let value = spec.map(|spec| solve_unchecked(&retained, spec).value());
    let total = retained.len();
    Ok(Screened { retained, stats: RetentionStats { per_property, total, value } })
}

/// The policy whose thresholds are the smallest values in each property's
/// share of the training optimum (0 where that share is all dummies).
pub fn learn_optimal_thresholds(train: &Instance, spec: &ConstraintSpec) -> Result<ThresholdsPolicy> {
    ensure_valid(train.items(), spec)?;
    let sol = solve_unchecked(train.items(), spec);
    let t = sol
        .per_property()
        .iter()
        .enumerate()
        .map(|(p, ids)| {
            let min = ids
                .iter()
                .filter(|&&id| !is_dummy_id(id))
                .filter_map(|&id| train.items()[id as usize].value(p))
                .fold(f64::INFINITY, f64::min);
            Threshold::Value(if min.is_finite() { min } else { 0.0 })
        })
        .collect();
    Ok(ThresholdsPolicy { t })
}

/// `t_i` = the `m_i`-th largest training value of property `i`, or 0 when
/// fewer than `m_i` training items possess it.
pub fn learn_topm_thresholds(train: &Instance, spec: &ConstraintSpec, m: &[usize]) -> Result<ThresholdsPolicy> {
    ensure_valid(train.items(), spec)?;
    if m.len() != spec.d() {
        return Err(Error::config(format!("{} retention targets for {} properties", m.len(), spec.d())));
    }
    if m.contains(&0) {
        return Err(Error::config("every retention target must be at least 1"));
    }
    let t = m
        .iter()
        .enumerate()
        .map(|(p, &target)| {
            let mut col = values_of(train.items(), p);
            if col.len() < target {
                return Threshold::Value(0.0);
            }
            let (_, kth, _) = col.select_nth_unstable_by(target - 1, |a, b| b.total_cmp(a));
            Threshold::Value(*kth)
        })
        .collect();
    Ok(ThresholdsPolicy { t })
}

fn values_of(items: &[Item], p: usize) -> Vec<f64> {
    items.iter().filter_map(|c| c.value(p)).collect()
}

/// Additive per-property retention slack
/// `ceil(c0 * sqrt(k * (ln(max(d,2)) * ln(n/k) + ln(1/delta))))`.
pub fn retention_slack(k: usize, d: usize, n: usize, delta: f64, c0: f64) -> usize {
    let (kf, nf) = (k as f64, n as f64);
    let log_ratio = (nf / kf).ln().max(0.0);
    let inner = kf * ((d.max(2) as f64).ln() * log_ratio + (1.0 / delta).ln());
    (c0 * inner.sqrt()).ceil() as usize
}

/// Additive value-deviation bound `c0 * sqrt(k * (d * ln(max(k,2)) + ln(1/delta)))`.
pub fn value_slack(k: usize, d: usize, delta: f64, c0: f64) -> f64 {
    let kf = k as f64;
    c0 * (kf * (d as f64 * (k.max(2) as f64).ln() + (1.0 / delta).ln())).sqrt()
}

/// Default bound on the number of policies [`quantile_policy_net`] may return.
pub const DEFAULT_NET_CAP: usize = 1_000_000;

/// Thresholds of property `i` sitting at empirical mass steps `j / (d n)`,
/// `j = 0..=10 d k`, plus threshold 0.
pub fn property_grid(train: &[Item], p: usize, d: usize, n: usize, k: usize) -> Vec<Threshold> {
    let total = train.len();
    let mut col = values_of(train, p);
    col.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut grid = vec![Threshold::Above];
    let denom = d * n;
    for j in 1..=10 * d * k {
        // smallest count whose empirical mass reaches j / (d n)
        let needed = (j * total).div_ceil(denom);
        if needed > col.len() {
            break;
        }
        let t = col[needed - 1];
        if grid.last() != Some(&Threshold::Value(t)) {
            grid.push(Threshold::Value(t));
        }
    }
    if grid.last() != Some(&Threshold::Value(0.0)) {
        grid.push(Threshold::Value(0.0));
    }
    grid
}

/// The Cartesian product of the per-property grids built from `train`.
/// An empty training instance yields the single all-zero policy.
pub fn quantile_policy_net(
    train: &Instance,
    spec: &ConstraintSpec,
    n: usize,
    k: usize,
    cap: usize,
) -> Result<Vec<ThresholdsPolicy>> {
    ensure_valid(train.items(), spec)?;
    let d = spec.d();
    if train.is_empty() {
        return Ok(vec![ThresholdsPolicy::retain_all(d)]);
    }
    if n == 0 || k == 0 {
        return Err(Error::config("net needs n >= 1 and k >= 1"));
    }
    let grids: Vec<Vec<Threshold>> = (0..d).map(|p| property_grid(train.items(), p, d, n, k)).collect();
    let size = grids.iter().try_fold(1usize, |acc, g| acc.checked_mul(g.len()));
    refuse_unless(size.is_some_and(|s| s <= cap), || {
        let need = size.map_or_else(|| "more than usize::MAX".to_string(), |s| s.to_string());
        format!("policy net needs {need} policies; cap is {cap}")
    })?;
    let mut net = vec![Vec::with_capacity(d)];
    for grid in &grids {
        net = net
            .into_iter()
            .flat_map(|prefix: Vec<Threshold>| {
                grid.iter().map(move |&t| {
                    let mut next = prefix.clone();
                    next.push(t);
                    next
                })
            })
            .collect();
    }
    Ok(net.into_iter().map(ThresholdsPolicy::new).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{sample_instance, DistributionSpec};

    fn spec(caps: &[usize]) -> ConstraintSpec {
        ConstraintSpec::new(caps.to_vec()).unwrap()
    }

    fn two_items() -> Instance {
        Instance::new(vec![Item::new(0, vec![(0, 0.9), (1, 0.8)]), Item::new(1, vec![(1, 0.5)])]).unwrap()
    }

    fn single(values: &[f64]) -> Instance {
        Instance::new(values.iter().enumerate().map(|(i, &v)| Item::new(i as u64, vec![(0, v)])).collect())
            .unwrap()
    }

    #[test]
    fn apply_examples() {
        let half = ThresholdsPolicy::uniform(1, 0.5);
        assert!(apply_policy(&half, &Item::new(0, vec![(0, 0.5)])));
        let mixed = ThresholdsPolicy::new(vec![Threshold::Value(0.5), Threshold::Above]);
        assert!(!apply_policy(&mixed, &Item::new(0, vec![(1, 0.99)])));
        let zero = ThresholdsPolicy::retain_all(3);
        assert!(apply_policy(&zero, &Item::new(0, vec![(2, 0.0)])));
    }

    #[test]
    fn screen_examples() {
        let s = spec(&[1, 1]);
        let inst = two_items();
        let all = screen_with_policy(&ThresholdsPolicy::retain_all(2), inst.items(), Some(&s)).unwrap();
        assert_eq!(all.stats.total, 2);
        assert_eq!(all.retained, inst.items());

        let none = screen_with_policy(&ThresholdsPolicy::retain_none(2), inst.items(), Some(&s)).unwrap();
        assert!(none.retained.is_empty());
        assert_eq!(none.stats.value, Some(0.0));

        let policy = ThresholdsPolicy::new(vec![Threshold::Value(0.95), Threshold::Value(0.6)]);
        let out = screen_with_policy(&policy, inst.items(), Some(&s)).unwrap();
        assert_eq!(out.retained.iter().map(Item::id).collect::<Vec<_>>(), vec![0]);
        assert_eq!(out.stats.per_property, vec![0, 1]);
        assert_eq!(out.stats.value, Some(0.9));
    }

    #[test]
    fn learn_optimal_examples() {
        let p = learn_optimal_thresholds(&two_items(), &spec(&[1, 1])).unwrap();
        assert_eq!(p.t, vec![Threshold::Value(0.9), Threshold::Value(0.5)]);

        let train = single(&[0.3, 0.7, 0.9]);
        let p = learn_optimal_thresholds(&train, &spec(&[2])).unwrap();
        assert_eq!(p.t, vec![Threshold::Value(0.7)]);
        let out = screen_with_policy(&p, train.items(), None).unwrap();
        assert_eq!(out.stats.total, 2);

        let empty = learn_optimal_thresholds(&Instance::default(), &spec(&[1, 2])).unwrap();
        assert_eq!(empty, ThresholdsPolicy::retain_all(2));
    }

    #[test]
    fn learn_topm_examples() {
        let train = single(&[0.3, 0.7, 0.9]);
        let s = spec(&[1]);
        assert_eq!(learn_topm_thresholds(&train, &s, &[2]).unwrap().t, vec![Threshold::Value(0.7)]);
        assert_eq!(learn_topm_thresholds(&train, &s, &[10]).unwrap().t, vec![Threshold::Value(0.0)]);
        assert!(learn_topm_thresholds(&train, &s, &[0]).is_err());

        let disjoint = Instance::new(vec![
            Item::new(0, vec![(0, 0.2)]),
            Item::new(1, vec![(1, 0.6)]),
            Item::new(2, vec![(0, 0.8)]),
            Item::new(3, vec![(1, 0.4)]),
        ])
        .unwrap();
        let p = learn_topm_thresholds(&disjoint, &spec(&[1, 1]), &[2, 1]).unwrap();
        assert_eq!(p.t, vec![Threshold::Value(0.2), Threshold::Value(0.6)]);
    }

    #[test]
    fn slack_examples() {
        assert_eq!(retention_slack(100, 2, 10_000, 0.01, 1.0), 28);
        assert_eq!(retention_slack(100, 2, 10_000, 0.01, 0.0), 0);
        assert_eq!(retention_slack(100, 2, 10_000, 1.0, 1.0), 18);
        assert!((value_slack(100, 1, 0.01, 1.0) - 30.348).abs() < 1e-3);
        assert_eq!(value_slack(100, 1, 0.01, 0.0), 0.0);
        assert!((value_slack(1, 1, 1.0, 1.0) - 0.8326).abs() < 1e-4);
    }

    #[test]
    fn net_on_uniform_values_follows_quantiles() {
        let n = 2000;
        let k = 3;
        let train = sample_instance(&DistributionSpec::SinglePropertyUniform { d: 1 }, n, 4).unwrap();
        let net = quantile_policy_net(&train, &spec(&[k]), n, k, DEFAULT_NET_CAP).unwrap();
        assert_eq!(net.len(), 10 * k + 2);
        assert_eq!(net[0].t, vec![Threshold::Above]);
        assert_eq!(net.last().unwrap().t, vec![Threshold::Value(0.0)]);
        for (j, policy) in net.iter().enumerate().skip(1).take(10 * k) {
            let Threshold::Value(t) = policy.t[0] else { panic!() };
            // order statistic of a uniform sample: sd about sqrt(j)/n
            let expected = 1.0 - j as f64 / n as f64;
            assert!((t - expected).abs() < 5.0 * (j as f64).sqrt() / n as f64 + 1e-3, "j={j} t={t}");
        }
    }

    #[test]
    fn net_size_for_one_slot() {
        let train = sample_instance(&DistributionSpec::SinglePropertyUniform { d: 1 }, 100, 2).unwrap();
        let net = quantile_policy_net(&train, &spec(&[1]), 100, 1, DEFAULT_NET_CAP).unwrap();
        assert!(net.len() <= 12);
        let empty = quantile_policy_net(&Instance::default(), &spec(&[1]), 100, 1, DEFAULT_NET_CAP).unwrap();
        assert_eq!(empty, vec![ThresholdsPolicy::retain_all(1)]);
    }

    #[test]
    fn net_cap_is_enforced() {
        let dist = DistributionSpec::DisjointPropertiesUniform { d: 3 };
        let train = sample_instance(&dist, 3000, 2).unwrap();
        let err = quantile_policy_net(&train, &spec(&[1, 1, 1]), 3000, 3, 1000).unwrap_err();
        assert!(matches!(err, Error::Refused(ref msg) if msg.contains("cap is 1000")), "{err}");
    }

    #[test]
    fn policy_json_accepts_above() {
        let p: ThresholdsPolicy = serde_json::from_str(r#"{"t": [0.25, "ABOVE", 1]}"#).unwrap();
        assert_eq!(p.t, vec![Threshold::Value(0.25), Threshold::Above, Threshold::Value(1.0)]);
        assert!(serde_json::from_str::<ThresholdsPolicy>(r#"{"t": [1.5]}"#).is_err());
        assert!(serde_json::from_str::<ThresholdsPolicy>(r#"{"t": ["below"]}"#).is_err());
    }
}
