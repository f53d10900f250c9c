//! Greedy online screening: after a warmup prefix, keep an arriving item iff
//! it belongs to the optimum over everything kept so far plus itself.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matching::{fixed, solve_unchecked, Solution};
use crate::model::{ensure_valid, ConstraintSpec, Instance, Item};

/// `floor(delta * n / k)`.
pub fn warmup_length(n: usize, k: usize, delta: f64) -> usize {
    assert!(k >= 1, "k must be positive");
    assert!((0.0..=1.0).contains(&delta), "delta must lie in [0, 1]");
    // absorb representation error such as 0.3 * 10 = 2.9999999999999996
    let x = delta * n as f64 / k as f64;
    (x + 1e-9 * x.max(1.0)).floor() as usize
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub item_id: u64,
    pub retained: bool,
    pub running_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyResult {
    pub warmup: usize,
    pub retained_count: usize,
    /// Retained ids in arrival order.
    pub retained_ids: Vec<u64>,
    pub final_solution: Solution,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStep>>,
}

/// Incremental state of the greedy screen.
pub struct GreedyScreener<'a> {
    spec: &'a ConstraintSpec,
    retained: Vec<Item>,
    // per property: the k largest retained values, descending
    top: Vec<Vec<i128>>,
    current: Solution,
}

impl<'a> GreedyScreener<'a> {
    pub fn new(spec: &'a ConstraintSpec) -> Self {
        GreedyScreener {
            spec,
            retained: Vec::new(),
            top: vec![Vec::new(); spec.d()],
            current: solve_unchecked(&[], spec),
        }
    }

    /// Offers the next arriving item (assumed valid); returns whether it is kept.
    pub fn offer(&mut self, item: &Item) -> bool {
        if self.dominated(item) {
            return false;
        }
        self.retained.push(item.clone());
        let sol = solve_unchecked(&self.retained, self.spec);
        if sol.contains(item.id()) {
            let k = self.spec.k();
            for &(p, v) in item.props() {
                let col = &mut self.top[p];
                let fv = fixed(v);
                let at = col.partition_point(|&x| x >= fv);
                col.insert(at, fv);
                col.truncate(k);
            }
            self.current = sol;
            true
        } else {
            self.retained.pop();
            false
        }
    }

    // Beaten strictly by k kept items on every property it has: no optimum uses it.
    fn dominated(&self, item: &Item) -> bool {
        let k = self.spec.k();
        item.props()
            .iter()
            .all(|&(p, v)| self.top[p].len() >= k && self.top[p][k - 1] > fixed(v))
    }

    pub fn retained(&self) -> &[Item] {
        &self.retained
    }

    pub fn current(&self) -> &Solution {
        &self.current
    }

    pub fn into_parts(self) -> (Vec<Item>, Solution) {
        (self.retained, self.current)
    }
}

/// Runs the greedy screen over `stream`, discarding the first `warmup`
/// arrivals unconditionally.
pub fn greedy_screen(
    stream: &Instance,
    spec: &ConstraintSpec,
    warmup: usize,
    trace: bool,
) -> Result<GreedyResult> {
    ensure_valid(stream.items(), spec)?;
    if warmup > stream.len() {
        return Err(Error::input(format!("warmup {warmup} exceeds stream length {}", stream.len())));
    }
    let mut screener = GreedyScreener::new(spec);
    let mut steps = trace.then(Vec::new);
    for (step, item) in stream.items().iter().enumerate() {
        let kept = step >= warmup && screener.offer(item);
        if let Some(steps) = steps.as_mut() {
            steps.push(TraceStep {
                step,
                item_id: item.id(),
                retained: kept,
                running_value: screener.current().value(),
            });
        }
    }
    let (retained, final_solution) = screener.into_parts();
    let retained_ids: Vec<u64> = retained.iter().map(Item::id).collect();
    Ok(GreedyResult {
        warmup,
        retained_count: retained_ids.len(),
        retained_ids,
        final_solution,
        trace: steps,
    })
}
