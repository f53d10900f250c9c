//! Offline maximum-value assignment of items to property slots.
//!
//! A feasible solution fills exactly `k_i` slots of every property `i` with
//! distinct items possessing it; dummy items fill whatever real items cannot.
//! Among maximum-value solutions the preferred one is fixed by a total order:
//!
//! 1. larger total value, compared exactly on a 2^-100 fixed-point grid;
//! 2. larger sum of 1-based arrival indices (`id + 1`) of the real items;
//! 3. at the smallest id where the two assignments differ, the one that uses
//!    the item wins, and if both use it, the one assigning it to the smaller
//!    property index wins.
//!
//! Rule 3 makes the order total over assignments, so the optimum is unique.

mod brute;
mod flow;

use std::cmp::Ordering;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::model::{ensure_valid, is_dummy_id, ConstraintSpec, Item, Property, DUMMY_ID_BASE};

pub use brute::{brute_force_matching, BRUTE_FORCE_MAX_ITEMS, BRUTE_FORCE_MAX_SLOTS};
pub use flow::flow_matching;

const FIXED_SCALE: f64 = 1_267_650_600_228_229_401_496_703_205_376.0; // 2^100

/// Exact fixed-point image of a value in `[0, 1]`. Values of at least 2^-47
/// (and zero) are represented without rounding.
pub(crate) fn fixed(v: f64) -> i128 {
    (v * FIXED_SCALE) as i128
}

/// A feasible assignment of exactly `k` items (real or dummy) to slots.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    assignment: Vec<(u64, Property)>,
    per_property: Vec<Vec<u64>>,
    value: f64,
}

impl Solution {
    /// Assembles a solution from the real part of an assignment, topping every
    /// property up with dummies in property order.
    pub(crate) fn from_real(mut real: Vec<(u64, Property, f64)>, spec: &ConstraintSpec) -> Self {
        real.sort_by_key(|&(id, _, _)| id);
        let value = real.iter().map(|&(_, _, v)| v).sum();
        let mut per_property = vec![Vec::new(); spec.d()];
        for &(id, p, _) in &real {
            per_property[p].push(id);
        }
        let mut next_dummy = DUMMY_ID_BASE;
        let mut assignment: Vec<(u64, Property)> = real.iter().map(|&(id, p, _)| (id, p)).collect();
        for (p, slot) in per_property.iter_mut().enumerate() {
            while slot.len() < spec.caps()[p] {
                slot.push(next_dummy);
                assignment.push((next_dummy, p));
                next_dummy += 1;
            }
        }
        Solution { assignment, per_property, value }
    }

    /// `(item id, property)` pairs sorted by id; dummies come last.
    pub fn assignment(&self) -> &[(u64, Property)] {
        &self.assignment
    }

    pub fn per_property(&self) -> &[Vec<u64>] {
        &self.per_property
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn real_ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.assignment.iter().map(|&(id, _)| id).filter(|&id| !is_dummy_id(id))
    }

    pub fn contains(&self, id: u64) -> bool {
        self.assignment.binary_search_by_key(&id, |&(i, _)| i).is_ok()
    }

    pub fn dummies_used(&self) -> usize {
        self.assignment.iter().filter(|&&(id, _)| is_dummy_id(id)).count()
    }

    /// Checks every structural invariant against the items the solution was
    /// computed from.
    pub fn check(&self, items: &[Item], spec: &ConstraintSpec) -> std::result::Result<(), String> {
        if self.assignment.len() != spec.k() {
            return Err(format!("{} slots filled, expected {}", self.assignment.len(), spec.k()));
        }
        for (p, slot) in self.per_property.iter().enumerate() {
            if slot.len() != spec.caps()[p] {
                return Err(format!("property {p} has {} items, capacity {}", slot.len(), spec.caps()[p]));
            }
        }
        if self.assignment.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err("assignment not strictly sorted by id".into());
        }
        let mut total = 0.0;
        for &(id, p) in &self.assignment {
            if is_dummy_id(id) {
                continue;
            }
            let item = items
                .iter()
                .find(|c| c.id() == id)
                .ok_or_else(|| format!("assigned item {id} is not among the inputs"))?;
            total += item
                .value(p)
                .ok_or_else(|| format!("item {id} assigned to property {p} it does not possess"))?;
        }
        if (total - self.value).abs() > 1e-9 {
            return Err(format!("value {} does not match recomputed {}", self.value, total));
        }
        Ok(())
    }
}

impl Serialize for Solution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Solution", 2)?;
        s.serialize_field("value", &self.value)?;
        s.serialize_field("assignment", &self.assignment)?;
        s.end()
    }
}

/// Real part of a candidate assignment: `(id, property, fixed value)` sorted by id.
pub(crate) type Candidate = Vec<(u64, Property, i128)>;

/// The preference order described in the module docs, written out
/// directly. `Greater` means `a` is preferred.
pub(crate) fn compare_candidates(a: &Candidate, b: &Candidate) -> Ordering {
    let value = |c: &Candidate| c.iter().map(|&(_, _, v)| v).sum::<i128>();
    let index_sum = |c: &Candidate| c.iter().map(|&(id, _, _)| u128::from(id) + 1).sum::<u128>();
    value(a)
        .cmp(&value(b))
        .then_with(|| index_sum(a).cmp(&index_sum(b)))
        .then_with(|| {
            for (x, y) in a.iter().zip(b) {
                if x.0 != y.0 {
                    // the smaller id is present on one side only
                    return y.0.cmp(&x.0);
                }
                if x.1 != y.1 {
                    return y.1.cmp(&x.1);
                }
            }
            a.len().cmp(&b.len())
        })
}

/// Items that can appear in some maximum-value solution.
///
/// An item whose value on each of its properties is beaten strictly by at
/// least `k` other items possessing that property can be swapped for one of
/// them in any solution, so it never belongs to an optimum.
pub(crate) fn candidate_pool<'a>(items: &'a [Item], spec: &ConstraintSpec) -> Vec<&'a Item> {
    let k = spec.k();
    let d = spec.d();
    if items.len() <= k {
        let mut pool: Vec<&Item> = items.iter().collect();
        pool.sort_by_key(|c| c.id());
        return pool;
    }
    let mut cutoff: Vec<Option<i128>> = Vec::with_capacity(d);
    let mut column: Vec<i128> = Vec::new();
    for p in 0..d {
        column.clear();
        column.extend(items.iter().filter_map(|c| c.value(p)).map(fixed));
        if column.len() <= k {
            cutoff.push(None);
        } else {
            let (_, kth, _) = column.select_nth_unstable_by(k - 1, |a, b| b.cmp(a));
            cutoff.push(Some(*kth));
        }
    }
    let mut pool: Vec<&Item> = items
        .iter()
        .filter(|c| {
            c.props().iter().any(|&(p, v)| match cutoff[p] {
                None => true,
                Some(t) => fixed(v) >= t,
            })
        })
        .collect();
    pool.sort_by_key(|c| c.id());
    pool
}

/// Maximum-value feasible solution over `items` plus `k` dummies, with the
/// unique preferred optimum under the module's tie-break order.
pub fn optimal_matching(items: &[Item], spec: &ConstraintSpec) -> Result<Solution> {
    ensure_valid(items, spec)?;
    Ok(solve_unchecked(items, spec))
}

/// `optimal_matching` for inputs already known to be valid.
pub(crate) fn solve_unchecked(items: &[Item], spec: &ConstraintSpec) -> Solution {
    let pool = candidate_pool(items, spec);
    if spec.d() == 1 {
        return single_property(&pool, spec);
    }
    flow::solve_pool(&pool, spec)
}

/// With one property the optimum is the top `k` items by value, ties going
/// to the larger id.
fn single_property(pool: &[&Item], spec: &ConstraintSpec) -> Solution {
    let mut ranked: Vec<(i128, u64, f64)> = pool
        .iter()
        .filter_map(|c| c.value(0).map(|v| (fixed(v), c.id(), v)))
        .collect();
    ranked.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)));
    ranked.truncate(spec.k());
    Solution::from_real(ranked.into_iter().map(|(_, id, v)| (id, 0, v)).collect(), spec)
}

pub(crate) fn refuse_unless(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Refused(msg()))
    }
}
