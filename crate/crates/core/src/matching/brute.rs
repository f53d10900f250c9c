use std::cmp::Ordering;

use super::{compare_candidates, fixed, refuse_unless, Candidate, Solution};
use crate::error::Result;
use crate::model::{ensure_valid, ConstraintSpec, Item, Property};

pub const BRUTE_FORCE_MAX_ITEMS: usize = 10;
pub const BRUTE_FORCE_MAX_SLOTS: usize = 5;

/// Exhaustive search over every feasible assignment. Test oracle for
/// [`super::optimal_matching`]; refuses inputs with more than 10 items or 5 slots.
pub fn brute_force_matching(items: &[Item], spec: &ConstraintSpec) -> Result<Solution> {
    ensure_valid(items, spec)?;
    refuse_unless(items.len() <= BRUTE_FORCE_MAX_ITEMS, || {
        format!("brute force limited to {BRUTE_FORCE_MAX_ITEMS} items, got {}", items.len())
    })?;
    refuse_unless(spec.k() <= BRUTE_FORCE_MAX_SLOTS, || {
        format!("brute force limited to {BRUTE_FORCE_MAX_SLOTS} slots, got k={}", spec.k())
    })?;

    let mut sorted: Vec<&Item> = items.iter().collect();
    sorted.sort_by_key(|c| c.id());
    let mut search = Search {
        items: &sorted,
        remaining: spec.caps().to_vec(),
        current: Vec::new(),
        best: None,
    };
    search.visit(0);
    let best = search.best.unwrap_or_default();
    let real = best
        .into_iter()
        .map(|(id, p, _)| {
            let v = sorted.iter().find(|c| c.id() == id).and_then(|c| c.value(p)).unwrap_or(0.0);
            (id, p, v)
        })
        .collect();
    Ok(Solution::from_real(real, spec))
}

struct Search<'a> {
    items: &'a [&'a Item],
    remaining: Vec<usize>,
    current: Candidate,
    best: Option<Candidate>,
}

impl Search<'_> {
    // Every partial assignment is completable: dummies fill what is left.
    fn visit(&mut self, next: usize) {
        if next == self.items.len() {
            let better = match &self.best {
                None => true,
                Some(best) => compare_candidates(&self.current, best) == Ordering::Greater,
            };
            if better {
                self.best = Some(self.current.clone());
            }
            return;
        }
        self.visit(next + 1);
        let item = self.items[next];
        for &(p, v) in item.props() {
            let p: Property = p;
            if self.remaining[p] == 0 {
                continue;
            }
            self.remaining[p] -= 1;
            self.current.push((item.id(), p, fixed(v)));
            self.visit(next + 1);
            self.current.pop();
            self.remaining[p] += 1;
        }
    }
}
