//! Successive-shortest-path min-cost flow on the property/item graph.
//!
//! Costs are lexicographic triples `(value, index sum, rank weight)`, which
//! form an ordered abelian group, so potentials and Dijkstra work unchanged
//! and every tie-break decision is exact. The rank weight of item `r` (its
//! position by ascending id among `m` candidates) assigned to property `p` is
//! `(d - p) * (d + 1)^(m - 1 - r)`: a base-(d+1) numeral whose comparison is
//! the lexicographic rule of the module docs.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;

use super::{candidate_pool, fixed, Solution};
use crate::error::Result;
use crate::model::{ensure_valid, ConstraintSpec, Item};

/// The rank component of a cost.
trait RankWeight: Clone + Ord + Default + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> {
    fn digit(digit: u32, base: u32, exp: u32) -> Self;
}

impl RankWeight for i128 {
    fn digit(digit: u32, base: u32, exp: u32) -> Self {
        i128::from(digit) * i128::from(base).pow(exp)
    }
}

impl RankWeight for BigInt {
    fn digit(digit: u32, base: u32, exp: u32) -> Self {
        BigInt::from(digit) * BigInt::from(base).pow(exp)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
struct Cost<W> {
    value: i128,
    index_sum: i64,
    rank: W,
}

impl<W: RankWeight> Add for Cost<W> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Cost { value: self.value + o.value, index_sum: self.index_sum + o.index_sum, rank: self.rank + o.rank }
    }
}

impl<W: RankWeight> Sub for Cost<W> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Cost { value: self.value - o.value, index_sum: self.index_sum - o.index_sum, rank: self.rank - o.rank }
    }
}

impl<W: RankWeight> Neg for Cost<W> {
    type Output = Self;
    fn neg(self) -> Self {
        Cost { value: -self.value, index_sum: -self.index_sum, rank: -self.rank }
    }
}

struct Edge<W> {
    to: usize,
    cap: usize,
    cost: Cost<W>,
}

struct Graph<W> {
    adj: Vec<Vec<usize>>,
    edges: Vec<Edge<W>>,
}

impl<W: RankWeight> Graph<W> {
    fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], edges: Vec::new() }
    }

    fn link(&mut self, from: usize, to: usize, cap: usize, cost: Cost<W>) -> usize {
        let e = self.edges.len();
        self.adj[from].push(e);
        self.adj[to].push(e + 1);
        self.edges.push(Edge { to, cap, cost: cost.clone() });
        self.edges.push(Edge { to: from, cap: 0, cost: -cost });
        e
    }
}

/// Node layout: source, `d` property nodes, `m` item nodes, one dummy node, sink.
fn solve_generic<W: RankWeight>(pool: &[&Item], spec: &ConstraintSpec) -> Solution {
    let d = spec.d();
    let m = pool.len();
    let k = spec.k();
    let source = 0;
    let prop = |p: usize| 1 + p;
    let item = |r: usize| 1 + d + r;
    let dummy = 1 + d + m;
    let sink = dummy + 1;
    let n = sink + 1;
    let base = d as u32 + 1;

    let mut g: Graph<W> = Graph::new(n);
    for (p, &cap) in spec.caps().iter().enumerate() {
        g.link(source, prop(p), cap, Cost::default());
        g.link(prop(p), dummy, cap, Cost::default());
    }
    let mut item_edges = Vec::new();
    for (r, c) in pool.iter().enumerate() {
        for &(p, v) in c.props() {
            let gain = Cost {
                value: fixed(v),
                index_sum: c.id() as i64 + 1,
                rank: W::digit((d - p) as u32, base, (m - 1 - r) as u32),
            };
            let e = g.link(prop(p), item(r), 1, -gain);
            item_edges.push((e, r, p, v));
        }
        g.link(item(r), sink, 1, Cost::default());
    }
    g.link(dummy, sink, k, Cost::default());

    // Initial potentials: exact shortest distances in the acyclic start graph.
    let mut potential: Vec<Cost<W>> = vec![Cost::default(); n];
    for &(e, r, _, _) in &item_edges {
        let c = &g.edges[e].cost;
        if *c < potential[item(r)] {
            potential[item(r)] = c.clone();
        }
    }
    let min_item = (0..m).map(|r| potential[item(r)].clone()).min().unwrap_or_default();
    potential[sink] = min_item.min(Cost::default());

    let mut flow = 0;
    let mut dist: Vec<Option<Cost<W>>> = vec![None; n];
    let mut parent: Vec<usize> = vec![usize::MAX; n];
    while flow < k {
        dist.iter_mut().for_each(|x| *x = None);
        dist[source] = Some(Cost::default());
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((Cost::<W>::default(), source)));
        while let Some(Reverse((du, u))) = heap.pop() {
            if dist[u].as_ref().is_none_or(|best| du.cmp(best) == Ordering::Greater) {
                continue;
            }
            for &e in &g.adj[u] {
                let edge = &g.edges[e];
                if edge.cap == 0 {
                    continue;
                }
                let v = edge.to;
                let reduced = edge.cost.clone() + potential[u].clone() - potential[v].clone();
                let cand = du.clone() + reduced;
                if dist[v].as_ref().is_none_or(|best| cand < *best) {
                    dist[v] = Some(cand.clone());
                    parent[v] = e;
                    heap.push(Reverse((cand, v)));
                }
            }
        }
        // the dummy route always reaches the sink while flow < k
        debug_assert!(dist[sink].is_some());
        for v in 0..n {
            if let Some(dv) = &dist[v] {
                potential[v] = potential[v].clone() + dv.clone();
            }
        }
        let mut push = k - flow;
        let mut v = sink;
        while v != source {
            let e = parent[v];
            push = push.min(g.edges[e].cap);
            v = g.edges[e ^ 1].to;
        }
        let mut v = sink;
        while v != source {
            let e = parent[v];
            g.edges[e].cap -= push;
            g.edges[e ^ 1].cap += push;
            v = g.edges[e ^ 1].to;
        }
        flow += push;
    }

    let real = item_edges
        .iter()
        .filter(|&&(e, _, _, _)| g.edges[e].cap == 0)
        .map(|&(_, r, p, v)| (pool[r].id(), p, v))
        .collect();
    Solution::from_real(real, spec)
}

pub(super) fn solve_pool(pool: &[&Item], spec: &ConstraintSpec) -> Solution {
    let bits_per_digit = f64::from(spec.d() as u32 + 1).log2();
    if pool.len() as f64 * bits_per_digit <= 124.0 {
        solve_generic::<i128>(pool, spec)
    } else {
        solve_generic::<BigInt>(pool, spec)
    }
}

/// The min-cost-flow route for any number of properties (no single-property
/// shortcut). Same result as [`super::optimal_matching`].
pub fn flow_matching(items: &[Item], spec: &ConstraintSpec) -> Result<Solution> {
    ensure_valid(items, spec)?;
    let pool = candidate_pool(items, spec);
    Ok(solve_pool(&pool, spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_pools_switch_to_big_integers() {
        // 130 tied candidates on one property overflow the i128 rank weights
        let spec = ConstraintSpec::new(vec![130]).unwrap();
        let items: Vec<Item> = (0..200).map(|i| Item::new(i, vec![(0, 0.25)])).collect();
        let sol = flow_matching(&items, &spec).unwrap();
        let ids: Vec<u64> = sol.real_ids().collect();
        assert_eq!(ids, (70..200).collect::<Vec<_>>());
    }

    #[test]
    fn bigint_and_i128_agree() {
        let spec = ConstraintSpec::new(vec![2, 1, 1]).unwrap();
        let items: Vec<Item> = (0..7u64)
            .map(|i| Item::new(i, vec![(i as usize % 3, 0.5), ((i as usize + 1) % 3, 0.25)]))
            .collect();
        let pool: Vec<&Item> = items.iter().collect();
        assert_eq!(solve_generic::<i128>(&pool, &spec), solve_generic::<BigInt>(&pool, &spec));
    }
}
