//! Reference solvers for cross-checking everything else.
//!
//! Nothing here shares code with the bidirectional engine. The subset DPs
//! even recompute the outage counts from the raw power edges instead of
//! going through [`PrecedenceIndex`].

use alloc::vec;
use alloc::vec::Vec;

use crate::instance::{Instance, DEPOT};
use crate::power_eval::{evaluate_route, PrecedenceIndex, Route};
use crate::{Error, Vertex, VertexSet};

pub const BRUTE_FORCE_LIMIT: usize = 10;
pub const HELD_KARP_LIMIT: usize = 20;

/// Lexicographic successor of `order`; false once the last permutation is reached.
fn next_permutation(order: &mut [Vertex]) -> bool {
    let Some(i) = order.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = order.iter().rposition(|&x| x > order[i]).expect("a larger element exists after i");
    order.swap(i, j);
    order[i + 1..].reverse();
    true
}

/// Evaluates all `n!` orders and keeps the first minimum in lexicographic order.
pub fn brute_force(instance: &Instance, index: &PrecedenceIndex) -> Result<Route, Error> {
    let n = instance.n;
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::EngineLimit { n, limit: BRUTE_FORCE_LIMIT });
    }
    let mut order: Vec<Vertex> = (1..=n).collect();
    let mut best = evaluate_route(instance, index, &order)?;
    while next_permutation(&mut order) {
        let route = evaluate_route(instance, index, &order)?;
        if route.objective < best.objective {
            best = route;
        }
    }
    Ok(best)
}

/// Outage count for every repaired subset, recomputed from the power edges.
/// Subsets use bit `v - 1` for vertex `v`.
struct LocalOutage {
    dark: Vec<u8>,
}

impl LocalOutage {
    fn new(instance: &Instance) -> Self {
        let n = instance.n;
        let mut parent = vec![usize::MAX; n + 1];
        let mut children = vec![Vec::new(); n + 1];
        for &(p, c) in &instance.power_edges {
            parent[c] = p;
            children[p].push(c);
        }
        // top-down order so parents are settled before children
        let mut topo = Vec::with_capacity(n);
        let mut stack = vec![instance.source];
        while let Some(v) = stack.pop() {
            topo.push(v);
            stack.extend_from_slice(&children[v]);
        }
        let mut dark = vec![0u8; 1 << n];
        let mut lit = vec![false; n + 1];
        for (mask, slot) in dark.iter_mut().enumerate() {
            let mut count = 0;
            for &v in &topo {
                let up = v == instance.source || lit[parent[v]];
                lit[v] = up && mask >> (v - 1) & 1 == 1;
                if !lit[v] {
                    count += 1;
                }
            }
            *slot = count;
        }
        LocalOutage { dark }
    }

    #[inline]
    fn dark(&self, repaired: usize) -> u64 {
        self.dark[repaired] as u64
    }
}

fn weighted_leg(dark: u64, d: u64) -> Result<u64, Error> {
    dark.checked_mul(d).ok_or(Error::Overflow("subset DP leg value"))
}

const INF: u64 = u64::MAX;

/// Plain forward subset DP over states `(visited, last)` with no pruning.
///
/// `u({i}, i) = n · d_0i` and `u(X ∪ {j}, j) = min_i u(X, i) + W(X) · d_ij`;
/// the closing leg to the depot costs nothing because everything is powered.
/// The index is only used to evaluate the recovered order.
pub fn held_karp_forward(instance: &Instance, index: &PrecedenceIndex) -> Result<Route, Error> {
    let n = instance.n;
    if n > HELD_KARP_LIMIT {
        return Err(Error::EngineLimit { n, limit: HELD_KARP_LIMIT });
    }
    instance.ensure_valid()?;
    let outage = LocalOutage::new(instance);
    let d = |a: Vertex, b: Vertex| instance.travel_time(a, b);
    let full = (1usize << n) - 1;
    let mut u = vec![INF; (1 << n) * n];
    let at = |mask: usize, last: Vertex| mask * n + (last - 1);

    for i in 1..=n {
        u[at(1 << (i - 1), i)] = weighted_leg(n as u64, d(DEPOT, i))?;
    }
    for mask in 1..=full {
        let w = outage.dark(mask);
        for i in 1..=n {
            let cur = u[at(mask, i)];
            if cur == INF {
                continue;
            }
            for j in 1..=n {
                if mask >> (j - 1) & 1 == 1 {
                    continue;
                }
                let cand = cur
                    .checked_add(weighted_leg(w, d(i, j))?)
                    .ok_or(Error::Overflow("subset DP value"))?;
                let slot = &mut u[at(mask | 1 << (j - 1), j)];
                if cand < *slot {
                    *slot = cand;
                }
            }
        }
    }

    let mut last = (1..=n).min_by_key(|&i| (u[at(full, i)], i)).expect("n >= 1");
    let mut mask = full;
    let mut reversed = vec![last];
    while mask.count_ones() > 1 {
        let prev_mask = mask & !(1 << (last - 1));
        let w = outage.dark(prev_mask);
        let target = u[at(mask, last)];
        let prev = (1..=n)
            .filter(|&j| prev_mask >> (j - 1) & 1 == 1)
            .find(|&j| {
                let val = u[at(prev_mask, j)];
                val != INF && val + w * d(j, last) == target
            })
            .ok_or_else(|| Error::Internal("subset DP backtracking lost its predecessor".into()))?;
        reversed.push(prev);
        mask = prev_mask;
        last = prev;
    }
    reversed.reverse();
    evaluate_route(instance, index, &reversed)
}

/// Values `v(k, Y)` of the backward recursion: the least outage accrued from
/// leaving `k` until all of `Y` is repaired, when everything outside `Y` is
/// already fixed.
pub struct BackwardTable {
    n: usize,
    outage: LocalOutage,
    values: Vec<u64>,
    travel: Vec<Vec<i64>>,
}

impl BackwardTable {
    pub fn new(instance: &Instance) -> Result<Self, Error> {
        let n = instance.n;
        if n > HELD_KARP_LIMIT {
            return Err(Error::EngineLimit { n, limit: HELD_KARP_LIMIT });
        }
        instance.ensure_valid()?;
        let outage = LocalOutage::new(instance);
        let full = (1usize << n) - 1;
        let mut values = vec![INF; (1 << n) * (n + 1)];
        values[..=n].fill(0);
        for remaining in 1..=full {
            let w = outage.dark(full & !remaining);
            for k in 0..=n {
                if k != DEPOT && remaining >> (k - 1) & 1 == 1 {
                    continue;
                }
                let mut best = INF;
                for j in 1..=n {
                    if remaining >> (j - 1) & 1 == 0 {
                        continue;
                    }
                    let rest = values[(remaining & !(1 << (j - 1))) * (n + 1) + j];
                    let cand = weighted_leg(w, instance.travel_time(k, j))?
                        .checked_add(rest)
                        .ok_or(Error::Overflow("subset DP value"))?;
                    best = best.min(cand);
                }
                values[remaining * (n + 1) + k] = best;
            }
        }
        Ok(BackwardTable { n, outage, values, travel: instance.travel.clone() })
    }

    fn local(remaining: VertexSet) -> usize {
        (remaining.without(DEPOT).0 >> 1) as usize
    }

    /// `v(k, remaining)`; `k` must not be in `remaining`.
    pub fn value(&self, k: Vertex, remaining: VertexSet) -> u128 {
        self.values[Self::local(remaining) * (self.n + 1) + k] as u128
    }

    /// `v(0, V_c)`, the optimal objective.
    pub fn optimum(&self) -> u128 {
        self.value(DEPOT, VertexSet::faults(self.n))
    }

    /// Whether `order` satisfies the Bellman equation with equality at every
    /// step, which holds exactly for optimal orders.
    pub fn certifies(&self, order: &[Vertex]) -> bool {
        let full = (1usize << self.n) - 1;
        let mut remaining: VertexSet = order.iter().copied().collect();
        let mut at = DEPOT;
        for &next in order {
            let rest = remaining.without(next);
            let w = self.outage.dark(full & !Self::local(remaining)) as u128;
            let lhs = self.value(at, remaining);
            let rhs = w * self.travel[at][next] as u128 + self.value(next, rest);
            if lhs != rhs {
                return false;
            }
            remaining = rest;
            at = next;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::{chain, single, star};
    use crate::instance::generate_random;

    fn idx(inst: &Instance) -> PrecedenceIndex {
        PrecedenceIndex::build(inst).unwrap()
    }

    #[test]
    fn permutations_in_lexicographic_order() {
        let mut p = vec![1, 2, 3];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(seen, vec![
            vec![1, 2, 3],
            vec![1, 3, 2],
            vec![2, 1, 3],
            vec![2, 3, 1],
            vec![3, 1, 2],
            vec![3, 2, 1]
        ]);
        assert!(!next_permutation(&mut [1]));
    }

    #[test]
    fn star_optimum() {
        let inst = star();
        let i = idx(&inst);
        let best = brute_force(&inst, &i).unwrap();
        assert_eq!(best.objective, 6);
        assert_eq!(best.order, vec![1, 2, 3]);
        assert_eq!(evaluate_route(&inst, &i, &[1, 3, 2]).unwrap().objective, 8);
        assert_eq!(held_karp_forward(&inst, &i).unwrap().objective, 6);
        let table = BackwardTable::new(&inst).unwrap();
        assert_eq!(table.optimum(), 6);
        assert!(table.certifies(&[1, 2, 3]));
        assert!(!table.certifies(&[1, 3, 2]));
    }

    #[test]
    fn single_vertex_optimum() {
        let inst = single(9);
        let i = idx(&inst);
        assert_eq!(brute_force(&inst, &i).unwrap().objective, 9);
        assert_eq!(held_karp_forward(&inst, &i).unwrap().objective, 9);
        assert_eq!(BackwardTable::new(&inst).unwrap().optimum(), 9);
    }

    #[test]
    fn two_vertex_chain() {
        let inst = Instance {
            n: 2,
            power_edges: vec![(1, 2)],
            travel: vec![vec![0, 5, 1], vec![5, 0, 2], vec![1, 2, 0]],
            repair_durations: vec![0, 0],
            ..chain()
        };
        let i = idx(&inst);
        let a = evaluate_route(&inst, &i, &[1, 2]).unwrap().objective;
        let b = evaluate_route(&inst, &i, &[2, 1]).unwrap().objective;
        assert_eq!((a, b), (5 + 7, 3 + 3));
        assert_eq!(brute_force(&inst, &i).unwrap().objective, a.min(b));
    }

    #[test]
    fn limits_are_enforced() {
        let inst = generate_random(11, 0, 10).unwrap();
        assert_eq!(brute_force(&inst, &idx(&inst)), Err(Error::EngineLimit { n: 11, limit: 10 }));
        let inst = generate_random(21, 0, 10).unwrap();
        assert_eq!(held_karp_forward(&inst, &idx(&inst)), Err(Error::EngineLimit { n: 21, limit: 20 }));
        assert!(BackwardTable::new(&inst).is_err());
    }

    #[test]
    fn oracles_agree_on_random_instances() {
        for seed in 0..80 {
            let n = 1 + (seed as usize % 8);
            let inst = generate_random(n, seed, 100).unwrap();
            let i = idx(&inst);
            let bf = brute_force(&inst, &i).unwrap();
            let hk = held_karp_forward(&inst, &i).unwrap();
            let table = BackwardTable::new(&inst).unwrap();
            assert_eq!(bf.objective, hk.objective, "seed {seed}");
            assert_eq!(table.optimum(), bf.objective, "seed {seed}");
            assert!(table.certifies(&bf.order));
            assert!(table.certifies(&hk.order));
        }
    }
}
