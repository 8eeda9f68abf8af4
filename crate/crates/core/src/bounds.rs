//! Lower bounds built from the sorted arc lengths `s_1 <= s_2 <= ...` of the
//! road network.
//!
//! Every bound pairs a component-wise lower estimate of the outage counts
//! `c_p` (non-increasing along a route) with the smallest arcs in increasing
//! order, which by the rearrangement inequality can only undercut the true
//! leg-weighted sum.

use alloc::vec;
use alloc::vec::Vec;

use crate::instance::Instance;
use crate::power_eval::PrecedenceIndex;
use crate::{Error, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsTable {
    n: usize,
    /// Every off-diagonal arc of the road network, depot arcs included, sorted.
    sorted_arcs: Vec<u64>,
    /// `prefix[p] = s_1 + ... + s_p` for `p <= n + 1`.
    prefix: Vec<u128>,
    /// `weighted[p] = Σ_{q <= p} (n - q + 1) s_q` for `p <= n`.
    weighted: Vec<u128>,
    /// Completion term of the outgoing-path bound for a path with `k` faults.
    outgoing_tail: Vec<u128>,
    /// Prefix term of the return-path bound for a path with `k` faults.
    return_head: Vec<u128>,
    successor_count: Vec<usize>,
    beta: Vec<usize>,
}

impl BoundsTable {
    pub fn new(instance: &Instance, index: &PrecedenceIndex) -> Self {
        let n = instance.n;
        let mut sorted_arcs = Vec::with_capacity(n * (n + 1));
        for i in 0..=n {
            for j in 0..=n {
                if i != j {
                    sorted_arcs.push(instance.travel_time(i, j));
                }
            }
        }
        sorted_arcs.sort_unstable();
        let s = |p: usize| sorted_arcs[p - 1] as u128;

        let mut prefix = vec![0u128; n + 2];
        for p in 1..=n + 1 {
            prefix[p] = prefix[p - 1] + s(p);
        }
        let mut weighted = vec![0u128; n + 1];
        for p in 1..=n {
            weighted[p] = weighted[p - 1] + (n - p + 1) as u128 * s(p);
        }
        let mut outgoing_tail = vec![0u128; n + 1];
        let mut return_head = vec![0u128; n + 1];
        for k in 1..=n {
            outgoing_tail[k] = (2..=n - k).map(|p| (n - k + 1 - p) as u128 * s(p)).sum();
            return_head[k] = (1..=n - k + 1).map(|p| (n + 1 - p) as u128 * s(p)).sum();
        }
        let successor_count = (0..=n).map(|i| if i == 0 { 0 } else { index.successor_count(i) }).collect();
        BoundsTable {
            n,
            sorted_arcs,
            prefix,
            weighted,
            outgoing_tail,
            return_head,
            successor_count,
            beta: vec![n; n + 1],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sorted_arcs(&self) -> &[u64] {
        &self.sorted_arcs
    }

    /// `s_p`, 1-based.
    pub fn arc(&self, p: usize) -> u64 {
        self.sorted_arcs[p - 1]
    }

    pub fn successor_count(&self, i: Vertex) -> usize {
        self.successor_count[i]
    }

    /// Whether `L_i^k` is defined, i.e. `n - |S_i| < k <= n`.
    pub fn applicable(&self, i: Vertex, k: usize) -> bool {
        k >= 1 && k <= self.n && k + self.successor_count[i] > self.n
    }

    /// `L_i^k`, a lower bound on any route that visits `i` at position `k`.
    ///
    /// Positions `p <= n - |S_i|` and `p > k` carry weight `n - p + 1`; the
    /// positions in between carry `|S_i|`, since none of `i`'s successors can
    /// be powered before `i` itself is repaired.
    pub fn position_lower_bound(&self, i: Vertex, k: usize) -> Result<u128, Error> {
        if i == 0 || i > self.n {
            return Err(Error::UnknownVertex(i));
        }
        if !self.applicable(i, k) {
            return Err(Error::BoundNotApplicable { vertex: i, position: k });
        }
        let size = self.successor_count[i];
        let free = self.n - size;
        Ok(self.weighted[free]
            + (self.weighted[self.n] - self.weighted[k])
            + size as u128 * (self.prefix[k] - self.prefix[free]))
    }

    /// Maximum positions `β_i` under the upper bound `upper`: the position
    /// just before the first applicable `k` whose `L_i^k` exceeds `upper`, or
    /// `n` when none does. Pass `u128::MAX` when no bound is known.
    ///
    /// Entry 0 of the returned vector is unused.
    pub fn compute_beta(&self, upper: u128) -> Vec<usize> {
        let n = self.n;
        let mut beta = vec![n; n + 1];
        for i in 1..=n {
            let first = n - self.successor_count[i] + 1;
            for k in first..=n {
                let bound = self.position_lower_bound(i, k).expect("k is in the applicable range");
                if bound > upper {
                    // never below 1: a valid upper bound admits some position
                    beta[i] = (k - 1).max(1);
                    break;
                }
            }
        }
        beta[0] = n;
        beta
    }

    /// Recomputes the stored `β` table for a new upper bound.
    pub fn update_beta(&mut self, upper: u128) {
        self.beta = self.compute_beta(upper);
    }

    pub fn beta(&self, i: Vertex) -> usize {
        self.beta[i]
    }

    pub fn betas(&self) -> &[usize] {
        &self.beta
    }

    /// Caps `β_i` at `position`, used for the heuristic source position.
    pub fn cap_beta(&mut self, i: Vertex, position: usize) {
        self.beta[i] = self.beta[i].min(position.max(1));
    }

    /// Lower bound for completions of an outgoing path holding `k` faults,
    /// with accumulated value `value` and `dark` vertices still unpowered.
    pub fn outgoing_lower_bound(&self, value: u128, k: usize, dark: usize) -> u128 {
        if k >= self.n {
            return value;
        }
        value + dark as u128 * self.arc(1) as u128 + self.outgoing_tail[k]
    }

    /// Lower bound for completions of a return path holding `k` faults with
    /// accumulated value `value`.
    pub fn return_lower_bound(&self, value: u128, k: usize) -> u128 {
        self.return_head[k.clamp(1, self.n)] + value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::{single, star};

    fn star_table() -> BoundsTable {
        let inst = star();
        let idx = PrecedenceIndex::build(&inst).unwrap();
        BoundsTable::new(&inst, &idx)
    }

    #[test]
    fn star_arcs_sorted() {
        let t = star_table();
        assert_eq!(t.sorted_arcs(), &[1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3]);
    }

    #[test]
    fn star_position_bounds() {
        let t = star_table();
        assert_eq!(t.position_lower_bound(1, 1), Ok(6));
        assert_eq!(t.position_lower_bound(1, 2), Ok(7));
        assert_eq!(t.position_lower_bound(1, 3), Ok(9));
        assert_eq!(t.position_lower_bound(2, 3), Ok(6));
        assert_eq!(t.position_lower_bound(2, 2), Err(Error::BoundNotApplicable { vertex: 2, position: 2 }));
        assert_eq!(t.position_lower_bound(1, 4), Err(Error::BoundNotApplicable { vertex: 1, position: 4 }));
        assert_eq!(t.position_lower_bound(4, 3), Err(Error::UnknownVertex(4)));
    }

    /// Direct transcription of the three-region sum, kept separate from the
    /// prefix-sum evaluation.
    fn position_bound_by_regions(t: &BoundsTable, i: Vertex, k: usize) -> u128 {
        let n = t.n();
        let size = t.successor_count(i);
        let mut total = 0u128;
        for p in 1..=n {
            let s = t.arc(p) as u128;
            if p <= n - size || p >= k + 1 {
                total += (n - p + 1) as u128 * s;
            } else {
                total += size as u128 * s;
            }
        }
        total
    }

    #[test]
    fn prefix_evaluation_matches_region_sum() {
        for seed in 0..30 {
            let inst = crate::instance::generate_random(11, seed, 40).unwrap();
            let idx = PrecedenceIndex::build(&inst).unwrap();
            let t = BoundsTable::new(&inst, &idx);
            for i in 1..=11 {
                for k in 1..=11 {
                    if t.applicable(i, k) {
                        assert_eq!(t.position_lower_bound(i, k).unwrap(), position_bound_by_regions(&t, i, k));
                    }
                }
            }
        }
    }

    #[test]
    fn star_beta() {
        let t = star_table();
        assert_eq!(&t.compute_beta(6)[1..], &[1, 3, 3]);
        assert_eq!(&t.compute_beta(u128::MAX)[1..], &[3, 3, 3]);
        assert_eq!(&t.compute_beta(7)[1..], &[2, 3, 3]);
        let mut t = t;
        t.update_beta(6);
        assert_eq!(t.beta(1), 1);
        t.cap_beta(2, 2);
        assert_eq!(t.beta(2), 2);
        t.cap_beta(2, 0);
        assert_eq!(t.beta(2), 1);
    }

    #[test]
    fn star_outgoing_bounds() {
        let t = star_table();
        // P = (0, 2): value 3 * 2, three vertices dark
        assert_eq!(t.outgoing_lower_bound(6, 1, 3), 10);
        // P = (0, 1): value 3 * 1, two vertices dark
        assert_eq!(t.outgoing_lower_bound(3, 1, 2), 6);
        assert_eq!(t.outgoing_lower_bound(42, 3, 0), 42);
        assert_eq!(t.outgoing_lower_bound(42, 3, 5), 42);
    }

    #[test]
    fn star_return_bounds() {
        let t = star_table();
        assert_eq!(t.return_lower_bound(0, 1), 6);
        assert_eq!(t.return_lower_bound(4, 2), 5 + 4);
        assert_eq!(t.return_lower_bound(9, 3), 3 + 9);
    }

    #[test]
    fn single_vertex_table() {
        let inst = single(5);
        let idx = PrecedenceIndex::build(&inst).unwrap();
        let t = BoundsTable::new(&inst, &idx);
        assert_eq!(t.sorted_arcs(), &[5, 5]);
        assert_eq!(t.position_lower_bound(1, 1), Ok(5));
        assert_eq!(t.return_lower_bound(0, 1), 5);
        assert_eq!(t.outgoing_lower_bound(5, 1, 0), 5);
        assert_eq!(&t.compute_beta(4)[1..], &[1]);
    }

    #[test]
    fn position_bound_is_monotone() {
        for seed in 0..50 {
            let inst = crate::instance::generate_random(10, seed, 100).unwrap();
            let idx = PrecedenceIndex::build(&inst).unwrap();
            let t = BoundsTable::new(&inst, &idx);
            for i in 1..=10 {
                let first = 10 - t.successor_count(i) + 1;
                for k in first..10 {
                    assert!(t.position_lower_bound(i, k + 1).unwrap() >= t.position_lower_bound(i, k).unwrap());
                }
            }
        }
    }
}
