//! Precedence structure of the power tree and exact route evaluation.
//!
//! A vertex has power again once every fault on its path from the source,
//! itself included, has been repaired. Its service disruption time `r_i` is
//! therefore the latest repair time along that path, and a route's objective
//! is the sum of these times.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::instance::{Instance, DEPOT};
use crate::{Error, Vertex, VertexSet, MAX_VERTICES};

/// Successor and ancestor sets of every fault vertex.
///
/// `successors[i]` is `S_i`: `i` and everything below it in the power tree.
/// `ancestors[j]` holds every `i` with `j` in `S_i`, i.e. the source-to-`j`
/// path including `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecedenceIndex {
    n: usize,
    source: Vertex,
    parent: Vec<Option<Vertex>>,
    successors: Vec<VertexSet>,
    ancestors: Vec<VertexSet>,
    successor_count: Vec<usize>,
}

impl PrecedenceIndex {
    /// Builds the index of a valid instance with at most [`MAX_VERTICES`] faults.
    pub fn build(instance: &Instance) -> Result<Self, Error> {
        instance.ensure_valid()?;
        let n = instance.n;
        if n > MAX_VERTICES {
            return Err(Error::EngineLimit { n, limit: MAX_VERTICES });
        }
        let parent = instance.power_parents();
        let mut ancestors = vec![VertexSet::EMPTY; n + 1];
        for j in 1..=n {
            let mut set = VertexSet::singleton(j);
            let mut cur = parent[j];
            while let Some(p) = cur {
                set.insert(p);
                cur = parent[p];
            }
            ancestors[j] = set;
        }
        let mut successors = vec![VertexSet::EMPTY; n + 1];
        for j in 1..=n {
            for i in ancestors[j].iter() {
                successors[i].insert(j);
            }
        }
        let successor_count = successors.iter().map(|s| s.len()).collect();
        Ok(PrecedenceIndex { n, source: instance.source, parent, successors, ancestors, successor_count })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn source(&self) -> Vertex {
        self.source
    }

    #[inline]
    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }

    #[inline]
    pub fn successors(&self, i: Vertex) -> VertexSet {
        self.successors[i]
    }

    #[inline]
    pub fn successor_count(&self, i: Vertex) -> usize {
        self.successor_count[i]
    }

    #[inline]
    pub fn ancestors(&self, j: Vertex) -> VertexSet {
        self.ancestors[j]
    }

    /// `i ⪰ j`: `i` lies on the path from the source to `j`, or `i == j`.
    #[inline]
    pub fn precedes(&self, i: Vertex, j: Vertex) -> bool {
        self.ancestors[j].contains(i)
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::faults(self.n)
    }

    /// `W(S)`: how many fault vertices are still without power once exactly
    /// the vertices in `repaired` have been fixed. The depot bit is ignored.
    #[inline]
    pub fn disrupted_count(&self, repaired: VertexSet) -> usize {
        let repaired = repaired.without(DEPOT);
        self.ancestors[1..].iter().filter(|a| !a.is_subset(repaired)).count()
    }

    /// Vertices with power once `repaired` has been fixed.
    pub fn energized(&self, repaired: VertexSet) -> VertexSet {
        let repaired = repaired.without(DEPOT);
        (1..=self.n).filter(|&j| self.ancestors[j].is_subset(repaired)).collect()
    }
}

/// A complete visiting order with its timing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    /// Fault vertices in visiting order; the depot is implicit at both ends.
    pub order: Vec<Vertex>,
    /// Total service disruption time, `Σ r_i`.
    pub objective: u128,
    /// Disruption time of vertex `i` at index `i - 1`.
    pub r: Vec<u128>,
    /// Time the repair of vertex `i` completes, at index `i - 1`. This is the
    /// arrival time whenever repair durations are zero.
    pub t: Vec<u128>,
}

impl Route {
    /// 1-based position of `v` in the visiting order.
    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.order.iter().position(|&u| u == v).map(|p| p + 1)
    }
}

pub(crate) fn check_permutation(n: usize, order: &[Vertex]) -> Result<(), Error> {
    if order.len() != n {
        return Err(Error::NotAPermutation(format!("{} vertices given, expected {n}", order.len())));
    }
    let mut seen = vec![false; n + 1];
    for &v in order {
        if v == DEPOT || v > n {
            return Err(Error::NotAPermutation(format!("vertex {v} is not a fault vertex")));
        }
        if seen[v] {
            return Err(Error::NotAPermutation(format!("vertex {v} appears twice")));
        }
        seen[v] = true;
    }
    Ok(())
}

/// Exact evaluation of a visiting order.
///
/// Completion times accumulate travel plus repair along the order and each
/// `r_i` is the latest completion on the source-to-`i` path. The objective
/// is cross-checked against the leg form `Σ_p c_p · d_p`, where `c_p` counts
/// the vertices still dark when the crew sets off on leg `p` and `d_p` is the
/// leg's travel time plus the repair time at its head.
pub fn evaluate_route(instance: &Instance, index: &PrecedenceIndex, order: &[Vertex]) -> Result<Route, Error> {
    let n = instance.n;
    check_permutation(n, order)?;
    let mut t = vec![0u128; n];
    let mut time = 0u128;
    let mut prev = DEPOT;
    let mut repaired = VertexSet::EMPTY;
    let mut by_legs = 0u128;
    for &v in order {
        let leg = instance.travel_time(prev, v) as u128 + instance.repair_duration(v) as u128;
        by_legs += index.disrupted_count(repaired) as u128 * leg;
        time += leg;
        t[v - 1] = time;
        repaired.insert(v);
        prev = v;
    }
    let r: Vec<u128> = (1..=n)
        .map(|i| index.ancestors(i).iter().map(|j| t[j - 1]).max().unwrap_or(0))
        .collect();
    let objective: u128 = r.iter().sum();
    if objective != by_legs {
        return Err(Error::Internal(format!(
            "route objective {objective} disagrees with leg-weighted sum {by_legs}"
        )));
    }
    Ok(Route { order: order.to_vec(), objective, r, t })
}

/// Outage count `c_p` and leg length `d_p` for every leg `p = 1..=n` of a
/// route on a zero-duration instance. The closing leg to the depot is left
/// out since nothing is dark by then.
pub fn disruption_profile(instance: &Instance, index: &PrecedenceIndex, order: &[Vertex]) -> Vec<(usize, u64)> {
    let mut repaired = VertexSet::EMPTY;
    let mut prev = DEPOT;
    order
        .iter()
        .map(|&v| {
            let c = index.disrupted_count(repaired);
            let d = instance.travel_time(prev, v);
            repaired.insert(v);
            prev = v;
            (c, d)
        })
        .collect()
}
