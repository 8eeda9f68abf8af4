//! Greedy route constructions. They give the solver its starting upper
//! bound and are also exposed as standalone methods.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::instance::{Instance, DEPOT};
use crate::power_eval::{evaluate_route, PrecedenceIndex, Route};
use crate::{Error, Vertex};

/// Greedy in distance: always head to the nearest unvisited fault, smallest
/// label first on ties.
pub fn greedy_distance(instance: &Instance, index: &PrecedenceIndex) -> Result<Route, Error> {
    greedy_complete(instance, index, &[])
}

/// Greedy in priority-weighted distance: from `i`, head to the unvisited `j`
/// minimising `d_ij / |S_j|`.
pub fn greedy_priority_distance(instance: &Instance, index: &PrecedenceIndex) -> Result<Route, Error> {
    let n = instance.n;
    let mut visited = vec![false; n + 1];
    let mut order = Vec::with_capacity(n);
    let mut at = DEPOT;
    for _ in 0..n {
        let mut best: Option<Vertex> = None;
        for j in 1..=n {
            if visited[j] {
                continue;
            }
            best = match best {
                // d_ij / |S_j| < d_ib / |S_b|, compared without division
                Some(b)
                    if (instance.travel_time(at, j) as u128) * index.successor_count(b) as u128
                        >= (instance.travel_time(at, b) as u128) * index.successor_count(j) as u128 =>
                {
                    Some(b)
                }
                _ => Some(j),
            };
        }
        let next = best.expect("an unvisited vertex remains");
        visited[next] = true;
        order.push(next);
        at = next;
    }
    evaluate_route(instance, index, &order)
}

/// Extends a partial visiting order by the nearest-unvisited rule.
pub fn greedy_complete(instance: &Instance, index: &PrecedenceIndex, prefix: &[Vertex]) -> Result<Route, Error> {
    let n = instance.n;
    let mut visited = vec![false; n + 1];
    for &v in prefix {
        if v == DEPOT || v > n {
            return Err(Error::InvalidPrefix(format!("vertex {v} is not a fault vertex")));
        }
        if visited[v] {
            return Err(Error::InvalidPrefix(format!("vertex {v} appears twice")));
        }
        visited[v] = true;
    }
    let mut order = prefix.to_vec();
    let mut at = prefix.last().copied().unwrap_or(DEPOT);
    while order.len() < n {
        let next = (1..=n)
            .filter(|&j| !visited[j])
            .min_by_key(|&j| (instance.travel_time(at, j), j))
            .expect("an unvisited vertex remains");
        visited[next] = true;
        order.push(next);
        at = next;
    }
    evaluate_route(instance, index, &order)
}
