//! Problem data: the road network as a complete directed travel-time matrix
//! over the depot and the fault vertices, and the power network as a tree of
//! parent/child edges between fault vertices rooted at the power source.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Vertex};

/// Label of the crew depot in the travel matrix.
pub const DEPOT: Vertex = 0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    /// Number of fault vertices, labelled `1..=n`.
    pub n: usize,
    /// Root of the power tree.
    pub source: Vertex,
    /// `(parent, child)` pairs of the power tree.
    pub power_edges: Vec<(Vertex, Vertex)>,
    /// `(n + 1) x (n + 1)` travel times, row and column 0 are the depot.
    pub travel: Vec<Vec<i64>>,
    /// Repair time of vertex `i` at index `i - 1`.
    pub repair_durations: Vec<i64>,
    /// Labels of the vertices in the instance this one was cut from, if any;
    /// entry `i - 1` is the original label of vertex `i`.
    pub original_labels: Option<Vec<Vertex>>,
}

/// One broken invariant of an [`Instance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoFaultVertices,
    TravelRows { rows: usize, expected: usize },
    TravelRowLength { row: usize, len: usize, expected: usize },
    NegativeTravel { from: Vertex, to: Vertex, value: i64 },
    NonZeroDiagonal { vertex: Vertex, value: i64 },
    RepairDurationsLength { len: usize, expected: usize },
    NegativeRepairDuration { vertex: Vertex, value: i64 },
    SourceOutOfRange { source: Vertex },
    EdgeOutOfRange { parent: Vertex, child: Vertex },
    SelfLoop { vertex: Vertex },
    MultipleParents { child: Vertex },
    SourceHasParent { parent: Vertex },
    /// Some vertices cannot be reached from the source (cycles or a forest).
    NotATree { unreachable: Vec<Vertex> },
    OriginalLabelsLength { len: usize, expected: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoFaultVertices => write!(f, "instance has no fault vertices"),
            Violation::TravelRows { rows, expected } => {
                write!(f, "travel matrix has {rows} rows, expected {expected}")
            }
            Violation::TravelRowLength { row, len, expected } => {
                write!(f, "travel matrix row {row} has {len} entries, expected {expected}")
            }
            Violation::NegativeTravel { from, to, value } => {
                write!(f, "negative travel time {value} on arc ({from}, {to})")
            }
            Violation::NonZeroDiagonal { vertex, value } => {
                write!(f, "travel time from {vertex} to itself is {value}, expected 0")
            }
            Violation::RepairDurationsLength { len, expected } => {
                write!(f, "{len} repair durations given, expected {expected}")
            }
            Violation::NegativeRepairDuration { vertex, value } => {
                write!(f, "negative repair duration {value} at vertex {vertex}")
            }
            Violation::SourceOutOfRange { source } => {
                write!(f, "power source {source} is not a fault vertex")
            }
            Violation::EdgeOutOfRange { parent, child } => {
                write!(f, "power edge ({parent}, {child}) leaves the fault vertex range")
            }
            Violation::SelfLoop { vertex } => write!(f, "power edge ({vertex}, {vertex}) is a loop"),
            Violation::MultipleParents { child } => {
                write!(f, "vertex {child} has more than one power parent")
            }
            Violation::SourceHasParent { parent } => {
                write!(f, "power source has a parent ({parent})")
            }
            Violation::NotATree { unreachable } => write!(
                f,
                "power graph not a tree: vertices {unreachable:?} are not reachable from the source"
            ),
            Violation::OriginalLabelsLength { len, expected } => {
                write!(f, "{len} original labels given, expected {expected}")
            }
        }
    }
}

impl Instance {
    /// Travel time of arc `(from, to)`. Only meaningful on a valid instance.
    #[inline]
    pub fn travel_time(&self, from: Vertex, to: Vertex) -> u64 {
        self.travel[from][to] as u64
    }

    #[inline]
    pub fn repair_duration(&self, vertex: Vertex) -> u64 {
        self.repair_durations[vertex - 1] as u64
    }

    pub fn has_zero_durations(&self) -> bool {
        self.repair_durations.iter().all(|&p| p == 0)
    }

    pub fn fault_vertices(&self) -> core::ops::RangeInclusive<Vertex> {
        1..=self.n
    }

    /// Immediate power parent of each vertex, indexed by label (entry 0 unused).
    ///
    /// When a vertex appears as a child more than once the first edge wins.
    pub fn power_parents(&self) -> Vec<Option<Vertex>> {
        let mut parent = vec![None; self.n + 1];
        for &(p, c) in &self.power_edges {
            if c <= self.n && parent[c].is_none() {
                parent[c] = Some(p);
            }
        }
        parent
    }

    /// Children lists of the power tree, indexed by label.
    pub fn power_children(&self) -> Vec<Vec<Vertex>> {
        let mut children = vec![Vec::new(); self.n + 1];
        for (c, p) in self.power_parents().into_iter().enumerate() {
            if let Some(p) = p {
                if p <= self.n {
                    children[p].push(c);
                }
            }
        }
        children
    }

    /// Every violated invariant; an empty list means the instance is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.n;
        let mut out = Vec::new();
        if n == 0 {
            out.push(Violation::NoFaultVertices);
        }
        if self.travel.len() != n + 1 {
            out.push(Violation::TravelRows { rows: self.travel.len(), expected: n + 1 });
        }
        for (i, row) in self.travel.iter().enumerate() {
            if row.len() != n + 1 {
                out.push(Violation::TravelRowLength { row: i, len: row.len(), expected: n + 1 });
            }
            for (j, &d) in row.iter().enumerate() {
                if i == j && d != 0 {
                    out.push(Violation::NonZeroDiagonal { vertex: i, value: d });
                } else if d < 0 {
                    out.push(Violation::NegativeTravel { from: i, to: j, value: d });
                }
            }
        }
        if self.repair_durations.len() != n {
            out.push(Violation::RepairDurationsLength { len: self.repair_durations.len(), expected: n });
        }
        for (k, &p) in self.repair_durations.iter().enumerate() {
            if p < 0 {
                out.push(Violation::NegativeRepairDuration { vertex: k + 1, value: p });
            }
        }
        if let Some(labels) = &self.original_labels {
            if labels.len() != n {
                out.push(Violation::OriginalLabelsLength { len: labels.len(), expected: n });
            }
        }

        let source_ok = (1..=n).contains(&self.source);
        if !source_ok {
            out.push(Violation::SourceOutOfRange { source: self.source });
        }
        let mut edges_ok = true;
        let mut parent = vec![None; n + 1];
        for &(p, c) in &self.power_edges {
            if !(1..=n).contains(&p) || !(1..=n).contains(&c) {
                out.push(Violation::EdgeOutOfRange { parent: p, child: c });
                edges_ok = false;
                continue;
            }
            if p == c {
                out.push(Violation::SelfLoop { vertex: p });
                edges_ok = false;
                continue;
            }
            if parent[c].is_some() {
                out.push(Violation::MultipleParents { child: c });
                edges_ok = false;
                continue;
            }
            parent[c] = Some(p);
        }
        if source_ok {
            if let Some(p) = parent[self.source] {
                out.push(Violation::SourceHasParent { parent: p });
                edges_ok = false;
            }
        }
        if source_ok && edges_ok {
            let mut children = vec![Vec::new(); n + 1];
            for (c, p) in parent.iter().enumerate() {
                if let Some(p) = *p {
                    children[p].push(c);
                }
            }
            let mut seen = vec![false; n + 1];
            let mut stack = vec![self.source];
            while let Some(v) = stack.pop() {
                if !seen[v] {
                    seen[v] = true;
                    stack.extend_from_slice(&children[v]);
                }
            }
            let unreachable: Vec<Vertex> = (1..=n).filter(|&v| !seen[v]).collect();
            if !unreachable.is_empty() {
                out.push(Violation::NotATree { unreachable });
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<(), Error> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInstance(violations))
        }
    }

    /// Folds each repair time into the arcs entering its vertex, so the
    /// resulting instance has zero repair durations and every route keeps
    /// its objective. Arcs into the depot are unchanged.
    pub fn absorb_repair_durations(&self) -> Result<Instance, Error> {
        let mut out = self.clone();
        for i in 1..=self.n {
            let p = self.repair_durations[i - 1];
            if p == 0 {
                continue;
            }
            for j in 0..=self.n {
                if j != i {
                    out.travel[j][i] = self.travel[j][i]
                        .checked_add(p)
                        .ok_or(Error::Overflow("absorbing repair durations"))?;
                }
            }
            out.repair_durations[i - 1] = 0;
        }
        Ok(out)
    }

    /// The power subtree rooted at `new_source`, with vertices relabelled
    /// `1..` in increasing order of their current labels.
    pub fn extract_subtree(&self, new_source: Vertex) -> Result<Instance, Error> {
        if !(1..=self.n).contains(&new_source) {
            return Err(Error::UnknownVertex(new_source));
        }
        self.ensure_valid()?;
        let children = self.power_children();
        let mut keep = Vec::new();
        let mut stack = vec![new_source];
        while let Some(v) = stack.pop() {
            keep.push(v);
            stack.extend_from_slice(&children[v]);
        }
        keep.sort_unstable();
        let mut relabel = vec![usize::MAX; self.n + 1];
        relabel[DEPOT] = DEPOT;
        for (k, &v) in keep.iter().enumerate() {
            relabel[v] = k + 1;
        }
        let old_of: Vec<Vertex> = core::iter::once(DEPOT).chain(keep.iter().copied()).collect();
        let travel = old_of
            .iter()
            .map(|&a| old_of.iter().map(|&b| self.travel[a][b]).collect())
            .collect();
        let power_edges = self
            .power_parents()
            .into_iter()
            .enumerate()
            .filter_map(|(c, p)| match p {
                Some(p) if c != new_source && relabel[c] != usize::MAX => Some((relabel[p], relabel[c])),
                _ => None,
            })
            .collect::<Vec<_>>();
        let mut power_edges = power_edges;
        power_edges.sort_unstable();
        let original_labels = keep
            .iter()
            .map(|&v| match &self.original_labels {
                Some(labels) => labels[v - 1],
                None => v,
            })
            .collect();
        let original_root = match &self.original_labels {
            Some(labels) => labels[new_source - 1],
            None => new_source,
        };
        Ok(Instance {
            name: format!("{}_{}", self.name, original_root),
            n: keep.len(),
            source: relabel[new_source],
            power_edges,
            travel,
            repair_durations: keep.iter().map(|&v| self.repair_durations[v - 1]).collect(),
            original_labels: Some(original_labels),
        })
    }
}

/// Integer coordinates for the depot (index 0) and `n` fault vertices.
fn random_points(rng: &mut ChaCha8Rng, n: usize, coord_range: i64) -> Vec<(i64, i64)> {
    (0..=n)
        .map(|_| (rng.gen_range(0..=coord_range), rng.gen_range(0..=coord_range)))
        .collect()
}

/// Euclidean distance rounded half-up, computed exactly in integers.
fn rounded_distance(a: (i64, i64), b: (i64, i64)) -> i64 {
    let dx = a.0.abs_diff(b.0);
    let dy = a.1.abs_diff(b.1);
    let sq = dx * dx + dy * dy;
    let r = sq.isqrt();
    // round(sqrt(sq)) = r + 1 exactly when sq >= r^2 + r + 1
    if sq - r * r > r {
        (r + 1) as i64
    } else {
        r as i64
    }
}

fn euclidean_matrix(points: &[(i64, i64)]) -> Vec<Vec<i64>> {
    points
        .iter()
        .map(|&a| points.iter().map(|&b| rounded_distance(a, b)).collect())
        .collect()
}

/// Seeded random instance: points on an integer grid `[0, coord_range]^2`,
/// rounded Euclidean travel times, a uniform random recursive power tree
/// rooted at a random source and zero repair durations.
pub fn generate_random(n: usize, seed: u64, coord_range: i64) -> Result<Instance, Error> {
    if n == 0 {
        return Err(Error::InvalidConfig("instance needs at least one fault vertex"));
    }
    if !(0..=1 << 30).contains(&coord_range) {
        return Err(Error::InvalidConfig("coordinate range must lie in [0, 2^30]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = random_points(&mut rng, n, coord_range);
    let mut labels: Vec<Vertex> = (1..=n).collect();
    labels.shuffle(&mut rng);
    let mut power_edges: Vec<(Vertex, Vertex)> = (1..n)
        .map(|k| (labels[rng.gen_range(0..k)], labels[k]))
        .collect();
    power_edges.sort_unstable();
    Ok(Instance {
        name: format!("rand_n{n}_s{seed}"),
        n,
        source: labels[0],
        power_edges,
        travel: euclidean_matrix(&points),
        repair_durations: vec![0; n],
        original_labels: None,
    })
}

/// Star power network over an arbitrary travel matrix: vertex 1 is the
/// source and every other fault vertex hangs directly below it.
pub fn generate_star_reduction(travel: Vec<Vec<i64>>) -> Result<Instance, Error> {
    if travel.len() < 2 {
        return Err(Error::InvalidConfig("travel matrix must cover the depot and one fault vertex"));
    }
    let n = travel.len() - 1;
    let instance = Instance {
        name: format!("star_n{n}"),
        n,
        source: 1,
        power_edges: (2..=n).map(|c| (1, c)).collect(),
        travel,
        repair_durations: vec![0; n],
        original_labels: None,
    };
    instance.ensure_valid()?;
    Ok(instance)
}

/// A star instance over random grid points, as written by `generate --family star`.
pub fn generate_random_star(n: usize, seed: u64, coord_range: i64) -> Result<Instance, Error> {
    if n == 0 {
        return Err(Error::InvalidConfig("instance needs at least one fault vertex"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = random_points(&mut rng, n, coord_range);
    let mut instance = generate_star_reduction(euclidean_matrix(&points))?;
    instance.name = format!("star_n{n}_s{seed}");
    Ok(instance)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Three faults, source 1 with children 2 and 3, symmetric travel.
    pub fn star() -> Instance {
        Instance {
            name: "star".into(),
            n: 3,
            source: 1,
            power_edges: vec![(1, 2), (1, 3)],
            travel: vec![
                vec![0, 1, 2, 3],
                vec![1, 0, 1, 2],
                vec![2, 1, 0, 1],
                vec![3, 2, 1, 0],
            ],
            repair_durations: vec![0, 0, 0],
            original_labels: None,
        }
    }

    /// Same road network as [`star`] with the power chain 1 -> 2 -> 3.
    pub fn chain() -> Instance {
        Instance { name: "chain".into(), power_edges: vec![(1, 2), (2, 3)], ..star() }
    }

    pub fn single(d: i64) -> Instance {
        Instance {
            name: "single".into(),
            n: 1,
            source: 1,
            power_edges: vec![],
            travel: vec![vec![0, d], vec![d, 0]],
            repair_durations: vec![0],
            original_labels: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::power_eval::{evaluate_route, PrecedenceIndex};
    use rand::seq::SliceRandom;

    #[test]
    fn star_is_valid() {
        assert_eq!(star().validate(), vec![]);
        assert_eq!(chain().validate(), vec![]);
        assert_eq!(single(4).validate(), vec![]);
    }

    #[test]
    fn cycle_in_power_graph_is_one_violation() {
        let inst = Instance { power_edges: vec![(2, 3), (3, 2)], ..star() };
        let v = inst.validate();
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(format!("{}", v[0]).contains("power graph not a tree"));
    }

    #[test]
    fn negative_travel_is_one_violation() {
        let mut inst = star();
        inst.travel[0][1] = -1;
        let v = inst.validate();
        assert_eq!(v.len(), 1);
        assert!(format!("{}", v[0]).contains("negative travel time"));
    }

    #[test]
    fn structural_violations() {
        let mut inst = star();
        inst.travel[2][2] = 4;
        inst.travel[3].pop();
        inst.repair_durations = vec![0, -1];
        inst.source = 9;
        inst.power_edges.push((0, 2));
        inst.power_edges.push((3, 3));
        let v = inst.validate();
        assert!(v.contains(&Violation::NonZeroDiagonal { vertex: 2, value: 4 }));
        assert!(v.contains(&Violation::TravelRowLength { row: 3, len: 3, expected: 4 }));
        assert!(v.contains(&Violation::RepairDurationsLength { len: 2, expected: 3 }));
        assert!(v.contains(&Violation::NegativeRepairDuration { vertex: 2, value: -1 }));
        assert!(v.contains(&Violation::SourceOutOfRange { source: 9 }));
        assert!(v.contains(&Violation::EdgeOutOfRange { parent: 0, child: 2 }));
        assert!(v.contains(&Violation::SelfLoop { vertex: 3 }));

        let twice = Instance { power_edges: vec![(1, 2), (1, 3), (2, 3)], ..star() };
        assert_eq!(twice.validate(), vec![Violation::MultipleParents { child: 3 }]);
        let rooted_below = Instance { power_edges: vec![(1, 2), (1, 3), (3, 1)], ..star() };
        assert!(rooted_below.validate().contains(&Violation::SourceHasParent { parent: 3 }));
        let forest = Instance { power_edges: vec![(1, 2)], ..star() };
        assert_eq!(forest.validate(), vec![Violation::NotATree { unreachable: vec![3] }]);
        let empty = Instance { n: 0, travel: vec![vec![0]], repair_durations: vec![], ..star() };
        assert!(empty.validate().contains(&Violation::NoFaultVertices));
    }

    #[test]
    fn absorb_identity_without_durations() {
        assert_eq!(star().absorb_repair_durations().unwrap(), star());
    }

    #[test]
    fn absorb_shifts_incoming_arcs() {
        let mut inst = star();
        inst.repair_durations[0] = 5;
        let out = inst.absorb_repair_durations().unwrap();
        assert_eq!(out.travel[0][1], 6);
        assert_eq!(out.travel[2][1], 6);
        assert_eq!(out.travel[3][1], 7);
        assert_eq!(out.travel[1][0], 1);
        assert_eq!(out.travel[1][2], 1);
        assert!(out.has_zero_durations());
        let (a, b) = (PrecedenceIndex::build(&inst).unwrap(), PrecedenceIndex::build(&out).unwrap());
        for order in [[1, 2, 3], [2, 3, 1], [3, 1, 2]] {
            assert_eq!(
                evaluate_route(&inst, &a, &order).unwrap().objective,
                evaluate_route(&out, &b, &order).unwrap().objective
            );
        }
    }

    #[test]
    fn absorb_overflow_is_rejected() {
        let mut inst = star();
        inst.travel[0][2] = i64::MAX;
        inst.repair_durations[1] = 1;
        assert_eq!(inst.absorb_repair_durations(), Err(Error::Overflow("absorbing repair durations")));
    }

    #[test]
    fn absorb_preserves_random_route_objectives() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for seed in 0..20 {
            let mut inst = generate_random(7, seed, 50).unwrap();
            for p in inst.repair_durations.iter_mut() {
                *p = rng.gen_range(0..20);
            }
            let absorbed = inst.absorb_repair_durations().unwrap();
            let (a, b) = (PrecedenceIndex::build(&inst).unwrap(), PrecedenceIndex::build(&absorbed).unwrap());
            let mut order: Vec<Vertex> = (1..=7).collect();
            for _ in 0..100 {
                order.shuffle(&mut rng);
                let before = evaluate_route(&inst, &a, &order).unwrap();
                let after = evaluate_route(&absorbed, &b, &order).unwrap();
                assert_eq!(before.objective, after.objective);
                assert_eq!(before.r, after.r);
            }
        }
    }

    #[test]
    fn extract_at_source_is_identity_up_to_naming() {
        let sub = star().extract_subtree(1).unwrap();
        assert_eq!(sub.travel, star().travel);
        assert_eq!(sub.power_edges, star().power_edges);
        assert_eq!(sub.source, 1);
        assert_eq!(sub.original_labels, Some(vec![1, 2, 3]));
        assert_eq!(sub.name, "star_1");
    }

    #[test]
    fn extract_leaf_and_chain_tail() {
        let leaf = star().extract_subtree(2).unwrap();
        assert_eq!(leaf.n, 1);
        assert_eq!(leaf.source, 1);
        assert!(leaf.power_edges.is_empty());
        assert_eq!(leaf.travel, vec![vec![0, 2], vec![2, 0]]);
        assert_eq!(leaf.original_labels, Some(vec![2]));

        let tail = chain().extract_subtree(2).unwrap();
        assert_eq!(tail.n, 2);
        assert_eq!(tail.power_edges, vec![(1, 2)]);
        assert_eq!(tail.travel, vec![vec![0, 2, 3], vec![2, 0, 1], vec![3, 1, 0]]);
        assert_eq!(tail.original_labels, Some(vec![2, 3]));
        assert!(tail.validate().is_empty());

        // a second cut keeps the labels of the first instance
        let again = tail.extract_subtree(2).unwrap();
        assert_eq!(again.original_labels, Some(vec![3]));
        assert_eq!(again.name, "chain_2_3");
    }

    #[test]
    fn extract_unknown_vertex() {
        assert_eq!(star().extract_subtree(4), Err(Error::UnknownVertex(4)));
        assert_eq!(star().extract_subtree(0), Err(Error::UnknownVertex(0)));
    }

    #[test]
    fn extracted_subtrees_are_valid() {
        for seed in 0..30 {
            let inst = generate_random(12, seed, 100).unwrap();
            for v in 1..=12 {
                let sub = inst.extract_subtree(v).unwrap();
                assert!(sub.validate().is_empty(), "{:?}", sub.validate());
                let labels = sub.original_labels.as_ref().unwrap();
                assert!(labels.windows(2).all(|w| w[0] < w[1]));
                assert_eq!(labels[sub.source - 1], v);
            }
        }
    }

    #[test]
    fn generator_single_vertex() {
        let inst = generate_random(1, 99, 10).unwrap();
        assert_eq!(inst.n, 1);
        assert_eq!(inst.source, 1);
        assert!(inst.power_edges.is_empty());
        assert!(inst.validate().is_empty());
        assert!(generate_random(0, 1, 10).is_err());
    }

    #[test]
    fn generator_valid_symmetric_deterministic() {
        let a = generate_random(9, 42, 100).unwrap();
        assert!(a.validate().is_empty());
        for i in 0..=9 {
            for j in 0..=9 {
                assert_eq!(a.travel[i][j], a.travel[j][i]);
            }
        }
        assert_eq!(a, generate_random(9, 42, 100).unwrap());
        assert_ne!(a, generate_random(9, 43, 100).unwrap());
    }

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(rounded_distance((0, 0), (3, 4)), 5);
        assert_eq!(rounded_distance((0, 0), (1, 1)), 1); // 1.414
        assert_eq!(rounded_distance((0, 0), (1, 2)), 2); // 2.236
        assert_eq!(rounded_distance((0, 0), (2, 2)), 3); // 2.828
        assert_eq!(rounded_distance((0, 0), (0, 0)), 0);
        for x in 0..40i64 {
            for y in 0..40i64 {
                let f = ((x * x + y * y) as f64).sqrt().round() as i64;
                assert_eq!(rounded_distance((0, 0), (x, y)), f);
            }
        }
    }

    #[test]
    fn star_reduction_shape() {
        let two = generate_star_reduction(vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        assert_eq!(two.power_edges, vec![(1, 2)]);
        let s = generate_random_star(6, 1, 100).unwrap();
        assert_eq!(s.source, 1);
        assert_eq!(s.power_edges, (2..=6).map(|c| (1, c)).collect::<Vec<_>>());
        assert!(generate_star_reduction(vec![vec![0]]).is_err());
    }
}
