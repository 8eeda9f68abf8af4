//! Bidirectional labeling over partial routes.
//!
//! Outgoing paths grow from the depot one fault at a time and return paths
//! grow backwards from the depot, in lockstep. A path's configuration is its
//! vertex set plus the endpoint facing the other half; only the cheapest
//! path per configuration is kept, since any completion of a dearer one can
//! be replayed on the cheaper one. Paths whose completion lower bound
//! exceeds the incumbent (or a relaxed multiple of it in heuristic mode) are
//! dropped, as are extensions that would put a vertex past its maximum
//! position. Outgoing paths with `⌈n/2⌉` faults are finally joined with
//! return paths that start where they end and cover the rest.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use rustc_hash::FxBuildHasher;

use crate::bounds::BoundsTable;
use crate::heuristics::{greedy_complete, greedy_distance, greedy_priority_distance};
use crate::instance::{Instance, DEPOT};
use crate::power_eval::{evaluate_route, PrecedenceIndex, Route};
use crate::{Error, Vertex, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Heuristic,
}

/// Solver settings. Ratios are integer percentages so that acceptance
/// decisions are exact: a path at level `l` survives when
/// `100 · LB <= (theta_pct + l · delta_pct) · U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub mode: Mode,
    pub theta_pct: u32,
    pub delta_pct: u32,
    /// Cap the source's maximum position at its latest greedy position.
    pub heuristic_source_beta: bool,
    /// How many of the cheapest new outgoing paths are completed greedily
    /// after every level to tighten the upper bound.
    pub ub_refresh_width: usize,
    /// Require `l + 1 <= β_i` when appending `i` to an outgoing path with
    /// `l` faults instead of `l <= β_i`.
    pub strict_forward_beta: bool,
    /// Keep only the cheapest path per configuration.
    pub dominance: bool,
    /// Apply the path lower bounds and maximum positions.
    pub bound_pruning: bool,
    /// Abort once this many labels have been stored over all levels.
    pub label_cap: Option<usize>,
    /// Frontiers at least this long are expanded on the rayon pool when the
    /// `parallel` feature is on.
    pub parallel_min_frontier: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::exact()
    }
}

impl SolverConfig {
    pub fn exact() -> Self {
        SolverConfig {
            mode: Mode::Exact,
            theta_pct: 100,
            delta_pct: 0,
            heuristic_source_beta: false,
            ub_refresh_width: 32,
            strict_forward_beta: false,
            dominance: true,
            bound_pruning: true,
            label_cap: None,
            parallel_min_frontier: 512,
        }
    }

    /// Relaxed acceptance with `θ = theta_pct / 100` and `δ = delta_pct / 100`.
    pub fn heuristic(theta_pct: u32, delta_pct: u32) -> Self {
        SolverConfig { mode: Mode::Heuristic, theta_pct, delta_pct, ..Self::exact() }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.theta_pct == 0 || self.theta_pct > 100 {
            return Err(Error::InvalidConfig("theta must lie in (0, 1]"));
        }
        if self.mode == Mode::Exact {
            if self.theta_pct != 100 || self.delta_pct != 0 {
                return Err(Error::InvalidConfig("exact mode requires theta = 1 and delta = 0"));
            }
            if self.heuristic_source_beta {
                return Err(Error::InvalidConfig("the heuristic source position is not exact"));
            }
        }
        Ok(())
    }
}

/// Stop requests checked between levels.
pub trait Monitor {
    fn should_stop(&mut self) -> bool {
        false
    }
}

/// Never stops.
pub struct Unmonitored;

impl Monitor for Unmonitored {}

/// A partial route in one of the label stores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathLabel {
    /// Fault vertices on the path.
    pub visited: VertexSet,
    /// Last vertex of an outgoing path, first vertex of a return path.
    pub endpoint: Vertex,
    /// Outage accumulated between leaving the depot and reaching the
    /// endpoint (outgoing), or between reaching the endpoint and returning
    /// (return).
    pub value: u128,
    parent: u32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DirectionStats {
    pub created: u64,
    pub dominated: u64,
    pub pruned_by_bound: u64,
    pub pruned_by_beta: u64,
    pub kept: u64,
}

impl DirectionStats {
    fn absorb(&mut self, other: &DirectionStats) {
        self.created += other.created;
        self.dominated += other.dominated;
        self.pruned_by_bound += other.pruned_by_bound;
        self.pruned_by_beta += other.pruned_by_beta;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LevelStats {
    pub level: usize,
    pub forward: DirectionStats,
    pub backward: DirectionStats,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub levels: Vec<LevelStats>,
    /// Upper bound after pre-processing and after every improvement.
    pub upper_bounds: Vec<u128>,
    /// Maximum positions in force when the search ended (entry 0 unused).
    pub beta: Vec<usize>,
    pub join_matches: u64,
    pub total_labels: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Completed,
    /// The monitor asked to stop; the incumbent is returned.
    Stopped,
    /// Heuristic mode ran into the label cap; the incumbent is returned.
    LabelCap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub route: Route,
    pub objective: u128,
    pub proven_optimal: bool,
    pub termination: Termination,
    pub stats: SolveStats,
}

/// `v^B` of a return path `(j_1, ..., j_m, 0)` when every fault outside it
/// is already repaired.
pub fn backward_value(instance: &Instance, index: &PrecedenceIndex, return_order: &[Vertex]) -> u128 {
    let on_path: VertexSet = return_order.iter().copied().collect();
    let mut repaired = index.all().difference(on_path);
    let mut total = 0u128;
    for (a, &v) in return_order.iter().enumerate() {
        repaired.insert(v);
        let next = return_order.get(a + 1).copied().unwrap_or(DEPOT);
        total += index.disrupted_count(repaired) as u128 * instance.travel_time(v, next) as u128;
    }
    total
}

/// `u^F` of an outgoing path `(0, j_1, ..., j_m)`.
pub fn forward_value(instance: &Instance, index: &PrecedenceIndex, outgoing_order: &[Vertex]) -> u128 {
    let mut repaired = VertexSet::EMPTY;
    let mut at = DEPOT;
    let mut total = 0u128;
    for &v in outgoing_order {
        total += index.disrupted_count(repaired) as u128 * instance.travel_time(at, v) as u128;
        repaired.insert(v);
        at = v;
    }
    total
}

/// 1-based position of the source in the later of the two greedy routes.
pub fn heuristic_source_beta(instance: &Instance, index: &PrecedenceIndex) -> Result<usize, Error> {
    let source = index.source();
    let gid = greedy_distance(instance, index)?;
    let gipd = greedy_priority_distance(instance, index)?;
    Ok(gid.position(source).unwrap_or(1).max(gipd.position(source).unwrap_or(1)))
}

enum Merge {
    New,
    Replaced,
    Dominated,
}

#[derive(Default)]
struct LabelStore {
    labels: Vec<PathLabel>,
    slots: HashMap<(VertexSet, Vertex), u32, FxBuildHasher>,
}

impl LabelStore {
    fn root() -> Self {
        let mut store = LabelStore::default();
        store.labels.push(PathLabel { visited: VertexSet::EMPTY, endpoint: DEPOT, value: 0, parent: u32::MAX });
        store
    }

    fn merge(&mut self, label: PathLabel, dominance: bool) -> Merge {
        if !dominance {
            self.labels.push(label);
            return Merge::New;
        }
        match self.slots.entry((label.visited, label.endpoint)) {
            hashbrown::hash_map::Entry::Vacant(slot) => {
                slot.insert(self.labels.len() as u32);
                self.labels.push(label);
                Merge::New
            }
            hashbrown::hash_map::Entry::Occupied(slot) => {
                let held = &mut self.labels[*slot.get() as usize];
                if label.value < held.value {
                    *held = label;
                    Merge::Replaced
                } else {
                    Merge::Dominated
                }
            }
        }
    }

    fn seal(&mut self) {
        self.slots = HashMap::default();
    }
}

#[derive(Clone, Copy)]
enum Direction {
    Forward,
    Backward,
}

/// Everything candidate generation reads; shared across worker threads.
struct Expansion<'a> {
    n: usize,
    travel: &'a [u64],
    index: &'a PrecedenceIndex,
    bounds: &'a BoundsTable,
    config: &'a SolverConfig,
    upper: u128,
    level: usize,
}

impl Expansion<'_> {
    #[inline]
    fn d(&self, from: Vertex, to: Vertex) -> u64 {
        self.travel[from * (self.n + 1) + to]
    }

    #[inline]
    fn accept(&self, lower: u128) -> bool {
        let pct = self.config.theta_pct as u128 + self.level as u128 * self.config.delta_pct as u128;
        lower.saturating_mul(100) <= self.upper.saturating_mul(pct)
    }

    fn expand(&self, dir: Direction, frontier: &[PathLabel], first: usize) -> (Vec<PathLabel>, DirectionStats) {
        let mut out = Vec::new();
        let mut stats = DirectionStats::default();
        let all = self.index.all();
        let prune = self.config.bound_pruning;
        let l = self.level;
        let k = l + 1;
        for (offset, label) in frontier.iter().enumerate() {
            let parent = (first + offset) as u32;
            let free = all.difference(label.visited);
            match dir {
                Direction::Backward => {
                    // everything outside the path is repaired before it starts
                    let w = self.index.disrupted_count(free) as u128;
                    for i in free.iter() {
                        if prune && self.n - l > self.bounds.beta(i) {
                            stats.pruned_by_beta += 1;
                            continue;
                        }
                        let value = label.value + w * self.d(i, label.endpoint) as u128;
                        if prune && !self.accept(self.bounds.return_lower_bound(value, k)) {
                            stats.pruned_by_bound += 1;
                            continue;
                        }
                        stats.created += 1;
                        out.push(PathLabel { visited: label.visited.with(i), endpoint: i, value, parent });
                    }
                }
                Direction::Forward => {
                    let w = self.index.disrupted_count(label.visited) as u128;
                    let reach = if self.config.strict_forward_beta { l + 1 } else { l };
                    for i in free.iter() {
                        if prune && reach > self.bounds.beta(i) {
                            stats.pruned_by_beta += 1;
                            continue;
                        }
                        let value = label.value + w * self.d(label.endpoint, i) as u128;
                        let visited = label.visited.with(i);
                        if prune {
                            let dark = self.index.disrupted_count(visited);
                            if !self.accept(self.bounds.outgoing_lower_bound(value, k, dark)) {
                                stats.pruned_by_bound += 1;
                                continue;
                            }
                        }
                        stats.created += 1;
                        out.push(PathLabel { visited, endpoint: i, value, parent });
                    }
                }
            }
        }
        (out, stats)
    }
}

const MERGE_BATCH: usize = 1 << 14;

#[cfg(feature = "parallel")]
fn expand_batch(ctx: &Expansion<'_>, dir: Direction, batch: &[PathLabel], first: usize) -> Vec<(Vec<PathLabel>, DirectionStats)> {
    use rayon::prelude::*;
    if batch.len() < ctx.config.parallel_min_frontier.max(1) {
        return vec![ctx.expand(dir, batch, first)];
    }
    let chunk = (batch.len() / (4 * rayon::current_num_threads())).clamp(16, 1024);
    batch
        .par_chunks(chunk)
        .enumerate()
        .map(|(c, part)| ctx.expand(dir, part, first + c * chunk))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn expand_batch(ctx: &Expansion<'_>, dir: Direction, batch: &[PathLabel], first: usize) -> Vec<(Vec<PathLabel>, DirectionStats)> {
    vec![ctx.expand(dir, batch, first)]
}

/// Expands one level into a fresh store. Candidates are merged in frontier
/// order whatever the thread count, so the store content is deterministic.
fn extend_level(ctx: &Expansion<'_>, dir: Direction, frontier: &[PathLabel]) -> (LabelStore, DirectionStats) {
    let mut store = LabelStore::default();
    let mut stats = DirectionStats::default();
    for (b, batch) in frontier.chunks(MERGE_BATCH).enumerate() {
        for (candidates, part) in expand_batch(ctx, dir, batch, b * MERGE_BATCH) {
            stats.absorb(&part);
            for label in candidates {
                match store.merge(label, ctx.config.dominance) {
                    Merge::New => {}
                    Merge::Replaced | Merge::Dominated => stats.dominated += 1,
                }
            }
        }
    }
    store.seal();
    stats.kept = store.labels.len() as u64;
    (store, stats)
}

/// Faults along the chain of stored labels ending at `levels[level][idx]`,
/// nearest to the depot last.
fn trace(levels: &[LabelStore], level: usize, idx: u32) -> Vec<Vertex> {
    let mut path = Vec::with_capacity(level);
    let mut idx = idx;
    for l in (1..=level).rev() {
        let label = levels[l].labels[idx as usize];
        path.push(label.endpoint);
        idx = label.parent;
    }
    path
}

fn outgoing_order(levels: &[LabelStore], level: usize, idx: u32) -> Vec<Vertex> {
    let mut path = trace(levels, level, idx);
    path.reverse();
    path
}

struct Search<'a, M: Monitor + ?Sized> {
    instance: &'a Instance,
    index: &'a PrecedenceIndex,
    config: &'a SolverConfig,
    monitor: &'a mut M,
    travel: Vec<u64>,
    bounds: BoundsTable,
    source_cap: Option<usize>,
    upper: u128,
    incumbent: Route,
    stats: SolveStats,
}

impl<M: Monitor + ?Sized> Search<'_, M> {
    fn refresh_beta(&mut self) {
        if !self.config.bound_pruning {
            return;
        }
        self.bounds.update_beta(self.upper);
        if let Some(cap) = self.source_cap {
            self.bounds.cap_beta(self.index.source(), cap);
        }
    }

    fn offer(&mut self, route: Route) {
        if route.objective < self.upper || (route.objective == self.upper && route.order < self.incumbent.order) {
            let improved = route.objective < self.upper;
            self.upper = route.objective;
            self.incumbent = route;
            if improved {
                self.stats.upper_bounds.push(self.upper);
                self.refresh_beta();
            }
        }
    }

    /// Completes the cheapest outgoing paths of `store` greedily.
    fn refresh_upper(&mut self, levels: &[LabelStore], level: usize) -> Result<(), Error> {
        let width = self.config.ub_refresh_width;
        let labels = &levels[level].labels;
        if width == 0 || labels.is_empty() {
            return Ok(());
        }
        let mut picks: Vec<u32> = (0..labels.len() as u32).collect();
        if picks.len() > width {
            picks.select_nth_unstable_by_key(width - 1, |&i| (labels[i as usize].value, i));
            picks.truncate(width);
        }
        picks.sort_unstable_by_key(|&i| (labels[i as usize].value, i));
        for idx in picks {
            let prefix = outgoing_order(levels, level, idx);
            let route = greedy_complete(self.instance, self.index, &prefix)?;
            self.offer(route);
        }
        Ok(())
    }

    fn run(mut self) -> Result<SolveReport, Error> {
        let n = self.instance.n;
        let forward_depth = n.div_ceil(2);
        let backward_depth = n + 1 - forward_depth;
        let mut forward = vec![LabelStore::root()];
        let mut backward = vec![LabelStore::root()];
        let mut termination = Termination::Completed;
        let mut total_labels = 2u64;

        for level in 0..forward_depth.max(backward_depth) {
            if self.monitor.should_stop() {
                termination = Termination::Stopped;
                break;
            }
            let mut level_stats = LevelStats { level, ..LevelStats::default() };
            {
                let ctx = Expansion {
                    n,
                    travel: &self.travel,
                    index: self.index,
                    bounds: &self.bounds,
                    config: self.config,
                    upper: self.upper,
                    level,
                };
                if level < backward_depth {
                    let (store, stats) = extend_level(&ctx, Direction::Backward, &backward[level].labels);
                    level_stats.backward = stats;
                    backward.push(store);
                }
                if level < forward_depth {
                    let (store, stats) = extend_level(&ctx, Direction::Forward, &forward[level].labels);
                    level_stats.forward = stats;
                    forward.push(store);
                }
            }
            total_labels += level_stats.forward.kept + level_stats.backward.kept;
            self.stats.levels.push(level_stats);
            if let Some(cap) = self.config.label_cap {
                if total_labels > cap as u64 {
                    if self.config.mode == Mode::Exact {
                        return Err(Error::LabelCapExceeded { cap, level });
                    }
                    termination = Termination::LabelCap;
                    break;
                }
            }
            if level < forward_depth {
                self.refresh_upper(&forward, level + 1)?;
            }
        }
        self.stats.total_labels = total_labels;

        if termination == Termination::Completed {
            let all = self.index.all();
            let outgoing = &forward[forward_depth].labels;
            let returning = &backward[backward_depth].labels;
            let mut by_config: HashMap<(VertexSet, Vertex), Vec<u32>, FxBuildHasher> = HashMap::default();
            for (i, label) in returning.iter().enumerate() {
                by_config.entry((label.visited, label.endpoint)).or_default().push(i as u32);
            }
            let mut best: Option<(u128, Vec<Vertex>)> = None;
            for (fi, f) in outgoing.iter().enumerate() {
                let rest = all.difference(f.visited).with(f.endpoint);
                let Some(matches) = by_config.get(&(rest, f.endpoint)) else {
                    continue;
                };
                for &bi in matches {
                    self.stats.join_matches += 1;
                    let total = f.value + returning[bi as usize].value;
                    if best.as_ref().is_some_and(|(b, _)| total > *b) {
                        continue;
                    }
                    let mut order = outgoing_order(&forward, forward_depth, fi as u32);
                    order.extend(trace(&backward, backward_depth, bi).into_iter().skip(1));
                    match &best {
                        Some((b, o)) if total == *b && order >= *o => {}
                        _ => best = Some((total, order)),
                    }
                }
            }
            match best {
                Some((total, order)) => {
                    let route = evaluate_route(self.instance, self.index, &order)?;
                    if route.objective != total {
                        return Err(Error::Internal(format!(
                            "joined value {total} disagrees with route evaluation {}",
                            route.objective
                        )));
                    }
                    self.offer(route);
                }
                None if self.config.mode == Mode::Exact => {
                    return Err(Error::Internal("exact search produced no complete route".into()));
                }
                None => {}
            }
        }

        let check = evaluate_route(self.instance, self.index, &self.incumbent.order)?;
        if check.objective != self.incumbent.objective {
            return Err(Error::Internal("incumbent objective drifted from its route".into()));
        }
        self.stats.beta = self.bounds.betas().to_vec();
        Ok(SolveReport {
            objective: self.incumbent.objective,
            route: self.incumbent,
            proven_optimal: self.config.mode == Mode::Exact && termination == Termination::Completed,
            termination,
            stats: self.stats,
        })
    }
}

/// Runs the bidirectional search without a stop hook.
pub fn solve(instance: &Instance, config: &SolverConfig) -> Result<SolveReport, Error> {
    solve_with(instance, config, &mut Unmonitored)
}

/// Runs the bidirectional search, polling `monitor` between levels.
///
/// Repair durations, if any, are folded into the travel times first; the
/// reported route times are then repair completion times.
pub fn solve_with<M: Monitor + ?Sized>(instance: &Instance, config: &SolverConfig, monitor: &mut M) -> Result<SolveReport, Error> {
    config.validate()?;
    instance.ensure_valid()?;
    let absorbed;
    let instance = if instance.has_zero_durations() {
        instance
    } else {
        absorbed = instance.absorb_repair_durations()?;
        &absorbed
    };
    let index = PrecedenceIndex::build(instance)?;
    let n = instance.n;
    let travel = (0..=n).flat_map(|i| (0..=n).map(move |j| (i, j))).map(|(i, j)| instance.travel_time(i, j)).collect();

    let gid = greedy_distance(instance, &index)?;
    let gipd = greedy_priority_distance(instance, &index)?;
    let source_cap = if config.heuristic_source_beta {
        let source = index.source();
        Some(gid.position(source).unwrap_or(1).max(gipd.position(source).unwrap_or(1)))
    } else {
        None
    };
    let incumbent = if gipd.objective < gid.objective { gipd } else { gid };
    let upper = incumbent.objective;
    let bounds = BoundsTable::new(instance, &index);
    let mut search = Search {
        instance,
        index: &index,
        config,
        monitor,
        travel,
        bounds,
        source_cap,
        upper,
        incumbent,
        stats: SolveStats { upper_bounds: vec![upper], ..SolveStats::default() },
    };
    search.refresh_beta();
    search.run()
}
