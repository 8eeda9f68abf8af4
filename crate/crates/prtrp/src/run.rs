//! Method dispatch, deadlines, worker pools and the JSON run record.

use std::time::{Duration, Instant};

use prtrp_core::bidp::{self, Monitor};
use prtrp_core::heuristics::{greedy_distance, greedy_priority_distance};
use prtrp_core::oracle::{brute_force, held_karp_forward};
use prtrp_core::{evaluate_route, Error, Instance, Mode, PrecedenceIndex, Route, SolveStats, SolverConfig, Termination};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Bidirectional labeling, exact or with relaxed bounds.
    Bidp,
    /// Greedy in distance.
    Gid,
    /// Greedy in priority-weighted distance.
    Gipd,
    /// All permutations (n <= 10).
    Brute,
    /// Forward subset DP (n <= 20).
    Hk,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Bidp => "bidp",
            Method::Gid => "gid",
            Method::Gipd => "gipd",
            Method::Brute => "brute",
            Method::Hk => "hk",
        }
    }
}

/// Polls the wall clock between levels.
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn after(limit: Option<Duration>) -> Self {
        Deadline(limit.map(|l| Instant::now() + l))
    }
}

impl Monitor for Deadline {
    fn should_stop(&mut self) -> bool {
        self.0.is_some_and(|end| Instant::now() >= end)
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub method: Method,
    pub route: Route,
    pub proven_optimal: bool,
    pub termination: Termination,
    pub stats: Option<SolveStats>,
    pub wall: Duration,
}

/// Runs `method` and re-evaluates the returned order on the original
/// instance; a disagreement is reported as an internal error.
pub fn solve_method(instance: &Instance, method: Method, config: &SolverConfig, time_limit: Option<Duration>) -> Result<Outcome, Error> {
    let start = Instant::now();
    let index = PrecedenceIndex::build(instance)?;
    let (order, claimed, proven_optimal, termination, stats) = if method == Method::Bidp {
        let report = bidp::solve_with(instance, config, &mut Deadline::after(time_limit))?;
        (report.route.order, report.objective, report.proven_optimal, report.termination, Some(report.stats))
    } else {
        let absorbed = instance.absorb_repair_durations()?;
        let idx = PrecedenceIndex::build(&absorbed)?;
        let route = match method {
            Method::Gid => greedy_distance(&absorbed, &idx)?,
            Method::Gipd => greedy_priority_distance(&absorbed, &idx)?,
            Method::Brute => brute_force(&absorbed, &idx)?,
            Method::Hk => held_karp_forward(&absorbed, &idx)?,
            Method::Bidp => unreachable!(),
        };
        let exact = matches!(method, Method::Brute | Method::Hk);
        (route.order, route.objective, exact, Termination::Completed, None)
    };
    let route = evaluate_route(instance, &index, &order)?;
    if route.objective != claimed {
        return Err(Error::Internal(format!(
            "{} reported {claimed} but the route evaluates to {}",
            method.name(),
            route.objective
        )));
    }
    Ok(Outcome { method, route, proven_optimal, termination, stats, wall: start.elapsed() })
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, rayon::ThreadPoolBuildError> {
    match threads {
        Some(t) => Ok(rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build()?.install(f)),
        None => Ok(f()),
    }
}

/// Percentages given as fractions on the command line, e.g. `0.80`.
pub fn percent(value: f64, what: &'static str) -> Result<u32, Error> {
    let scaled = value * 100.0;
    if !(0.0..=u32::MAX as f64).contains(&scaled) || (scaled - scaled.round()).abs() > 1e-9 {
        return Err(Error::InvalidConfig(what));
    }
    Ok(scaled.round() as u32)
}

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub mode: &'static str,
    pub theta: f64,
    pub delta: f64,
    pub heuristic_source_beta: bool,
    pub ub_refresh: usize,
    pub strict_forward_beta: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels_cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_limit_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl ConfigEcho {
    pub fn new(config: &SolverConfig, time_limit: Option<Duration>, threads: Option<usize>) -> Self {
        ConfigEcho {
            mode: match config.mode {
                Mode::Exact => "exact",
                Mode::Heuristic => "heuristic",
            },
            theta: config.theta_pct as f64 / 100.0,
            delta: config.delta_pct as f64 / 100.0,
            heuristic_source_beta: config.heuristic_source_beta,
            ub_refresh: config.ub_refresh_width,
            strict_forward_beta: config.strict_forward_beta,
            labels_cap: config.label_cap,
            time_limit_s: time_limit.map(|d| d.as_secs_f64()),
            threads,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DirectionRecord {
    pub created: u64,
    pub dominated: u64,
    pub pruned_by_bound: u64,
    pub pruned_by_beta: u64,
    pub kept: u64,
}

impl From<&bidp::DirectionStats> for DirectionRecord {
    fn from(s: &bidp::DirectionStats) -> Self {
        DirectionRecord {
            created: s.created,
            dominated: s.dominated,
            pruned_by_bound: s.pruned_by_bound,
            pruned_by_beta: s.pruned_by_beta,
            kept: s.kept,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct LevelRecord {
    pub level: usize,
    pub forward: DirectionRecord,
    pub backward: DirectionRecord,
}

#[derive(Debug, Serialize)]
pub struct StatsRecord {
    pub levels: Vec<LevelRecord>,
    pub upper_bounds: Vec<u128>,
    pub beta: Vec<usize>,
    pub join_matches: u64,
    pub total_labels: u64,
}

impl From<&SolveStats> for StatsRecord {
    fn from(s: &SolveStats) -> Self {
        StatsRecord {
            levels: s
                .levels
                .iter()
                .map(|l| LevelRecord { level: l.level, forward: (&l.forward).into(), backward: (&l.backward).into() })
                .collect(),
            upper_bounds: s.upper_bounds.clone(),
            beta: s.beta.iter().skip(1).copied().collect(),
            join_matches: s.join_matches,
            total_labels: s.total_labels,
        }
    }
}

/// What `solve` prints.
#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub n: usize,
    pub method: &'static str,
    pub objective: u128,
    pub order: Vec<usize>,
    pub r: Vec<u128>,
    pub proven_optimal: bool,
    pub termination: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsRecord>,
}

pub fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::Completed => "completed",
        Termination::Stopped => "time_limit",
        Termination::LabelCap => "label_cap",
    }
}

impl RunRecord {
    pub fn new(instance: &Instance, outcome: &Outcome, config: ConfigEcho, timing: bool) -> Self {
        RunRecord {
            instance: instance.name.clone(),
            n: instance.n,
            method: outcome.method.name(),
            objective: outcome.route.objective,
            order: outcome.route.order.clone(),
            r: outcome.route.r.clone(),
            proven_optimal: outcome.proven_optimal,
            termination: termination_name(outcome.termination),
            wall_time_s: timing.then_some(outcome.wall.as_secs_f64()),
            config,
            stats: outcome.stats.as_ref().map(StatsRecord::from),
        }
    }
}
