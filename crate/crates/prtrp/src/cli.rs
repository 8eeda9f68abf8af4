use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use prtrp_core::instance::{generate_random, generate_random_star};
use prtrp_core::mip::{self, MipAssignment};
use prtrp_core::{evaluate_route, BoundsTable, Error, Instance, Mode, PrecedenceIndex, SolverConfig, Vertex};

use crate::bench::{self, BenchEntry, BenchInput};
use crate::format::{self, FileError};
use crate::run::{self, ConfigEcho, Method, RunRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_ENGINE_LIMIT: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "prtrp", version, about = "Repair crew routing on radial power networks")]
pub struct Cli {
    /// Worker threads for the labeling search.
    #[arg(long, global = true, env = "PRTRP_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance and print a JSON run record.
    Solve(SolveArgs),
    /// Run several methods over a set of instances and print CSV.
    Bench(BenchArgs),
    /// Write random or subtree instances.
    Generate(GenerateArgs),
    /// Print the maximum positions and position lower bounds as CSV.
    Bounds(BoundsArgs),
    /// Write the MIP model in LP format.
    ExportMip(ExportMipArgs),
    /// Check a MIP solution against the model.
    CheckMip(CheckMipArgs),
    /// Evaluate a visiting order.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Relaxation θ of the bound test, as a fraction in (0, 1]. Implies heuristic mode.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Per-level increment δ of the bound test. Implies heuristic mode.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Cap the source's position at its greedy position. Implies heuristic mode.
    #[arg(long)]
    pub heuristic_source_beta: bool,
    /// Outgoing paths completed greedily per level to refresh the upper bound.
    #[arg(long, default_value_t = 32)]
    pub ub_refresh: usize,
    /// Stop after this many stored labels.
    #[arg(long)]
    pub labels_cap: Option<usize>,
    /// Use `l + 1 <= β_i` when extending outgoing paths.
    #[arg(long)]
    pub strict_forward_beta: bool,
    /// Seconds before the search returns its incumbent.
    #[arg(long)]
    pub time_limit: Option<f64>,
}

impl SearchArgs {
    fn config(&self) -> Result<SolverConfig, Error> {
        let heuristic = self.theta.is_some() || self.delta.is_some() || self.heuristic_source_beta;
        let mut config = SolverConfig::exact();
        if heuristic {
            config.mode = Mode::Heuristic;
            config.theta_pct = run::percent(self.theta.unwrap_or(1.0), "theta must be a whole percentage in (0, 1]")?;
            config.delta_pct = run::percent(self.delta.unwrap_or(0.0), "delta must be a non-negative whole percentage")?;
            config.heuristic_source_beta = self.heuristic_source_beta;
        }
        config.ub_refresh_width = self.ub_refresh;
        config.label_cap = self.labels_cap;
        config.strict_forward_beta = self.strict_forward_beta;
        config.validate()?;
        Ok(config)
    }

    fn time_limit(&self) -> Result<Option<Duration>, Error> {
        self.time_limit
            .map(|s| Duration::try_from_secs_f64(s).map_err(|_| Error::InvalidConfig("time limit must be a non-negative number of seconds")))
            .transpose()
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Bidp)]
    pub method: Method,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Leave wall times out of the output.
    #[arg(long)]
    pub no_timing: bool,
    /// Include per-level labeling statistics.
    #[arg(long)]
    pub stats: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Random,
    Star,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory of instance files.
    pub dir: Option<PathBuf>,
    /// Generate this many instances instead of reading a directory.
    #[arg(long, requires = "n")]
    pub count: Option<u64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Family::Random)]
    pub family: Family,
    #[arg(long, default_value_t = 100)]
    pub coord_range: i64,
    /// Methods to compare.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "gid,gipd,bidp")]
    pub methods: Vec<Method>,
    /// Compare exact labeling against θ/δ = 0.80/0.01, 0.90/0.01 and 1.00/0.
    #[arg(long)]
    pub sweep: bool,
    #[arg(long)]
    pub time_limit: Option<f64>,
    #[arg(long)]
    pub no_timing: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, required_unless_present = "subtree")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "subtree")]
    pub seed: Option<u64>,
    /// Number of consecutive seeds to generate.
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    #[arg(long, value_enum, default_value_t = Family::Random)]
    pub family: Family,
    #[arg(long, default_value_t = 100)]
    pub coord_range: i64,
    /// Cut the subtree below `--root` out of this instance.
    #[arg(long, requires = "root", conflicts_with_all = ["n", "seed"])]
    pub subtree: Option<PathBuf>,
    #[arg(long)]
    pub root: Option<Vertex>,
    /// Output file; only valid for a single instance.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Directory for files named after the instance.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    pub instance: PathBuf,
    /// Upper bound for the maximum positions; defaults to the better greedy route.
    #[arg(long)]
    pub upper: Option<u128>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportMipArgs {
    pub instance: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Replace the default big-M (the sum of all travel times).
    #[arg(long)]
    pub big_m: Option<i128>,
    /// Also solve exactly and write the optimal route's assignment here.
    #[arg(long)]
    pub solution: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckMipArgs {
    pub solution: PathBuf,
    /// Instance file; overrides the one named in the solution.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub big_m: Option<i128>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    pub instance: PathBuf,
    /// Comma-separated visiting order, e.g. `1,2,3`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub order: Vec<Vertex>,
}

/// A failed command with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::EngineLimit { .. } | Error::LabelCapExceeded { .. } => EXIT_ENGINE_LIMIT,
            Error::Internal(_) => EXIT_FAILURE,
            _ => EXIT_INVALID_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure { code: EXIT_INVALID_INPUT, message: e.to_string() }
    }
}

fn failure(code: i32, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn io_failure(e: std::io::Error) -> Failure {
    failure(EXIT_FAILURE, format!("cannot write output: {e}"))
}

/// Reads and validates an instance.
fn load(path: &Path) -> Result<Instance, Failure> {
    let inst = format::read_instance(path)?;
    inst.ensure_valid().map_err(|e| failure(EXIT_INVALID_INPUT, format!("{}: {e}", path.display())))?;
    Ok(inst)
}

fn emit(out: &mut dyn Write, output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => Ok(format::write_text(path, text)?),
        None => out.write_all(text.as_bytes()).map_err(io_failure),
    }
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serialises") + "\n"
}

fn cmd_solve(args: &SolveArgs, threads: Option<usize>, out: &mut dyn Write) -> Result<(), Failure> {
    let inst = load(&args.instance)?;
    let config = args.search.config()?;
    let limit = args.search.time_limit()?;
    let outcome = run::with_threads(threads, || run::solve_method(&inst, args.method, &config, limit))
        .map_err(|e| failure(EXIT_FAILURE, e.to_string()))??;
    let mut record = RunRecord::new(&inst, &outcome, ConfigEcho::new(&config, limit, threads), !args.no_timing);
    if !args.stats {
        record.stats = None;
    }
    out.write_all(pretty(&record).as_bytes()).map_err(io_failure)
}

fn bench_inputs(args: &BenchArgs) -> Result<Vec<BenchInput>, Failure> {
    if let Some(count) = args.count {
        let n = args.n.expect("clap enforces --n with --count");
        return (args.seed..args.seed + count)
            .map(|seed| {
                let inst = match args.family {
                    Family::Random => generate_random(n, seed, args.coord_range),
                    Family::Star => generate_random_star(n, seed, args.coord_range),
                }?;
                Ok((inst.name.clone(), Ok(inst)))
            })
            .collect();
    }
    let Some(dir) = &args.dir else {
        return Err(failure(EXIT_INVALID_INPUT, "give an instance directory or --count and --n"));
    };
    let entries = std::fs::read_dir(dir).map_err(|e| failure(EXIT_INVALID_INPUT, format!("cannot read {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files
        .into_iter()
        .map(|path| {
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let loaded = format::read_instance(&path)
                .map_err(|e| e.to_string())
                .and_then(|i| i.ensure_valid().map(|_| i).map_err(|e| e.to_string()));
            (name, loaded)
        })
        .collect())
}

fn cmd_bench(args: &BenchArgs, threads: Option<usize>, out: &mut dyn Write) -> Result<(), Failure> {
    let inputs = bench_inputs(args)?;
    let entries: Vec<BenchEntry> =
        if args.sweep { bench::sweep_entries() } else { args.methods.iter().map(|&m| BenchEntry::plain(m)).collect() };
    let limit = args
        .time_limit
        .map(|s| Duration::try_from_secs_f64(s).map_err(|_| failure(EXIT_INVALID_INPUT, "invalid --time-limit")))
        .transpose()?;
    let rows = run::with_threads(threads, || bench::run_bench(&inputs, &entries, limit, !args.no_timing))
        .map_err(|e| failure(EXIT_FAILURE, e.to_string()))?;
    let mut buf = Vec::new();
    bench::write_csv(&mut buf, &rows, &entries).map_err(|e| failure(EXIT_FAILURE, e.to_string()))?;
    emit(out, args.output.as_deref(), &String::from_utf8(buf).expect("CSV of UTF-8 fields"))
}

fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let instances: Vec<Instance> = if let Some(base) = &args.subtree {
        let root = args.root.expect("clap enforces --root with --subtree");
        vec![load(base)?.extract_subtree(root)?]
    } else {
        let (n, seed) = (args.n.expect("required"), args.seed.expect("required"));
        if n == 0 {
            return Err(failure(EXIT_INVALID_INPUT, "--n must be at least 1"));
        }
        (seed..seed + args.count)
            .map(|s| match args.family {
                Family::Random => generate_random(n, s, args.coord_range),
                Family::Star => generate_random_star(n, s, args.coord_range),
            })
            .collect::<Result<_, _>>()?
    };
    if args.output.is_some() && instances.len() != 1 {
        return Err(failure(EXIT_INVALID_INPUT, "--output needs exactly one instance; use --out-dir"));
    }
    for inst in &instances {
        let path = args.output.clone().unwrap_or_else(|| args.out_dir.join(format!("{}.json", inst.name)));
        format::write_instance(&path, inst)?;
        writeln!(out, "{}", path.display()).map_err(io_failure)?;
    }
    Ok(())
}

fn cmd_bounds(args: &BoundsArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let inst = load(&args.instance)?.absorb_repair_durations()?;
    let index = PrecedenceIndex::build(&inst)?;
    let upper = match args.upper {
        Some(u) => u,
        None => {
            let gid = prtrp_core::heuristics::greedy_distance(&inst, &index)?;
            let gipd = prtrp_core::heuristics::greedy_priority_distance(&inst, &index)?;
            gid.objective.min(gipd.objective)
        }
    };
    let table = BoundsTable::new(&inst, &index);
    let beta = table.compute_beta(upper);
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| failure(EXIT_FAILURE, e.to_string());
    w.write_record(["vertex", "successor_count", "beta", "position", "lower_bound", "upper_bound"]).map_err(csv_err)?;
    for i in 1..=inst.n {
        for k in 1..=inst.n {
            if table.applicable(i, k) {
                let bound = table.position_lower_bound(i, k)?;
                w.write_record([
                    i.to_string(),
                    table.successor_count(i).to_string(),
                    beta[i].to_string(),
                    k.to_string(),
                    bound.to_string(),
                    upper.to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| failure(EXIT_FAILURE, e.to_string()))?;
    emit(out, args.output.as_deref(), &String::from_utf8(bytes).expect("ASCII"))
}

#[derive(serde::Serialize)]
struct SolutionOut<'a> {
    instance: &'a Path,
    big_m: i128,
    values: serde_json::Map<String, serde_json::Value>,
}

fn cmd_export_mip(args: &ExportMipArgs, threads: Option<usize>, out: &mut dyn Write) -> Result<(), Failure> {
    let original = load(&args.instance)?;
    let inst = original.absorb_repair_durations()?;
    let index = PrecedenceIndex::build(&inst)?;
    let model = mip::build_model_with(&inst, &index, args.big_m)?;
    emit(out, args.output.as_deref(), &mip::write_lp_text(&model))?;
    if let Some(path) = &args.solution {
        let config = SolverConfig::exact();
        let outcome = run::with_threads(threads, || run::solve_method(&inst, Method::Bidp, &config, None))
            .map_err(|e| failure(EXIT_FAILURE, e.to_string()))??;
        let assignment = mip::canonical_assignment(&inst, &index, &outcome.route.order)?;
        let values = assignment
            .named_values()
            .into_iter()
            .map(|(k, v)| (k, serde_json::Value::from(v)))
            .collect();
        let instance = std::path::absolute(&args.instance).unwrap_or_else(|_| args.instance.clone());
        let doc = SolutionOut { instance: &instance, big_m: model.big_m, values };
        format::write_text(path, &pretty(&doc))?;
    }
    Ok(())
}

#[derive(serde::Serialize)]
struct VerdictOut {
    feasible: bool,
    objective: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    tour: Option<Vec<Vertex>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    route_objective: Option<u128>,
    violations: Vec<ViolationOut>,
}

#[derive(serde::Serialize)]
struct ViolationOut {
    row: String,
    detail: String,
}

fn cmd_check_mip(args: &CheckMipArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let solution = format::read_solution(&args.solution)?;
    let inst_path = match (&args.instance, &solution.instance) {
        (Some(p), _) => p.clone(),
        (None, Some(p)) => args.solution.parent().map(|d| d.join(p)).unwrap_or_else(|| p.clone()),
        (None, None) => return Err(failure(EXIT_INVALID_INPUT, "no instance given: use --instance or an \"instance\" key")),
    };
    let inst = load(&inst_path)?.absorb_repair_durations()?;
    let index = PrecedenceIndex::build(&inst)?;
    let model = mip::build_model_with(&inst, &index, args.big_m.or(solution.big_m))?;
    let mut pairs = Vec::with_capacity(solution.values.len());
    for (name, value) in &solution.values {
        let v = value
            .as_f64()
            .ok_or_else(|| failure(EXIT_INVALID_INPUT, format!("value of `{name}` is not a number")))?;
        pairs.push((name.as_str(), v));
    }
    let assignment = MipAssignment::from_named(inst.n, pairs)?;
    let verdict = mip::check_assignment(&model, &inst, &index, &assignment)?;
    let doc = VerdictOut {
        feasible: verdict.feasible,
        objective: verdict.objective,
        tour: verdict.tour,
        route_objective: verdict.route_objective,
        violations: verdict.violations.into_iter().map(|v| ViolationOut { row: v.row, detail: v.detail }).collect(),
    };
    out.write_all(pretty(&doc).as_bytes()).map_err(io_failure)?;
    if doc.feasible {
        Ok(())
    } else {
        Err(failure(EXIT_INFEASIBLE, "assignment is infeasible"))
    }
}

#[derive(serde::Serialize)]
struct EvaluationOut {
    instance: String,
    objective: u128,
    order: Vec<Vertex>,
    r: Vec<u128>,
    t: Vec<u128>,
}

fn cmd_evaluate(args: &EvaluateArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let inst = load(&args.instance)?;
    let index = PrecedenceIndex::build(&inst)?;
    let route = evaluate_route(&inst, &index, &args.order)?;
    let doc = EvaluationOut { instance: inst.name.clone(), objective: route.objective, order: route.order, r: route.r, t: route.t };
    out.write_all(pretty(&doc).as_bytes()).map_err(io_failure)
}

/// Parses `args` and runs the command; returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let threads = cli.threads;
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, threads, out),
        Command::Bench(a) => cmd_bench(a, threads, out),
        Command::Generate(a) => cmd_generate(a, out),
        Command::Bounds(a) => cmd_bounds(a, out),
        Command::ExportMip(a) => cmd_export_mip(a, threads, out),
        Command::CheckMip(a) => cmd_check_mip(a, out),
        Command::Evaluate(a) => cmd_evaluate(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
