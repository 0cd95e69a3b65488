//! `rdiv` command line.
//!
//! Exit codes: 0 success, 1 a validation failed or a negative cycle was
//! found, 2 usage error, 3 unreadable or malformed input.

use crate::division::{
    compare_schedules, compute_division, validate_division, weak_division, Division, DivisionConstants,
    DivisionError, ScheduleConfig, ScheduleMode,
};
use crate::graph::gen::{generate_grid, grid_undirected, plant_cycle, random_dag, random_digraph, shift_by_potential};
use crate::graph::io::{load_graph, save_graph, Format};
use crate::graph::{undirected_support, Graph, GraphError, DEFAULT_SPARSITY};
use crate::separator::{
    parse_rational, separate, two_thirds, validate_separation, Backend, Rational, SeparatorContract, SeparatorError,
    SizeBudget, VertexWeighting, DEFAULT_C_SEP,
};
use crate::sssp::{
    bellman_ford_counted, multi_source_sssp_with, region_bellman_ford_counted, FirstSolver, SsspError,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};
use std::ffi::OsString;
use std::fmt::{self, Display};
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const TOOL: &str = "rdiv";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "rdiv", version, about = "Graph separators, (r, p)-divisions and negative-weight shortest paths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Emit a generated graph file
    Gen(GenArgs),
    /// Compute and validate one separation of the undirected support
    Separate(SeparateArgs),
    /// Compute a division and validate it
    Divide(DivideArgs),
    /// Re-check a stored division against a graph
    Validate(ValidateArgs),
    /// Shortest-path trees for several sources
    Sssp(SsspArgs),
    /// Compare the fixed, adaptive and epsilon schedules
    BenchSchedules(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFormat {
    Auto,
    Sp,
    Ud,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub width: usize,
    pub height: usize,
}

impl FromStr for GridSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected WxH, got `{s}`"))?;
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad grid size `{s}`"));
        Ok(GridSpec {
            width: parse(w)?,
            height: parse(h)?,
        })
    }
}

impl Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

/// Inclusive integer range written `a..b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl FromStr for IntRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got `{s}`"))?;
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("bad range `{s}`"));
        Ok(IntRange {
            lo: parse(a)?,
            hi: parse(b.trim_start_matches('='))?,
        })
    }
}

impl Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

/// Two numbers written `a:b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pair {
    pub a: i64,
    pub b: i64,
}

impl FromStr for Pair {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got `{s}`"))?;
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("bad pair `{s}`"));
        Ok(Pair { a: parse(a)?, b: parse(b)? })
    }
}

impl Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.a, self.b)
    }
}

/// `p/q`, an integer, or a decimal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fraction {
    pub value: f64,
    pub exact: Option<Rational>,
}

impl FromStr for Fraction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s.contains('/') {
            let r = parse_rational(s)?;
            return Ok(Fraction {
                value: *r.numer() as f64 / *r.denom() as f64,
                exact: Some(r),
            });
        }
        let value: f64 = s.trim().parse().map_err(|_| format!("bad number `{s}`"))?;
        if !value.is_finite() {
            return Err(format!("bad number `{s}`"));
        }
        Ok(Fraction { value, exact: None })
    }
}

impl Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            None => write!(f, "{}", self.value),
        }
    }
}

fn ser_display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_opt_display<T: Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse()
}

fn parse_schedule(s: &str) -> Result<ScheduleMode, String> {
    s.parse()
}

/// Comma-separated vertex list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sources(pub Vec<usize>);

impl FromStr for Sources {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad source `{t}`")))
            .collect::<Result<_, _>>()
            .map(Sources)
    }
}

impl Serialize for Sources {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[derive(Args, Debug, Serialize)]
pub struct ReportArgs {
    /// Report format
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    /// Leave the timestamp out of the report
    #[arg(long)]
    #[serde(skip)]
    pub no_timestamp: bool,
    /// Write the report here instead of standard output
    #[arg(long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct InputArgs {
    /// Graph file (`p sp` or `p ud`)
    #[arg(long, conflicts_with = "grid")]
    pub input: Option<PathBuf>,
    #[arg(long = "graph-format", value_enum, default_value_t = GraphFormat::Auto)]
    pub graph_format: GraphFormat,
    /// Use a generated directed grid instead of a file
    #[arg(long)]
    #[serde(serialize_with = "ser_opt_display")]
    pub grid: Option<GridSpec>,
    /// Arc weight range for --grid
    #[arg(long, default_value = "1..1", allow_hyphen_values = true)]
    #[serde(serialize_with = "ser_display")]
    pub weights: IntRange,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct ConstantArgs {
    #[arg(long = "c-bnd", default_value_t = DivisionConstants::default().c_bnd)]
    pub c_bnd: f64,
    #[arg(long = "c-cnt", default_value_t = DivisionConstants::default().c_cnt)]
    pub c_cnt: f64,
    #[arg(long = "c-b", default_value_t = DivisionConstants::default().c_b)]
    pub c_b: f64,
}

impl ConstantArgs {
    fn constants(&self) -> DivisionConstants {
        DivisionConstants {
            c_bnd: self.c_bnd,
            c_cnt: self.c_cnt,
            c_b: self.c_b,
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct GenArgs {
    /// `width x height` grid with both arc orientations
    #[arg(long, conflicts_with = "random")]
    #[serde(serialize_with = "ser_opt_display")]
    pub grid: Option<GridSpec>,
    /// Random digraph `n:m`
    #[arg(long)]
    #[serde(serialize_with = "ser_opt_display")]
    pub random: Option<Pair>,
    /// With --random: make the digraph acyclic
    #[arg(long, requires = "random")]
    pub dag: bool,
    /// With --grid: emit the undirected grid (`p ud`)
    #[arg(long, requires = "grid")]
    pub undirected: bool,
    #[arg(long, default_value = "1..1", allow_hyphen_values = true)]
    #[serde(serialize_with = "ser_display")]
    pub weights: IntRange,
    /// Shift weights by a random potential drawn from this range
    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "ser_opt_display")]
    pub shift: Option<IntRange>,
    /// Plant a reachable cycle `length:total_weight`
    #[arg(long = "plant-cycle")]
    #[serde(serialize_with = "ser_opt_display")]
    pub plant_cycle: Option<Pair>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub no_timestamp: bool,
    #[arg(long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct SeparateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "auto", value_parser = parse_backend)]
    #[serde(serialize_with = "ser_display")]
    pub separator: Backend,
    /// Separator exponent γ' in [0, 1/2]
    #[arg(long, default_value = "1/2")]
    #[serde(serialize_with = "ser_display")]
    pub gamma: Fraction,
    /// Balance α in [1/2, 2/3]
    #[arg(long, default_value = "2/3")]
    #[serde(serialize_with = "ser_display")]
    pub alpha: Fraction,
    #[command(flatten)]
    #[serde(flatten)]
    pub report: ReportArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct ScheduleArgs {
    #[arg(long)]
    pub r: usize,
    /// Target exponent γ in [0, 1/2]
    #[arg(long, default_value = "1/2")]
    #[serde(serialize_with = "ser_display")]
    pub gamma: Fraction,
    #[arg(long, default_value = "adaptive", value_parser = parse_schedule)]
    pub schedule: ScheduleMode,
    /// ε for the adaptive-eps schedule; choosing that schedule asserts r = n^Ω(1)
    #[arg(long, default_value = "1/24")]
    #[serde(serialize_with = "ser_display")]
    pub epsilon: Fraction,
    #[arg(long, default_value = "auto", value_parser = parse_backend)]
    #[serde(serialize_with = "ser_display")]
    pub separator: Backend,
    /// Fail instead of clamping an out-of-range exponent
    #[arg(long)]
    pub strict_clamp: bool,
}

impl ScheduleArgs {
    fn config(&self) -> ScheduleConfig {
        let base = match self.schedule {
            ScheduleMode::Fixed => ScheduleConfig::fixed(self.gamma.value),
            ScheduleMode::Adaptive => ScheduleConfig::adaptive(self.gamma.value),
            ScheduleMode::AdaptiveEps => ScheduleConfig::adaptive_eps(self.gamma.value, self.epsilon.value),
        };
        ScheduleConfig {
            strict_clamp: self.strict_clamp,
            ..base
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct DivideArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub schedule: ScheduleArgs,
    /// Stop after the weak division
    #[arg(long)]
    pub weak: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub constants: ConstantArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub report: ReportArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct ValidateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    /// Division JSON, or a `divide` report containing one
    #[arg(long)]
    pub division: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub constants: ConstantArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub report: ReportArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct SsspArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    /// Comma-separated 0-based source vertices
    #[arg(long)]
    pub sources: Sources,
    /// Division of the support; the first tree then uses region relaxation
    #[arg(long)]
    pub division: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub report: ReportArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct BenchArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub r: usize,
    #[arg(long, default_value = "1/2")]
    #[serde(serialize_with = "ser_display")]
    pub gamma: Fraction,
    /// Also run the adaptive-eps schedule with this ε (asserts r = n^Ω(1))
    #[arg(long)]
    #[serde(serialize_with = "ser_opt_display")]
    pub epsilon: Option<Fraction>,
    #[arg(long, default_value = "bfs-layer", value_parser = parse_backend)]
    #[serde(serialize_with = "ser_display")]
    pub separator: Backend,
    #[command(flatten)]
    #[serde(flatten)]
    pub report: ReportArgs,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Input(String),
    Failed(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Failed(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Failed(m) => m,
        }
    }
}

impl From<DivisionError> for Failure {
    fn from(e: DivisionError) -> Self {
        match e {
            DivisionError::InvalidRadius { .. } | DivisionError::Schedule(_) => Failure::Usage(e.to_string()),
            DivisionError::Separator(SeparatorError::TooLarge { .. } | SeparatorError::InvalidContract(_)) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Failed(e.to_string()),
        }
    }
}

/// Report produced by a subcommand.
struct Report {
    body: serde_json::Value,
    csv: Option<Vec<u8>>,
    passed: bool,
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    config: &'a Command,
    #[serde(flatten)]
    body: &'a serde_json::Value,
}

fn timestamp(suppress: bool) -> Option<u64> {
    if suppress {
        return None;
    }
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .ok()
        .map(|d| d.as_secs())
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text.into_bytes(),
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: Vec::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(out) => out,
        Err(f) => Outcome {
            code: f.code(),
            stdout: Vec::new(),
            stderr: format!("error: {}\n", f.message()),
        },
    }
}

fn execute(cmd: &Command) -> Result<Outcome, Failure> {
    if let Command::Gen(args) = cmd {
        return gen(cmd, args);
    }
    let (report, rargs) = match cmd {
        Command::Gen(_) => unreachable!(),
        Command::Separate(a) => (separate_cmd(a)?, &a.report),
        Command::Divide(a) => (divide_cmd(a)?, &a.report),
        Command::Validate(a) => (validate_cmd(a)?, &a.report),
        Command::Sssp(a) => (sssp_cmd(a)?, &a.report),
        Command::BenchSchedules(a) => (bench_cmd(a)?, &a.report),
    };
    let bytes = match rargs.format {
        ReportFormat::Json => {
            let env = Envelope {
                tool: TOOL,
                version: VERSION,
                timestamp: timestamp(rargs.no_timestamp),
                config: cmd,
                body: &report.body,
            };
            let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
            s.push('\n');
            s.into_bytes()
        }
        ReportFormat::Csv => {
            let mut head = serde_json::json!({ "tool": TOOL, "version": VERSION, "config": cmd });
            if let Some(t) = timestamp(rargs.no_timestamp) {
                head["timestamp"] = t.into();
            }
            let mut out = format!("# {head}\n").into_bytes();
            out.extend(report.csv.unwrap_or_default());
            out
        }
    };
    emit(bytes, rargs.output.as_deref(), if report.passed { 0 } else { 1 })
}

fn emit(bytes: Vec<u8>, output: Option<&Path>, code: i32) -> Result<Outcome, Failure> {
    match output {
        Some(path) => {
            std::fs::write(path, &bytes).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            Ok(Outcome {
                code,
                stdout: Vec::new(),
                stderr: String::new(),
            })
        }
        None => Ok(Outcome {
            code,
            stdout: bytes,
            stderr: String::new(),
        }),
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn graph_error(e: GraphError) -> Failure {
    match e {
        GraphError::EmptyGrid(..) | GraphError::EmptyWeightRange { .. } => Failure::Usage(e.to_string()),
        _ => Failure::Input(e.to_string()),
    }
}

fn load_input(args: &InputArgs) -> Result<Graph, Failure> {
    let g = match (&args.input, args.grid) {
        (Some(path), _) => {
            let format = match args.graph_format {
                GraphFormat::Auto => Format::Auto,
                GraphFormat::Sp => Format::Sp,
                GraphFormat::Ud => Format::Ud,
            };
            load_graph(&read_file(path)?, format).map_err(graph_error)?
        }
        (None, Some(grid)) => {
            generate_grid(grid.width, grid.height, args.weights.lo..=args.weights.hi, args.seed).map_err(graph_error)?
        }
        (None, None) => return Err(Failure::Usage("one of --input or --grid is required".into())),
    };
    g.check_sparsity(DEFAULT_SPARSITY).map_err(graph_error)?;
    Ok(g)
}

fn graph_summary(g: &Graph) -> serde_json::Value {
    serde_json::json!({
        "n": g.n(),
        "m": g.m(),
        "directed": g.is_directed(),
        "L": g.min_weight_magnitude(),
    })
}

fn csv_rows<R: Serialize>(rows: impl IntoIterator<Item = R>, header: &[&str]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.serialize(row).expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

fn gen(cmd: &Command, a: &GenArgs) -> Result<Outcome, Failure> {
    let weights = a.weights.lo..=a.weights.hi;
    let mut g = match (a.grid, a.random) {
        (Some(grid), _) if a.undirected => grid_undirected(grid.width, grid.height),
        (Some(grid), _) => generate_grid(grid.width, grid.height, weights, a.seed),
        (None, Some(p)) => {
            if p.a <= 0 || p.b < 0 {
                return Err(Failure::Usage(format!("bad --random {p}")));
            }
            if a.dag {
                random_dag(p.a as usize, p.b as usize, weights, a.seed)
            } else {
                random_digraph(p.a as usize, p.b as usize, weights, a.seed)
            }
        }
        (None, None) => return Err(Failure::Usage("one of --grid or --random is required".into())),
    }
    .map_err(graph_error)?;
    if let Some(shift) = a.shift {
        if !g.is_directed() {
            return Err(Failure::Usage("--shift needs a directed graph".into()));
        }
        g = shift_by_potential(&g, shift.lo..=shift.hi, a.seed.wrapping_add(1)).map_err(graph_error)?;
    }
    if let Some(cyc) = a.plant_cycle {
        if !g.is_directed() || cyc.a < 2 {
            return Err(Failure::Usage("--plant-cycle needs a directed graph and length >= 2".into()));
        }
        g = plant_cycle(&g, cyc.a as usize, cyc.b, a.seed.wrapping_add(2)).map_err(graph_error)?;
    }
    let config = serde_json::to_string(cmd).expect("config serializes");
    let mut out = format!("c {TOOL} {VERSION}\nc config {config}\n");
    if let Some(t) = timestamp(a.no_timestamp) {
        out.push_str(&format!("c timestamp {t}\n"));
    }
    let mut bytes = out.into_bytes();
    bytes.extend(save_graph(&g));
    emit(bytes, a.output.as_deref(), 0)
}

fn separate_cmd(a: &SeparateArgs) -> Result<Report, Failure> {
    let g = load_input(&a.input)?;
    let support = if g.is_directed() { undirected_support(&g).graph } else { g.clone() };
    let alpha = match a.alpha.exact {
        Some(r) => r,
        None if a.alpha.value == 2.0 / 3.0 => two_thirds(),
        None => return Err(Failure::Usage("--alpha must be a rational p/q".into())),
    };
    let contract = SeparatorContract::with(a.gamma.value, alpha, SizeBudget::Power { c_sep: DEFAULT_C_SEP })
        .map_err(|e| Failure::Usage(e.to_string()))?;
    if support.n() == 0 {
        return Err(Failure::Input("graph has no vertices".into()));
    }
    let vw = VertexWeighting::unit(support.n());
    let sep = separate(&support, &vw, &contract, a.separator).map_err(|e| match e {
        SeparatorError::TooLarge { .. } => Failure::Usage(e.to_string()),
        _ => Failure::Failed(e.to_string()),
    })?;
    let validation = validate_separation(&support, &vw, &sep, &contract);
    let csv = {
        let side = |v: usize| {
            let (ia, ib) = (sep.a.binary_search(&v).is_ok(), sep.b.binary_search(&v).is_ok());
            match (ia, ib) {
                (true, true) => "S",
                (true, false) => "A",
                _ => "B",
            }
        };
        csv_rows((0..support.n()).map(|v| (v, side(v))), &["vertex", "side"])
    };
    Ok(Report {
        passed: validation.passed,
        body: serde_json::json!({
            "graph": graph_summary(&g),
            "separation": sep,
            "validation": validation,
        }),
        csv: Some(csv),
    })
}

fn divide_cmd(a: &DivideArgs) -> Result<Report, Failure> {
    let g = load_input(&a.input)?;
    let schedule = a.schedule.config();
    let d = if a.weak {
        weak_division(&g, a.schedule.r, &schedule, a.schedule.separator)?.division
    } else {
        compute_division(&g, a.schedule.r, &schedule, a.schedule.separator, a.constants.c_bnd)?
    };
    let validation = validate_division(&g, &d, &a.constants.constants());
    let csv = csv_rows(
        d.stats.worklog.records.iter().map(|r| {
            (
                serde_json::to_value(r.phase).unwrap().as_str().unwrap().to_string(),
                r.depth,
                r.region_size,
                r.gamma_prime,
                r.cost_units,
                r.separator_size,
                r.region_boundary,
                r.over_budget,
                r.fallback,
            )
        }),
        &[
            "phase",
            "depth",
            "region_size",
            "gamma_prime",
            "cost_units",
            "separator_size",
            "region_boundary",
            "over_budget",
            "fallback",
        ],
    );
    Ok(Report {
        passed: validation.passed,
        body: serde_json::json!({
            "graph": graph_summary(&g),
            "division": d,
            "validation": validation,
        }),
        csv: Some(csv),
    })
}

fn load_division(path: &Path) -> Result<Division, Failure> {
    let bytes = read_file(path)?;
    let mut value: serde_json::Value =
        serde_json::from_slice(&bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if let Some(inner) = value.get_mut("division") {
        value = inner.take();
    }
    serde_json::from_value(value).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn validate_cmd(a: &ValidateArgs) -> Result<Report, Failure> {
    let g = load_input(&a.input)?;
    let d = load_division(&a.division)?;
    let validation = validate_division(&g, &d, &a.constants.constants());
    let csv = csv_rows(
        validation.clauses.iter().map(|c| (c.name, c.passed, c.detail.as_str())),
        &["clause", "passed", "detail"],
    );
    Ok(Report {
        passed: validation.passed,
        body: serde_json::json!({
            "graph": graph_summary(&g),
            "validation": validation,
        }),
        csv: Some(csv),
    })
}

fn sssp_cmd(a: &SsspArgs) -> Result<Report, Failure> {
    let g = load_input(&a.input)?;
    if !g.is_directed() {
        return Err(Failure::Usage("sssp needs a directed (`p sp`) graph".into()));
    }
    if let Some(&bad) = a.sources.0.iter().find(|&&s| s >= g.n()) {
        return Err(Failure::Usage(format!("source {bad} out of range for {} vertices", g.n())));
    }
    let division = a.division.as_deref().map(load_division).transpose()?;
    let first = match &division {
        Some(d) => FirstSolver::Regions(d),
        None => FirstSolver::BellmanFord,
    };
    let s0 = *a.sources.0.first().ok_or_else(|| Failure::Usage("no sources".into()))?;
    let cycle_report = |w: crate::sssp::NegativeCycleWitness| {
        let verified = w.verify(&g);
        let csv = csv_rows(
            w.cycle.iter().zip(&w.edges).map(|(v, e)| (v, e.index())),
            &["vertex", "edge"],
        );
        Report {
            passed: false,
            body: serde_json::json!({
                "graph": graph_summary(&g),
                "negative_cycle": w,
                "witness_verified": verified,
            }),
            csv: Some(csv),
        }
    };
    let ms = match multi_source_sssp_with(&g, &a.sources.0, first) {
        Ok(ms) => ms,
        Err(SsspError::NegativeCycle(w)) => return Ok(cycle_report(w)),
        Err(SsspError::DivisionMismatch(m)) => return Err(Failure::Input(format!("division does not match: {m}"))),
        Err(e) => return Err(Failure::Failed(e.to_string())),
    };
    let mut passes = serde_json::json!({
        "bellman_ford": bellman_ford_counted(&g, s0).map_err(|e| Failure::Failed(e.to_string()))?.passes,
    });
    if let Some(d) = &division {
        passes["region_bellman_ford"] = region_bellman_ford_counted(&g, d, s0)
            .map_err(|e| Failure::Failed(e.to_string()))?
            .passes
            .into();
    }
    let csv = csv_rows(
        ms.trees.iter().flat_map(|t| {
            (0..g.n()).map(move |v| {
                (
                    t.source,
                    v,
                    t.dist[v].map_or("inf".to_string(), |d| d.to_string()),
                    t.parent[v].map_or(String::new(), |p| p.to_string()),
                )
            })
        }),
        &["source", "vertex", "dist", "parent"],
    );
    Ok(Report {
        passed: true,
        body: serde_json::json!({
            "graph": graph_summary(&g),
            "first_tree_passes": passes,
            "potential_origin": ms.potential_origin,
            "reduced_arcs": ms.reduced_arcs,
            "min_reduced_weight": ms.min_reduced_weight,
            "trees": ms.trees,
        }),
        csv: Some(csv),
    })
}

fn bench_cmd(a: &BenchArgs) -> Result<Report, Failure> {
    let g = load_input(&a.input)?;
    let cmp = compare_schedules(&g, a.r, a.gamma.value, a.separator, a.epsilon.map(|e| e.value))?;
    let passed = cmp.runs.iter().all(|r| r.passed);
    Ok(Report {
        passed,
        csv: Some(cmp.to_csv()),
        body: serde_json::json!({
            "graph": graph_summary(&g),
            "comparison": cmp,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("rdiv").chain(args.iter().copied()))
    }

    #[test]
    fn gen_grid_is_deterministic() {
        let a = run_args(&["gen", "--grid", "4x4", "--weights", "1..1", "--seed", "0", "--no-timestamp"]);
        assert_eq!(a.code, 0, "{}", a.stderr);
        assert_eq!(a, run_args(&["gen", "--grid", "4x4", "--weights", "1..1", "--seed", "0", "--no-timestamp"]));
        let g = load_graph(&a.stdout, Format::Auto).unwrap();
        assert_eq!((g.n(), g.m()), (16, 48));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&["divide", "--grid", "4x4"]).code, 2);
        assert_eq!(run_args(&["frobnicate"]).code, 2);
        assert_eq!(run_args(&["divide", "--grid", "4x4", "--r", "8", "--gamma", "0.9"]).code, 2);
        assert_eq!(run_args(&["separate", "--grid", "4x4", "--separator", "nope"]).code, 2);
    }

    #[test]
    fn missing_input_exits_3() {
        let out = run_args(&["divide", "--input", "/nonexistent/graph.gr", "--r", "8"]);
        assert_eq!(out.code, 3);
    }

    #[test]
    fn divide_grid_passes() {
        let out = run_args(&["divide", "--grid", "32x32", "--r", "64", "--gamma", "0.5", "--no-timestamp"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["division"]["kind"], "full");
        assert_eq!(v["validation"]["passed"], true);
        assert_eq!(v["config"]["subcommand"], "divide");
        assert!(v.get("timestamp").is_none());
    }

    #[test]
    fn fraction_parsing() {
        assert_eq!("1/4".parse::<Fraction>().unwrap().value, 0.25);
        assert_eq!("0.5".parse::<Fraction>().unwrap().value, 0.5);
        assert!("1/0".parse::<Fraction>().is_err());
        assert_eq!("-3..7".parse::<IntRange>().unwrap(), IntRange { lo: -3, hi: 7 });
        let out = run_args(&["gen", "--grid", "3x3", "--weights", "-3..7", "--shift", "-5..5", "--no-timestamp"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
    }
}
