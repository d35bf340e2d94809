//! Commands behind the `evograph` binary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use evograph::concurrent::{ConcurrentOptions, EdgeScan, RoundTelemetry, ValueLayout};
use evograph::ingest::{
    generate_evolving, load_manifest, write_trace, Dataset, GeneratorConfig, IdMap,
};
use evograph::metrics::{unchanged_fraction, unchanged_vertices, uvv_recall};
use evograph::mode::WorkCounters;
use evograph::qrs::{BatchSizes, QrsOptions, QrsTimings, ReductionStats};
use evograph::{
    qrs_pipeline, reference_results, run_mode, AlgorithmKind, Mode, ModeRun, QueryContext,
    RunOptions, ValueArray,
};
use serde::Serialize;

pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const MISMATCH: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const DATA: u8 = 3;
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(evograph::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Data(_) => exit::DATA,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<evograph::Error> for CliError {
    fn from(e: evograph::Error) -> Self {
        match e {
            evograph::Error::Config(m) => CliError::Usage(m),
            other => CliError::Data(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "evograph",
    version,
    about = "Path queries over evolving graph snapshots"
)]
pub struct Cli {
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "EVOGRAPH_THREADS", default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic evolution trace (base edge list, deltas, manifest).
    Generate(GenerateArgs),
    /// Evaluate a query on every snapshot and write result files.
    Query(QueryArgs),
    /// Compare a mode's results with full recomputation.
    Verify(VerifyArgs),
    /// Unchanged and detected-UVV fractions over snapshot windows.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 1000)]
    pub vertices: usize,
    #[arg(long, default_value_t = 10_000)]
    pub edges: usize,
    /// Number of delta batches; the trace has one more snapshot.
    #[arg(long, default_value_t = 8)]
    pub snapshots: usize,
    #[arg(long, default_value_t = 100)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 0.5)]
    pub add_fraction: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub min_weight: u32,
    #[arg(long, default_value_t = 10)]
    pub max_weight: u32,
    /// Re-added edges get a fresh weight instead of their old one.
    #[arg(long)]
    pub fresh_weights: bool,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct QuerySpecArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, value_enum)]
    pub alg: AlgArg,
    /// External id of the source vertex.
    #[arg(long)]
    pub source: u64,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct EngineArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Cqrs)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = LayoutArg::SnapshotMajor)]
    pub layout: LayoutArg,
    #[arg(long, value_enum, default_value_t = ScanArg::Hoisted)]
    pub scan: ScanArg,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub query: QuerySpecArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Where to write the JSON report.
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub query: QuerySpecArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub query: QuerySpecArgs,
    /// Window sizes, in snapshots from the start of the trace.
    #[arg(long, value_delimiter = ',', default_value = "25,50,75,100")]
    pub windows: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgArg {
    Bfs,
    Sssp,
    Sswp,
    Ssnp,
    Viterbi,
}

impl From<AlgArg> for AlgorithmKind {
    fn from(a: AlgArg) -> Self {
        match a {
            AlgArg::Bfs => AlgorithmKind::Bfs,
            AlgArg::Sssp => AlgorithmKind::Sssp,
            AlgArg::Sswp => AlgorithmKind::Sswp,
            AlgArg::Ssnp => AlgorithmKind::Ssnp,
            AlgArg::Viterbi => AlgorithmKind::Viterbi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Full,
    DirectHop,
    Qrs,
    Cqrs,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Full => Mode::Full,
            ModeArg::DirectHop => Mode::DirectHop,
            ModeArg::Qrs => Mode::Qrs,
            ModeArg::Cqrs => Mode::Cqrs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LayoutArg {
    SnapshotMajor,
    VertexMajor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanArg {
    Hoisted,
    PerSnapshot,
}

impl EngineArgs {
    pub fn options(&self) -> RunOptions {
        RunOptions {
            concurrent: ConcurrentOptions {
                layout: match self.layout {
                    LayoutArg::SnapshotMajor => ValueLayout::SnapshotMajor,
                    LayoutArg::VertexMajor => ValueLayout::VertexMajor,
                },
                scan: match self.scan {
                    ScanArg::Hoisted => EdgeScan::Hoisted,
                    ScanArg::PerSnapshot => EdgeScan::PerSnapshotTest,
                },
            },
            ..RunOptions::default()
        }
    }
}

/// Runs `cli` on a thread pool sized by `--threads`.
pub fn run(cli: Cli) -> CliResult<u8> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Generate(a) => cmd_generate(&a).map(|files| {
            for f in files {
                println!("{}", f.display());
            }
            exit::SUCCESS
        }),
        Command::Query(a) => cmd_query(&a).map(|report| {
            print!("{}", render_table(&report));
            exit::SUCCESS
        }),
        Command::Verify(a) => cmd_verify(&a).map(|outcome| match outcome {
            None => {
                println!("ok");
                exit::SUCCESS
            }
            Some(m) => {
                println!("{m}");
                exit::MISMATCH
            }
        }),
        Command::Stats(a) => cmd_stats(&a).map(|windows| {
            println!(
                "{}",
                serde_json::to_string_pretty(&windows).expect("serializable")
            );
            exit::SUCCESS
        }),
    })
}

pub fn cmd_generate(a: &GenerateArgs) -> CliResult<Vec<PathBuf>> {
    let cfg = GeneratorConfig {
        num_vertices: a.vertices,
        num_edges: a.edges,
        transitions: a.snapshots,
        batch_size: a.batch_size,
        add_fraction: a.add_fraction,
        seed: a.seed,
        min_weight: a.min_weight,
        max_weight: a.max_weight,
        restore_weights: !a.fresh_weights,
    };
    let (base, deltas) = generate_evolving(&cfg)?;
    Ok(write_trace(
        &a.out_dir,
        &IdMap::Identity(a.vertices),
        &base,
        &deltas,
    )?)
}

struct Loaded {
    data: Dataset,
    q: QueryContext,
}

fn load(a: &QuerySpecArgs) -> CliResult<Loaded> {
    let data = load_manifest(&a.manifest)?;
    let source = data.ids.dense(a.source).ok_or_else(|| {
        CliError::Data(evograph::Error::Range(format!(
            "source {} is not a vertex of the dataset",
            a.source
        )))
    })?;
    let q = QueryContext::new(a.alg.into(), source, data.series.num_vertices())?;
    Ok(Loaded { data, q })
}

/// Text of one result file.
pub fn render_result(
    kind: AlgorithmKind,
    source: u64,
    snapshot: usize,
    ids: &IdMap,
    values: &ValueArray,
) -> String {
    let mut out = format!("# algorithm {kind}\n# source {source}\n# snapshot {snapshot}\n");
    for (v, x) in values.iter().enumerate() {
        let _ = writeln!(out, "{} {x}", ids.external(evograph::VertexId(v as u32)));
    }
    out
}

pub fn result_file_name(snapshot: usize) -> String {
    format!("snapshot_{snapshot:04}.txt")
}

fn millis(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

#[derive(Debug, Clone, Serialize)]
pub struct QrsGenerationTimes {
    pub intersection_ms: f64,
    pub union_ms: f64,
    pub bounds_ms: f64,
    pub reduction_ms: f64,
    pub total_ms: f64,
}

impl From<&QrsTimings> for QrsGenerationTimes {
    fn from(t: &QrsTimings) -> Self {
        QrsGenerationTimes {
            intersection_ms: millis(t.intersection),
            union_ms: millis(t.union),
            bounds_ms: millis(t.bounds),
            reduction_ms: millis(t.reduction),
            total_ms: millis(t.total()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TimingReport {
    /// Building the reduced graph, for the modes that use it.
    pub qrs_generation: Option<QrsGenerationTimes>,
    pub evaluation_ms: f64,
    /// Full recomputation of every snapshot, used for the unchanged fraction.
    pub full_recompute_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeReport {
    pub intersection: usize,
    pub union: usize,
    pub qrs: usize,
    pub removed_intersection: usize,
    pub removed_batch: usize,
    pub batch_original_total: usize,
    pub batch_reduced_total: usize,
    pub batch_reduction_ratio: Option<f64>,
    pub batches: Vec<BatchSizes>,
}

impl From<&ReductionStats> for EdgeReport {
    fn from(s: &ReductionStats) -> Self {
        EdgeReport {
            intersection: s.intersection_edges,
            union: s.union_edges,
            qrs: s.qrs_edges,
            removed_intersection: s.removed_intersection_edges,
            removed_batch: s.removed_batch_edges,
            batch_original_total: s.original_batch_edges(),
            batch_reduced_total: s.reduced_batch_edges(),
            batch_reduction_ratio: s.batch_reduction_ratio(),
            batches: s.batches.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsReport {
    pub algorithm: AlgorithmKind,
    pub source: u64,
    pub mode: String,
    pub snapshots: usize,
    pub num_vertices: usize,
    pub timings: TimingReport,
    pub uvv_count: usize,
    pub uvv_fraction: f64,
    pub unchanged_fraction: f64,
    pub uvv_recall: f64,
    pub qrs_edge_fraction: Option<f64>,
    pub edges: EdgeReport,
    pub work: WorkCounters,
    /// Per-round counters of the concurrent engine; empty for other modes.
    pub rounds: Vec<RoundTelemetry>,
}

/// Result arrays plus everything needed for the report.
pub struct QueryOutcome {
    pub run: ModeRun,
    pub reference: Vec<ValueArray>,
    pub report: StatsReport,
}

pub fn execute_query(a: &QuerySpecArgs, engine: &EngineArgs) -> CliResult<(QueryOutcome, IdMap)> {
    let Loaded { data, q } = load(a)?;
    let series = &data.series;
    let run = run_mode(series, &q, engine.mode.into(), &engine.options())?;

    let clock = Instant::now();
    let reference = reference_results(series, &q)?;
    let full_recompute = clock.elapsed();

    // full and direct-hop never build the reduced graph; build it here for the report
    let (reduction, uvv) = match (&run.reduction, &run.uvv) {
        (Some(r), Some(u)) => (r.clone(), u.clone()),
        _ => {
            let b = qrs_pipeline(series, &q, QrsOptions::default())?;
            (b.stats, b.uvv)
        }
    };
    let unchanged = unchanged_vertices(&reference);
    let report = StatsReport {
        algorithm: q.spec.kind,
        source: a.source,
        mode: run.mode.name().to_string(),
        snapshots: series.len(),
        num_vertices: series.num_vertices(),
        timings: TimingReport {
            qrs_generation: run.qrs_timings.as_ref().map(QrsGenerationTimes::from),
            evaluation_ms: millis(run.evaluation_time),
            full_recompute_ms: millis(full_recompute),
        },
        uvv_count: uvv.len(),
        uvv_fraction: uvv.fraction(),
        unchanged_fraction: unchanged_fraction(&reference),
        uvv_recall: uvv_recall(&uvv, &unchanged),
        qrs_edge_fraction: reduction.qrs_edge_fraction(),
        edges: EdgeReport::from(&reduction),
        work: run.work,
        rounds: run
            .telemetry
            .as_ref()
            .map(|t| t.rounds.clone())
            .unwrap_or_default(),
    };
    Ok((
        QueryOutcome {
            run,
            reference,
            report,
        },
        data.ids,
    ))
}

pub fn write_results(
    out_dir: &Path,
    kind: AlgorithmKind,
    source: u64,
    ids: &IdMap,
    results: &[ValueArray],
) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| io_error(out_dir, e))?;
    results
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let path = out_dir.join(result_file_name(i));
            fs::write(&path, render_result(kind, source, i, ids, r))
                .map_err(|e| io_error(&path, e))?;
            Ok(path)
        })
        .collect()
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Data(evograph::Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn cmd_query(a: &QueryArgs) -> CliResult<StatsReport> {
    let (outcome, ids) = execute_query(&a.query, &a.engine)?;
    write_results(
        &a.out_dir,
        outcome.report.algorithm,
        a.query.source,
        &ids,
        &outcome.run.results,
    )?;
    if let Some(path) = &a.stats {
        let mut json = serde_json::to_string_pretty(&outcome.report).expect("serializable");
        json.push('\n');
        fs::write(path, json).map_err(|e| io_error(path, e))?;
    }
    Ok(outcome.report)
}

pub fn render_table(r: &StatsReport) -> String {
    let opt = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{v:.4}"));
    let mut out = String::new();
    let mut row = |k: &str, v: String| {
        let _ = writeln!(out, "{k:<24} {v}");
    };
    row("algorithm", r.algorithm.to_string());
    row("source", r.source.to_string());
    row("mode", r.mode.clone());
    row("snapshots", r.snapshots.to_string());
    row("vertices", r.num_vertices.to_string());
    if let Some(g) = &r.timings.qrs_generation {
        row("qrs generation ms", format!("{:.3}", g.total_ms));
        row("  intersection ms", format!("{:.3}", g.intersection_ms));
        row("  union ms", format!("{:.3}", g.union_ms));
        row("  bounds ms", format!("{:.3}", g.bounds_ms));
        row("  reduction ms", format!("{:.3}", g.reduction_ms));
    }
    row("evaluation ms", format!("{:.3}", r.timings.evaluation_ms));
    row(
        "full recompute ms",
        format!("{:.3}", r.timings.full_recompute_ms),
    );
    row("uvv fraction", format!("{:.4}", r.uvv_fraction));
    row("unchanged fraction", format!("{:.4}", r.unchanged_fraction));
    row("uvv recall", format!("{:.4}", r.uvv_recall));
    row("qrs edge fraction", opt(r.qrs_edge_fraction));
    row("batch reduction ratio", opt(r.edges.batch_reduction_ratio));
    row("edge evaluations", r.work.edge_evaluations.to_string());
    row(
        "function applications",
        r.work.function_applications.to_string(),
    );
    row("rounds", r.work.rounds.to_string());
    out
}

/// First cell where `got` and `want` differ.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub snapshot: usize,
    pub vertex: u64,
    pub got: Option<f64>,
    pub want: Option<f64>,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |x: Option<f64>| x.map_or("missing".to_string(), |v| v.to_string());
        write!(
            f,
            "mismatch at snapshot {} vertex {}: got {} want {}",
            self.snapshot,
            self.vertex,
            show(self.got),
            show(self.want)
        )
    }
}

pub fn verify_results(got: &[ValueArray], want: &[ValueArray], ids: &IdMap) -> Option<Mismatch> {
    for snapshot in 0..got.len().max(want.len()) {
        let (g, w) = (got.get(snapshot), want.get(snapshot));
        let len = g.map_or(0, |a| a.len()).max(w.map_or(0, |a| a.len()));
        for v in 0..len {
            let gv = g.and_then(|a| a.as_slice().get(v).copied());
            let wv = w.and_then(|a| a.as_slice().get(v).copied());
            if gv.map(f64::to_bits) != wv.map(f64::to_bits) {
                let vertex = if v < ids.len() {
                    ids.external(evograph::VertexId(v as u32))
                } else {
                    v as u64
                };
                return Some(Mismatch {
                    snapshot,
                    vertex,
                    got: gv,
                    want: wv,
                });
            }
        }
    }
    None
}

pub fn cmd_verify(a: &VerifyArgs) -> CliResult<Option<Mismatch>> {
    let Loaded { data, q } = load(&a.query)?;
    let run = run_mode(&data.series, &q, a.engine.mode.into(), &a.engine.options())?;
    let want = reference_results(&data.series, &q)?;
    Ok(verify_results(&run.results, &want, &data.ids))
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowStats {
    pub window: usize,
    pub unchanged_fraction: f64,
    pub uvv_fraction: f64,
    pub uvv_recall: f64,
}

pub fn cmd_stats(a: &StatsArgs) -> CliResult<Vec<WindowStats>> {
    let Loaded { data, q } = load(&a.query)?;
    a.windows
        .iter()
        .map(|&w| {
            let series = data.series.prefix(w)?;
            let reference = reference_results(&series, &q)?;
            let bundle = qrs_pipeline(&series, &q, QrsOptions::default())?;
            Ok(WindowStats {
                window: w,
                unchanged_fraction: unchanged_fraction(&reference),
                uvv_fraction: bundle.uvv.fraction(),
                uvv_recall: uvv_recall(&bundle.uvv, &unchanged_vertices(&reference)),
            })
        })
        .collect()
}
