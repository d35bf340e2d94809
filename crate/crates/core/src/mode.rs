//! End-to-end evaluation of a query over a snapshot series in one of four
//! modes. All modes produce bit-identical results; they differ in how much
//! work they do.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::algorithms::{evaluate_full, evaluate_full_with_stats, EvalStats, QueryContext};
use crate::concurrent::{evaluate_concurrent, ConcurrentOptions, ConcurrentTelemetry, MultiResult};
use crate::error::{Error, Result};
use crate::incremental::direct_hop_all;
use crate::ingest::{build_addition_batches, build_intersection, AdditionBatch, SnapshotSeries};
use crate::qrs::{
    qrs_pipeline, QrsBundle, QrsOptions, QrsTimings, ReductionStats, UnionStrategy, UvvSet,
};
use crate::values::ValueArray;
use crate::version::VersionedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Every snapshot from scratch.
    Full,
    /// Intersection graph plus each snapshot's addition batch.
    DirectHop,
    /// Reduced graph plus each reduced batch, one snapshot at a time.
    Qrs,
    /// Reduced graph and batches, all snapshots in one traversal.
    Cqrs,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Full, Mode::DirectHop, Mode::Qrs, Mode::Cqrs];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::DirectHop => "direct-hop",
            Mode::Qrs => "qrs",
            Mode::Cqrs => "cqrs",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown mode `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub union: UnionStrategy,
    pub concurrent: ConcurrentOptions,
    /// Seed concurrent evaluation with the unreduced batches.
    pub seed_unreduced: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct WorkCounters {
    pub edge_evaluations: u64,
    pub function_applications: u64,
    pub rounds: usize,
}

impl From<&EvalStats> for WorkCounters {
    fn from(s: &EvalStats) -> Self {
        WorkCounters {
            edge_evaluations: s.edge_evaluations,
            function_applications: s.edge_evaluations,
            rounds: s.rounds,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModeRun {
    pub mode: Mode,
    pub results: Vec<ValueArray>,
    pub qrs_timings: Option<QrsTimings>,
    pub evaluation_time: Duration,
    pub work: WorkCounters,
    pub reduction: Option<ReductionStats>,
    pub uvv: Option<UvvSet>,
    pub telemetry: Option<ConcurrentTelemetry>,
}

fn check_weights(series: &SnapshotSeries, q: &QueryContext) -> Result<()> {
    series.distinct_triples().iter().try_for_each(|t| {
        q.spec
            .check_weight(t.weight)
            .map_err(|e| Error::Domain(format!("edge {t}: {e}")))
    })
}

fn sum(stats: &[EvalStats]) -> WorkCounters {
    let mut total = EvalStats::default();
    for s in stats {
        total.absorb(s);
    }
    WorkCounters::from(&total)
}

/// Runs the concurrent engine with a mask wide enough for the series.
pub fn run_concurrent(
    bundle: &QrsBundle,
    q: &QueryContext,
    opts: &RunOptions,
) -> Result<(MultiResult, ConcurrentTelemetry)> {
    let seeds: &[AdditionBatch] = if opts.seed_unreduced {
        &bundle.batches
    } else {
        &bundle.reduced_batches
    };
    fn go<const W: usize>(
        bundle: &QrsBundle,
        seeds: &[AdditionBatch],
        q: &QueryContext,
        opts: &RunOptions,
    ) -> Result<(MultiResult, ConcurrentTelemetry)> {
        let vg = VersionedGraph::<W>::build(&bundle.qrs, &bundle.reduced_batches)?;
        evaluate_concurrent(&vg, &bundle.bootstrap, seeds, q, opts.concurrent)
    }
    let n = bundle.reduced_batches.len();
    match n.div_ceil(64) {
        0 | 1 => go::<1>(bundle, seeds, q, opts),
        2 => go::<2>(bundle, seeds, q, opts),
        3 | 4 => go::<4>(bundle, seeds, q, opts),
        5..=8 => go::<8>(bundle, seeds, q, opts),
        _ => Err(Error::Capacity {
            requested: n,
            capacity: 512,
        }),
    }
}

/// Evaluates `q` on every snapshot of `series` using `mode`.
pub fn run_mode(
    series: &SnapshotSeries,
    q: &QueryContext,
    mode: Mode,
    opts: &RunOptions,
) -> Result<ModeRun> {
    check_weights(series, q)?;
    let mut run = ModeRun {
        mode,
        results: Vec::new(),
        qrs_timings: None,
        evaluation_time: Duration::ZERO,
        work: WorkCounters::default(),
        reduction: None,
        uvv: None,
        telemetry: None,
    };
    match mode {
        Mode::Full => {
            let clock = Instant::now();
            let per: Vec<(ValueArray, EvalStats)> = (0..series.len())
                .into_par_iter()
                .map(|i| Ok(evaluate_full_with_stats(&series.snapshot_graph(i)?, q)))
                .collect::<Result<_>>()?;
            run.evaluation_time = clock.elapsed();
            let (results, stats): (Vec<_>, Vec<_>) = per.into_iter().unzip();
            run.results = results;
            run.work = sum(&stats);
        }
        Mode::DirectHop => {
            let clock = Instant::now();
            let inter = build_intersection(series);
            let (base, base_stats) = evaluate_full_with_stats(&inter, q);
            let batches = build_addition_batches(series, &inter);
            let hop = direct_hop_all(&inter, &base, &batches, q)?;
            run.evaluation_time = clock.elapsed();
            let mut stats = hop.stats;
            stats.push(base_stats);
            run.results = hop.results;
            run.work = sum(&stats);
        }
        Mode::Qrs | Mode::Cqrs => {
            let bundle = qrs_pipeline(series, q, QrsOptions { union: opts.union })?;
            let clock = Instant::now();
            if mode == Mode::Qrs {
                let hop =
                    direct_hop_all(&bundle.qrs, &bundle.bootstrap, &bundle.reduced_batches, q)?;
                run.results = hop.results;
                run.work = sum(&hop.stats);
            } else {
                let (multi, tel) = run_concurrent(&bundle, q, opts)?;
                run.results = multi.results;
                run.work = WorkCounters {
                    edge_evaluations: tel.edge_evaluations(),
                    function_applications: tel.function_applications(),
                    rounds: tel.rounds.len(),
                };
                run.telemetry = Some(tel);
            }
            run.evaluation_time = clock.elapsed();
            run.qrs_timings = Some(bundle.timings);
            run.reduction = Some(bundle.stats);
            run.uvv = Some(bundle.uvv);
        }
    }
    Ok(run)
}

/// Full recomputation of every snapshot; the reference all modes must match.
pub fn reference_results(series: &SnapshotSeries, q: &QueryContext) -> Result<Vec<ValueArray>> {
    (0..series.len())
        .into_par_iter()
        .map(|i| Ok(evaluate_full(&series.snapshot_graph(i)?, q)))
        .collect()
}
