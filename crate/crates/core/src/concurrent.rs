//! Evaluating every snapshot in one traversal of the versioned graph.
//!
//! A single frontier is shared by all snapshots: an active vertex has its
//! out-edges evaluated for every snapshot that owns each edge, whether or not
//! the vertex improved in that snapshot. Better-only updates make those extra
//! evaluations harmless.

use rayon::prelude::*;
use serde::Serialize;

use crate::algorithms::{Membership, QueryContext, PARALLEL_FRONTIER};
use crate::error::{Error, Result};
use crate::graph::{check_vertices, VertexId};
use crate::ingest::AdditionBatch;
use crate::values::{AtomicValues, ValueArray};
use crate::version::{VersionedEdge, VersionedGraph};

/// Memory layout of the per-snapshot value arrays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValueLayout {
    /// One contiguous array per snapshot.
    #[default]
    SnapshotMajor,
    /// All snapshots' values of a vertex side by side.
    VertexMajor,
}

/// How snapshot ownership is checked while scanning an adjacency list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeScan {
    /// Common edges are applied to every snapshot without testing the mask;
    /// other edges visit only their set bits.
    #[default]
    Hoisted,
    /// Test every snapshot's bit on every edge.
    PerSnapshotTest,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ConcurrentOptions {
    pub layout: ValueLayout,
    pub scan: EdgeScan,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RoundTelemetry {
    pub frontier: usize,
    /// Adjacency entries visited.
    pub edge_evaluations: u64,
    /// Edge-function applications, one per (edge, owning snapshot).
    pub function_applications: u64,
    pub updates: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConcurrentTelemetry {
    pub seeding_evaluations: u64,
    pub seeding_updates: u64,
    pub rounds: Vec<RoundTelemetry>,
    pub per_snapshot_updates: Vec<u64>,
}

impl ConcurrentTelemetry {
    /// Seeding edges plus every adjacency entry visited.
    pub fn edge_evaluations(&self) -> u64 {
        self.seeding_evaluations + self.rounds.iter().map(|r| r.edge_evaluations).sum::<u64>()
    }

    pub fn function_applications(&self) -> u64 {
        self.seeding_evaluations
            + self
                .rounds
                .iter()
                .map(|r| r.function_applications)
                .sum::<u64>()
    }
}

/// Per-snapshot results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiResult {
    pub results: Vec<ValueArray>,
}

struct MultiValues {
    cells: AtomicValues,
    vertices: usize,
    snapshots: usize,
    layout: ValueLayout,
}

impl MultiValues {
    fn new(bootstrap: &ValueArray, snapshots: usize, layout: ValueLayout) -> Self {
        let cells = match layout {
            ValueLayout::SnapshotMajor => AtomicValues::repeated(bootstrap.as_slice(), snapshots),
            ValueLayout::VertexMajor => AtomicValues::interleaved(bootstrap.as_slice(), snapshots),
        };
        MultiValues {
            cells,
            vertices: bootstrap.len(),
            snapshots,
            layout,
        }
    }

    #[inline]
    fn at(&self, snapshot: usize, v: usize) -> usize {
        match self.layout {
            ValueLayout::SnapshotMajor => snapshot * self.vertices + v,
            ValueLayout::VertexMajor => v * self.snapshots + snapshot,
        }
    }

    fn into_results(self) -> Vec<ValueArray> {
        let flat = self.cells.to_vec();
        (0..self.snapshots)
            .map(|i| ValueArray::new((0..self.vertices).map(|v| flat[self.at(i, v)]).collect()))
            .collect()
    }
}

struct Worker<'a, const W: usize> {
    vg: &'a VersionedGraph<W>,
    q: &'a QueryContext,
    values: &'a MultiValues,
    marks: &'a Membership,
    scan: EdgeScan,
}

struct Local {
    next: Vec<u32>,
    round: RoundTelemetry,
    per_snapshot: Vec<u64>,
}

impl Local {
    fn new(n: usize) -> Self {
        Local {
            next: Vec::new(),
            round: RoundTelemetry::default(),
            per_snapshot: vec![0; n],
        }
    }

    fn merge(mut self, other: Local) -> Local {
        self.next.extend(other.next);
        self.round.edge_evaluations += other.round.edge_evaluations;
        self.round.function_applications += other.round.function_applications;
        self.round.updates += other.round.updates;
        for (a, b) in self.per_snapshot.iter_mut().zip(other.per_snapshot) {
            *a += b;
        }
        self
    }
}

impl<const W: usize> Worker<'_, W> {
    #[inline]
    fn relax(&self, i: usize, src_val: f64, e: &VersionedEdge<W>, out: &mut Local) {
        out.round.function_applications += 1;
        let cand = self.q.spec.apply(src_val, e.weight.get());
        let x = e.dst.index();
        if self
            .values
            .cells
            .improve(self.values.at(i, x), cand, self.q.spec.direction)
        {
            out.round.updates += 1;
            out.per_snapshot[i] += 1;
            if self.marks.claim(x) {
                out.next.push(e.dst.0);
            }
        }
    }

    fn visit(&self, v: u32, out: &mut Local) {
        let n = self.vg.num_snapshots();
        let vid = VertexId(v);
        let src: Vec<f64> = (0..n)
            .map(|i| self.values.cells.load(self.values.at(i, v as usize)))
            .collect();
        match self.scan {
            EdgeScan::Hoisted => {
                for e in self.vg.common_out_edges(vid) {
                    out.round.edge_evaluations += 1;
                    for (i, &val) in src.iter().enumerate() {
                        self.relax(i, val, e, out);
                    }
                }
                for e in self.vg.specific_out_edges(vid) {
                    out.round.edge_evaluations += 1;
                    for i in e.mask.iter() {
                        self.relax(i, src[i], e, out);
                    }
                }
            }
            EdgeScan::PerSnapshotTest => {
                for e in self.vg.out_edges(vid) {
                    out.round.edge_evaluations += 1;
                    for (i, &val) in src.iter().enumerate() {
                        if self.vg.snapshot_has_edge(e, i).unwrap_or(false) {
                            self.relax(i, val, e, out);
                        }
                    }
                }
            }
        }
    }
}

/// Results for every snapshot embedded in `vg`, starting each from
/// `bootstrap`. `batches[i]` seeds snapshot `i`; its edges must already be in
/// `vg`. Seeding finishes before the first propagation round.
pub fn evaluate_concurrent<const W: usize>(
    vg: &VersionedGraph<W>,
    bootstrap: &ValueArray,
    batches: &[AdditionBatch],
    q: &QueryContext,
    opts: ConcurrentOptions,
) -> Result<(MultiResult, ConcurrentTelemetry)> {
    let n = vg.num_snapshots();
    let nv = vg.num_vertices();
    if batches.len() != n {
        return Err(Error::Config(format!(
            "{} batches for {n} snapshots",
            batches.len()
        )));
    }
    if bootstrap.len() != nv {
        return Err(Error::Config(format!(
            "{} bootstrap values for {nv} vertices",
            bootstrap.len()
        )));
    }
    if let Some((i, b)) = batches.iter().enumerate().find(|(i, b)| b.snapshot != *i) {
        return Err(Error::Config(format!(
            "batch at position {i} is for snapshot {}",
            b.snapshot
        )));
    }
    for b in batches {
        check_vertices(nv, &b.triples)?;
    }

    let values = MultiValues::new(bootstrap, n, opts.layout);
    let marks = Membership::new(nv);
    let mut telemetry = ConcurrentTelemetry {
        per_snapshot_updates: vec![0; n],
        ..Default::default()
    };

    // seeding: batches touch disjoint value arrays
    let seeded: Vec<(Vec<u32>, u64)> = batches
        .par_iter()
        .enumerate()
        .map(|(i, b)| {
            let mut hit = Vec::new();
            let mut updates = 0;
            for t in &b.triples {
                let cand = q.spec.apply(
                    values.cells.load(values.at(i, t.src.index())),
                    t.weight.get(),
                );
                if values
                    .cells
                    .improve(values.at(i, t.dst.index()), cand, q.spec.direction)
                {
                    updates += 1;
                    if marks.claim(t.dst.index()) {
                        hit.push(t.dst.0);
                    }
                }
            }
            (hit, updates)
        })
        .collect();
    let mut frontier = Vec::new();
    for (i, (hit, updates)) in seeded.into_iter().enumerate() {
        frontier.extend(hit);
        telemetry.per_snapshot_updates[i] += updates;
        telemetry.seeding_updates += updates;
    }
    telemetry.seeding_evaluations = batches.iter().map(|b| b.len() as u64).sum();
    marks.reset(&frontier);
    frontier.sort_unstable();

    let worker = Worker {
        vg,
        q,
        values: &values,
        marks: &marks,
        scan: opts.scan,
    };
    while !frontier.is_empty() {
        let local = if frontier.len() < PARALLEL_FRONTIER {
            let mut out = Local::new(n);
            for &v in &frontier {
                worker.visit(v, &mut out);
            }
            out
        } else {
            frontier
                .par_iter()
                .fold(
                    || Local::new(n),
                    |mut out, &v| {
                        worker.visit(v, &mut out);
                        out
                    },
                )
                .reduce(|| Local::new(n), Local::merge)
        };
        let mut round = local.round;
        round.frontier = frontier.len();
        telemetry.rounds.push(round);
        for (a, b) in telemetry
            .per_snapshot_updates
            .iter_mut()
            .zip(local.per_snapshot)
        {
            *a += b;
        }
        frontier = local.next;
        marks.reset(&frontier);
        frontier.sort_unstable();
    }

    Ok((
        MultiResult {
            results: values.into_results(),
        },
        telemetry,
    ))
}
