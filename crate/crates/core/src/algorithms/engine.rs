//! Frontier-based fixpoint propagation shared by the full and incremental
//! evaluators.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use super::spec::{AlgorithmSpec, QueryContext};
use crate::graph::{Graph, VertexId, Weight};
use crate::values::{AtomicValues, ValueArray};

/// Frontiers smaller than this are processed on the calling thread.
pub(crate) const PARALLEL_FRONTIER: usize = 256;

/// Read access to out-edges, generic so overlays avoid materializing a
/// merged graph.
pub trait Adjacency: Sync {
    fn num_vertices(&self) -> usize;

    fn for_each_out<F: FnMut(VertexId, Weight)>(&self, v: VertexId, f: F);
}

impl Adjacency for Graph {
    fn num_vertices(&self) -> usize {
        Graph::num_vertices(self)
    }

    #[inline]
    fn for_each_out<F: FnMut(VertexId, Weight)>(&self, v: VertexId, mut f: F) {
        for e in self.out_edges(v) {
            f(e.dst, e.weight);
        }
    }
}

/// Counters collected while propagating.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EvalStats {
    pub rounds: usize,
    /// Adjacency entries visited from active vertices, plus seeding edges.
    pub edge_evaluations: u64,
    /// Successful better-only replacements.
    pub updates: u64,
    pub frontier_sizes: Vec<usize>,
}

impl EvalStats {
    pub fn absorb(&mut self, other: &EvalStats) {
        self.rounds += other.rounds;
        self.edge_evaluations += other.edge_evaluations;
        self.updates += other.updates;
        self.frontier_sizes.extend_from_slice(&other.frontier_sizes);
    }
}

/// Dedup bitmap for the next frontier.
pub(crate) struct Membership {
    marks: Vec<AtomicBool>,
}

impl Membership {
    pub(crate) fn new(n: usize) -> Self {
        Membership {
            marks: (0..n).map(|_| AtomicBool::new(false)).collect(),
        }
    }

    /// True the first time `v` is claimed since the last reset.
    #[inline]
    pub(crate) fn claim(&self, v: usize) -> bool {
        !self.marks[v].swap(true, Ordering::Relaxed)
    }

    pub(crate) fn reset(&self, vs: &[u32]) {
        for &v in vs {
            self.marks[v as usize].store(false, Ordering::Relaxed);
        }
    }
}

#[derive(Default)]
struct RoundOutput {
    next: Vec<u32>,
    edges: u64,
    updates: u64,
}

impl RoundOutput {
    fn merge(mut self, other: RoundOutput) -> RoundOutput {
        self.next.extend(other.next);
        self.edges += other.edges;
        self.updates += other.updates;
        self
    }
}

fn relax_from<A: Adjacency>(
    adj: &A,
    spec: &AlgorithmSpec,
    values: &AtomicValues,
    marks: &Membership,
    v: u32,
    out: &mut RoundOutput,
) {
    let val = values.load(v as usize);
    adj.for_each_out(VertexId(v), |dst, w| {
        out.edges += 1;
        let cand = spec.apply(val, w.get());
        if values.improve(dst.index(), cand, spec.direction) {
            out.updates += 1;
            if marks.claim(dst.index()) {
                out.next.push(dst.0);
            }
        }
    });
}

/// Runs better-only propagation from `frontier` until no value changes.
/// `frontier` must be free of duplicates.
pub(crate) fn propagate<A: Adjacency>(
    adj: &A,
    spec: &AlgorithmSpec,
    values: &AtomicValues,
    mut frontier: Vec<u32>,
    stats: &mut EvalStats,
) {
    let marks = Membership::new(adj.num_vertices());
    while !frontier.is_empty() {
        stats.rounds += 1;
        stats.frontier_sizes.push(frontier.len());
        let out = if frontier.len() < PARALLEL_FRONTIER {
            let mut out = RoundOutput::default();
            for &v in &frontier {
                relax_from(adj, spec, values, &marks, v, &mut out);
            }
            out
        } else {
            frontier
                .par_iter()
                .fold(RoundOutput::default, |mut out, &v| {
                    relax_from(adj, spec, values, &marks, v, &mut out);
                    out
                })
                .reduce(RoundOutput::default, RoundOutput::merge)
        };
        stats.edge_evaluations += out.edges;
        stats.updates += out.updates;
        frontier = out.next;
        marks.reset(&frontier);
        frontier.sort_unstable();
    }
}

fn initial_values(n: usize, q: &QueryContext) -> Vec<f64> {
    let mut init = vec![q.spec.worst; n];
    init[q.source.index()] = q.spec.init_source;
    init
}

/// Fixpoint of `q` on `adj` from scratch.
pub fn evaluate_full_on<A: Adjacency>(adj: &A, q: &QueryContext) -> (ValueArray, EvalStats) {
    let values = AtomicValues::from_slice(&initial_values(adj.num_vertices(), q));
    let mut stats = EvalStats::default();
    propagate(adj, &q.spec, &values, vec![q.source.0], &mut stats);
    (ValueArray::new(values.to_vec()), stats)
}

/// Fixpoint of `q` on `g`: for every vertex, the best fold of the edge
/// function over all paths from the source; the source keeps its initial
/// value and unreachable vertices hold the algorithm's worst value.
///
/// Panics if the source is not a vertex of `g`.
pub fn evaluate_full(g: &Graph, q: &QueryContext) -> ValueArray {
    evaluate_full_on(g, q).0
}

pub fn evaluate_full_with_stats(g: &Graph, q: &QueryContext) -> (ValueArray, EvalStats) {
    evaluate_full_on(g, q)
}

/// True if no edge of `g` can improve `values`.
pub fn is_fixpoint(g: &Graph, q: &QueryContext, values: &ValueArray) -> bool {
    values.get(q.source).to_bits() == q.spec.init_source.to_bits()
        && g.triples().all(|t| {
            let cand = q.spec.apply(values.get(t.src), t.weight.get());
            !q.spec.better(cand, values.get(t.dst))
        })
}
