//! Addition-only incremental evaluation: extend a fixpoint on a base graph by
//! a batch of new edges.

use rayon::prelude::*;

use crate::algorithms::{propagate, Adjacency, EvalStats, Membership, QueryContext};
use crate::error::{Error, Result};
use crate::graph::{check_vertices, EdgeTriple, Graph, VertexId, Weight};
use crate::ingest::AdditionBatch;
use crate::values::{AtomicValues, ValueArray};

/// A fixpoint on some base graph plus the edges to add to it.
#[derive(Debug, Clone)]
pub struct IncrementalSeed {
    pub base_values: ValueArray,
    pub additions: Vec<EdgeTriple>,
}

/// The base graph viewed together with an addition index, without copying
/// the base.
pub struct Overlay<'a> {
    base: &'a Graph,
    extra: Graph,
}

impl<'a> Overlay<'a> {
    pub fn new(base: &'a Graph, additions: &[EdgeTriple]) -> Result<Self> {
        Ok(Overlay {
            base,
            extra: Graph::from_triples(base.num_vertices(), additions.iter().copied())?,
        })
    }
}

impl Adjacency for Overlay<'_> {
    fn num_vertices(&self) -> usize {
        self.base.num_vertices()
    }

    #[inline]
    fn for_each_out<F: FnMut(VertexId, Weight)>(&self, v: VertexId, mut f: F) {
        for e in self.base.out_edges(v) {
            f(e.dst, e.weight);
        }
        for e in self.extra.out_edges(v) {
            f(e.dst, e.weight);
        }
    }
}

/// Applies each addition once against `values`, returning the deduplicated
/// sinks that improved.
pub(crate) fn seed_additions(
    additions: &[EdgeTriple],
    q: &QueryContext,
    values: &AtomicValues,
    marks: &Membership,
    stats: &mut EvalStats,
) -> Vec<u32> {
    let mut frontier = Vec::new();
    for t in additions {
        stats.edge_evaluations += 1;
        let cand = q.spec.apply(values.load(t.src.index()), t.weight.get());
        if values.improve(t.dst.index(), cand, q.spec.direction) {
            stats.updates += 1;
            if marks.claim(t.dst.index()) {
                frontier.push(t.dst.0);
            }
        }
    }
    marks.reset(&frontier);
    frontier.sort_unstable();
    frontier
}

/// Fixpoint of `q` on `g_base ∪ seed.additions`, starting from a fixpoint on
/// `g_base`. `g_base` is only read.
pub fn evaluate_incremental_additions(
    g_base: &Graph,
    seed: &IncrementalSeed,
    q: &QueryContext,
) -> Result<ValueArray> {
    evaluate_incremental_with_stats(g_base, seed, q).map(|(v, _)| v)
}

pub fn evaluate_incremental_with_stats(
    g_base: &Graph,
    seed: &IncrementalSeed,
    q: &QueryContext,
) -> Result<(ValueArray, EvalStats)> {
    let n = g_base.num_vertices();
    if seed.base_values.len() != n {
        return Err(Error::Config(format!(
            "{} base values for a graph of {n} vertices",
            seed.base_values.len()
        )));
    }
    check_vertices(n, &seed.additions)?;
    let overlay = Overlay::new(g_base, &seed.additions)?;
    let values = AtomicValues::from_slice(seed.base_values.as_slice());
    let mut stats = EvalStats::default();
    let marks = Membership::new(n);
    let frontier = seed_additions(&seed.additions, q, &values, &marks, &mut stats);
    drop(marks);
    propagate(&overlay, &q.spec, &values, frontier, &mut stats);
    Ok((ValueArray::new(values.to_vec()), stats))
}

/// Per-snapshot results of a direct-hop run.
#[derive(Debug, Clone)]
pub struct DirectHopRun {
    pub results: Vec<ValueArray>,
    pub stats: Vec<EvalStats>,
}

impl DirectHopRun {
    pub fn total(&self) -> EvalStats {
        let mut t = EvalStats::default();
        for s in &self.stats {
            t.absorb(s);
        }
        t
    }
}

/// Every snapshot independently: `base` plus that snapshot's batch, starting
/// from `base_values`. Snapshots run in parallel over the shared base.
///
/// `batches[i]` must describe snapshot `i`.
pub fn direct_hop_all(
    base: &Graph,
    base_values: &ValueArray,
    batches: &[AdditionBatch],
    q: &QueryContext,
) -> Result<DirectHopRun> {
    if let Some((i, b)) = batches.iter().enumerate().find(|(i, b)| b.snapshot != *i) {
        return Err(Error::Config(format!(
            "batch at position {i} is for snapshot {}",
            b.snapshot
        )));
    }
    let runs = batches
        .par_iter()
        .map(|b| {
            let seed = IncrementalSeed {
                base_values: base_values.clone(),
                additions: b.triples.clone(),
            };
            evaluate_incremental_with_stats(base, &seed, q)
        })
        .collect::<Result<Vec<_>>>()?;
    let (results, stats) = runs.into_iter().unzip();
    Ok(DirectHopRun { results, stats })
}
