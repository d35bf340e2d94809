//! Bounding every snapshot's values between the intersection and union graph
//! results, detecting vertices whose value cannot change, and shrinking the
//! graph and the addition batches accordingly.
//!
//! The intersection graph has a subset of every snapshot's paths and the
//! union graph a superset, so for minimizing queries `R∪ ⪯ R_i ⪯ R∩` and for
//! maximizing ones the reverse. Where the two agree, every snapshot agrees
//! too, and the in-edges of that vertex can never change anything.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::algorithms::{evaluate_full, Direction, QueryContext};
use crate::error::{Error, Result};
use crate::graph::{EdgeTriple, Graph, VertexId};
use crate::incremental::{evaluate_incremental_additions, IncrementalSeed};
use crate::ingest::{
    build_addition_batches, build_intersection, build_union, AdditionBatch, SnapshotSeries,
};
use crate::values::ValueArray;

/// How the union-graph result is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnionStrategy {
    /// Extend the intersection result by the edges missing from it.
    #[default]
    Incremental,
    /// Evaluate the union graph from scratch.
    FromScratch,
}

/// Results on the intersection and union graphs, read as value bounds.
#[derive(Debug, Clone)]
pub struct BoundsPair {
    pub intersection: ValueArray,
    pub union: ValueArray,
    pub direction: Direction,
}

impl BoundsPair {
    /// Whether the union result is the lower side: true for minimizing
    /// queries (BFS, SSSP, SSNP), false for maximizing ones (SSWP, Viterbi).
    pub fn lower_is_union(&self) -> bool {
        self.direction == Direction::Minimize
    }

    pub fn lower(&self) -> &ValueArray {
        if self.lower_is_union() {
            &self.union
        } else {
            &self.intersection
        }
    }

    pub fn upper(&self) -> &ValueArray {
        if self.lower_is_union() {
            &self.intersection
        } else {
            &self.union
        }
    }

    /// The best value any snapshot can reach at `v`.
    pub fn best_case(&self, v: VertexId) -> f64 {
        self.union.get(v)
    }

    /// The value every snapshot reaches at least at `v`.
    pub fn worst_case(&self, v: VertexId) -> f64 {
        self.intersection.get(v)
    }

    /// `value` lies between the bounds at `v` under the query's ordering.
    pub fn admits(&self, v: VertexId, value: f64) -> bool {
        self.direction.at_least_as_good(self.best_case(v), value)
            && self.direction.at_least_as_good(value, self.worst_case(v))
    }
}

pub fn compute_bounds(
    intersection: &Graph,
    union: &Graph,
    q: &QueryContext,
    strategy: UnionStrategy,
) -> Result<BoundsPair> {
    if intersection.num_vertices() != union.num_vertices() {
        return Err(Error::Precondition(format!(
            "intersection has {} vertices, union {}",
            intersection.num_vertices(),
            union.num_vertices()
        )));
    }
    if let Some(t) = intersection.triples().find(|t| !union.contains(t)) {
        return Err(Error::Precondition(format!(
            "intersection edge {t} missing from the union"
        )));
    }
    let r_int = evaluate_full(intersection, q);
    let r_union = match strategy {
        UnionStrategy::Incremental => {
            let missing: Vec<EdgeTriple> = union
                .triples()
                .filter(|t| !intersection.contains(t))
                .collect();
            let seed = IncrementalSeed {
                base_values: r_int.clone(),
                additions: missing,
            };
            evaluate_incremental_additions(intersection, &seed, q)?
        }
        UnionStrategy::FromScratch => evaluate_full(union, q),
    };
    Ok(BoundsPair {
        intersection: r_int,
        union: r_union,
        direction: q.spec.direction,
    })
}

/// Vertices whose value is provably the same in every snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UvvSet {
    members: Vec<bool>,
    count: usize,
}

impl UvvSet {
    pub fn from_members(members: Vec<bool>) -> Self {
        let count = members.iter().filter(|&&m| m).count();
        UvvSet { members, count }
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.members[v.index()]
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn num_vertices(&self) -> usize {
        self.members.len()
    }

    pub fn fraction(&self) -> f64 {
        if self.members.is_empty() {
            1.0
        } else {
            self.count as f64 / self.members.len() as f64
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| VertexId(i as u32))
    }
}

/// A vertex is a UVV iff its intersection and union values are bitwise equal;
/// unreachable in both counts.
pub fn detect_uvv(bounds: &BoundsPair) -> UvvSet {
    UvvSet::from_members(
        bounds
            .intersection
            .iter()
            .zip(bounds.union.iter())
            .map(|(a, b)| a.to_bits() == b.to_bits())
            .collect(),
    )
}

/// The intersection graph without in-edges of UVVs. Built by collecting the
/// surviving edges rather than deleting, since most edges usually go.
pub fn reduce_intersection(intersection: &Graph, uvv: &UvvSet) -> Graph {
    let kept: Vec<EdgeTriple> = intersection
        .triples()
        .filter(|t| !uvv.contains(t.dst))
        .collect();
    Graph::from_sorted_unique(intersection.num_vertices(), &kept)
}

/// Drops batch edges whose sink is a UVV, keeping order.
pub fn reduce_batches(batches: &[AdditionBatch], uvv: &UvvSet) -> Vec<AdditionBatch> {
    batches
        .iter()
        .map(|b| AdditionBatch {
            snapshot: b.snapshot,
            triples: b
                .triples
                .iter()
                .copied()
                .filter(|t| !uvv.contains(t.dst))
                .collect(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BatchSizes {
    pub original: usize,
    pub reduced: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionStats {
    pub num_vertices: usize,
    pub uvv_count: usize,
    pub intersection_edges: usize,
    pub union_edges: usize,
    pub qrs_edges: usize,
    pub removed_intersection_edges: usize,
    pub removed_batch_edges: usize,
    pub batches: Vec<BatchSizes>,
}

impl ReductionStats {
    pub fn uvv_fraction(&self) -> f64 {
        if self.num_vertices == 0 {
            1.0
        } else {
            self.uvv_count as f64 / self.num_vertices as f64
        }
    }

    /// Share of intersection edges that survive; `None` for an empty
    /// intersection.
    pub fn qrs_edge_fraction(&self) -> Option<f64> {
        (self.intersection_edges > 0)
            .then(|| self.qrs_edges as f64 / self.intersection_edges as f64)
    }

    pub fn original_batch_edges(&self) -> usize {
        self.batches.iter().map(|b| b.original).sum()
    }

    pub fn reduced_batch_edges(&self) -> usize {
        self.batches.iter().map(|b| b.reduced).sum()
    }

    pub fn batch_reduction_ratio(&self) -> Option<f64> {
        let orig = self.original_batch_edges();
        (orig > 0).then(|| self.reduced_batch_edges() as f64 / orig as f64)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QrsTimings {
    pub intersection: Duration,
    pub union: Duration,
    pub bounds: Duration,
    pub reduction: Duration,
}

impl QrsTimings {
    pub fn total(&self) -> Duration {
        self.intersection + self.union + self.bounds + self.reduction
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct QrsOptions {
    pub union: UnionStrategy,
}

/// Everything the incremental phases need.
#[derive(Debug, Clone)]
pub struct QrsBundle {
    pub qrs: Graph,
    /// Intersection-graph result; starting values for every snapshot.
    pub bootstrap: ValueArray,
    pub reduced_batches: Vec<AdditionBatch>,
    /// Unreduced batches, kept for differential runs.
    pub batches: Vec<AdditionBatch>,
    pub uvv: UvvSet,
    pub bounds: BoundsPair,
    pub stats: ReductionStats,
    pub timings: QrsTimings,
}

/// Intersection and union, bounds, UVVs, then the reduced graph and batches.
/// Fails with a domain error if any edge weight is outside the algorithm's
/// domain.
pub fn qrs_pipeline(
    series: &SnapshotSeries,
    q: &QueryContext,
    opts: QrsOptions,
) -> Result<QrsBundle> {
    let clock = Instant::now();
    let intersection = build_intersection(series);
    let t_int = clock.elapsed();

    let clock = Instant::now();
    let union = build_union(series);
    let t_union = clock.elapsed();
    q.spec.check_graph(&union)?;

    let clock = Instant::now();
    let bounds = compute_bounds(&intersection, &union, q, opts.union)?;
    let uvv = detect_uvv(&bounds);
    let t_bounds = clock.elapsed();

    let clock = Instant::now();
    let batches = build_addition_batches(series, &intersection);
    let qrs = reduce_intersection(&intersection, &uvv);
    let reduced_batches = reduce_batches(&batches, &uvv);
    let t_reduce = clock.elapsed();

    let sizes: Vec<BatchSizes> = batches
        .iter()
        .zip(&reduced_batches)
        .map(|(a, b)| BatchSizes {
            original: a.len(),
            reduced: b.len(),
        })
        .collect();
    let stats = ReductionStats {
        num_vertices: series.num_vertices(),
        uvv_count: uvv.len(),
        intersection_edges: intersection.edge_count(),
        union_edges: union.edge_count(),
        qrs_edges: qrs.edge_count(),
        removed_intersection_edges: intersection.edge_count() - qrs.edge_count(),
        removed_batch_edges: sizes.iter().map(|s| s.original - s.reduced).sum(),
        batches: sizes,
    };
    Ok(QrsBundle {
        qrs,
        bootstrap: bounds.intersection.clone(),
        reduced_batches,
        batches,
        uvv,
        bounds,
        stats,
        timings: QrsTimings {
            intersection: t_int,
            union: t_union,
            bounds: t_bounds,
            reduction: t_reduce,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::AlgorithmKind;
    use crate::ingest::DeltaBatch;

    const INF: f64 = f64::INFINITY;

    fn t(s: u32, d: u32, w: f64) -> EdgeTriple {
        EdgeTriple::new(s, d, w).unwrap()
    }

    fn example() -> SnapshotSeries {
        let base = vec![t(0, 1, 1.0), t(1, 2, 1.0), t(0, 3, 5.0)];
        let delta = DeltaBatch {
            additions: vec![t(2, 3, 1.0)],
            deletions: vec![t(0, 3, 5.0)],
        };
        SnapshotSeries::materialize(4, &base, &[delta]).unwrap()
    }

    fn query(kind: AlgorithmKind) -> QueryContext {
        QueryContext::new(kind, VertexId(0), 4).unwrap()
    }

    #[test]
    fn bounds_on_small_example() {
        let s = example();
        let b = compute_bounds(
            &build_intersection(&s),
            &build_union(&s),
            &query(AlgorithmKind::Sssp),
            UnionStrategy::Incremental,
        )
        .unwrap();
        assert_eq!(b.intersection.as_slice(), &[0.0, 1.0, 2.0, INF]);
        assert_eq!(b.union.as_slice(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(b.lower(), &b.union);
        assert_eq!(b.upper(), &b.intersection);
    }

    #[test]
    fn maximizing_queries_flip_the_mapping() {
        let s = example();
        for kind in [AlgorithmKind::Sswp, AlgorithmKind::Viterbi] {
            let b = compute_bounds(
                &build_intersection(&s),
                &build_union(&s),
                &query(kind),
                UnionStrategy::Incremental,
            )
            .unwrap();
            assert!(!b.lower_is_union());
            assert_eq!(b.lower(), &b.intersection);
            assert_eq!(b.upper(), &b.union);
        }
    }

    #[test]
    fn union_strategies_agree() {
        let s = example();
        let (i, u) = (build_intersection(&s), build_union(&s));
        for kind in AlgorithmKind::ALL {
            let a = compute_bounds(&i, &u, &query(kind), UnionStrategy::Incremental).unwrap();
            let b = compute_bounds(&i, &u, &query(kind), UnionStrategy::FromScratch).unwrap();
            assert_eq!(a.union, b.union, "{kind}");
        }
    }

    #[test]
    fn equal_graphs_give_equal_bounds() {
        let g = Graph::from_triples(4, [t(0, 1, 2.0), t(1, 3, 1.0)]).unwrap();
        let b = compute_bounds(
            &g,
            &g,
            &query(AlgorithmKind::Sssp),
            UnionStrategy::Incremental,
        )
        .unwrap();
        assert_eq!(b.lower(), b.upper());
        assert_eq!(detect_uvv(&b).len(), 4);
    }

    #[test]
    fn intersection_must_be_within_union() {
        let a = Graph::from_triples(4, [t(0, 1, 2.0)]).unwrap();
        let b = Graph::empty(4);
        assert!(matches!(
            compute_bounds(
                &a,
                &b,
                &query(AlgorithmKind::Sssp),
                UnionStrategy::Incremental
            ),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn uvvs_of_small_example() {
        let s = example();
        let b = compute_bounds(
            &build_intersection(&s),
            &build_union(&s),
            &query(AlgorithmKind::Sssp),
            UnionStrategy::Incremental,
        )
        .unwrap();
        let uvv = detect_uvv(&b);
        assert_eq!(
            uvv.iter().collect::<Vec<_>>(),
            vec![VertexId(0), VertexId(1), VertexId(2)]
        );
        assert_eq!(uvv.fraction(), 0.75);
    }

    #[test]
    fn unreachable_everywhere_is_unchanged() {
        let b = BoundsPair {
            intersection: vec![0.0, INF].into(),
            union: vec![0.0, INF].into(),
            direction: Direction::Minimize,
        };
        assert_eq!(detect_uvv(&b).len(), 2);
    }

    #[test]
    fn reductions() {
        let s = example();
        let inter = build_intersection(&s);
        let uvv = UvvSet::from_members(vec![true, true, true, false]);
        assert_eq!(reduce_intersection(&inter, &uvv).edge_count(), 0);
        assert_eq!(
            reduce_intersection(&inter, &UvvSet::from_members(vec![false; 4])),
            inter
        );
        assert_eq!(
            reduce_intersection(&inter, &UvvSet::from_members(vec![true; 4])).edge_count(),
            0
        );

        let batches = build_addition_batches(&s, &inter);
        assert_eq!(reduce_batches(&batches, &uvv), batches);
        let all = UvvSet::from_members(vec![true; 4]);
        assert!(reduce_batches(&batches, &all)
            .iter()
            .all(AdditionBatch::is_empty));
    }

    #[test]
    fn outgoing_edges_of_uvvs_survive() {
        let g = Graph::from_triples(3, [t(0, 1, 1.0), t(1, 2, 1.0)]).unwrap();
        let uvv = UvvSet::from_members(vec![true, true, false]);
        assert_eq!(
            reduce_intersection(&g, &uvv).triples().collect::<Vec<_>>(),
            vec![t(1, 2, 1.0)]
        );
    }

    #[test]
    fn pipeline_on_small_example() {
        let bundle = qrs_pipeline(
            &example(),
            &query(AlgorithmKind::Sssp),
            QrsOptions::default(),
        )
        .unwrap();
        assert_eq!(bundle.uvv.len(), 3);
        assert_eq!(bundle.qrs.edge_count(), 0);
        assert_eq!(bundle.bootstrap.as_slice(), &[0.0, 1.0, 2.0, INF]);
        assert_eq!(bundle.reduced_batches[0].triples, vec![t(0, 3, 5.0)]);
        assert_eq!(bundle.reduced_batches[1].triples, vec![t(2, 3, 1.0)]);
        assert_eq!(bundle.stats.uvv_fraction(), 0.75);
        assert_eq!(bundle.stats.removed_intersection_edges, 2);
        assert_eq!(bundle.stats.qrs_edge_fraction(), Some(0.0));
    }

    #[test]
    fn pipeline_on_single_snapshot() {
        let s =
            SnapshotSeries::from_edge_sets(3, &[vec![t(0, 1, 2.0), t(1, 2, 2.0), t(2, 0, 1.0)]])
                .unwrap();
        let q = QueryContext::new(AlgorithmKind::Sssp, VertexId(0), 3).unwrap();
        let bundle = qrs_pipeline(&s, &q, QrsOptions::default()).unwrap();
        assert_eq!(bundle.uvv.len(), 3);
        assert_eq!(bundle.qrs.edge_count(), 0);
        assert!(bundle.reduced_batches.iter().all(AdditionBatch::is_empty));
    }

    #[test]
    fn pipeline_rejects_bad_weights() {
        let s = SnapshotSeries::from_edge_sets(2, &[vec![t(0, 1, 0.5)]]).unwrap();
        let q = QueryContext::new(AlgorithmKind::Viterbi, VertexId(0), 2).unwrap();
        assert!(matches!(
            qrs_pipeline(&s, &q, QrsOptions::default()),
            Err(Error::Domain(_))
        ));
    }
}
