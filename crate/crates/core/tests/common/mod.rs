#![allow(dead_code)]

use evograph::{AlgorithmKind, EdgeTriple, SnapshotSeries, ValueArray};
use evograph_oracle::Query;
use proptest::prelude::*;

pub fn t(s: u32, d: u32, w: f64) -> EdgeTriple {
    EdgeTriple::new(s, d, w).unwrap()
}

pub fn oracle_query(kind: AlgorithmKind) -> Query {
    match kind {
        AlgorithmKind::Bfs => Query::Bfs,
        AlgorithmKind::Sssp => Query::Sssp,
        AlgorithmKind::Sswp => Query::Sswp,
        AlgorithmKind::Ssnp => Query::Ssnp,
        AlgorithmKind::Viterbi => Query::Viterbi,
    }
}

pub fn raw(edges: &[EdgeTriple]) -> Vec<(usize, usize, f64)> {
    edges
        .iter()
        .map(|e| (e.src.index(), e.dst.index(), e.weight.get()))
        .collect()
}

pub fn brute_force(
    n: usize,
    edges: &[EdgeTriple],
    source: usize,
    kind: AlgorithmKind,
) -> ValueArray {
    evograph_oracle::path_values(n, &raw(edges), source, oracle_query(kind)).into()
}

pub fn kind_strategy() -> impl Strategy<Value = AlgorithmKind> {
    prop::sample::select(AlgorithmKind::ALL.to_vec())
}

/// `(num_vertices, edges)` with integer weights in `1..=max_w`.
pub fn graph_strategy(
    max_v: usize,
    max_e: usize,
    max_w: u32,
) -> impl Strategy<Value = (usize, Vec<EdgeTriple>)> {
    (1..=max_v).prop_flat_map(move |n| {
        let edge =
            (0..n as u32, 0..n as u32, 1..=max_w).prop_map(|(s, d, w)| t(s, d, f64::from(w)));
        (Just(n), prop::collection::vec(edge, 0..=max_e))
    })
}

/// A pool of candidate edges and, per snapshot, which of them are present.
pub fn series_strategy(
    max_v: usize,
    max_pool: usize,
    max_snapshots: usize,
) -> impl Strategy<Value = (usize, Vec<Vec<EdgeTriple>>)> {
    (graph_strategy(max_v, max_pool, 4), 1..=max_snapshots).prop_flat_map(|((n, pool), k)| {
        let masks = prop::collection::vec(prop::collection::vec(any::<bool>(), pool.len()), k);
        (Just(n), Just(pool), masks).prop_map(|(n, pool, masks)| {
            let sets = masks
                .into_iter()
                .map(|m| {
                    pool.iter()
                        .zip(m)
                        .filter(|(_, keep)| *keep)
                        .map(|(e, _)| *e)
                        .collect()
                })
                .collect();
            (n, sets)
        })
    })
}

pub fn make_series(n: usize, sets: &[Vec<EdgeTriple>]) -> SnapshotSeries {
    SnapshotSeries::from_edge_sets(n, sets).unwrap()
}
