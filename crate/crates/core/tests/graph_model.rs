mod common;

use std::collections::BTreeSet;

use common::*;
use evograph::ingest::{build_addition_batches, build_intersection};
use evograph::{
    reduce_batches, reduce_intersection, EdgeTriple, Graph, UvvSet, VersionedGraph, VertexId,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn triple_set_round_trip((n, edges) in graph_strategy(8, 20, 4)) {
        let g = Graph::from_triples(n, edges.clone()).unwrap();
        let want: BTreeSet<EdgeTriple> = edges.into_iter().collect();
        let got: Vec<EdgeTriple> = g.triples().collect();
        prop_assert_eq!(got.len(), g.edge_count());
        prop_assert_eq!(got.into_iter().collect::<BTreeSet<_>>(), want);
    }

    #[test]
    fn versioned_graph_embeds_every_snapshot(
        (n, sets) in series_strategy(6, 10, 5),
        drop_mask in prop::collection::vec(any::<bool>(), 6),
    ) {
        let series = make_series(n, &sets);
        let inter = build_intersection(&series);
        let uvv = UvvSet::from_members((0..n).map(|v| drop_mask[v]).collect());
        let qrs = reduce_intersection(&inter, &uvv);
        let batches = reduce_batches(&build_addition_batches(&series, &inter), &uvv);
        let vg = VersionedGraph::<1>::build(&qrs, &batches).unwrap();

        for (i, b) in batches.iter().enumerate() {
            let mut want: BTreeSet<EdgeTriple> = qrs.triples().collect();
            want.extend(b.triples.iter().copied());
            let got: BTreeSet<EdgeTriple> = vg.snapshot_triples(i).unwrap().into_iter().collect();
            prop_assert_eq!(got, want);
        }

        let all = vg.all_mask();
        for v in 0..n {
            let list = vg.out_edges(VertexId(v as u32));
            let first_specific = list.iter().position(|e| e.mask != all).unwrap_or(list.len());
            prop_assert!(list[first_specific..].iter().all(|e| e.mask != all));
            for e in list {
                prop_assert!(!e.mask.is_empty());
                prop_assert!(e.mask.span() <= vg.num_snapshots());
            }
        }
    }
}
