mod common;

use std::collections::BTreeSet;

use common::*;
use evograph::ingest::{
    build_addition_batches, build_intersection, build_union, parse_delta_batch, parse_edge_list,
    write_delta_batch, write_edge_list, IdMap,
};
use evograph::ingest::{generate_evolving, GeneratorConfig};
use evograph::{DeltaBatch, EdgeTriple, Error, SnapshotSeries};
use proptest::prelude::*;

fn set(edges: &[EdgeTriple]) -> BTreeSet<EdgeTriple> {
    edges.iter().copied().collect()
}

proptest! {
    #[test]
    fn intersection_union_and_batches_are_consistent((n, sets) in series_strategy(6, 14, 6)) {
        let series = make_series(n, &sets);
        let inter = set(&build_intersection(&series).triples().collect::<Vec<_>>());
        let union = set(&build_union(&series).triples().collect::<Vec<_>>());
        let batches = build_addition_batches(&series, &build_intersection(&series));
        let mut covered = inter.clone();
        for (i, s) in sets.iter().enumerate() {
            let s = set(s);
            prop_assert!(inter.is_subset(&s));
            prop_assert!(s.is_subset(&union));
            let b = set(&batches[i].triples);
            prop_assert!(b.is_disjoint(&inter));
            let rebuilt: BTreeSet<EdgeTriple> = inter.union(&b).copied().collect();
            prop_assert_eq!(&rebuilt, &s);
            covered.extend(b);
        }
        prop_assert_eq!(covered, union);
    }

    #[test]
    fn transition_deltas_replay_the_series((n, sets) in series_strategy(6, 14, 6)) {
        let series = make_series(n, &sets);
        let replayed = SnapshotSeries::materialize(n, &series.edge_set(0).unwrap(), &series.transition_deltas()).unwrap();
        for i in 0..series.len() {
            prop_assert_eq!(replayed.edge_set(i).unwrap(), series.edge_set(i).unwrap());
        }
    }

    #[test]
    fn text_formats_round_trip((n, sets) in series_strategy(6, 14, 3)) {
        let series = make_series(n, &sets);
        let ids = IdMap::Identity(n);
        let base = series.edge_set(0).unwrap();
        let (parsed, compact) = parse_edge_list(&write_edge_list(&base, &ids)).unwrap();
        let back: Vec<EdgeTriple> = parsed
            .iter()
            .map(|e| ids.to_triple(&compact.to_raw(e)).unwrap())
            .collect();
        prop_assert_eq!(set(&back), set(&base));
        for d in series.transition_deltas() {
            let again = parse_delta_batch(&write_delta_batch(&d, &ids), &ids).unwrap();
            prop_assert_eq!(set(&again.additions), set(&d.additions));
            prop_assert_eq!(set(&again.deletions), set(&d.deletions));
        }
    }
}

#[test]
fn inconsistent_deltas_name_the_batch() {
    let base = vec![t(0, 1, 1.0)];
    let ok = DeltaBatch {
        additions: vec![t(1, 2, 1.0)],
        deletions: vec![],
    };
    let bad_delete = DeltaBatch {
        additions: vec![],
        deletions: vec![t(2, 0, 1.0)],
    };
    let err = SnapshotSeries::materialize(3, &base, &[ok.clone(), bad_delete]).unwrap_err();
    assert!(matches!(err, Error::Consistency { batch: 2, .. }), "{err}");
    let bad_add = DeltaBatch {
        additions: vec![t(0, 1, 1.0)],
        deletions: vec![],
    };
    let err = SnapshotSeries::materialize(3, &base, &[bad_add]).unwrap_err();
    assert!(matches!(err, Error::Consistency { batch: 1, .. }), "{err}");
    // same endpoints, different weight: a different edge
    let reweighted = DeltaBatch {
        additions: vec![t(0, 1, 2.0)],
        deletions: vec![],
    };
    assert!(SnapshotSeries::materialize(3, &base, &[reweighted]).is_ok());
}

#[test]
fn generator_is_deterministic_and_consistent() {
    let cfg = GeneratorConfig {
        num_vertices: 200,
        num_edges: 1000,
        transitions: 6,
        batch_size: 50,
        ..Default::default()
    };
    let a = generate_evolving(&cfg).unwrap();
    assert_eq!(a, generate_evolving(&cfg).unwrap());
    let other = generate_evolving(&GeneratorConfig {
        seed: 2,
        ..cfg.clone()
    })
    .unwrap();
    assert_ne!(a, other);

    let (base, deltas) = a;
    assert_eq!(base.len(), 1000);
    assert_eq!(deltas.len(), 6);
    let series = SnapshotSeries::materialize(200, &base, &deltas).unwrap();
    assert_eq!(series.len(), 7);
    for (i, d) in deltas.iter().enumerate() {
        assert_eq!(d.additions.len(), 25);
        assert_eq!(d.deletions.len(), 25);
        assert_eq!(series.edge_set(i + 1).unwrap().len(), 1000);
        assert!(d
            .additions
            .iter()
            .chain(&d.deletions)
            .all(|e| e.src != e.dst));
    }
}
