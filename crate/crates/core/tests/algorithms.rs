mod common;

use common::*;
use evograph::algorithms::{evaluate_full_with_stats, is_fixpoint};
use evograph::{
    evaluate_full, AlgorithmKind, EdgeTriple, Graph, QueryContext, ValueArray, VertexId,
};
use proptest::prelude::*;

fn query(kind: AlgorithmKind, source: usize, n: usize) -> QueryContext {
    QueryContext::new(kind, VertexId(source as u32), n).unwrap()
}

/// Every graph on 3 vertices whose arcs (self-loops included) carry weight
/// 1 or 2, or are absent.
#[test]
fn exhaustive_three_vertex_graphs_match_brute_force() {
    let arcs: Vec<(u32, u32)> = (0..3).flat_map(|s| (0..3).map(move |d| (s, d))).collect();
    let mut code = vec![0u8; arcs.len()];
    let mut checked = 0u32;
    loop {
        let edges: Vec<EdgeTriple> = arcs
            .iter()
            .zip(&code)
            .filter(|(_, &c)| c > 0)
            .map(|(&(s, d), &c)| t(s, d, f64::from(c)))
            .collect();
        let g = Graph::from_triples(3, edges.clone()).unwrap();
        for kind in AlgorithmKind::ALL {
            for source in 0..3 {
                let got = evaluate_full(&g, &query(kind, source, 3));
                let want = brute_force(3, &edges, source, kind);
                assert_eq!(got, want, "{kind} source {source} edges {edges:?}");
            }
        }
        checked += 1;
        // odometer over base 3
        let Some(i) = code.iter().position(|&c| c < 2) else {
            break;
        };
        code[i] += 1;
        code[..i].iter_mut().for_each(|c| *c = 0);
    }
    assert_eq!(checked, 3u32.pow(9));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn full_evaluation_matches_brute_force(
        (n, edges) in graph_strategy(8, 14, 4),
        kind in kind_strategy(),
        source_pick in any::<prop::sample::Index>(),
    ) {
        let source = source_pick.index(n);
        let g = Graph::from_triples(n, edges.clone()).unwrap();
        let q = query(kind, source, n);
        let got = evaluate_full(&g, &q);
        prop_assert_eq!(&got, &brute_force(n, &edges, source, kind));
        prop_assert!(is_fixpoint(&g, &q, &got));
    }

    #[test]
    fn fixpoint_is_stable((n, edges) in graph_strategy(8, 20, 4), kind in kind_strategy()) {
        let g = Graph::from_triples(n, edges).unwrap();
        let q = query(kind, 0, n);
        let r = evaluate_full(&g, &q);
        let seed = evograph::IncrementalSeed { base_values: r.clone(), additions: Vec::new() };
        prop_assert_eq!(evograph::evaluate_incremental_additions(&g, &seed, &q).unwrap(), r);
    }

    #[test]
    fn relabelled_graph_gives_relabelled_result(
        (n, edges) in graph_strategy(8, 20, 4),
        kind in kind_strategy(),
        perm_seed in prop::collection::vec(any::<u32>(), 8),
    ) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by_key(|&i| perm_seed[i]);
        let moved: Vec<EdgeTriple> = edges
            .iter()
            .map(|e| t(perm[e.src.index()] as u32, perm[e.dst.index()] as u32, e.weight.get()))
            .collect();
        let a = evaluate_full(&Graph::from_triples(n, edges).unwrap(), &query(kind, 0, n));
        let b = evaluate_full(&Graph::from_triples(n, moved).unwrap(), &query(kind, perm[0], n));
        for (v, &moved_to) in perm.iter().enumerate() {
            prop_assert_eq!(a.as_slice()[v].to_bits(), b.as_slice()[moved_to].to_bits());
        }
    }

    #[test]
    fn removing_edges_never_improves(
        (n, edges) in graph_strategy(8, 20, 4),
        keep in prop::collection::vec(any::<bool>(), 20),
        kind in kind_strategy(),
    ) {
        let sub: Vec<EdgeTriple> = edges.iter().zip(&keep).filter(|(_, k)| **k).map(|(e, _)| *e).collect();
        let q = query(kind, 0, n);
        let full = evaluate_full(&Graph::from_triples(n, edges).unwrap(), &q);
        let part = evaluate_full(&Graph::from_triples(n, sub).unwrap(), &q);
        for v in 0..n {
            let (a, b) = (full.as_slice()[v], part.as_slice()[v]);
            prop_assert!(!q.spec.better(b, a), "vertex {v}: subgraph {b} beats {a}");
        }
    }
}

#[test]
fn thread_count_does_not_change_results() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let n = 3000;
    let edges: Vec<EdgeTriple> = (0..20_000)
        .map(|_| {
            t(
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                f64::from(rng.gen_range(1..=10u32)),
            )
        })
        .collect();
    let g = Graph::from_triples(n as usize, edges).unwrap();
    for kind in AlgorithmKind::ALL {
        let q = query(kind, 0, n as usize);
        let (reference, stats) = evaluate_full_with_stats(&g, &q);
        assert!(
            stats.frontier_sizes.iter().any(|&s| s >= 256),
            "{kind} never ran a parallel round"
        );
        for threads in [1, 2, 4, 8] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let r: ValueArray = pool.install(|| evaluate_full(&g, &q));
            assert_eq!(r, reference, "{kind} with {threads} threads");
        }
    }
}
