//! The monotonic path algorithms and the full fixpoint evaluator.

mod engine;
mod spec;

pub use engine::{
    evaluate_full, evaluate_full_on, evaluate_full_with_stats, is_fixpoint, Adjacency, EvalStats,
};
pub(crate) use engine::{propagate, Membership, PARALLEL_FRONTIER};
pub use spec::{algorithm_spec, AlgorithmKind, AlgorithmSpec, Direction, QueryContext};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeTriple, Graph, VertexId};
    use crate::values::ValueArray;

    fn graph(n: usize, edges: &[(u32, u32, f64)]) -> Graph {
        Graph::from_triples(
            n,
            edges
                .iter()
                .map(|&(s, d, w)| EdgeTriple::new(s, d, w).unwrap()),
        )
        .unwrap()
    }

    fn query(kind: AlgorithmKind, n: usize) -> QueryContext {
        QueryContext::new(kind, VertexId(0), n).unwrap()
    }

    const INF: f64 = f64::INFINITY;

    #[test]
    fn intersection_of_small_example() {
        let g = graph(4, &[(0, 1, 1.0), (1, 2, 1.0)]);
        let r = evaluate_full(&g, &query(AlgorithmKind::Sssp, 4));
        assert_eq!(r, ValueArray::new(vec![0.0, 1.0, 2.0, INF]));
    }

    #[test]
    fn union_of_small_example() {
        let g = graph(4, &[(0, 1, 1.0), (1, 2, 1.0), (0, 3, 5.0), (2, 3, 1.0)]);
        let r = evaluate_full(&g, &query(AlgorithmKind::Sssp, 4));
        assert_eq!(r, ValueArray::new(vec![0.0, 1.0, 2.0, 3.0]));
    }

    #[test]
    fn empty_graph() {
        let g = Graph::empty(3);
        for kind in AlgorithmKind::ALL {
            let q = query(kind, 3);
            let r = evaluate_full(&g, &q);
            assert_eq!(
                r.as_slice(),
                &[q.spec.init_source, q.spec.worst, q.spec.worst]
            );
        }
    }

    #[test]
    fn widest_path_picks_detour() {
        let g = graph(3, &[(0, 1, 4.0), (0, 2, 9.0), (2, 1, 7.0)]);
        let r = evaluate_full(&g, &query(AlgorithmKind::Sswp, 3));
        assert_eq!(r.as_slice(), &[INF, 7.0, 9.0]);
    }

    #[test]
    fn cycles_converge() {
        let g = graph(3, &[(0, 1, 2.0), (1, 2, 2.0), (2, 0, 2.0), (2, 1, 1.0)]);
        for kind in AlgorithmKind::ALL {
            let q = query(kind, 3);
            let r = evaluate_full(&g, &q);
            assert!(is_fixpoint(&g, &q, &r), "{kind}");
        }
    }

    #[test]
    fn viterbi_divides_along_path() {
        let g = graph(3, &[(0, 1, 2.0), (1, 2, 4.0), (0, 2, 16.0)]);
        let r = evaluate_full(&g, &query(AlgorithmKind::Viterbi, 3));
        assert_eq!(r.as_slice(), &[1.0, 0.5, 0.125]);
    }

    #[test]
    fn bfs_counts_hops() {
        let g = graph(4, &[(0, 1, 9.0), (1, 2, 9.0), (0, 2, 100.0), (2, 3, 0.5)]);
        let r = evaluate_full(&g, &query(AlgorithmKind::Bfs, 4));
        assert_eq!(r.as_slice(), &[0.0, 1.0, 1.0, 2.0]);
    }

    #[test]
    fn large_frontier_runs_in_parallel() {
        // star into a chain exercises the parallel round path
        let n = 2000u32;
        let mut edges: Vec<(u32, u32, f64)> =
            (1..n).map(|v| (0, v, f64::from(v % 7 + 1))).collect();
        edges.extend((1..n - 1).map(|v| (v, v + 1, 1.0)));
        let g = graph(n as usize, &edges);
        let q = query(AlgorithmKind::Sssp, n as usize);
        let (r, stats) = evaluate_full_with_stats(&g, &q);
        assert!(is_fixpoint(&g, &q, &r));
        assert!(stats.frontier_sizes.iter().any(|&s| s >= PARALLEL_FRONTIER));
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        assert_eq!(pool.install(|| evaluate_full(&g, &q)), r);
    }
}
