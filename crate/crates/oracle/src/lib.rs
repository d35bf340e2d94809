//! Brute-force reference answers for monotonic path queries.
//!
//! Everything here is deliberately naive: values are obtained by enumerating
//! every simple path from the source and folding the edge function along it.
//! Nothing in this crate shares code with the engine it is used to check.

/// The five path queries, restated independently of the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Query {
    Bfs,
    Sssp,
    Sswp,
    Ssnp,
    Viterbi,
}

impl Query {
    pub const ALL: [Query; 5] = [
        Query::Bfs,
        Query::Sssp,
        Query::Sswp,
        Query::Ssnp,
        Query::Viterbi,
    ];

    fn maximizes(self) -> bool {
        matches!(self, Query::Sswp | Query::Viterbi)
    }

    pub fn source_value(self) -> f64 {
        match self {
            Query::Bfs | Query::Sssp | Query::Ssnp => 0.0,
            Query::Sswp => f64::INFINITY,
            Query::Viterbi => 1.0,
        }
    }

    pub fn unreachable_value(self) -> f64 {
        if self.maximizes() {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn extend(self, val: f64, w: f64) -> f64 {
        match self {
            Query::Bfs => val + 1.0,
            Query::Sssp => val + w,
            Query::Sswp => val.min(w),
            Query::Ssnp => val.max(w),
            Query::Viterbi => val / w,
        }
    }

    fn prefer(self, a: f64, b: f64) -> f64 {
        if self.maximizes() {
            a.max(b)
        } else {
            a.min(b)
        }
    }
}

/// Value of every vertex: best fold over all simple paths from `source`.
///
/// `edges` are `(src, dst, weight)`; parallel edges and self-loops are allowed.
/// Exponential in the worst case; intended for graphs with a handful of vertices.
pub fn path_values(
    num_vertices: usize,
    edges: &[(usize, usize, f64)],
    source: usize,
    q: Query,
) -> Vec<f64> {
    let mut out: Vec<Vec<(usize, f64)>> = vec![Vec::new(); num_vertices];
    for &(u, v, w) in edges {
        out[u].push((v, w));
    }
    let mut best = vec![q.unreachable_value(); num_vertices];
    let mut on_path = vec![false; num_vertices];
    best[source] = q.source_value();
    on_path[source] = true;
    walk(&out, source, q.source_value(), q, &mut on_path, &mut best);
    best
}

fn walk(
    out: &[Vec<(usize, f64)>],
    at: usize,
    val: f64,
    q: Query,
    on_path: &mut [bool],
    best: &mut [f64],
) {
    for &(next, w) in &out[at] {
        if on_path[next] {
            continue;
        }
        let extended = q.extend(val, w);
        best[next] = q.prefer(best[next], extended);
        on_path[next] = true;
        walk(out, next, extended, q, on_path, best);
        on_path[next] = false;
    }
}

/// Bellman-Ford style relaxation to a fixpoint, sweeping all edges until
/// nothing changes. Polynomial, so usable on medium graphs.
pub fn relaxation_values(
    num_vertices: usize,
    edges: &[(usize, usize, f64)],
    source: usize,
    q: Query,
) -> Vec<f64> {
    let mut vals = vec![q.unreachable_value(); num_vertices];
    vals[source] = q.source_value();
    loop {
        let mut changed = false;
        for &(u, v, w) in edges {
            let cand = q.extend(vals[u], w);
            let merged = q.prefer(vals[v], cand);
            if merged.to_bits() != vals[v].to_bits() {
                vals[v] = merged;
                changed = true;
            }
        }
        if !changed {
            return vals;
        }
    }
}

/// Bit-level comparison of two value vectors; `None` if identical, else the
/// first differing index.
pub fn first_difference(a: &[f64], b: &[f64]) -> Option<usize> {
    if a.len() != b.len() {
        return Some(a.len().min(b.len()));
    }
    a.iter()
        .zip(b)
        .position(|(x, y)| x.to_bits() != y.to_bits())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_paths_on_small_graph() {
        let edges = [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 5.0)];
        assert_eq!(
            path_values(4, &edges, 0, Query::Sssp),
            vec![0.0, 1.0, 2.0, 3.0]
        );
    }

    #[test]
    fn widest_path_takes_both_routes_into_account() {
        let edges = [(0, 1, 4.0), (0, 2, 9.0), (2, 1, 7.0)];
        assert_eq!(path_values(3, &edges, 0, Query::Sswp)[1], 7.0);
    }

    #[test]
    fn relaxation_matches_enumeration() {
        let edges = [
            (0, 1, 2.0),
            (1, 0, 1.0),
            (1, 2, 3.0),
            (0, 2, 6.0),
            (2, 2, 1.0),
        ];
        for q in Query::ALL {
            assert_eq!(
                first_difference(
                    &path_values(3, &edges, 0, q),
                    &relaxation_values(3, &edges, 0, q)
                ),
                None,
                "{q:?}"
            );
        }
    }
}
