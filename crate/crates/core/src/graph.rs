//! Vertices, weights, edge triples and the immutable adjacency graph.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Dense, zero-based vertex index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite, non-negative edge weight.
///
/// Equality, hashing and ordering are bit-level, which is well defined because
/// NaN and negative values are rejected and `-0.0` is normalized to `0.0`.
#[derive(Debug, Clone, Copy)]
pub struct Weight(f64);

impl Weight {
    pub const ONE: Weight = Weight(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::Domain(format!("weight {value} is not finite")));
        }
        if value < 0.0 {
            return Err(Error::Domain(format!("weight {value} is negative")));
        }
        // -0.0 < 0.0 is false, so it lands here too
        Ok(Weight(if value == 0.0 { 0.0 } else { value }))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl Eq for Weight {}

impl Hash for Weight {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state)
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A directed weighted edge. The whole triple is the edge's identity: two
/// triples that differ only in weight are different edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeTriple {
    pub src: VertexId,
    pub dst: VertexId,
    pub weight: Weight,
}

impl EdgeTriple {
    pub fn new(src: u32, dst: u32, weight: f64) -> Result<Self> {
        Ok(EdgeTriple {
            src: VertexId(src),
            dst: VertexId(dst),
            weight: Weight::new(weight)?,
        })
    }
}

impl fmt::Display for EdgeTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.src, self.dst, self.weight)
    }
}

/// One entry of an adjacency list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutEdge {
    pub dst: VertexId,
    pub weight: Weight,
}

/// Immutable CSR graph. Each adjacency list is sorted by `(dst, weight)` and
/// holds no duplicate triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    edges: Vec<OutEdge>,
}

impl Graph {
    pub fn empty(num_vertices: usize) -> Self {
        Graph {
            offsets: vec![0; num_vertices + 1],
            edges: Vec::new(),
        }
    }

    /// Builds a graph from a set of triples; duplicates collapse.
    pub fn from_triples<I>(num_vertices: usize, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = EdgeTriple>,
    {
        let mut triples: Vec<EdgeTriple> = triples.into_iter().collect();
        check_vertices(num_vertices, &triples)?;
        triples.par_sort_unstable();
        triples.dedup();
        Ok(Self::from_sorted_unique(num_vertices, &triples))
    }

    /// `triples` must already be sorted, deduplicated and in range.
    pub(crate) fn from_sorted_unique(num_vertices: usize, triples: &[EdgeTriple]) -> Self {
        debug_assert!(triples.windows(2).all(|w| w[0] < w[1]));
        let mut offsets = vec![0usize; num_vertices + 1];
        for t in triples {
            offsets[t.src.index() + 1] += 1;
        }
        for i in 0..num_vertices {
            offsets[i + 1] += offsets[i];
        }
        let edges = triples
            .iter()
            .map(|t| OutEdge {
                dst: t.dst,
                weight: t.weight,
            })
            .collect();
        Graph { offsets, edges }
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn out_edges(&self, v: VertexId) -> &[OutEdge] {
        let i = v.index();
        &self.edges[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        let i = v.index();
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn contains(&self, t: &EdgeTriple) -> bool {
        if t.src.index() >= self.num_vertices() {
            return false;
        }
        let key = OutEdge {
            dst: t.dst,
            weight: t.weight,
        };
        self.out_edges(t.src).binary_search(&key).is_ok()
    }

    /// All edges in `(src, dst, weight)` order.
    pub fn triples(&self) -> impl Iterator<Item = EdgeTriple> + '_ {
        (0..self.num_vertices()).flat_map(move |u| {
            let src = VertexId(u as u32);
            self.out_edges(src).iter().map(move |e| EdgeTriple {
                src,
                dst: e.dst,
                weight: e.weight,
            })
        })
    }

    /// True if every triple of `self` is also in `other`.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.num_vertices() == other.num_vertices() && self.triples().all(|t| other.contains(&t))
    }
}

pub(crate) fn check_vertices(num_vertices: usize, triples: &[EdgeTriple]) -> Result<()> {
    if let Some(t) = triples
        .iter()
        .find(|t| t.src.index() >= num_vertices || t.dst.index() >= num_vertices)
    {
        return Err(Error::Range(format!(
            "edge {t} references a vertex outside 0..{num_vertices}"
        )));
    }
    Ok(())
}
