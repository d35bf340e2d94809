//! Per-edge snapshot ownership masks and the versioned adjacency structure
//! used for evaluating all snapshots in one traversal.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{check_vertices, EdgeTriple, Graph, VertexId, Weight};

/// Snapshot-ownership bitmask: bit `i` set means the edge exists in snapshot
/// `i`. `W` 64-bit words give room for `64 * W` snapshots.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct VersionMask<const W: usize = 1> {
    words: [u64; W],
}

impl<const W: usize> VersionMask<W> {
    pub const CAPACITY: usize = 64 * W;

    pub const fn empty() -> Self {
        VersionMask { words: [0; W] }
    }

    /// Mask with bits `0..n` set.
    pub fn all(n: usize) -> Result<Self> {
        check_capacity::<W>(n)?;
        let mut m = Self::empty();
        for (k, word) in m.words.iter_mut().enumerate() {
            let lo = k * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        Ok(m)
    }

    pub fn from_words(words: [u64; W]) -> Self {
        VersionMask { words }
    }

    pub fn words(&self) -> &[u64; W] {
        &self.words
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < Self::CAPACITY && self.words[i / 64] & (1u64 << (i % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Highest set bit plus one, or zero for an empty mask.
    pub fn span(&self) -> usize {
        for k in (0..W).rev() {
            if self.words[k] != 0 {
                return k * 64 + 64 - self.words[k].leading_zeros() as usize;
            }
        }
        0
    }

    /// Set bit positions in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(k * 64 + bit)
            })
        })
    }
}

impl<const W: usize> Default for VersionMask<W> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<const W: usize> fmt::Debug for VersionMask<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VersionMask(")?;
        for w in self.words.iter().rev() {
            write!(f, "{w:064b}")?;
        }
        write!(f, ")")
    }
}

fn check_capacity<const W: usize>(n: usize) -> Result<()> {
    if n > VersionMask::<W>::CAPACITY {
        return Err(Error::Capacity {
            requested: n,
            capacity: VersionMask::<W>::CAPACITY,
        });
    }
    Ok(())
}

/// Whether snapshot `i` of `n` owns edges carrying `mask`.
pub fn mask_has_snapshot<const W: usize>(
    mask: &VersionMask<W>,
    i: usize,
    n: usize,
) -> Result<bool> {
    if i >= n {
        return Err(Error::Range(format!("snapshot {i} not in 0..{n}")));
    }
    Ok(mask.contains(i))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VersionedEdge<const W: usize = 1> {
    pub dst: VertexId,
    pub weight: Weight,
    pub mask: VersionMask<W>,
}

/// The reduced common graph plus every reduced addition batch, with each edge
/// tagged by the snapshots that own it.
///
/// Within each adjacency list the edges owned by every snapshot come first,
/// then the snapshot-specific ones; both runs are sorted by `(dst, weight)`.
#[derive(Debug, Clone)]
pub struct VersionedGraph<const W: usize = 1> {
    num_snapshots: usize,
    all: VersionMask<W>,
    offsets: Vec<usize>,
    // index of the first snapshot-specific edge in each list
    specific_from: Vec<usize>,
    edges: Vec<VersionedEdge<W>>,
}

impl<const W: usize> VersionedGraph<W> {
    /// Builds the versioned graph from the common edges in `common` and one
    /// addition batch per snapshot. Identical triples from different batches
    /// are stored once with the union of their bits.
    pub fn build<B: AsRef<[EdgeTriple]>>(common: &Graph, batches: &[B]) -> Result<Self> {
        let n = batches.len();
        if n == 0 {
            return Err(Error::Config(
                "versioned graph needs at least one snapshot".into(),
            ));
        }
        let all = VersionMask::<W>::all(n)?;
        let nv = common.num_vertices();

        let mut tagged: Vec<(EdgeTriple, usize)> = Vec::new();
        for (i, b) in batches.iter().enumerate() {
            let b = b.as_ref();
            check_vertices(nv, b)?;
            tagged.extend(b.iter().map(|&t| (t, i)));
        }
        tagged.sort_unstable();

        let mut specific: Vec<(EdgeTriple, VersionMask<W>)> = Vec::new();
        for (t, i) in tagged {
            match specific.last_mut() {
                Some((last, mask)) if *last == t => mask.insert(i),
                _ => {
                    let mut mask = VersionMask::empty();
                    mask.insert(i);
                    specific.push((t, mask));
                }
            }
        }
        // a batch edge that is already common adds nothing
        specific.retain(|(t, _)| !common.contains(t));

        let mut offsets = Vec::with_capacity(nv + 1);
        let mut specific_from = Vec::with_capacity(nv);
        let mut edges = Vec::with_capacity(common.edge_count() + specific.len());
        let mut cursor = 0;
        offsets.push(0);
        for u in 0..nv {
            let src = VertexId(u as u32);
            let mut spec_run: Vec<VersionedEdge<W>> = Vec::new();
            while cursor < specific.len() && specific[cursor].0.src == src {
                let (t, mask) = specific[cursor];
                let e = VersionedEdge {
                    dst: t.dst,
                    weight: t.weight,
                    mask,
                };
                if mask == all {
                    // present in every batch, so common after all
                    edges.push(e);
                } else {
                    spec_run.push(e);
                }
                cursor += 1;
            }
            edges.extend(common.out_edges(src).iter().map(|e| VersionedEdge {
                dst: e.dst,
                weight: e.weight,
                mask: all,
            }));
            let from = offsets[u];
            edges[from..].sort_unstable_by_key(|e| (e.dst, e.weight));
            specific_from.push(edges.len());
            edges.extend(spec_run);
            offsets.push(edges.len());
        }

        Ok(VersionedGraph {
            num_snapshots: n,
            all,
            offsets,
            specific_from,
            edges,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_snapshots(&self) -> usize {
        self.num_snapshots
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn all_mask(&self) -> VersionMask<W> {
        self.all
    }

    pub fn is_common(&self, e: &VersionedEdge<W>) -> bool {
        e.mask == self.all
    }

    pub fn out_edges(&self, v: VertexId) -> &[VersionedEdge<W>] {
        let i = v.index();
        &self.edges[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Edges of `v` owned by every snapshot.
    #[inline]
    pub fn common_out_edges(&self, v: VertexId) -> &[VersionedEdge<W>] {
        let i = v.index();
        &self.edges[self.offsets[i]..self.specific_from[i]]
    }

    /// Edges of `v` owned by a strict subset of snapshots.
    #[inline]
    pub fn specific_out_edges(&self, v: VertexId) -> &[VersionedEdge<W>] {
        let i = v.index();
        &self.edges[self.specific_from[i]..self.offsets[i + 1]]
    }

    pub fn snapshot_has_edge(&self, edge: &VersionedEdge<W>, i: usize) -> Result<bool> {
        mask_has_snapshot(&edge.mask, i, self.num_snapshots)
    }

    /// Edge set of snapshot `i`, in `(src, dst, weight)` order.
    pub fn snapshot_triples(&self, i: usize) -> Result<Vec<EdgeTriple>> {
        if i >= self.num_snapshots {
            return Err(Error::Range(format!(
                "snapshot {i} not in 0..{}",
                self.num_snapshots
            )));
        }
        let mut out = Vec::new();
        for u in 0..self.num_vertices() {
            let src = VertexId(u as u32);
            out.extend(
                self.out_edges(src)
                    .iter()
                    .filter(|e| e.mask.contains(i))
                    .map(|e| EdgeTriple {
                        src,
                        dst: e.dst,
                        weight: e.weight,
                    }),
            );
        }
        out.sort_unstable();
        Ok(out)
    }
}
