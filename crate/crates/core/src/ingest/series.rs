//! Snapshot series and the graphs derived from them: intersection, union and
//! per-snapshot addition batches.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::{check_vertices, EdgeTriple, Graph};

/// Edge additions and deletions turning one snapshot into the next.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeltaBatch {
    pub additions: Vec<EdgeTriple>,
    pub deletions: Vec<EdgeTriple>,
}

impl DeltaBatch {
    pub fn is_empty(&self) -> bool {
        self.additions.is_empty() && self.deletions.is_empty()
    }
}

/// Edges that must be added to the intersection graph to obtain one snapshot.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdditionBatch {
    pub snapshot: usize,
    pub triples: Vec<EdgeTriple>,
}

impl AdditionBatch {
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }
}

impl AsRef<[EdgeTriple]> for AdditionBatch {
    fn as_ref(&self) -> &[EdgeTriple] {
        &self.triples
    }
}

/// Snapshots `E_0..E_k` over a shared vertex universe.
///
/// Stored as the sorted list of every distinct triple together with a
/// presence bit row per triple, so memory is proportional to the union graph
/// rather than to the sum of snapshot sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnapshotSeries {
    num_vertices: usize,
    len: usize,
    words: usize,
    triples: Vec<EdgeTriple>,
    presence: Vec<u64>,
}

fn words_for(len: usize) -> usize {
    len.div_ceil(64).max(1)
}

impl SnapshotSeries {
    /// One edge set per snapshot. Duplicates within a set collapse.
    pub fn from_edge_sets(num_vertices: usize, sets: &[Vec<EdgeTriple>]) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::Config(
                "a snapshot series needs at least one snapshot".into(),
            ));
        }
        let mut tagged = Vec::new();
        for (i, set) in sets.iter().enumerate() {
            check_vertices(num_vertices, set)?;
            tagged.extend(set.iter().map(|&t| (t, i, i + 1)));
        }
        Ok(Self::from_intervals(num_vertices, sets.len(), tagged))
    }

    /// Applies `deltas` in order to `base`: `E_{i+1} = (E_i \ del) ∪ add`.
    ///
    /// Every deletion must name a triple of `E_i` and every addition a triple
    /// absent from it; violations report the 1-based index of the batch.
    pub fn materialize(
        num_vertices: usize,
        base: &[EdgeTriple],
        deltas: &[DeltaBatch],
    ) -> Result<Self> {
        check_vertices(num_vertices, base)?;
        let len = deltas.len() + 1;
        // triple -> snapshot where its current presence interval began
        let mut open: HashMap<EdgeTriple, usize> = base.iter().map(|&t| (t, 0)).collect();
        let mut intervals = Vec::new();

        for (k, delta) in deltas.iter().enumerate() {
            let batch = k + 1;
            check_vertices(num_vertices, &delta.additions)?;
            check_vertices(num_vertices, &delta.deletions)?;
            if let Some(t) = delta.deletions.iter().find(|t| !open.contains_key(t)) {
                return Err(Error::Consistency {
                    batch,
                    reason: "deletes absent edge",
                    triple: *t,
                });
            }
            if let Some(t) = delta.additions.iter().find(|t| open.contains_key(t)) {
                return Err(Error::Consistency {
                    batch,
                    reason: "adds present edge",
                    triple: *t,
                });
            }
            for t in &delta.deletions {
                if let Some(start) = open.remove(t) {
                    intervals.push((*t, start, batch));
                }
            }
            for t in &delta.additions {
                open.entry(*t).or_insert(batch);
            }
        }
        intervals.extend(open.into_iter().map(|(t, start)| (t, start, len)));
        Ok(Self::from_intervals(num_vertices, len, intervals))
    }

    /// `intervals` are `(triple, first snapshot, one past last snapshot)`.
    fn from_intervals(
        num_vertices: usize,
        len: usize,
        mut intervals: Vec<(EdgeTriple, usize, usize)>,
    ) -> Self {
        intervals.sort_unstable();
        let words = words_for(len);
        let mut triples: Vec<EdgeTriple> = Vec::new();
        let mut presence: Vec<u64> = Vec::new();
        for (t, start, end) in intervals {
            if triples.last() != Some(&t) {
                triples.push(t);
                presence.extend(std::iter::repeat_n(0, words));
            }
            let row = presence.len() - words;
            for i in start..end {
                presence[row + i / 64] |= 1u64 << (i % 64);
            }
        }
        SnapshotSeries {
            num_vertices,
            len,
            words,
            triples,
            presence,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// Number of snapshots.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Every triple present in at least one snapshot, sorted.
    pub fn distinct_triples(&self) -> &[EdgeTriple] {
        &self.triples
    }

    fn row(&self, k: usize) -> &[u64] {
        &self.presence[k * self.words..(k + 1) * self.words]
    }

    fn row_has(&self, k: usize, i: usize) -> bool {
        self.row(k)[i / 64] & (1u64 << (i % 64)) != 0
    }

    fn row_is_full(&self, k: usize) -> bool {
        let row = self.row(k);
        (0..self.words).all(|w| {
            let lo = w * 64;
            let want = if self.len >= lo + 64 {
                u64::MAX
            } else {
                (1u64 << (self.len - lo)) - 1
            };
            row[w] == want
        })
    }

    pub fn contains(&self, i: usize, t: &EdgeTriple) -> bool {
        i < self.len
            && self
                .triples
                .binary_search(t)
                .is_ok_and(|k| self.row_has(k, i))
    }

    /// Snapshots containing `t`, ascending.
    pub fn presence_of(&self, t: &EdgeTriple) -> Vec<usize> {
        match self.triples.binary_search(t) {
            Ok(k) => (0..self.len).filter(|&i| self.row_has(k, i)).collect(),
            Err(_) => Vec::new(),
        }
    }

    /// Edge set of snapshot `i`, sorted.
    pub fn edge_set(&self, i: usize) -> Result<Vec<EdgeTriple>> {
        if i >= self.len {
            return Err(Error::Range(format!("snapshot {i} not in 0..{}", self.len)));
        }
        Ok(self
            .triples
            .iter()
            .enumerate()
            .filter(|&(k, _)| self.row_has(k, i))
            .map(|(_, t)| *t)
            .collect())
    }

    pub fn snapshot_graph(&self, i: usize) -> Result<Graph> {
        Ok(Graph::from_sorted_unique(
            self.num_vertices,
            &self.edge_set(i)?,
        ))
    }

    /// The first `k` snapshots.
    pub fn prefix(&self, k: usize) -> Result<SnapshotSeries> {
        if k == 0 || k > self.len {
            return Err(Error::Range(format!("window {k} not in 1..={}", self.len)));
        }
        let mut intervals = Vec::new();
        for (row, t) in self.triples.iter().enumerate() {
            for i in 0..k {
                if self.row_has(row, i) {
                    intervals.push((*t, i, i + 1));
                }
            }
        }
        Ok(Self::from_intervals(self.num_vertices, k, intervals))
    }

    /// Re-derives the per-transition deltas, each list sorted.
    pub fn transition_deltas(&self) -> Vec<DeltaBatch> {
        (1..self.len)
            .map(|i| {
                let mut batch = DeltaBatch::default();
                for (k, t) in self.triples.iter().enumerate() {
                    match (self.row_has(k, i - 1), self.row_has(k, i)) {
                        (false, true) => batch.additions.push(*t),
                        (true, false) => batch.deletions.push(*t),
                        _ => {}
                    }
                }
                batch
            })
            .collect()
    }
}

/// Edges present in every snapshot.
pub fn build_intersection(series: &SnapshotSeries) -> Graph {
    let common: Vec<EdgeTriple> = series
        .triples
        .iter()
        .enumerate()
        .filter(|&(k, _)| series.row_is_full(k))
        .map(|(_, t)| *t)
        .collect();
    Graph::from_sorted_unique(series.num_vertices, &common)
}

/// Edges present in at least one snapshot.
pub fn build_union(series: &SnapshotSeries) -> Graph {
    Graph::from_sorted_unique(series.num_vertices, &series.triples)
}

/// `E_i \ E∩` for every snapshot `i`, each batch sorted.
pub fn build_addition_batches(series: &SnapshotSeries, intersection: &Graph) -> Vec<AdditionBatch> {
    let mut batches: Vec<AdditionBatch> = (0..series.len)
        .map(|snapshot| AdditionBatch {
            snapshot,
            triples: Vec::new(),
        })
        .collect();
    for (k, t) in series.triples.iter().enumerate() {
        if intersection.contains(t) {
            continue;
        }
        for (i, b) in batches.iter_mut().enumerate() {
            if series.row_has(k, i) {
                b.triples.push(*t);
            }
        }
    }
    batches
}

/// Set view used by tests and the CLI's batch statistics.
pub fn triple_set(triples: &[EdgeTriple]) -> HashSet<EdgeTriple> {
    triples.iter().copied().collect()
}
