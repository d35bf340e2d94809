//! Per-vertex query results.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::algorithms::Direction;
use crate::graph::VertexId;

/// One value per vertex for one graph or snapshot.
///
/// Equality is bit-level on every entry.
#[derive(Clone)]
pub struct ValueArray {
    values: Vec<f64>,
}

impl ValueArray {
    pub fn new(values: Vec<f64>) -> Self {
        ValueArray { values }
    }

    pub fn filled(len: usize, value: f64) -> Self {
        ValueArray {
            values: vec![value; len],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, v: VertexId) -> f64 {
        self.values[v.index()]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied()
    }

    /// First vertex whose value differs bitwise from `other`.
    pub fn first_difference(&self, other: &ValueArray) -> Option<VertexId> {
        if self.len() != other.len() {
            return Some(VertexId(self.len().min(other.len()) as u32));
        }
        self.values
            .iter()
            .zip(&other.values)
            .position(|(a, b)| a.to_bits() != b.to_bits())
            .map(|i| VertexId(i as u32))
    }
}

impl PartialEq for ValueArray {
    fn eq(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }
}

impl Eq for ValueArray {}

impl fmt::Debug for ValueArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.values).finish()
    }
}

impl From<Vec<f64>> for ValueArray {
    fn from(values: Vec<f64>) -> Self {
        ValueArray::new(values)
    }
}

/// Shared value cells with better-only atomic replacement.
pub(crate) struct AtomicValues {
    cells: Vec<AtomicU64>,
}

impl AtomicValues {
    pub(crate) fn from_slice(values: &[f64]) -> Self {
        AtomicValues {
            cells: values.iter().map(|v| AtomicU64::new(v.to_bits())).collect(),
        }
    }

    pub(crate) fn repeated(values: &[f64], times: usize) -> Self {
        let mut cells = Vec::with_capacity(values.len() * times);
        for _ in 0..times {
            cells.extend(values.iter().map(|v| AtomicU64::new(v.to_bits())));
        }
        AtomicValues { cells }
    }

    pub(crate) fn interleaved(values: &[f64], times: usize) -> Self {
        let mut cells = Vec::with_capacity(values.len() * times);
        for v in values {
            cells.extend((0..times).map(|_| AtomicU64::new(v.to_bits())));
        }
        AtomicValues { cells }
    }

    #[inline]
    pub(crate) fn load(&self, i: usize) -> f64 {
        f64::from_bits(self.cells[i].load(Ordering::Relaxed))
    }

    /// Replaces cell `i` with `candidate` iff the candidate is strictly
    /// better. Returns whether the cell changed. Concurrent improvements are
    /// never lost: a losing writer retries against the newer value.
    #[inline]
    pub(crate) fn improve(&self, i: usize, candidate: f64, direction: Direction) -> bool {
        let cell = &self.cells[i];
        let mut current = cell.load(Ordering::Relaxed);
        loop {
            if !direction.better(candidate, f64::from_bits(current)) {
                return false;
            }
            match cell.compare_exchange_weak(
                current,
                candidate.to_bits(),
                Ordering::Relaxed,
                Ordering::Relaxed,
            ) {
                Ok(_) => return true,
                Err(seen) => current = seen,
            }
        }
    }

    pub(crate) fn to_vec(&self) -> Vec<f64> {
        self.cells
            .iter()
            .map(|c| f64::from_bits(c.load(Ordering::Relaxed)))
            .collect()
    }
}
