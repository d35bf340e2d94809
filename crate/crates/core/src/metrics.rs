//! Unchanged-vertex statistics measured against per-snapshot results.

use crate::qrs::UvvSet;
use crate::values::ValueArray;

/// Per vertex: same value (bitwise) in every snapshot.
pub fn unchanged_vertices(results: &[ValueArray]) -> Vec<bool> {
    let Some(first) = results.first() else {
        return Vec::new();
    };
    (0..first.len())
        .map(|v| {
            let x = first.as_slice()[v].to_bits();
            results.iter().all(|r| r.as_slice()[v].to_bits() == x)
        })
        .collect()
}

pub fn unchanged_fraction(results: &[ValueArray]) -> f64 {
    let u = unchanged_vertices(results);
    if u.is_empty() {
        return 1.0;
    }
    u.iter().filter(|&&b| b).count() as f64 / u.len() as f64
}

/// Detected UVVs over truly unchanged vertices; 1 when nothing is unchanged.
pub fn uvv_recall(uvv: &UvvSet, unchanged: &[bool]) -> f64 {
    let truth = unchanged.iter().filter(|&&b| b).count();
    if truth == 0 {
        return 1.0;
    }
    let found = unchanged
        .iter()
        .enumerate()
        .filter(|&(v, &b)| b && uvv.contains(crate::graph::VertexId(v as u32)))
        .count();
    found as f64 / truth as f64
}

/// UVVs whose value is not actually the same in every snapshot.
pub fn false_uvvs(uvv: &UvvSet, unchanged: &[bool]) -> Vec<usize> {
    uvv.iter()
        .map(|v| v.index())
        .filter(|&v| !unchanged[v])
        .collect()
}
