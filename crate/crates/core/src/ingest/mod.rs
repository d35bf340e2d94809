//! Reading traces and deriving the intersection graph, union graph and
//! addition batches.

mod format;
mod generate;
mod manifest;
mod series;

pub use format::{
    parse_delta_batch, parse_edge_list, parse_raw_delta, parse_raw_edges, write_delta_batch,
    write_edge_list, IdMap, RawDelta, RawEdge,
};
pub use generate::{generate_evolving, GeneratorConfig};
pub use manifest::{load_manifest, write_trace, Dataset, Manifest};
pub use series::{
    build_addition_batches, build_intersection, build_union, triple_set, AdditionBatch, DeltaBatch,
    SnapshotSeries,
};

/// Applies `deltas` to `base`; see [`SnapshotSeries::materialize`].
pub fn materialize_snapshots(
    num_vertices: usize,
    base: &[crate::graph::EdgeTriple],
    deltas: &[DeltaBatch],
) -> crate::Result<SnapshotSeries> {
    SnapshotSeries::materialize(num_vertices, base, deltas)
}
