//! Monotonic path queries (BFS, SSSP, widest, narrowest, Viterbi) over a
//! sequence of graph snapshots.
//!
//! Results on the intersection and union of all snapshots bound every
//! snapshot's result. Vertices where the bounds meet are final, so their
//! in-edges are dropped from the intersection graph and from every addition
//! batch, and the remaining work is incremental edge additions on that
//! reduced graph, either one snapshot at a time or all at once over a
//! versioned graph.

pub mod algorithms;
pub mod concurrent;
mod error;
pub mod graph;
pub mod incremental;
pub mod ingest;
pub mod metrics;
pub mod mode;
pub mod qrs;
pub mod values;
pub mod version;

pub use algorithms::{
    algorithm_spec, evaluate_full, AlgorithmKind, AlgorithmSpec, Direction, QueryContext,
};
pub use concurrent::{evaluate_concurrent, ConcurrentOptions, EdgeScan, MultiResult, ValueLayout};
pub use error::{Error, Result};
pub use graph::{EdgeTriple, Graph, VertexId, Weight};
pub use incremental::{direct_hop_all, evaluate_incremental_additions, IncrementalSeed};
pub use ingest::{AdditionBatch, DeltaBatch, SnapshotSeries};
pub use mode::{reference_results, run_mode, Mode, ModeRun, RunOptions};
pub use qrs::{
    compute_bounds, detect_uvv, qrs_pipeline, reduce_batches, reduce_intersection, QrsBundle,
    UvvSet,
};
pub use values::ValueArray;
pub use version::{mask_has_snapshot, VersionMask, VersionedEdge, VersionedGraph};
