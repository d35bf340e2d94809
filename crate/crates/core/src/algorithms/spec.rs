use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmKind {
    Bfs,
    Sssp,
    Sswp,
    Ssnp,
    Viterbi,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 5] = [
        AlgorithmKind::Bfs,
        AlgorithmKind::Sssp,
        AlgorithmKind::Sswp,
        AlgorithmKind::Ssnp,
        AlgorithmKind::Viterbi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Bfs => "bfs",
            AlgorithmKind::Sssp => "sssp",
            AlgorithmKind::Sswp => "sswp",
            AlgorithmKind::Ssnp => "ssnp",
            AlgorithmKind::Viterbi => "viterbi",
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgorithmKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown algorithm `{s}`")))
    }
}

/// Which way values improve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    /// `a` strictly better than `b`.
    #[inline]
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Minimize => a < b,
            Direction::Maximize => a > b,
        }
    }

    /// `a` better than or equal to `b`.
    #[inline]
    pub fn at_least_as_good(self, a: f64, b: f64) -> bool {
        !self.better(b, a)
    }
}

/// A monotonic path algorithm: source and unreachable values, the edge
/// function folded along paths, and the direction in which values improve.
///
/// Every edge function here is non-improving (`f(val, w)` is never better
/// than `val`), which is what guarantees a unique fixpoint on cyclic graphs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgorithmSpec {
    pub kind: AlgorithmKind,
    pub direction: Direction,
    pub init_source: f64,
    /// Value of vertices not reachable from the source.
    pub worst: f64,
}

impl AlgorithmSpec {
    pub fn new(kind: AlgorithmKind) -> Self {
        use AlgorithmKind::*;
        let (direction, init_source, worst) = match kind {
            Bfs | Sssp | Ssnp => (Direction::Minimize, 0.0, f64::INFINITY),
            Sswp => (Direction::Maximize, f64::INFINITY, 0.0),
            Viterbi => (Direction::Maximize, 1.0, 0.0),
        };
        AlgorithmSpec {
            kind,
            direction,
            init_source,
            worst,
        }
    }

    /// Candidate value for the sink of an edge. No domain check; weights are
    /// validated once per graph with [`AlgorithmSpec::check_graph`].
    #[inline]
    pub fn apply(&self, val: f64, w: f64) -> f64 {
        match self.kind {
            AlgorithmKind::Bfs => val + 1.0,
            AlgorithmKind::Sssp => val + w,
            AlgorithmKind::Sswp => val.min(w),
            AlgorithmKind::Ssnp => val.max(w),
            AlgorithmKind::Viterbi => val / w,
        }
    }

    pub fn edge_function(&self, val: f64, w: Weight) -> Result<f64> {
        self.check_weight(w)?;
        Ok(self.apply(val, w.get()))
    }

    pub fn check_weight(&self, w: Weight) -> Result<()> {
        let w = w.get();
        let ok = match self.kind {
            AlgorithmKind::Bfs | AlgorithmKind::Sswp | AlgorithmKind::Ssnp => true,
            AlgorithmKind::Sssp => w > 0.0,
            AlgorithmKind::Viterbi => w >= 1.0,
        };
        if ok {
            Ok(())
        } else {
            let need = match self.kind {
                AlgorithmKind::Sssp => "> 0",
                _ => ">= 1",
            };
            Err(Error::Domain(format!(
                "{} requires weights {need}, found {w}",
                self.kind
            )))
        }
    }

    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        g.triples().try_for_each(|t| {
            self.check_weight(t.weight)
                .map_err(|e| Error::Domain(format!("edge {t}: {e}")))
        })
    }

    #[inline]
    pub fn better(&self, a: f64, b: f64) -> bool {
        self.direction.better(a, b)
    }
}

pub fn algorithm_spec(name: &str) -> Result<AlgorithmSpec> {
    Ok(AlgorithmSpec::new(name.parse()?))
}

/// An algorithm together with its source vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryContext {
    pub spec: AlgorithmSpec,
    pub source: VertexId,
}

impl QueryContext {
    pub fn new(kind: AlgorithmKind, source: VertexId, num_vertices: usize) -> Result<Self> {
        if source.index() >= num_vertices {
            return Err(Error::Range(format!(
                "source {source} not in 0..{num_vertices}"
            )));
        }
        Ok(QueryContext {
            spec: AlgorithmSpec::new(kind),
            source,
        })
    }
}
