//! JSON manifest naming a trace's files.
//!
//! Either `base` plus ordered `deltas`, or a full edge list per snapshot in
//! `snapshots`. Paths are relative to the manifest's directory. When
//! `num_vertices` is given, external ids are used as-is and must lie below
//! it; otherwise ids are compacted by rank over every file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::EdgeTriple;
use crate::ingest::format::{
    parse_raw_delta, parse_raw_edges, write_delta_batch, write_edge_list, IdMap, RawEdge,
};
use crate::ingest::series::{DeltaBatch, SnapshotSeries};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_vertices: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub deltas: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub snapshots: Vec<String>,
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Self> {
        let m: Manifest =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("manifest: {e}")))?;
        match (&m.base, m.snapshots.is_empty()) {
            (Some(_), true) | (None, false) => {}
            (Some(_), false) => {
                return Err(Error::Format(
                    "manifest has both `base` and `snapshots`".into(),
                ))
            }
            (None, true) => {
                return Err(Error::Format("manifest needs `base` or `snapshots`".into()))
            }
        }
        if m.base.is_none() && !m.deltas.is_empty() {
            return Err(Error::Format("`deltas` require a `base`".into()));
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }
}

/// A loaded trace.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub series: SnapshotSeries,
    pub ids: IdMap,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        Error::Domain(m) => Error::Domain(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn to_triples(ids: &IdMap, raw: &[RawEdge]) -> Result<Vec<EdgeTriple>> {
    raw.iter().map(|e| ids.to_triple(e)).collect()
}

pub fn load_manifest(path: &Path) -> Result<Dataset> {
    let manifest = Manifest::from_json(&read(path)?)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let resolve = |rel: &str| dir.join(rel);

    let make_ids = |all: &mut dyn Iterator<Item = u64>| match manifest.num_vertices {
        Some(n) => IdMap::Identity(n),
        None => IdMap::compact(all),
    };

    if let Some(base) = &manifest.base {
        let base_path = resolve(base);
        let base_raw = in_file(&base_path, parse_raw_edges(&read(&base_path)?))?;
        let mut raw_deltas = Vec::with_capacity(manifest.deltas.len());
        for d in &manifest.deltas {
            let p = resolve(d);
            raw_deltas.push(in_file(&p, parse_raw_delta(&read(&p)?))?);
        }
        let ids = make_ids(
            &mut base_raw
                .iter()
                .flat_map(|e| [e.src, e.dst])
                .chain(raw_deltas.iter().flat_map(|d| d.ids())),
        );
        let base = to_triples(&ids, &base_raw)?;
        let deltas = raw_deltas
            .iter()
            .map(|d| {
                Ok(DeltaBatch {
                    additions: to_triples(&ids, &d.additions)?,
                    deletions: to_triples(&ids, &d.deletions)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let series = SnapshotSeries::materialize(ids.len(), &base, &deltas)?;
        Ok(Dataset { series, ids })
    } else {
        let mut raw_sets = Vec::with_capacity(manifest.snapshots.len());
        for s in &manifest.snapshots {
            let p = resolve(s);
            raw_sets.push(in_file(&p, parse_raw_edges(&read(&p)?))?);
        }
        let ids = make_ids(&mut raw_sets.iter().flatten().flat_map(|e| [e.src, e.dst]));
        let sets = raw_sets
            .iter()
            .map(|r| to_triples(&ids, r))
            .collect::<Result<Vec<_>>>()?;
        let series = SnapshotSeries::from_edge_sets(ids.len(), &sets)?;
        Ok(Dataset { series, ids })
    }
}

/// Writes `base.el`, `delta_NNNN.txt` per batch and `manifest.json` into
/// `dir`, returning the paths written.
pub fn write_trace(
    dir: &Path,
    ids: &IdMap,
    base: &[EdgeTriple],
    deltas: &[DeltaBatch],
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let mut written = Vec::with_capacity(deltas.len() + 2);
    let base_name = "base.el".to_string();
    let p = dir.join(&base_name);
    write(&p, &write_edge_list(base, ids))?;
    written.push(p);

    let width = deltas.len().to_string().len().max(4);
    let mut names = Vec::with_capacity(deltas.len());
    for (i, d) in deltas.iter().enumerate() {
        let name = format!("delta_{:0width$}.txt", i + 1);
        let p = dir.join(&name);
        write(&p, &write_delta_batch(d, ids))?;
        written.push(p);
        names.push(name);
    }

    let manifest = Manifest {
        num_vertices: match ids {
            IdMap::Identity(n) => Some(*n),
            IdMap::Compact(_) => None,
        },
        base: Some(base_name),
        deltas: names,
        snapshots: Vec::new(),
    };
    let p = dir.join("manifest.json");
    write(&p, &manifest.to_json())?;
    written.push(p);
    Ok(written)
}
