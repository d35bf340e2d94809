//! Edge-list and delta text formats.
//!
//! Edge list: one `src dst [weight]` per line, weight defaulting to 1.
//! Delta: one `+ src dst [weight]` or `- src dst [weight]` per line.
//! In both, `#` starts a comment and blank lines are ignored.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{EdgeTriple, VertexId, Weight};
use crate::ingest::series::DeltaBatch;

/// An edge as written in a file, before id remapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RawEdge {
    pub src: u64,
    pub dst: u64,
    pub weight: Weight,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawDelta {
    pub additions: Vec<RawEdge>,
    pub deletions: Vec<RawEdge>,
}

impl RawDelta {
    pub fn ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.additions
            .iter()
            .chain(&self.deletions)
            .flat_map(|e| [e.src, e.dst])
    }
}

/// Mapping between external vertex ids and dense [`VertexId`]s.
///
/// Both variants are order-preserving, so ascending dense id is ascending
/// external id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdMap {
    /// External id `k` is vertex `k`, for `k < n`.
    Identity(usize),
    /// Dense id is the rank of the external id in this sorted list.
    Compact(Vec<u64>),
}

impl IdMap {
    pub fn compact<I: IntoIterator<Item = u64>>(ids: I) -> Self {
        let set: BTreeSet<u64> = ids.into_iter().collect();
        IdMap::Compact(set.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        match self {
            IdMap::Identity(n) => *n,
            IdMap::Compact(ids) => ids.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dense(&self, external: u64) -> Option<VertexId> {
        match self {
            IdMap::Identity(n) => (external < *n as u64).then_some(VertexId(external as u32)),
            IdMap::Compact(ids) => ids
                .binary_search(&external)
                .ok()
                .map(|i| VertexId(i as u32)),
        }
    }

    pub fn external(&self, v: VertexId) -> u64 {
        match self {
            IdMap::Identity(_) => u64::from(v.0),
            IdMap::Compact(ids) => ids[v.index()],
        }
    }

    pub fn to_triple(&self, e: &RawEdge) -> Result<EdgeTriple> {
        let look = |id: u64| {
            self.dense(id).ok_or_else(|| {
                Error::Range(format!("vertex id {id} is not in the vertex universe"))
            })
        };
        Ok(EdgeTriple {
            src: look(e.src)?,
            dst: look(e.dst)?,
            weight: e.weight,
        })
    }

    pub fn to_raw(&self, t: &EdgeTriple) -> RawEdge {
        RawEdge {
            src: self.external(t.src),
            dst: self.external(t.dst),
            weight: t.weight,
        }
    }
}

fn content(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
    .trim()
}

fn parse_fields<'a>(lineno: usize, mut fields: impl Iterator<Item = &'a str>) -> Result<RawEdge> {
    let mut id = |what: &str| -> Result<u64> {
        let tok = fields
            .next()
            .ok_or_else(|| Error::parse(lineno, format!("missing {what} vertex")))?;
        tok.parse::<u64>()
            .map_err(|_| Error::parse(lineno, format!("bad {what} vertex `{tok}`")))
    };
    let src = id("source")?;
    let dst = id("target")?;
    let weight = match fields.next() {
        None => Weight::ONE,
        Some(tok) => {
            let w: f64 = tok
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad weight `{tok}`")))?;
            Weight::new(w).map_err(|e| match e {
                Error::Domain(m) => Error::Domain(format!("line {lineno}: {m}")),
                other => other,
            })?
        }
    };
    if let Some(extra) = fields.next() {
        return Err(Error::parse(lineno, format!("unexpected field `{extra}`")));
    }
    Ok(RawEdge { src, dst, weight })
}

pub fn parse_raw_edges(text: &str) -> Result<Vec<RawEdge>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = content(line);
        if line.is_empty() {
            continue;
        }
        out.push(parse_fields(i + 1, line.split_whitespace())?);
    }
    Ok(out)
}

pub fn parse_raw_delta(text: &str) -> Result<RawDelta> {
    let mut out = RawDelta::default();
    for (i, line) in text.lines().enumerate() {
        let line = content(line);
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let list = match fields.next() {
            Some("+") => &mut out.additions,
            Some("-") | Some("\u{2212}") => &mut out.deletions,
            Some(other) => {
                return Err(Error::parse(
                    i + 1,
                    format!("unknown prefix `{other}`, expected `+` or `-`"),
                ))
            }
            None => unreachable!(),
        };
        list.push(parse_fields(i + 1, fields)?);
    }
    Ok(out)
}

/// Parses an edge list, remapping external ids to dense ids by rank.
pub fn parse_edge_list(text: &str) -> Result<(Vec<EdgeTriple>, IdMap)> {
    let raw = parse_raw_edges(text)?;
    let ids = IdMap::compact(raw.iter().flat_map(|e| [e.src, e.dst]));
    let triples = raw
        .iter()
        .map(|e| ids.to_triple(e))
        .collect::<Result<_>>()?;
    Ok((triples, ids))
}

/// Parses a delta file whose ids must already be known to `ids`.
pub fn parse_delta_batch(text: &str, ids: &IdMap) -> Result<DeltaBatch> {
    let raw = parse_raw_delta(text)?;
    Ok(DeltaBatch {
        additions: raw
            .additions
            .iter()
            .map(|e| ids.to_triple(e))
            .collect::<Result<_>>()?,
        deletions: raw
            .deletions
            .iter()
            .map(|e| ids.to_triple(e))
            .collect::<Result<_>>()?,
    })
}

pub fn write_edge_list(triples: &[EdgeTriple], ids: &IdMap) -> String {
    let mut s = String::with_capacity(triples.len() * 16);
    for t in triples {
        let e = ids.to_raw(t);
        let _ = writeln!(s, "{} {} {}", e.src, e.dst, e.weight);
    }
    s
}

pub fn write_delta_batch(batch: &DeltaBatch, ids: &IdMap) -> String {
    let mut s = String::new();
    for (sign, list) in [('+', &batch.additions), ('-', &batch.deletions)] {
        for t in list {
            let e = ids.to_raw(t);
            let _ = writeln!(s, "{sign} {} {} {}", e.src, e.dst, e.weight);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: u32, d: u32, w: f64) -> EdgeTriple {
        EdgeTriple::new(s, d, w).unwrap()
    }

    #[test]
    fn plain_edge_list() {
        let (edges, ids) = parse_edge_list("0 1 1\n1 2 1\n").unwrap();
        assert_eq!(edges, vec![t(0, 1, 1.0), t(1, 2, 1.0)]);
        assert_eq!(ids.len(), 3);
    }

    #[test]
    fn sparse_ids_are_remapped() {
        let (edges, ids) = parse_edge_list("# hdr\n5 9 2.5\n").unwrap();
        assert_eq!(edges, vec![t(0, 1, 2.5)]);
        assert_eq!(ids.external(VertexId(1)), 9);
        assert_eq!(ids.dense(5), Some(VertexId(0)));
        assert_eq!(ids.dense(6), None);
    }

    #[test]
    fn weight_defaults_to_one() {
        let (edges, _) = parse_edge_list("3 4   # trailing comment\n\n").unwrap();
        assert_eq!(edges, vec![t(0, 1, 1.0)]);
    }

    #[test]
    fn negative_weight_is_a_domain_error() {
        assert!(matches!(parse_edge_list("0 1 -3\n"), Err(Error::Domain(_))));
    }

    #[test]
    fn malformed_lines_report_their_number() {
        assert_eq!(
            parse_raw_edges("0 1\n0 x 2\n").unwrap_err(),
            Error::Parse {
                line: 2,
                message: "bad target vertex `x`".into()
            }
        );
        assert!(matches!(
            parse_raw_edges("0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_raw_edges("0 1 2 3\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_raw_edges("0 1 w\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn delta_partitions_by_sign() {
        let ids = IdMap::Identity(4);
        let b = parse_delta_batch("+ 0 3 5\n- 1 2 1\n", &ids).unwrap();
        assert_eq!(b.additions, vec![t(0, 3, 5.0)]);
        assert_eq!(b.deletions, vec![t(1, 2, 1.0)]);
        let b = parse_delta_batch("", &ids).unwrap();
        assert!(b.additions.is_empty() && b.deletions.is_empty());
        let b = parse_delta_batch("\u{2212} 1 2\n", &ids).unwrap();
        assert_eq!(b.deletions, vec![t(1, 2, 1.0)]);
    }

    #[test]
    fn unknown_delta_prefix() {
        assert!(matches!(
            parse_delta_batch("* 0 1 1", &IdMap::Identity(2)),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn delta_with_unknown_vertex() {
        assert!(matches!(
            parse_delta_batch("+ 0 7 1", &IdMap::Identity(2)),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn writers_round_trip() {
        let ids = IdMap::compact([10, 20, 30]);
        let edges = vec![t(0, 1, 2.5), t(2, 0, 1.0)];
        let text = write_edge_list(&edges, &ids);
        assert_eq!(text, "10 20 2.5\n30 10 1\n");
        let raw = parse_raw_edges(&text).unwrap();
        assert_eq!(
            raw.iter()
                .map(|e| ids.to_triple(e).unwrap())
                .collect::<Vec<_>>(),
            edges
        );

        let batch = DeltaBatch {
            additions: vec![t(0, 2, 3.0)],
            deletions: vec![t(0, 1, 2.5)],
        };
        let text = write_delta_batch(&batch, &ids);
        assert_eq!(text, "+ 10 30 3\n- 10 20 2.5\n");
        assert_eq!(parse_delta_batch(&text, &ids).unwrap(), batch);
    }
}
