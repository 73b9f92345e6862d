//! Edge-list ingestion and emission (KONECT style).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{build_graph, Graph};

/// How to read an edge-list file.
#[derive(Debug, Clone)]
pub struct EdgeListFile {
    pub path: PathBuf,
    pub comment_prefixes: Vec<char>,
    /// KONECT numbers vertices from 1.
    pub one_indexed: bool,
}

impl EdgeListFile {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self {
            path: path.into(),
            comment_prefixes: vec!['%', '#'],
            one_indexed: true,
        }
    }

    pub fn one_indexed(mut self, yes: bool) -> Self {
        self.one_indexed = yes;
        self
    }
}

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct IngestReport {
    pub lines: usize,
    pub edge_lines: usize,
    pub self_loops: usize,
    pub duplicates: usize,
    pub vertices: usize,
    pub edges: usize,
}

pub fn read_edge_list(file: &EdgeListFile) -> Result<(Graph, IngestReport)> {
    let reader = BufReader::new(File::open(&file.path)?);
    parse_edge_list(reader, &file.comment_prefixes, file.one_indexed)
}

/// Streams edge lines from `reader`.
///
/// Only the first two tokens of a line are read: KONECT files may carry weight
/// and timestamp columns after them.
pub fn parse_edge_list<R: Read>(
    reader: R,
    comment_prefixes: &[char],
    one_indexed: bool,
) -> Result<(Graph, IngestReport)> {
    let mut reader = BufReader::new(reader);
    let mut pairs = Vec::new();
    let mut line = String::new();
    let mut lineno = 0;
    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            break;
        }
        lineno += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with(comment_prefixes) {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected two vertex ids, got {trimmed:?}"),
                })
            }
        };
        let parse = |tok: &str| -> Result<u64> {
            let id: u64 = tok.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("not a non-negative integer: {tok:?}"),
            })?;
            if one_indexed && id == 0 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "vertex id 0 in a one-indexed file".into(),
                });
            }
            Ok(if one_indexed { id - 1 } else { id })
        };
        pairs.push((parse(a)?, parse(b)?));
    }

    let edge_lines = pairs.len();
    let built = build_graph(pairs);
    let report = IngestReport {
        lines: lineno,
        edge_lines,
        self_loops: built.self_loops,
        duplicates: built.duplicates,
        vertices: built.graph.vertex_count(),
        edges: built.graph.edge_count(),
    };
    Ok((built.graph, report))
}

/// Writes `graph` as a one-indexed, `%`-commented edge list.
///
/// Vertices are written under their original labels when the graph has them.
/// Isolated vertices are not representable in the format and are lost.
pub fn write_edge_list(graph: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_edge_list_to(graph, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn write_edge_list_to<W: Write>(graph: &Graph, out: &mut W) -> Result<()> {
    writeln!(out, "% sym unweighted")?;
    writeln!(
        out,
        "% {} {} {}",
        graph.edge_count(),
        graph.vertex_count(),
        graph.vertex_count()
    )?;
    for &(u, v) in graph.edges() {
        writeln!(out, "{} {}", graph.label(u) + 1, graph.label(v) + 1)?;
    }
    Ok(())
}
