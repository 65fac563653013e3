//! Text formats: edge lists and peeling traces.
//!
//! Edge list: `n m` on the first line, then one `u v` line per edge with
//! `u < v` in ascending order, LF-terminated. The writer is canonical; the
//! reader also accepts other edge orders and orientations.
//!
//! Trace: `S0: ...`, one `REM <iter> <vertex> <deg> <edges-into-removed>`
//! line per iterative removal, then `SURVIVORS: ...`.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::graph::{build_graph, Graph, GraphError, VertexSet};
use crate::percolation::{PercolationParams, PruneTrace, Removal};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

fn numbers(line_no: usize, text: &str) -> Result<Vec<usize>, FormatError> {
    text.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| syntax(line_no, format!("not a vertex id: {t:?}"))))
        .collect()
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut s = String::with_capacity(16 * (g.m() + 1));
    writeln!(s, "{} {}", g.n(), g.m()).unwrap();
    for (u, v) in g.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

pub fn parse_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
    let (no, header) = lines.next().ok_or_else(|| syntax(1, "missing `n m` header"))?;
    let head = numbers(no, header)?;
    let [n, m] = head[..] else {
        return Err(syntax(no, "header must be `n m`"));
    };
    let mut edges = Vec::with_capacity(m);
    for (no, line) in lines {
        match numbers(no, line)?[..] {
            [u, v] => edges.push((u, v)),
            _ => return Err(syntax(no, "edge line must be `u v`")),
        }
    }
    if edges.len() != m {
        return Err(FormatError::EdgeCount { expected: m, found: edges.len() });
    }
    Ok(build_graph(n, &edges)?)
}

pub fn read_edge_list(path: &Path) -> Result<Graph, FormatError> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn write_trace(trace: &PruneTrace) -> String {
    let join = |s: &VertexSet| s.iter().map(|v| format!(" {v}")).collect::<String>();
    let mut s = String::new();
    writeln!(s, "S0:{}", join(&trace.s0)).unwrap();
    for r in &trace.removals {
        writeln!(s, "REM {} {} {} {}", r.iteration, r.vertex, r.degree, r.edges_into_removed).unwrap();
    }
    writeln!(s, "SURVIVORS:{}", join(&trace.survivors)).unwrap();
    s
}

/// Reads a trace for a percolated graph on `n` vertices.
pub fn parse_trace(text: &str, n: usize, params: PercolationParams) -> Result<PruneTrace, FormatError> {
    let mut s0 = None;
    let mut survivors = None;
    let mut removals = Vec::new();
    let to_set = |no: usize, rest: &str| -> Result<VertexSet, FormatError> {
        let ids = numbers(no, rest)?;
        if let Some(&v) = ids.iter().find(|&&v| v >= n) {
            return Err(syntax(no, format!("vertex {v} out of range for {n} vertices")));
        }
        Ok(VertexSet::from_members(n, ids))
    };
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("S0:") {
            if s0.is_some() {
                return Err(syntax(no, "repeated S0 line"));
            }
            s0 = Some(to_set(no, rest)?);
        } else if let Some(rest) = line.strip_prefix("SURVIVORS:") {
            if survivors.is_some() {
                return Err(syntax(no, "repeated SURVIVORS line"));
            }
            survivors = Some(to_set(no, rest)?);
        } else if let Some(rest) = line.strip_prefix("REM ") {
            if s0.is_none() || survivors.is_some() {
                return Err(syntax(no, "REM lines belong between S0 and SURVIVORS"));
            }
            match numbers(no, rest)?[..] {
                [iteration, vertex, degree, edges_into_removed] => {
                    if vertex >= n {
                        return Err(syntax(no, format!("vertex {vertex} out of range for {n} vertices")));
                    }
                    removals.push(Removal { vertex, iteration, degree, edges_into_removed })
                }
                _ => return Err(syntax(no, "REM line must be `REM <iter> <vertex> <deg> <edges-into-removed>`")),
            }
        } else {
            return Err(syntax(no, format!("unrecognised line {line:?}")));
        }
    }
    let s0 = s0.ok_or_else(|| syntax(1, "missing S0 line"))?;
    let survivors = survivors.ok_or_else(|| syntax(text.lines().count().max(1), "missing SURVIVORS line"))?;
    Ok(PruneTrace::from_parts(n, s0, removals, survivors, params))
}
