//! The `NETCG v1` edge-list format and DOT export.
//!
//! ```text
//! NETCG v1 <n> <m>
//! # key=value
//! u v
//! ```
//!
//! Edges have `u < v` and are sorted.

use std::fmt::Write as _;

use netcg::graphcore::Graph;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Graph,
    pub metadata: Vec<(String, String)>,
}

pub fn serialize(graph: &Graph, metadata: &[(String, String)]) -> String {
    let edges = graph.edges();
    let mut out = format!("NETCG v1 {} {}\n", graph.n(), edges.len());
    for (k, v) in metadata {
        let _ = writeln!(out, "# {k}={v}");
    }
    for (u, v) in edges {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

pub fn parse(text: &str) -> Result<GraphFile, ParseError> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    let (_, header) = lines.next().ok_or_else(|| syntax(1, "empty file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (n, m) = match fields.as_slice() {
        ["NETCG", "v1", n, m] => (
            n.parse::<usize>().map_err(|_| syntax(1, "bad vertex count"))?,
            m.parse::<usize>().map_err(|_| syntax(1, "bad edge count"))?,
        ),
        _ => return Err(syntax(1, "expected header \"NETCG v1 <n> <m>\"")),
    };
    let mut metadata = Vec::new();
    let mut graph = Graph::empty(n);
    let mut last: Option<(usize, usize)> = None;
    let mut found = 0;
    for (k, line) in lines {
        if let Some(rest) = line.strip_prefix("# ") {
            if found > 0 {
                return Err(syntax(k, "metadata after the edges"));
            }
            let (key, value) = rest.split_once('=').ok_or_else(|| syntax(k, "expected key=value"))?;
            metadata.push((key.to_string(), value.to_string()));
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| syntax(k, format!("bad vertex {x:?}"))))
            .collect::<Result<_, _>>()?;
        let [u, v] = nums[..] else {
            return Err(syntax(k, "expected two vertices"));
        };
        if u >= v || v >= n {
            return Err(syntax(k, format!("edge {u} {v} needs u < v < {n}")));
        }
        if last.is_some_and(|e| e >= (u, v)) {
            return Err(syntax(k, "edges are not sorted"));
        }
        last = Some((u, v));
        graph.add_edge(u, v).map_err(|e| syntax(k, e.to_string()))?;
        found += 1;
    }
    if found != m {
        return Err(ParseError::EdgeCount { expected: m, found });
    }
    Ok(GraphFile { graph, metadata })
}

pub fn to_dot(graph: &Graph, metadata: &[(String, String)]) -> String {
    let mut out = String::from("graph netcg {\n");
    for (k, v) in metadata {
        let _ = writeln!(out, "  // {k}={v}");
    }
    for u in 0..graph.n() {
        let _ = writeln!(out, "  {u};");
    }
    for (u, v) in graph.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}
