//! Plain-text graph files.
//!
//! ```text
//! # comment
//! vertices: a b c
//! a -> b
//! b -- c
//! ```
//!
//! Printing is canonical: vertices in declaration order, then arrows and
//! lines sorted by their endpoint ids.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::ParseError;
use crate::graph::MixedGraph;

/// A graph together with its vertex names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGraph {
    pub names: Vec<String>,
    pub graph: MixedGraph,
}

impl NamedGraph {
    pub fn new(names: Vec<String>, graph: MixedGraph) -> Self {
        debug_assert_eq!(names.len(), graph.n());
        NamedGraph { names, graph }
    }

    /// Names `v0, v1, ...` for a graph with no declared names.
    pub fn with_default_names(graph: MixedGraph) -> Self {
        let names = (0..graph.n()).map(|i| format!("v{i}")).collect();
        NamedGraph { names, graph }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

pub fn parse_graph(text: &str) -> Result<NamedGraph, ParseError> {
    let mut names: Option<Vec<String>> = None;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut graph = MixedGraph::new(0);

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if names.is_none() {
            let Some(rest) = line.strip_prefix("vertices:") else {
                return Err(ParseError::MissingHeader);
            };
            let declared: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
            for (k, name) in declared.iter().enumerate() {
                if index.insert(name.clone(), k).is_some() {
                    return Err(ParseError::DuplicateVertex(name.clone()));
                }
            }
            graph = MixedGraph::new(declared.len());
            names = Some(declared);
            continue;
        }

        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [left, op, right] = tokens[..] else {
            return Err(ParseError::Syntax {
                line: line_no,
                message: format!("expected `a -> b` or `a -- b`, got `{line}`"),
            });
        };
        let lookup = |name: &str| {
            index.get(name).copied().ok_or_else(|| ParseError::UnknownVertex {
                line: line_no,
                name: name.to_owned(),
            })
        };
        let (a, b) = (lookup(left)?, lookup(right)?);
        let wrap = |source| ParseError::Graph { line: line_no, source };
        match op {
            "->" if graph.is_arrow(a, b) => {}
            "--" if graph.is_line(a, b) => {}
            "->" => graph.add_arrow(a, b).map_err(wrap)?,
            "--" => graph.add_line(a, b).map_err(wrap)?,
            other => {
                return Err(ParseError::Syntax {
                    line: line_no,
                    message: format!("unknown edge operator `{other}`"),
                })
            }
        }
    }

    let names = names.ok_or(ParseError::MissingHeader)?;
    Ok(NamedGraph { names, graph })
}

/// Canonical text form. `parse_graph(&format_graph(g)) == g`.
pub fn format_graph(g: &NamedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "vertices: {}", g.names.join(" "));
    let mut edges: Vec<(usize, usize, &str)> = g.graph.arrows().map(|(a, b)| (a, b, "->")).collect();
    edges.extend(g.graph.lines().map(|(a, b)| (a, b, "--")));
    edges.sort();
    for (a, b, op) in edges {
        let _ = writeln!(out, "{} {} {}", g.names[a], op, g.names[b]);
    }
    out
}
