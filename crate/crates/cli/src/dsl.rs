//! Line-oriented graph documents.
//!
//! ```text
//! version 1
//! v 1 0
//! v 2 0
//! e 1 2
//! role boundary 1 2
//! ```
//!
//! One statement per line, `#` starts a comment, blank lines are ignored.
//! The `version` line is optional and must come first when present.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use dualgraph::{VertexId, WeightedGraph};

pub const DOCUMENT_VERSION: &str = "1";

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DslError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Semantic { line: usize, source: dualgraph::Error },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDocument {
    pub version: String,
    pub graph: WeightedGraph,
    pub roles: BTreeMap<String, Vec<VertexId>>,
}

impl GraphDocument {
    pub fn new(graph: WeightedGraph) -> Self {
        GraphDocument {
            version: DOCUMENT_VERSION.to_string(),
            graph,
            roles: BTreeMap::new(),
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> DslError {
    DslError::Syntax {
        line,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, DslError> {
    tok.parse().map_err(|_| syntax(line, format!("invalid {what} `{tok}`")))
}

pub fn parse_document(text: &str) -> Result<GraphDocument, DslError> {
    let mut doc = GraphDocument::new(WeightedGraph::new());
    let mut seen_statement = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        let Some((&head, args)) = toks.split_first() else {
            continue;
        };
        match head {
            "version" => {
                if seen_statement {
                    return Err(syntax(line, "`version` must be the first statement"));
                }
                let [v] = args else {
                    return Err(syntax(line, "expected `version <string>`"));
                };
                if *v != DOCUMENT_VERSION {
                    return Err(syntax(line, format!("unsupported version `{v}`")));
                }
                doc.version = v.to_string();
            }
            "v" => {
                let [id, w] = args else {
                    return Err(syntax(line, "expected `v <id> <weight>`"));
                };
                let id = VertexId(number(line, id, "vertex id")?);
                let w = number(line, w, "weight")?;
                doc.graph
                    .add_vertex(id, w)
                    .map_err(|source| DslError::Semantic { line, source })?;
            }
            "e" => {
                let [a, b] = args else {
                    return Err(syntax(line, "expected `e <id> <id>`"));
                };
                let a = VertexId(number(line, a, "vertex id")?);
                let b = VertexId(number(line, b, "vertex id")?);
                doc.graph
                    .add_edge(a, b)
                    .map_err(|source| DslError::Semantic { line, source })?;
            }
            "role" => {
                let Some((name, ids)) = args.split_first() else {
                    return Err(syntax(line, "expected `role <name> <id>...`"));
                };
                let mut list = Vec::with_capacity(ids.len());
                for tok in ids {
                    let v = VertexId(number(line, tok, "vertex id")?);
                    if !doc.graph.contains(v) {
                        return Err(DslError::Semantic {
                            line,
                            source: dualgraph::Error::UnknownVertex(v),
                        });
                    }
                    list.push(v);
                }
                doc.roles.entry(name.to_string()).or_default().extend(list);
            }
            other => return Err(syntax(line, format!("unknown statement `{other}`"))),
        }
        seen_statement = true;
    }
    Ok(doc)
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph, DslError> {
    parse_document(text).map(|d| d.graph)
}

/// Canonical text: version, vertices in graph order, edges sorted with one
/// line per intersection point, roles by name.
pub fn print_document(doc: &GraphDocument) -> String {
    let mut out = String::new();
    writeln!(out, "version {}", doc.version).unwrap();
    for (v, w) in doc.graph.weighted_vertices() {
        writeln!(out, "v {} {}", v.0, w).unwrap();
    }
    for (a, b, c) in doc.graph.edges() {
        for _ in 0..c {
            writeln!(out, "e {} {}", a.0, b.0).unwrap();
        }
    }
    for (name, ids) in &doc.roles {
        let ids: Vec<String> = ids.iter().map(|v| v.0.to_string()).collect();
        if ids.is_empty() {
            writeln!(out, "role {name}").unwrap();
        } else {
            writeln!(out, "role {name} {}", ids.join(" ")).unwrap();
        }
    }
    out
}

pub fn print_graph(g: &WeightedGraph) -> String {
    print_document(&GraphDocument::new(g.clone()))
}
