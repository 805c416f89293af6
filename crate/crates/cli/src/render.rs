//! DOT rendering of dual graphs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use dualgraph::{VertexId, WeightedGraph};

fn body(out: &mut String, g: &WeightedGraph, mult: Option<&BTreeMap<VertexId, u64>>, prefix: &str, indent: &str) {
    for (v, w) in g.weighted_vertices() {
        let label = match mult.and_then(|m| m.get(&v)) {
            Some(k) => format!("{w}\\nx{k}"),
            None => w.to_string(),
        };
        writeln!(out, "{indent}{prefix}{v} [label=\"{label}\", xlabel=\"{v}\"];").unwrap();
    }
    for (a, b, c) in g.edges() {
        for _ in 0..c {
            writeln!(out, "{indent}{prefix}{a} -- {prefix}{b};").unwrap();
        }
    }
}

/// The graph with weight labels, and multiplicity labels where given.
pub fn dot(g: &WeightedGraph, mult: Option<&BTreeMap<VertexId, u64>>) -> String {
    let mut out = String::from("graph dual {\n  node [shape=circle];\n");
    body(&mut out, g, mult, "v", "  ");
    out.push_str("}\n");
    out
}

/// A named graph with optional multiplicities.
pub type Cluster<'a> = (String, &'a WeightedGraph, Option<&'a BTreeMap<VertexId, u64>>);

/// Several graphs side by side, one cluster each.
pub fn dot_clusters(parts: &[Cluster<'_>]) -> String {
    let mut out = String::from("graph dual {\n  node [shape=circle];\n");
    for (i, (name, g, mult)) in parts.iter().enumerate() {
        writeln!(out, "  subgraph cluster_{i} {{\n    label=\"{name}\";").unwrap();
        body(&mut out, g, *mult, &format!("c{i}v"), "    ");
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        let g = WeightedGraph::chain_of_type(&[0, 0]);
        let vs: Vec<VertexId> = g.vertices().collect();
        let s = dot(&g, None);
        assert!(s.contains(&format!("v{} [label=\"0\"", vs[0])));
        assert!(s.contains(&format!("v{} -- v{};", vs[0], vs[1])));
        let mult: BTreeMap<VertexId, u64> = vs.iter().map(|&v| (v, 2)).collect();
        assert!(dot(&g, Some(&mult)).contains("\\nx2"));
    }
}
