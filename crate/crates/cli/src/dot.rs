//! Deterministic DOT text for dependency and time graphs.

use std::fmt::Write as _;

use mcdep_core::dependency::DependencyGraph;
use mcdep_core::time::ExpandedTimeGraph;

fn render(names: &[String], edges: &[(usize, usize, &str)]) -> String {
    let mut edges = edges.to_vec();
    edges.sort();
    let mut out = String::from("digraph G {\n");
    for (id, name) in names.iter().enumerate() {
        if !edges.iter().any(|&(s, t, _)| s == id || t == id) {
            writeln!(out, "  \"{name}\";").unwrap();
        }
    }
    for (s, t, label) in edges {
        writeln!(out, "  \"{}\" -> \"{}\" [label=\"{label}\"];", names[s], names[t]).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Nodes in id order; only isolated nodes get their own statement.
pub fn dependency_dot(graph: &DependencyGraph) -> String {
    let edges: Vec<_> = graph
        .edges()
        .iter()
        .map(|e| (e.source, e.target, e.label.as_str()))
        .collect();
    render(graph.nodes(), &edges)
}

/// One node per (component, window), named `NAME_window`.
pub fn expanded_dot(graph: &ExpandedTimeGraph) -> String {
    let nodes = graph.nodes();
    let names: Vec<String> = nodes.iter().map(|&n| graph.node_name(n)).collect();
    let id = |n| nodes.iter().position(|&m| m == n).expect("edge endpoints are nodes");
    let edges: Vec<_> = graph.edges().iter().map(|&(s, t)| (id(s), id(t), "time")).collect();
    render(&names, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_lists_nodes() {
        let g = DependencyGraph::new(vec!["A".into(), "B".into()], vec![]).unwrap();
        assert_eq!(dependency_dot(&g), "digraph G {\n  \"A\";\n  \"B\";\n}\n");
    }
}
