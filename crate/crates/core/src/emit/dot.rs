use std::fmt::Write as _;

use crate::closed_form::{TermDag, TermNode};
use crate::system::System;

/// Graphviz digraph: one node per reachable term, labelled with its
/// function name or `bot`/`top`, one edge per argument labelled with the
/// argument's variable. Roots are drawn bold with the variable names they
/// define as `xlabel`.
pub fn to_dot(dag: &TermDag, sys: &System) -> String {
    let mut root_of: Vec<Vec<&str>> = vec![Vec::new(); dag.len()];
    for (k, r) in dag.roots().iter().enumerate() {
        root_of[r.index()].push(&sys.var_names()[k]);
    }
    let reachable = dag.reachable();
    let mut out = String::from("digraph closed_form {\n  node [shape=box];\n");
    for &id in &reachable {
        let label = match dag.node(id) {
            TermNode::Bottom => "bot",
            TermNode::Top => "top",
            TermNode::Apply { func, .. } => sys.var_name(*func),
        };
        let _ = write!(out, "  t{} [label=\"{label}\"", id.index());
        let roots = &root_of[id.index()];
        if !roots.is_empty() {
            let _ = write!(out, ", style=bold, xlabel=\"{}\"", roots.join(","));
        }
        out.push_str("];\n");
    }
    for &id in &reachable {
        if let TermNode::Apply { args, .. } = dag.node(id) {
            for (v, t) in args {
                let _ = writeln!(
                    out,
                    "  t{} -> t{} [label=\"{}\"];",
                    id.index(),
                    t.index(),
                    sys.var_name(*v)
                );
            }
        }
    }
    out.push_str("}\n");
    out
}
