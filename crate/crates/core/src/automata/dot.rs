use std::fmt::Write;

use super::{Guard, RunGraph};

pub(crate) fn automaton_dot(
    transitions: &[Vec<(Guard, usize)>],
    initial: usize,
    marked: &[bool],
    mark_name: &str,
) -> String {
    let mut s = String::from("digraph automaton {\n  rankdir=LR;\n  init [shape=point];\n");
    for (q, &m) in marked.iter().enumerate() {
        let shape = if m { "doublecircle" } else { "circle" };
        let _ = writeln!(s, "  q{q} [shape={shape}, tooltip=\"{}\"];", if m { mark_name } else { "" });
    }
    let _ = writeln!(s, "  init -> q{initial};");
    for (q, out) in transitions.iter().enumerate() {
        for (g, q2) in out {
            let _ = writeln!(s, "  q{q} -> q{q2} [label=\"{g}\"];");
        }
    }
    s.push_str("}\n");
    s
}

pub(crate) fn run_graph_dot(rg: &RunGraph) -> String {
    let mut s = String::from("digraph run_graph {\n  init [shape=point];\n");
    for (v, &(t, q)) in rg.nodes.iter().enumerate() {
        let shape = if rg.rejecting[v] { "doublecircle" } else { "circle" };
        let _ = writeln!(s, "  n{v} [shape={shape}, label=\"t{t},q{q}\"];");
    }
    let _ = writeln!(s, "  init -> n{};", rg.initial);
    for (v, out) in rg.edges.iter().enumerate() {
        for e in out {
            let label: Vec<&str> = e.letter.iter().map(String::as_str).collect();
            let _ = writeln!(s, "  n{v} -> n{} [label=\"{{{}}}\"];", e.target, label.join(","));
        }
    }
    s.push_str("}\n");
    s
}
