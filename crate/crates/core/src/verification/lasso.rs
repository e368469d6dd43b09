use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::automata::RunGraph;
use crate::Letter;

/// A reachable cycle through a rejecting run-graph node. `stem_nodes[k]`
/// is left by `stem[k]`; the cycle starts and ends at `cycle_nodes[0]`,
/// which is rejecting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lasso {
    pub stem: Vec<Letter>,
    #[serde(rename = "loop")]
    pub cycle: Vec<Letter>,
    pub stem_nodes: Vec<usize>,
    pub cycle_nodes: Vec<usize>,
}

/// Shortest path from `from` to `to` (a single edge at least), as the
/// list of edges `(source, edge index)`.
fn path(rg: &RunGraph, from: usize, to: usize) -> Option<Vec<(usize, usize)>> {
    let n = rg.nodes.len();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for (k, e) in rg.edges[from].iter().enumerate() {
        if !seen[e.target] {
            seen[e.target] = true;
            parent[e.target] = Some((from, k));
            queue.push_back(e.target);
        }
    }
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut edges = Vec::new();
            let mut cur = to;
            loop {
                let (p, k) = parent[cur].expect("bfs parent");
                edges.push((p, k));
                if p == from {
                    break;
                }
                cur = p;
            }
            edges.reverse();
            return Some(edges);
        }
        for (k, e) in rg.edges[v].iter().enumerate() {
            if !seen[e.target] {
                seen[e.target] = true;
                parent[e.target] = Some((v, k));
                queue.push_back(e.target);
            }
        }
    }
    None
}

/// Breadth-first distances and parent edges from the initial node.
fn bfs(rg: &RunGraph) -> (Vec<Option<usize>>, Vec<Option<(usize, usize)>>) {
    let n = rg.nodes.len();
    let mut dist = vec![None; n];
    let mut parent = vec![None; n];
    dist[rg.initial] = Some(0);
    let mut queue = VecDeque::from([rg.initial]);
    while let Some(v) = queue.pop_front() {
        for (k, e) in rg.edges[v].iter().enumerate() {
            if dist[e.target].is_none() {
                dist[e.target] = Some(dist[v].expect("visited") + 1);
                parent[e.target] = Some((v, k));
                queue.push_back(e.target);
            }
        }
    }
    (dist, parent)
}

/// A lasso witnessing that the run graph has no valid annotation, or
/// `None` if it has one. The rejecting node closest to the initial node
/// that lies on a cycle is chosen, with a shortest cycle through it.
pub fn counterexample_lasso(rg: &RunGraph) -> Option<Lasso> {
    if rg.nodes.is_empty() {
        return None;
    }
    let (dist, parent) = bfs(rg);
    let (r, cycle) = (0..rg.nodes.len())
        .filter(|&v| rg.rejecting[v] && dist[v].is_some())
        .filter_map(|v| path(rg, v, v).map(|c| (v, c)))
        .min_by_key(|(v, c)| (dist[*v], c.len()))?;
    let mut stem_edges = Vec::new();
    let mut cur = r;
    while let Some((p, k)) = parent[cur] {
        stem_edges.push((p, k));
        cur = p;
    }
    stem_edges.reverse();
    let letter = |(v, k): (usize, usize)| rg.edges[v][k].letter.clone();
    Some(Lasso {
        stem: stem_edges.iter().map(|&e| letter(e)).collect(),
        cycle: cycle.iter().map(|&e| letter(e)).collect(),
        stem_nodes: stem_edges.iter().map(|&(v, _)| v).collect(),
        cycle_nodes: cycle.iter().map(|&(v, _)| v).collect(),
    })
}
