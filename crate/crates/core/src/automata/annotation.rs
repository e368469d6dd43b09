use super::RunGraph;

/// Node annotation; `None` plays the role of ⊥.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub values: Vec<Option<usize>>,
}

/// Strongly connected components in reverse topological order
/// (every edge leaves a component for one listed earlier, or stays inside).
pub(crate) fn tarjan(edges: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = edges.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut sccs = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < edges[v].len() {
                let w = edges[v][*next];
                *next += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut scc = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    scc.push(w);
                    if w == v {
                        break;
                    }
                }
                sccs.push(scc);
            }
        }
    }
    sccs
}

fn adjacency(rg: &RunGraph) -> Vec<Vec<usize>> {
    rg.edges
        .iter()
        .map(|out| out.iter().map(|e| e.target).collect())
        .collect()
}

fn reachable(rg: &RunGraph) -> Vec<bool> {
    let mut seen = vec![false; rg.nodes.len()];
    if rg.nodes.is_empty() {
        return seen;
    }
    seen[rg.initial] = true;
    let mut stack = vec![rg.initial];
    while let Some(v) = stack.pop() {
        for e in &rg.edges[v] {
            if !seen[e.target] {
                seen[e.target] = true;
                stack.push(e.target);
            }
        }
    }
    seen
}

/// Whether a cycle reachable from the initial node passes through a
/// rejecting node.
pub fn rejecting_cycle_exists(rg: &RunGraph) -> bool {
    let adj = adjacency(rg);
    let seen = reachable(rg);
    tarjan(&adj).iter().any(|scc| {
        let cyclic = scc.len() > 1 || adj[scc[0]].contains(&scc[0]);
        cyclic && seen[scc[0]] && scc.iter().any(|&v| rg.rejecting[v])
    })
}

/// Returns a valid annotation iff no reachable cycle contains a rejecting
/// node. Each reachable node gets the largest number of rejecting nodes on
/// any path from the initial node to it; unreachable nodes get ⊥.
pub fn find_valid_annotation(rg: &RunGraph) -> Option<Annotation> {
    if rg.nodes.is_empty() {
        return Some(Annotation { values: vec![] });
    }
    if rejecting_cycle_exists(rg) {
        return None;
    }
    let adj = adjacency(rg);
    let seen = reachable(rg);
    let mut values: Vec<Option<usize>> = vec![None; rg.nodes.len()];
    values[rg.initial] = Some(rg.rejecting[rg.initial] as usize);
    // Without rejecting cycles, every cyclic component carries no rejecting
    // node, so one value per component suffices.
    for scc in tarjan(&adj).iter().rev() {
        if !seen[scc[0]] {
            continue;
        }
        let best = scc.iter().filter_map(|&v| values[v]).max();
        let Some(best) = best else { continue };
        for &v in scc {
            values[v] = Some(best);
        }
        for &v in scc {
            for &w in &adj[v] {
                if scc.contains(&w) {
                    continue;
                }
                let cand = best + rg.rejecting[w] as usize;
                if values[w].map_or(true, |x| x < cand) {
                    values[w] = Some(cand);
                }
            }
        }
    }
    Some(Annotation { values })
}

/// Checks the two valid-annotation conditions: the initial node is
/// annotated, and along every edge out of an annotated node the value does
/// not decrease, strictly increasing into rejecting nodes.
pub fn check_annotation(rg: &RunGraph, ann: &Annotation) -> bool {
    if rg.nodes.is_empty() {
        return true;
    }
    if ann.values.len() != rg.nodes.len() || ann.values[rg.initial].is_none() {
        return false;
    }
    for (v, out) in rg.edges.iter().enumerate() {
        let Some(lv) = ann.values[v] else { continue };
        for e in out {
            match ann.values[e.target] {
                None => return false,
                Some(lw) if rg.rejecting[e.target] && lw <= lv => return false,
                Some(lw) if lw < lv => return false,
                _ => {}
            }
        }
    }
    true
}
