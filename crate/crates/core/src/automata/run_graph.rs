use std::collections::{BTreeSet, HashMap};

use super::{AutomataError, UniversalCoBuchi};
use crate::machines::{cube_letter, TransitionSystem};
use crate::Letter;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunEdge {
    pub target: usize,
    /// A letter over the machine's and automaton's variables that enables
    /// this edge.
    pub letter: Letter,
}

/// Product of a transition system with a universal co-Büchi automaton,
/// restricted to nodes reachable from `(t0, q0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunGraph {
    pub nodes: Vec<(usize, usize)>,
    pub rejecting: Vec<bool>,
    pub edges: Vec<Vec<RunEdge>>,
    pub initial: usize,
}

impl RunGraph {
    /// Graph with the given shape and empty edge letters.
    pub fn from_adjacency(
        nodes: Vec<(usize, usize)>,
        rejecting: Vec<bool>,
        succ: Vec<Vec<usize>>,
        initial: usize,
    ) -> Self {
        let edges = succ
            .into_iter()
            .map(|out| {
                out.into_iter()
                    .map(|target| RunEdge {
                        target,
                        letter: Letter::new(),
                    })
                    .collect()
            })
            .collect();
        RunGraph {
            nodes,
            rejecting,
            edges,
            initial,
        }
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn index_of(&self, node: (usize, usize)) -> Option<usize> {
        self.nodes.iter().position(|&n| n == node)
    }

    pub fn to_dot(&self) -> String {
        super::dot::run_graph_dot(self)
    }
}

/// Builds the run graph: `(t,q) → (t',q')` iff some input `i` has
/// `τ(t,i) = t'` and the letter `i ∪ o(t,i)` enables `q → q'`. Automaton
/// variables the machine does not own are unconstrained.
pub fn build_run_graph(
    ts: &dyn TransitionSystem,
    uca: &UniversalCoBuchi,
) -> Result<RunGraph, AutomataError> {
    let inputs = ts.inputs();
    let outputs = ts.outputs();
    if let Some(v) = inputs.iter().find(|v| outputs.contains(v)) {
        return Err(AutomataError::AlphabetMismatch { atom: v.clone() });
    }
    let scope: BTreeSet<String> = inputs.iter().chain(outputs).cloned().collect();
    let cubes = 1usize << inputs.len();
    let start = (ts.initial(), uca.initial);
    let mut ids: HashMap<(usize, usize), usize> = HashMap::from([(start, 0)]);
    let mut nodes = vec![start];
    let mut edges: Vec<Vec<RunEdge>> = vec![Vec::new()];
    let mut next = 0;
    while next < nodes.len() {
        let (t, q) = nodes[next];
        let mut out: Vec<RunEdge> = Vec::new();
        for cube in 0..cubes {
            let Some(t2) = ts.successor(t, cube) else { continue };
            let mut letter = cube_letter(inputs, cube);
            letter.extend(ts.output(t, cube));
            for (guard, q2) in &uca.transitions[q] {
                if !guard.holds_on(&letter, &scope) {
                    continue;
                }
                let key = (t2, *q2);
                let target = *ids.entry(key).or_insert_with(|| {
                    nodes.push(key);
                    edges.push(Vec::new());
                    nodes.len() - 1
                });
                if out.iter().all(|e| e.target != target) {
                    out.push(RunEdge {
                        target,
                        letter: guard.complete(&letter, &scope),
                    });
                }
            }
        }
        edges[next] = out;
        next += 1;
    }
    let rejecting = nodes.iter().map(|&(_, q)| uca.rejecting[q]).collect();
    Ok(RunGraph {
        nodes,
        rejecting,
        edges,
        initial: 0,
    })
}
