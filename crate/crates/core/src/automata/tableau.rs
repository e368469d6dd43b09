use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::nnf::{Arena, Nnf, NodeId};
use super::{AutomataError, BuchiAutomaton, Guard};
use crate::logic::LtlFormula;

const INIT: usize = usize::MAX;

type FormulaSet = BTreeSet<NodeId>;

#[derive(Clone)]
struct Pending {
    incoming: BTreeSet<usize>,
    new: FormulaSet,
    old: FormulaSet,
    next: FormulaSet,
}

struct Expanded {
    incoming: BTreeSet<usize>,
    old: FormulaSet,
}

/// Tableau expansion of a formula in negation normal form. Returns the
/// expanded nodes, each with its predecessors (`INIT` for the initial one).
fn expand(arena: &mut Arena, root: NodeId, cap: usize) -> Result<Vec<Expanded>, AutomataError> {
    let mut done: Vec<Expanded> = Vec::new();
    let mut by_key: HashMap<(FormulaSet, FormulaSet), usize> = HashMap::new();
    let mut stack = vec![Pending {
        incoming: BTreeSet::from([INIT]),
        new: BTreeSet::from([root]),
        old: BTreeSet::new(),
        next: BTreeSet::new(),
    }];
    while let Some(mut p) = stack.pop() {
        let Some(&eta) = p.new.iter().next() else {
            let key = (p.old, p.next);
            if let Some(&id) = by_key.get(&key) {
                done[id].incoming.extend(p.incoming);
                continue;
            }
            let id = done.len();
            if id >= cap {
                return Err(AutomataError::StateCap { cap });
            }
            let next = key.1.clone();
            done.push(Expanded {
                incoming: p.incoming,
                old: key.0.clone(),
            });
            by_key.insert(key, id);
            stack.push(Pending {
                incoming: BTreeSet::from([id]),
                new: next,
                old: BTreeSet::new(),
                next: BTreeSet::new(),
            });
            continue;
        };
        p.new.remove(&eta);
        match arena.nodes[eta] {
            Nnf::False => {}
            Nnf::True => {
                p.old.insert(eta);
                stack.push(p);
            }
            Nnf::Lit(..) => {
                let neg = arena.complement(eta).expect("literal");
                if !p.old.contains(&neg) {
                    p.old.insert(eta);
                    stack.push(p);
                }
            }
            Nnf::And(a, b) => {
                for x in [a, b] {
                    if !p.old.contains(&x) {
                        p.new.insert(x);
                    }
                }
                p.old.insert(eta);
                stack.push(p);
            }
            Nnf::Next(a) => {
                p.old.insert(eta);
                p.next.insert(a);
                stack.push(p);
            }
            Nnf::Or(a, b) | Nnf::Until(a, b) | Nnf::Release(a, b) => {
                let (new1, next1, new2): (Vec<NodeId>, bool, Vec<NodeId>) = match arena.nodes[eta] {
                    Nnf::Or(..) => (vec![a], false, vec![b]),
                    Nnf::Until(..) => (vec![a], true, vec![b]),
                    _ => (vec![b], true, vec![a, b]),
                };
                p.old.insert(eta);
                let mut p1 = p.clone();
                let mut p2 = p;
                for x in new1 {
                    if !p1.old.contains(&x) {
                        p1.new.insert(x);
                    }
                }
                if next1 {
                    p1.next.insert(eta);
                }
                for x in new2 {
                    if !p2.old.contains(&x) {
                        p2.new.insert(x);
                    }
                }
                stack.push(p2);
                stack.push(p1);
            }
        }
    }
    Ok(done)
}

/// Translates `f` into a state-labeled Büchi automaton over `alphabet`:
/// GPVW tableau, counter-based degeneralization, then removal of states
/// that cannot reach an accepting cycle. State 0 is initial.
pub fn ltl_to_nba(
    f: &LtlFormula,
    alphabet: &BTreeSet<String>,
    cap: usize,
) -> Result<BuchiAutomaton, AutomataError> {
    if let Some(atom) = f.atomic_props().into_iter().find(|a| !alphabet.contains(a)) {
        return Err(AutomataError::AlphabetMismatch { atom });
    }
    let mut arena = Arena::default();
    let root = arena.build(f, true);
    let nodes = expand(&mut arena, root, cap)?;

    let untils: Vec<(NodeId, NodeId)> = (0..arena.nodes.len())
        .filter_map(|id| match arena.nodes[id] {
            Nnf::Until(_, b) => Some((id, b)),
            _ => None,
        })
        .filter(|(id, _)| nodes.iter().any(|n| n.old.contains(id)))
        .collect();
    let in_set = |n: &Expanded, c: usize| {
        let (u, b) = untils[c];
        !n.old.contains(&u) || n.old.contains(&b)
    };
    let guards: Vec<Guard> = nodes
        .iter()
        .map(|n| {
            let mut lits = BTreeMap::new();
            for &id in &n.old {
                if let Nnf::Lit(v, b) = arena.nodes[id] {
                    lits.insert(arena.vars[v].clone(), b);
                }
            }
            Guard { lits }
        })
        .collect();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    let mut init_succ = Vec::new();
    for (m, n) in nodes.iter().enumerate() {
        for &p in &n.incoming {
            if p == INIT {
                init_succ.push(m);
            } else {
                succ[p].push(m);
            }
        }
    }

    // Degeneralization over states (node, counter); index 0 is the fresh
    // initial state.
    let k = untils.len();
    let levels = k.max(1);
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut states: Vec<(usize, usize)> = vec![(INIT, 0)];
    let mut edges: Vec<Vec<usize>> = vec![Vec::new()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let (n, c) = states[s];
        let (targets, c2) = if n == INIT {
            (&init_succ, 0)
        } else {
            let c2 = if k > 0 && in_set(&nodes[n], c) { (c + 1) % levels } else { c };
            (&succ[n], c2)
        };
        for &m in targets {
            let key = (m, c2);
            let t = match ids.get(&key) {
                Some(&t) => t,
                None => {
                    let t = states.len();
                    if t > cap {
                        return Err(AutomataError::StateCap { cap });
                    }
                    states.push(key);
                    edges.push(Vec::new());
                    ids.insert(key, t);
                    queue.push_back(t);
                    t
                }
            };
            edges[s].push(t);
        }
    }
    let accepting: Vec<bool> = states
        .iter()
        .map(|&(n, c)| n != INIT && (k == 0 || (c == 0 && in_set(&nodes[n], 0))))
        .collect();

    let live = live_states(&edges, &accepting);
    let mut renumber = vec![usize::MAX; states.len()];
    let mut order = Vec::new();
    for s in 0..states.len() {
        if s == 0 || live[s] {
            renumber[s] = order.len();
            order.push(s);
        }
    }
    let mut transitions = Vec::with_capacity(order.len());
    for &s in &order {
        let mut out: Vec<(Guard, usize)> = edges[s]
            .iter()
            .filter(|&&t| live[t])
            .map(|&t| (guards[states[t].0].clone(), renumber[t]))
            .collect();
        out.sort();
        out.dedup();
        transitions.push(out);
    }
    Ok(BuchiAutomaton {
        alphabet: alphabet.clone(),
        initial: 0,
        accepting: order.iter().map(|&s| accepting[s]).collect(),
        transitions,
    })
}

/// States from which an accepting state on a cycle is reachable.
fn live_states(edges: &[Vec<usize>], accepting: &[bool]) -> Vec<bool> {
    let sccs = super::annotation::tarjan(edges);
    let n = edges.len();
    let mut live = vec![false; n];
    for scc in &sccs {
        let cyclic = scc.len() > 1 || edges[scc[0]].contains(&scc[0]);
        if cyclic && scc.iter().any(|&v| accepting[v]) {
            for &v in scc {
                live[v] = true;
            }
        }
    }
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, out) in edges.iter().enumerate() {
        for &w in out {
            pred[w].push(v);
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| live[v]).collect();
    while let Some(v) = stack.pop() {
        for &p in &pred[v] {
            if !live[p] {
                live[p] = true;
                stack.push(p);
            }
        }
    }
    live
}
