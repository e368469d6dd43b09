//! LTL to universal co-Büchi automata, run graphs and valid annotations.

mod annotation;
mod dot;
mod nnf;
mod run_graph;
mod tableau;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::LtlFormula;
use crate::Letter;

pub use annotation::{check_annotation, find_valid_annotation, rejecting_cycle_exists, Annotation};
pub use run_graph::{build_run_graph, RunEdge, RunGraph};
pub use tableau::ltl_to_nba;

/// Default limit on automaton states.
pub const DEFAULT_STATE_CAP: usize = 5000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomataError {
    #[error("automaton exceeds the state cap of {cap}")]
    StateCap { cap: usize },
    #[error("atom `{atom}` is not in the automaton alphabet")]
    AlphabetMismatch { atom: String },
}

/// A conjunction of literals. The empty guard is `true`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Guard {
    /// Variable to required polarity.
    pub lits: BTreeMap<String, bool>,
}

impl Guard {
    pub fn top() -> Self {
        Guard::default()
    }

    pub fn holds(&self, letter: &Letter) -> bool {
        self.lits.iter().all(|(v, &b)| letter.contains(v) == b)
    }

    /// Evaluates the literals over variables in `scope`; literals on other
    /// variables are left unconstrained.
    pub fn holds_on(&self, letter: &Letter, scope: &BTreeSet<String>) -> bool {
        self.lits
            .iter()
            .filter(|(v, _)| scope.contains(*v))
            .all(|(v, &b)| letter.contains(v) == b)
    }

    /// `letter` extended with the positive literals on variables outside
    /// `scope`, which satisfies the guard whenever `holds_on` does.
    pub fn complete(&self, letter: &Letter, scope: &BTreeSet<String>) -> Letter {
        let mut out = letter.clone();
        for (v, &b) in &self.lits {
            if b && !scope.contains(v) {
                out.insert(v.clone());
            }
        }
        out
    }
}

impl std::fmt::Display for Guard {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.lits.is_empty() {
            return f.write_str("true");
        }
        let parts: Vec<String> = self
            .lits
            .iter()
            .map(|(v, &b)| if b { v.clone() } else { format!("!{v}") })
            .collect();
        f.write_str(&parts.join(" && "))
    }
}

/// Nondeterministic Büchi automaton with accepting states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuchiAutomaton {
    pub alphabet: BTreeSet<String>,
    pub initial: usize,
    pub transitions: Vec<Vec<(Guard, usize)>>,
    pub accepting: Vec<bool>,
}

/// Universal co-Büchi automaton: a word is accepted iff every run visits
/// rejecting states finitely often. Missing transitions end a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalCoBuchi {
    pub alphabet: BTreeSet<String>,
    pub initial: usize,
    pub transitions: Vec<Vec<(Guard, usize)>>,
    pub rejecting: Vec<bool>,
}

impl BuchiAutomaton {
    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    /// Whether some run on `stem · cycle^ω` is accepting.
    pub fn accepts_lasso(&self, stem: &[Letter], cycle: &[Letter]) -> bool {
        marked_cycle_on_lasso(&self.transitions, self.initial, &self.accepting, stem, cycle)
    }
}

impl UniversalCoBuchi {
    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    pub fn is_rejecting(&self, q: usize) -> bool {
        self.rejecting[q]
    }

    /// Whether every run on `stem · cycle^ω` visits rejecting states only
    /// finitely often.
    pub fn accepts_lasso(&self, stem: &[Letter], cycle: &[Letter]) -> bool {
        !marked_cycle_on_lasso(&self.transitions, self.initial, &self.rejecting, stem, cycle)
    }

    pub fn to_dot(&self) -> String {
        dot::automaton_dot(&self.transitions, self.initial, &self.rejecting, "rejecting")
    }
}

/// Searches the product of the automaton with the lasso positions for a
/// reachable cycle through a marked state.
fn marked_cycle_on_lasso(
    transitions: &[Vec<(Guard, usize)>],
    initial: usize,
    marked: &[bool],
    stem: &[Letter],
    cycle: &[Letter],
) -> bool {
    assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
    let len = stem.len() + cycle.len();
    let letter_at = |pos: usize| -> &Letter {
        if pos < stem.len() {
            &stem[pos]
        } else {
            &cycle[pos - stem.len()]
        }
    };
    let next_pos = |pos: usize| if pos + 1 == len { stem.len() } else { pos + 1 };
    let n = transitions.len();
    let id = |q: usize, pos: usize| q * len + pos;
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n * len];
    let mut seen = vec![false; n * len];
    let start = id(initial, 0);
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(node) = stack.pop() {
        let (q, pos) = (node / len, node % len);
        let letter = letter_at(pos);
        for (guard, q2) in &transitions[q] {
            if guard.holds(letter) {
                let target = id(*q2, next_pos(pos));
                succ[node].push(target);
                if !seen[target] {
                    seen[target] = true;
                    stack.push(target);
                }
            }
        }
    }
    let flags: Vec<bool> = (0..n * len).map(|v| seen[v] && marked[v / len]).collect();
    let rg = RunGraph::from_adjacency(
        (0..n * len).map(|v| (v / len, v % len)).collect(),
        flags,
        succ,
        start,
    );
    rejecting_cycle_exists(&rg)
}

/// Dualizes a Büchi automaton for `¬φ` into a universal co-Büchi
/// automaton for `φ`.
pub fn nba_to_uca(nba: BuchiAutomaton) -> UniversalCoBuchi {
    UniversalCoBuchi {
        alphabet: nba.alphabet,
        initial: nba.initial,
        transitions: nba.transitions,
        rejecting: nba.accepting,
    }
}

/// Translates `f` into a universal co-Büchi automaton over `alphabet`.
pub fn ltl_to_uca(
    f: &LtlFormula,
    alphabet: &BTreeSet<String>,
    cap: usize,
) -> Result<UniversalCoBuchi, AutomataError> {
    let nba = ltl_to_nba(&f.clone().not(), alphabet, cap)?;
    Ok(nba_to_uca(nba))
}
