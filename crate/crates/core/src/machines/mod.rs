//! Moore and Mealy transition systems, guarantee transition systems, local
//! strategies and the operations relating them.

mod compose;
mod io;
mod restrict;
mod simulation;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::Letter;

pub use compose::{compose_all, parallel_compose};
pub use io::{MachineFile, MachineKind, StateEntry, TransitionEntry};
pub use restrict::{defined_inputs, extend, extend_mealy, restrict};
pub use simulation::simulates;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("machine alphabets do not fit: {0}")]
    AlphabetMismatch(String),
    #[error("`{0}` is an output of more than one component")]
    OutputOverlap(String),
    #[error("composition has no unique consistent output valuation at a reachable state")]
    Combinational,
    #[error("strategy is not simulated by its certificate")]
    NotSimulated,
    #[error("malformed machine: {0}")]
    Malformed(String),
}

/// Letter of the variables whose bits are set in `cube`.
pub fn cube_letter(vars: &[String], cube: usize) -> Letter {
    vars.iter()
        .enumerate()
        .filter(|(k, _)| cube >> k & 1 == 1)
        .map(|(_, v)| v.clone())
        .collect()
}

/// Cube of `vars` that are contained in `letter`.
pub fn letter_cube(vars: &[String], letter: &Letter) -> usize {
    vars.iter()
        .enumerate()
        .filter(|(_, v)| letter.contains(*v))
        .fold(0, |acc, (k, _)| acc | 1 << k)
}

fn sorted_unique(vars: &[String]) -> bool {
    vars.windows(2).all(|w| w[0] < w[1])
}

/// Common view of all machine kinds. Inputs are encoded as cubes: bit `k`
/// of a cube is the value of `inputs()[k]`.
pub trait TransitionSystem {
    fn inputs(&self) -> &[String];
    fn outputs(&self) -> &[String];
    fn num_states(&self) -> usize;
    fn initial(&self) -> usize;
    fn successor(&self, state: usize, cube: usize) -> Option<usize>;
    /// Outputs emitted in `state` when reading `cube`.
    fn output(&self, state: usize, cube: usize) -> Letter;
    /// Whether outputs depend on the state only.
    fn is_moore(&self) -> bool;

    fn num_cubes(&self) -> usize {
        1 << self.inputs().len()
    }

    fn is_total(&self) -> bool {
        (0..self.num_states())
            .all(|t| (0..self.num_cubes()).all(|c| self.successor(t, c).is_some()))
    }

    /// States reachable from the initial state.
    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        seen[self.initial()] = true;
        let mut stack = vec![self.initial()];
        while let Some(t) = stack.pop() {
            for c in 0..self.num_cubes() {
                if let Some(t2) = self.successor(t, c) {
                    if !seen[t2] {
                        seen[t2] = true;
                        stack.push(t2);
                    }
                }
            }
        }
        seen
    }
}

/// Runs `ts` on a finite input trace. Letter `k` of the result is the
/// input at `k` (restricted to the machine's inputs) joined with the
/// output at `k`; it is emitted only if the transition at `k` is defined.
pub fn compute(ts: &dyn TransitionSystem, input: &[Letter]) -> Vec<Letter> {
    let inputs = ts.inputs();
    let mut out = Vec::with_capacity(input.len());
    let mut t = ts.initial();
    for letter in input {
        let cube = letter_cube(inputs, letter);
        let Some(t2) = ts.successor(t, cube) else { break };
        let mut emitted = cube_letter(inputs, cube);
        emitted.extend(ts.output(t, cube));
        out.push(emitted);
        t = t2;
    }
    out
}

/// Total Moore transition system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreTs {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub initial: usize,
    /// `succ[t][cube]`.
    pub succ: Vec<Vec<usize>>,
    pub labels: Vec<Letter>,
}

impl MooreTs {
    /// Panics if the variable lists are unsorted or the tables are ragged.
    pub fn new(
        inputs: Vec<String>,
        outputs: Vec<String>,
        initial: usize,
        succ: Vec<Vec<usize>>,
        labels: Vec<Letter>,
    ) -> Self {
        let ts = MooreTs {
            inputs,
            outputs,
            initial,
            succ,
            labels,
        };
        if let Err(e) = ts.check() {
            panic!("{e}");
        }
        ts
    }

    pub fn check(&self) -> Result<(), MachineError> {
        let n = self.succ.len();
        let cubes = 1usize << self.inputs.len();
        let outs: BTreeSet<&String> = self.outputs.iter().collect();
        if !sorted_unique(&self.inputs) || !sorted_unique(&self.outputs) {
            return Err(MachineError::Malformed("variable lists must be sorted and unique".into()));
        }
        if n == 0 || self.initial >= n || self.labels.len() != n {
            return Err(MachineError::Malformed("state tables do not match".into()));
        }
        for (t, row) in self.succ.iter().enumerate() {
            if row.len() != cubes || row.iter().any(|&s| s >= n) {
                return Err(MachineError::Malformed(format!("bad transition row at state {t}")));
            }
            if self.labels[t].iter().any(|v| !outs.contains(v)) {
                return Err(MachineError::Malformed(format!("label of state {t} is not over the outputs")));
            }
        }
        Ok(())
    }

    /// Machine with a single state looping on every input.
    pub fn constant(inputs: Vec<String>, outputs: Vec<String>, label: Letter) -> Self {
        let cubes = 1 << inputs.len();
        MooreTs::new(inputs, outputs, 0, vec![vec![0; cubes]], vec![label])
    }

    pub fn to_dot(&self, name: &str) -> String {
        io::machine_dot(self, name)
    }
}

impl TransitionSystem for MooreTs {
    fn inputs(&self) -> &[String] {
        &self.inputs
    }
    fn outputs(&self) -> &[String] {
        &self.outputs
    }
    fn num_states(&self) -> usize {
        self.succ.len()
    }
    fn initial(&self) -> usize {
        self.initial
    }
    fn successor(&self, state: usize, cube: usize) -> Option<usize> {
        Some(self.succ[state][cube])
    }
    fn output(&self, state: usize, _cube: usize) -> Letter {
        self.labels[state].clone()
    }
    fn is_moore(&self) -> bool {
        true
    }
}

/// Certificate of a process: a total deterministic Moore machine over the
/// process's inputs and its guarantee outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuaranteeTs(pub MooreTs);

impl GuaranteeTs {
    pub fn ts(&self) -> &MooreTs {
        &self.0
    }
}

impl TransitionSystem for GuaranteeTs {
    fn inputs(&self) -> &[String] {
        &self.0.inputs
    }
    fn outputs(&self) -> &[String] {
        &self.0.outputs
    }
    fn num_states(&self) -> usize {
        self.0.num_states()
    }
    fn initial(&self) -> usize {
        self.0.initial
    }
    fn successor(&self, state: usize, cube: usize) -> Option<usize> {
        self.0.successor(state, cube)
    }
    fn output(&self, state: usize, cube: usize) -> Letter {
        self.0.output(state, cube)
    }
    fn is_moore(&self) -> bool {
        true
    }
}

/// Machine with a partial transition function and input-dependent outputs.
/// Serves as complete Mealy strategy and as the result of n-ary composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyTs {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub initial: usize,
    pub succ: Vec<Vec<Option<usize>>>,
    /// `labels[t][cube]`.
    pub labels: Vec<Vec<Letter>>,
}

impl MealyTs {
    pub fn check(&self) -> Result<(), MachineError> {
        let n = self.succ.len();
        let cubes = 1usize << self.inputs.len();
        if !sorted_unique(&self.inputs) || !sorted_unique(&self.outputs) {
            return Err(MachineError::Malformed("variable lists must be sorted and unique".into()));
        }
        if n == 0 || self.initial >= n || self.labels.len() != n {
            return Err(MachineError::Malformed("state tables do not match".into()));
        }
        for t in 0..n {
            if self.succ[t].len() != cubes
                || self.labels[t].len() != cubes
                || self.succ[t].iter().flatten().any(|&s| s >= n)
            {
                return Err(MachineError::Malformed(format!("bad transition row at state {t}")));
            }
        }
        Ok(())
    }

    pub fn from_moore(ts: &MooreTs) -> Self {
        MealyTs {
            inputs: ts.inputs.clone(),
            outputs: ts.outputs.clone(),
            initial: ts.initial,
            succ: ts.succ.iter().map(|r| r.iter().map(|&s| Some(s)).collect()).collect(),
            labels: ts
                .labels
                .iter()
                .map(|l| vec![l.clone(); ts.num_cubes()])
                .collect(),
        }
    }

    pub fn to_dot(&self, name: &str) -> String {
        io::general_dot(self, name)
    }
}

impl TransitionSystem for MealyTs {
    fn inputs(&self) -> &[String] {
        &self.inputs
    }
    fn outputs(&self) -> &[String] {
        &self.outputs
    }
    fn num_states(&self) -> usize {
        self.succ.len()
    }
    fn initial(&self) -> usize {
        self.initial
    }
    fn successor(&self, state: usize, cube: usize) -> Option<usize> {
        self.succ[state][cube]
    }
    fn output(&self, state: usize, cube: usize) -> Letter {
        self.labels[state][cube].clone()
    }
    fn is_moore(&self) -> bool {
        false
    }
}

/// Strategy with a partial transition function: it is defined exactly
/// where the relevant processes' certificates allow the input.
/// `expectations[t]` holds the associated outputs the state expects to
/// read, i.e. its labeling over `O^A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalStrategy {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub associated: Vec<String>,
    pub initial: usize,
    pub succ: Vec<Vec<Option<usize>>>,
    /// Own outputs per state and cube; constant across cubes in Moore mode.
    pub labels: Vec<Vec<Letter>>,
    pub expectations: Vec<Letter>,
    pub moore: bool,
}

impl LocalStrategy {
    /// Local strategy that is a copy of a complete machine.
    pub fn from_complete(ts: &dyn TransitionSystem) -> Self {
        let n = ts.num_states();
        let cubes = ts.num_cubes();
        LocalStrategy {
            inputs: ts.inputs().to_vec(),
            outputs: ts.outputs().to_vec(),
            associated: Vec::new(),
            initial: ts.initial(),
            succ: (0..n)
                .map(|t| (0..cubes).map(|c| ts.successor(t, c)).collect())
                .collect(),
            labels: (0..n)
                .map(|t| (0..cubes).map(|c| ts.output(t, c)).collect())
                .collect(),
            expectations: vec![Letter::new(); n],
            moore: ts.is_moore(),
        }
    }

    pub fn check(&self) -> Result<(), MachineError> {
        let n = self.succ.len();
        let cubes = 1usize << self.inputs.len();
        if !sorted_unique(&self.inputs) || !sorted_unique(&self.outputs) || !sorted_unique(&self.associated) {
            return Err(MachineError::Malformed("variable lists must be sorted and unique".into()));
        }
        if self.associated.iter().any(|v| !self.inputs.contains(v)) {
            return Err(MachineError::Malformed("associated outputs must be inputs".into()));
        }
        if n == 0 || self.initial >= n || self.labels.len() != n || self.expectations.len() != n {
            return Err(MachineError::Malformed("state tables do not match".into()));
        }
        for t in 0..n {
            if self.succ[t].len() != cubes
                || self.labels[t].len() != cubes
                || self.succ[t].iter().flatten().any(|&s| s >= n)
            {
                return Err(MachineError::Malformed(format!("bad transition row at state {t}")));
            }
            if self.moore && self.labels[t].iter().any(|l| *l != self.labels[t][0]) {
                return Err(MachineError::Malformed(format!("state {t} has input-dependent outputs")));
            }
        }
        Ok(())
    }

    /// Whether `cube` agrees with the expectation of `state` on the
    /// associated outputs.
    pub fn expects(&self, state: usize, cube: usize) -> bool {
        self.associated.iter().all(|v| {
            let k = self.inputs.iter().position(|x| x == v).expect("associated input");
            (cube >> k & 1 == 1) == self.expectations[state].contains(v)
        })
    }

    pub fn to_dot(&self, name: &str) -> String {
        io::local_dot(self, name)
    }
}

impl TransitionSystem for LocalStrategy {
    fn inputs(&self) -> &[String] {
        &self.inputs
    }
    fn outputs(&self) -> &[String] {
        &self.outputs
    }
    fn num_states(&self) -> usize {
        self.succ.len()
    }
    fn initial(&self) -> usize {
        self.initial
    }
    fn successor(&self, state: usize, cube: usize) -> Option<usize> {
        self.succ[state][cube]
    }
    fn output(&self, state: usize, cube: usize) -> Letter {
        self.labels[state][cube].clone()
    }
    fn is_moore(&self) -> bool {
        self.moore
    }
}

/// A complete strategy in either output discipline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    Moore(MooreTs),
    Mealy(MealyTs),
}

impl Strategy {
    pub fn as_ts(&self) -> &dyn TransitionSystem {
        match self {
            Strategy::Moore(m) => m,
            Strategy::Mealy(m) => m,
        }
    }

    pub fn to_dot(&self, name: &str) -> String {
        match self {
            Strategy::Moore(m) => m.to_dot(name),
            Strategy::Mealy(m) => m.to_dot(name),
        }
    }
}

/// Whether `prefix` agrees, position by position, with the guarantee
/// outputs each certificate produces when driven by the prefix.
pub fn is_valid_history(prefix: &[Letter], guarantees: &[&GuaranteeTs]) -> bool {
    guarantees.iter().all(|g| {
        let comp = compute(*g, prefix);
        debug_assert_eq!(comp.len(), prefix.len());
        comp.iter().zip(prefix).all(|(expected, actual)| {
            g.outputs()
                .iter()
                .all(|v| expected.contains(v) == actual.contains(v))
        })
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::letter;

    fn vars(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    /// Builds a table over sorted `inputs` from a predicate on letters.
    pub fn table<F: Fn(usize, &Letter) -> usize>(inputs: &[String], states: usize, f: F) -> Vec<Vec<usize>> {
        (0..states)
            .map(|t| {
                (0..1usize << inputs.len())
                    .map(|c| f(t, &cube_letter(inputs, c)))
                    .collect()
            })
            .collect()
    }

    /// Certificate of r2: stays silent while r1 is at the crossing and
    /// moves otherwise.
    pub fn g2() -> GuaranteeTs {
        let inputs = vars(&["at_crossing_1", "at_crossing_2", "go_1"]);
        let succ = table(&inputs, 2, |_, l| if l.contains("at_crossing_1") { 0 } else { 1 });
        GuaranteeTs(MooreTs::new(
            inputs,
            vars(&["go_2"]),
            0,
            succ,
            vec![letter::<_, &str>([]), letter(["go_2"])],
        ))
    }

    /// Certificate of r1.
    pub fn g1() -> GuaranteeTs {
        let inputs = vars(&["at_crossing_1", "at_crossing_2", "go_2"]);
        let succ = table(&inputs, 2, |_, l| if l.contains("at_crossing_1") { 0 } else { 1 });
        GuaranteeTs(MooreTs::new(
            inputs,
            vars(&["go_1"]),
            0,
            succ,
            vec![letter(["go_1"]), letter::<_, &str>([])],
        ))
    }

    /// Strategy of r1: next state is decided by `at_crossing_1` alone.
    pub fn s1() -> MooreTs {
        let inputs = vars(&["at_crossing_1", "at_crossing_2", "go_2"]);
        let succ = table(&inputs, 2, |_, l| if l.contains("at_crossing_1") { 0 } else { 1 });
        MooreTs::new(
            inputs,
            vars(&["go_1", "m_1"]),
            0,
            succ,
            vec![letter(["go_1"]), letter::<_, &str>([])],
        )
    }

    /// Strategy of r2.
    pub fn s2() -> MooreTs {
        let inputs = vars(&["at_crossing_1", "at_crossing_2", "go_1"]);
        let succ = table(&inputs, 2, |_, l| if l.contains("at_crossing_1") { 0 } else { 1 });
        MooreTs::new(
            inputs,
            vars(&["go_2", "m_2"]),
            0,
            succ,
            vec![letter::<_, &str>([]), letter(["go_2"])],
        )
    }
}
