use std::collections::{BTreeMap, HashMap};

/// Semantic SAT variables. Process, state and cube indices refer to the
/// layout of the instance; `v` indexes the process's labelled variables
/// (own outputs followed by associated outputs) or its guarantee outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemVar {
    TransT { j: usize, t: usize, i: usize, t2: usize },
    /// `i` is `Some` for input-dependent (Mealy) own outputs.
    OutT { j: usize, t: usize, i: Option<usize>, v: usize },
    TransG { j: usize, u: usize, i: usize, u2: usize },
    OutG { j: usize, u: usize, v: usize },
    SimTG { j: usize, t: usize, u: usize },
    SimGT { k: usize, j: usize, u: usize, t: usize },
    Reach { j: usize, t: usize, q: usize },
    Bit { j: usize, t: usize, q: usize, b: usize },
    /// Comparator auxiliary: bits `b..0` of `bound(t2,q2)` dominate those
    /// of `bound(t,q)`.
    Cmp { j: usize, t: usize, q: usize, t2: usize, q2: usize, b: usize },
}

/// Bijection between semantic variables and DIMACS indices `1..=n`.
#[derive(Debug, Clone, Default)]
pub struct VariableRegistry {
    index: HashMap<SemVar, u32>,
    vars: Vec<SemVar>,
    names: Vec<String>,
}

impl VariableRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn get(&self, var: &SemVar) -> Option<u32> {
        self.index.get(var).copied()
    }

    /// Index of `var`, allocating it with the name produced by `name`.
    pub fn intern(&mut self, var: SemVar, name: impl FnOnce() -> String) -> u32 {
        if let Some(&id) = self.index.get(&var) {
            return id;
        }
        self.vars.push(var);
        self.names.push(name());
        let id = self.vars.len() as u32;
        self.index.insert(var, id);
        id
    }

    pub fn var(&self, id: u32) -> SemVar {
        self.vars[id as usize - 1]
    }

    pub fn name(&self, id: u32) -> &str {
        &self.names[id as usize - 1]
    }

    /// Name to index, for the JSON sidecar.
    pub fn to_map(&self) -> BTreeMap<String, u32> {
        self.names
            .iter()
            .enumerate()
            .map(|(k, n)| (n.clone(), k as u32 + 1))
            .collect()
    }
}
