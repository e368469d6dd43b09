//! LTL formulas, conjunctive specifications, decomposition into per-process
//! subspecifications and relevant-process computation.

mod parser;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::architecture::Architecture;

pub use parser::{parse_ltl, ParseError};

/// Abstract syntax of an LTL formula.
///
/// Derived operators (`F`, `G`, `->`, `<->`) are kept as written; the
/// automata translation expands them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LtlFormula {
    Atom(String),
    True,
    False,
    Not(Box<LtlFormula>),
    And(Box<LtlFormula>, Box<LtlFormula>),
    Or(Box<LtlFormula>, Box<LtlFormula>),
    Implies(Box<LtlFormula>, Box<LtlFormula>),
    Iff(Box<LtlFormula>, Box<LtlFormula>),
    Next(Box<LtlFormula>),
    Until(Box<LtlFormula>, Box<LtlFormula>),
    Eventually(Box<LtlFormula>),
    Globally(Box<LtlFormula>),
}

impl LtlFormula {
    pub fn atom(name: impl Into<String>) -> Self {
        LtlFormula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        LtlFormula::Not(Box::new(self))
    }

    pub fn and(self, other: Self) -> Self {
        LtlFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Self) -> Self {
        LtlFormula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Self) -> Self {
        LtlFormula::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Self) -> Self {
        LtlFormula::Iff(Box::new(self), Box::new(other))
    }

    pub fn next(self) -> Self {
        LtlFormula::Next(Box::new(self))
    }

    pub fn until(self, other: Self) -> Self {
        LtlFormula::Until(Box::new(self), Box::new(other))
    }

    pub fn eventually(self) -> Self {
        LtlFormula::Eventually(Box::new(self))
    }

    pub fn globally(self) -> Self {
        LtlFormula::Globally(Box::new(self))
    }

    /// Conjunction of all formulas; `true` for an empty iterator.
    pub fn conjunction<I: IntoIterator<Item = LtlFormula>>(parts: I) -> Self {
        parts
            .into_iter()
            .reduce(LtlFormula::and)
            .unwrap_or(LtlFormula::True)
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn children(&self) -> Vec<&LtlFormula> {
        use LtlFormula::*;
        match self {
            Atom(_) | True | False => vec![],
            Not(a) | Next(a) | Eventually(a) | Globally(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Until(a, b) => vec![a, b],
        }
    }

    /// The atomic propositions occurring in the formula.
    pub fn atomic_props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        if let LtlFormula::Atom(name) = self {
            out.insert(name.clone());
        }
        for child in self.children() {
            child.collect_atoms(out);
        }
    }

    /// Splits the formula at its top-level conjunctions.
    pub fn top_level_conjuncts(&self) -> Vec<LtlFormula> {
        let mut out = Vec::new();
        fn walk(f: &LtlFormula, out: &mut Vec<LtlFormula>) {
            match f {
                LtlFormula::And(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other.clone()),
            }
        }
        walk(self, &mut out);
        out
    }

    fn precedence(&self) -> u8 {
        use LtlFormula::*;
        match self {
            Implies(..) | Iff(..) => 1,
            Or(..) => 2,
            And(..) => 3,
            Until(..) => 4,
            Not(_) | Next(_) | Eventually(_) | Globally(_) => 5,
            Atom(_) | True | False => 6,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        use LtlFormula::*;
        let prec = self.precedence();
        let paren = prec < ctx;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Atom(name) => f.write_str(name)?,
            True => f.write_str("true")?,
            False => f.write_str("false")?,
            Not(a) => {
                f.write_str("!")?;
                a.fmt_prec(f, 5)?;
            }
            Next(a) | Eventually(a) | Globally(a) => {
                let op = match self {
                    Next(_) => "X ",
                    Eventually(_) => "F ",
                    _ => "G ",
                };
                f.write_str(op)?;
                a.fmt_prec(f, 5)?;
            }
            And(a, b) | Or(a, b) => {
                a.fmt_prec(f, prec)?;
                f.write_str(if matches!(self, And(..)) { " && " } else { " || " })?;
                b.fmt_prec(f, prec + 1)?;
            }
            Implies(a, b) | Iff(a, b) | Until(a, b) => {
                let op = match self {
                    Implies(..) => " -> ",
                    Iff(..) => " <-> ",
                    _ => " U ",
                };
                a.fmt_prec(f, prec + 1)?;
                f.write_str(op)?;
                // `<->` never chains without parentheses.
                let rhs = if matches!(self, Iff(..)) { prec + 1 } else { prec };
                b.fmt_prec(f, rhs)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for LtlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A specification given as an ordered list of conjuncts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConjunctiveSpec {
    pub conjuncts: Vec<LtlFormula>,
}

impl ConjunctiveSpec {
    pub fn new(conjuncts: Vec<LtlFormula>) -> Self {
        ConjunctiveSpec { conjuncts }
    }

    /// Builds a specification by splitting `formula` at its top-level `&&`.
    pub fn from_formula(formula: &LtlFormula) -> Self {
        ConjunctiveSpec {
            conjuncts: formula.top_level_conjuncts(),
        }
    }

    /// Parses each string as one conjunct.
    pub fn parse<S: AsRef<str>>(texts: &[S]) -> Result<Self, ParseError> {
        let conjuncts = texts
            .iter()
            .map(|t| parse_ltl(t.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ConjunctiveSpec { conjuncts })
    }

    pub fn formula(&self) -> LtlFormula {
        LtlFormula::conjunction(self.conjuncts.iter().cloned())
    }

    pub fn atomic_props(&self) -> BTreeSet<String> {
        self.conjuncts
            .iter()
            .flat_map(|c| c.atomic_props())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.conjuncts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conjuncts.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("atom `{atom}` is not a variable of the architecture")]
    UnknownAtom { atom: String },
}

/// Per-process subspecifications, indexed like the architecture's processes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub subspecs: Vec<ConjunctiveSpec>,
}

impl Decomposition {
    pub fn subspec(&self, process: usize) -> &ConjunctiveSpec {
        &self.subspecs[process]
    }
}

/// Checks that every atom of the specification is a variable of `arch`.
pub fn check_atoms(spec: &ConjunctiveSpec, arch: &Architecture) -> Result<(), SpecError> {
    let vars = arch.variables();
    match spec.atomic_props().into_iter().find(|a| !vars.contains(a)) {
        Some(atom) => Err(SpecError::UnknownAtom { atom }),
        None => Ok(()),
    }
}

/// Assigns each conjunct to every process whose outputs it mentions, and
/// conjuncts that mention no system output to every process.
pub fn decompose(spec: &ConjunctiveSpec, arch: &Architecture) -> Result<Decomposition, SpecError> {
    check_atoms(spec, arch)?;
    let out = arch.out();
    let props: Vec<BTreeSet<String>> = spec.conjuncts.iter().map(|c| c.atomic_props()).collect();
    let subspecs = arch
        .processes
        .iter()
        .map(|p| {
            let conjuncts = spec
                .conjuncts
                .iter()
                .zip(&props)
                .filter(|(_, prop)| {
                    !prop.is_disjoint(&p.outputs) || prop.is_disjoint(&out)
                })
                .map(|(c, _)| c.clone())
                .collect();
            ConjunctiveSpec { conjuncts }
        })
        .collect();
    Ok(Decomposition { subspecs })
}

/// Relevant processes per process: the other processes whose outputs occur
/// in that process's subspecification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelevantProcesses {
    pub sets: Vec<BTreeSet<usize>>,
}

impl RelevantProcesses {
    pub fn of(&self, process: usize) -> &BTreeSet<usize> {
        &self.sets[process]
    }

    /// Same sets keyed by process name.
    pub fn by_name(&self, arch: &Architecture) -> BTreeMap<String, BTreeSet<String>> {
        self.sets
            .iter()
            .enumerate()
            .map(|(i, set)| {
                (
                    arch.processes[i].name.clone(),
                    set.iter().map(|&j| arch.processes[j].name.clone()).collect(),
                )
            })
            .collect()
    }
}

pub fn relevant_processes(dec: &Decomposition, arch: &Architecture) -> RelevantProcesses {
    let sets = dec
        .subspecs
        .iter()
        .enumerate()
        .map(|(i, sub)| {
            let props = sub.atomic_props();
            arch.processes
                .iter()
                .enumerate()
                .filter(|&(j, p)| j != i && !p.outputs.is_disjoint(&props))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    RelevantProcesses { sets }
}
