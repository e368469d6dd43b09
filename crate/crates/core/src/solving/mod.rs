//! SAT backends and decoding of models into machines.

pub mod cdcl;
mod external;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::encoding::{process_vars, CnfInstance, Mode, SemVar};
use crate::machines::{GuaranteeTs, LocalStrategy, MooreTs};
use crate::Letter;

pub use cdcl::{Outcome, Solver};

/// Which solver answers an instance.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum SolverBackend {
    #[default]
    Embedded,
    /// Executable called with a DIMACS file path; it must print an
    /// `s SATISFIABLE` or `s UNSATISFIABLE` line and `v` model lines.
    External(PathBuf),
}

#[derive(Debug, Clone, Default)]
pub struct SolverConfig {
    pub backend: SolverBackend,
    pub timeout: Option<Duration>,
    /// Where external backends get their DIMACS files; a fresh temporary
    /// directory if unset.
    pub work_dir: Option<PathBuf>,
}

/// A total assignment; `values[v - 1]` is the value of variable `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub values: Vec<bool>,
}

impl Model {
    pub fn value(&self, var: u32) -> bool {
        self.values[var as usize - 1]
    }

    pub fn satisfies(&self, clauses: &[Vec<i32>]) -> Option<usize> {
        clauses.iter().position(|c| {
            !c.iter()
                .any(|&l| self.values.get(l.unsigned_abs() as usize - 1).copied().unwrap_or(false) == (l > 0))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Sat(Model),
    Unsat,
    Unknown,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("could not run the solver: {0}")]
    Launch(#[from] std::io::Error),
    #[error("malformed solver output: {0}")]
    MalformedOutput(String),
    #[error("the solver's model violates clause {0}")]
    BadModel(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("process `{process}`: {what}")]
    Inconsistent { process: String, what: String },
}

/// Embedded solver on a clause list; the convenient form for tests.
pub fn solve_clauses(num_vars: usize, clauses: &[Vec<i32>], timeout: Option<Duration>) -> Outcome {
    let mut s = Solver::new(num_vars);
    for c in clauses {
        s.add_clause(c);
    }
    s.solve(timeout.map(|d| Instant::now() + d))
}

/// Solves a clause list and checks any model against every clause.
pub fn solve(num_vars: usize, clauses: &[Vec<i32>], config: &SolverConfig) -> Result<SolveResult, SolveError> {
    let result = match &config.backend {
        SolverBackend::Embedded => {
            let mut s = Solver::new(num_vars);
            for c in clauses {
                s.add_clause(c);
            }
            match s.solve(config.timeout.map(|d| Instant::now() + d)) {
                Outcome::Sat => SolveResult::Sat(Model { values: s.model() }),
                Outcome::Unsat => SolveResult::Unsat,
                Outcome::Unknown => SolveResult::Unknown,
            }
        }
        SolverBackend::External(path) => external::run(path, num_vars, clauses, config)?,
    };
    if let SolveResult::Sat(m) = &result {
        if let Some(k) = m.satisfies(clauses) {
            return Err(SolveError::BadModel(k));
        }
    }
    Ok(result)
}

pub fn solve_instance(instance: &CnfInstance, config: &SolverConfig) -> Result<SolveResult, SolveError> {
    solve(instance.num_vars, &instance.clauses, config)
}

/// Reads the local strategy and certificate of every process off a model.
pub fn decode(model: &Model, instance: &CnfInstance) -> Result<Vec<(LocalStrategy, GuaranteeTs)>, DecodeError> {
    let vars = process_vars(instance);
    let mut out = Vec::with_capacity(instance.layouts.len());
    for (j, lay) in instance.layouts.iter().enumerate() {
        let err = |what: String| DecodeError::Inconsistent {
            process: lay.name.clone(),
            what,
        };
        let val = |v: &SemVar| vars[j].get(v).map(|&id| model.value(id)).unwrap_or(false);
        let cubes = lay.num_cubes();
        let (ts, gs) = (lay.strategy_size, lay.certificate_size);
        let mut succ = vec![vec![None; cubes]; ts];
        let mut labels = vec![vec![Letter::new(); cubes]; ts];
        let mut expectations = vec![Letter::new(); ts];
        for t in 0..ts {
            for i in 0..cubes {
                let targets: Vec<usize> = (0..ts).filter(|&t2| val(&SemVar::TransT { j, t, i, t2 })).collect();
                if targets.len() > 1 {
                    return Err(err(format!("state {t} has {} successors", targets.len())));
                }
                succ[t][i] = targets.first().copied();
                let label_cube = (instance.mode == Mode::Mealy).then_some(i);
                labels[t][i] = lay
                    .outputs
                    .iter()
                    .enumerate()
                    .filter(|&(v, _)| val(&SemVar::OutT { j, t, i: label_cube, v }))
                    .map(|(_, name)| name.clone())
                    .collect();
            }
            expectations[t] = lay
                .associated
                .iter()
                .enumerate()
                .filter(|&(a, _)| {
                    val(&SemVar::OutT {
                        j,
                        t,
                        i: None,
                        v: lay.outputs.len() + a,
                    })
                })
                .map(|(_, name)| name.clone())
                .collect();
        }
        let local = LocalStrategy {
            inputs: lay.inputs.clone(),
            outputs: lay.outputs.clone(),
            associated: lay.associated.clone(),
            initial: 0,
            succ,
            labels,
            expectations,
            moore: instance.mode == Mode::Moore,
        };
        local.check().map_err(|e| err(e.to_string()))?;

        let mut gsucc = vec![vec![0; cubes]; gs];
        for (u, row) in gsucc.iter_mut().enumerate() {
            for (i, cell) in row.iter_mut().enumerate() {
                let targets: Vec<usize> = (0..gs).filter(|&u2| val(&SemVar::TransG { j, u, i, u2 })).collect();
                if targets.len() != 1 {
                    return Err(err(format!("certificate state {u} has {} successors", targets.len())));
                }
                *cell = targets[0];
            }
        }
        let glabels = (0..gs)
            .map(|u| {
                lay.guarantee_outputs
                    .iter()
                    .enumerate()
                    .filter(|&(v, _)| val(&SemVar::OutG { j, u, v }))
                    .map(|(_, name)| name.clone())
                    .collect()
            })
            .collect();
        let cert = MooreTs {
            inputs: lay.inputs.clone(),
            outputs: lay.guarantee_outputs.clone(),
            initial: 0,
            succ: gsucc,
            labels: glabels,
        };
        cert.check().map_err(|e| err(e.to_string()))?;
        out.push((local, GuaranteeTs(cert)));
    }
    Ok(out)
}
