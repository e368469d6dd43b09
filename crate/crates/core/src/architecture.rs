//! Distributed architectures: processes with input and output variables,
//! plus the environment's outputs.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::RelevantProcesses;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Process {
    pub name: String,
    pub inputs: BTreeSet<String>,
    pub outputs: BTreeSet<String>,
}

impl Process {
    pub fn new<I, O, S, T>(name: &str, inputs: I, outputs: O) -> Self
    where
        I: IntoIterator<Item = S>,
        O: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        Process {
            name: name.to_string(),
            inputs: inputs.into_iter().map(Into::into).collect(),
            outputs: outputs.into_iter().map(Into::into).collect(),
        }
    }

    /// `V_i = I_i ∪ O_i`.
    pub fn variables(&self) -> BTreeSet<String> {
        self.inputs.union(&self.outputs).cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    pub processes: Vec<Process>,
    pub env_outputs: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArchError {
    #[error("process `{process}` both reads and writes `{var}`")]
    InputOutputOverlap { process: String, var: String },
    #[error("`{var}` is an output of both `{first}` and `{second}`")]
    OutputOverlap {
        var: String,
        first: String,
        second: String,
    },
    #[error("`{var}` is an output of `{process}` and of the environment")]
    EnvOverlap { var: String, process: String },
    #[error("input `{var}` of `{process}` is produced by nobody")]
    DanglingInput { var: String, process: String },
    #[error("environment output `{var}` is read by no process")]
    UnreadEnvOutput { var: String },
    #[error("duplicate process name `{name}`")]
    DuplicateProcess { name: String },
    #[error("invalid identifier `{name}`")]
    BadIdentifier { name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArchWarning {
    NotDistributed { processes: usize },
}

impl fmt::Display for ArchWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArchWarning::NotDistributed { processes } => write!(
                f,
                "architecture has {processes} system process(es); synthesis is monolithic"
            ),
        }
    }
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    let reserved = matches!(name, "X" | "U" | "F" | "G" | "true" | "false");
    !reserved && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Architecture {
    pub fn new<E, S>(processes: Vec<Process>, env_outputs: E) -> Self
    where
        E: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Architecture {
            processes,
            env_outputs: env_outputs.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.processes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.processes.is_empty()
    }

    pub fn process_index(&self, name: &str) -> Option<usize> {
        self.processes.iter().position(|p| p.name == name)
    }

    /// All system and environment variables.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars: BTreeSet<String> = self.env_outputs.clone();
        for p in &self.processes {
            vars.extend(p.variables());
        }
        vars
    }

    /// `inp`: every variable some process reads.
    pub fn inp(&self) -> BTreeSet<String> {
        self.processes
            .iter()
            .flat_map(|p| p.inputs.iter().cloned())
            .collect()
    }

    /// `out`: every variable some system process writes.
    pub fn out(&self) -> BTreeSet<String> {
        self.processes
            .iter()
            .flat_map(|p| p.outputs.iter().cloned())
            .collect()
    }

    pub fn is_distributed(&self) -> bool {
        self.processes.len() >= 2
    }

    /// Index of the process writing `var`, if any.
    pub fn owner(&self, var: &str) -> Option<usize> {
        self.processes.iter().position(|p| p.outputs.contains(var))
    }

    /// Checks every structural condition and reports all violations.
    pub fn validate(&self) -> Result<Vec<ArchWarning>, Vec<ArchError>> {
        let mut errors = Vec::new();
        let mut names = BTreeSet::new();
        for p in &self.processes {
            if !is_identifier(&p.name) {
                errors.push(ArchError::BadIdentifier { name: p.name.clone() });
            }
            if !names.insert(&p.name) {
                errors.push(ArchError::DuplicateProcess { name: p.name.clone() });
            }
        }
        for var in self.variables() {
            if !is_identifier(&var) {
                errors.push(ArchError::BadIdentifier { name: var });
            }
        }
        for p in &self.processes {
            for var in p.inputs.intersection(&p.outputs) {
                errors.push(ArchError::InputOutputOverlap {
                    process: p.name.clone(),
                    var: var.clone(),
                });
            }
        }
        for (i, p) in self.processes.iter().enumerate() {
            for q in &self.processes[i + 1..] {
                for var in p.outputs.intersection(&q.outputs) {
                    errors.push(ArchError::OutputOverlap {
                        var: var.clone(),
                        first: p.name.clone(),
                        second: q.name.clone(),
                    });
                }
            }
            for var in p.outputs.intersection(&self.env_outputs) {
                errors.push(ArchError::EnvOverlap {
                    var: var.clone(),
                    process: p.name.clone(),
                });
            }
        }
        let out = self.out();
        for p in &self.processes {
            for var in &p.inputs {
                if !out.contains(var) && !self.env_outputs.contains(var) {
                    errors.push(ArchError::DanglingInput {
                        var: var.clone(),
                        process: p.name.clone(),
                    });
                }
            }
        }
        let inp = self.inp();
        for var in &self.env_outputs {
            if !inp.contains(var) {
                errors.push(ArchError::UnreadEnvOutput { var: var.clone() });
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        let mut warnings = Vec::new();
        if !self.is_distributed() {
            warnings.push(ArchWarning::NotDistributed {
                processes: self.processes.len(),
            });
        }
        Ok(warnings)
    }

    pub fn guarantee_alphabet(&self, relevant: &RelevantProcesses) -> GuaranteeAlphabet {
        let inp = self.inp();
        let guarantee_outputs: Vec<BTreeSet<String>> = self
            .processes
            .iter()
            .map(|p| p.outputs.intersection(&inp).cloned().collect())
            .collect();
        let associated_outputs = self
            .processes
            .iter()
            .enumerate()
            .map(|(j, p)| {
                relevant
                    .of(j)
                    .iter()
                    .flat_map(|&k| guarantee_outputs[k].intersection(&p.inputs).cloned())
                    .collect()
            })
            .collect();
        GuaranteeAlphabet {
            guarantee_outputs,
            associated_outputs,
        }
    }
}

/// Guarantee outputs `O^g_i = O_i ∩ inp` and associated outputs
/// `O^A_i = ⋃_{k ∈ R_i} O^g_k ∩ I_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuaranteeAlphabet {
    pub guarantee_outputs: Vec<BTreeSet<String>>,
    pub associated_outputs: Vec<BTreeSet<String>>,
}

impl GuaranteeAlphabet {
    /// `V^g_i = I_i ∪ O^g_i`.
    pub fn guarantee_vars(&self, arch: &Architecture, i: usize) -> BTreeSet<String> {
        arch.processes[i]
            .inputs
            .union(&self.guarantee_outputs[i])
            .cloned()
            .collect()
    }
}
