//! Independent checks of a certifying-synthesis solution.
//!
//! The decisive check is global: the composition of all strategies is
//! model checked against the automaton of the whole specification. The
//! per-process checks relate strategies, local strategies and certificates.

mod lasso;

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::architecture::Architecture;
use crate::automata::{
    build_run_graph, check_annotation, find_valid_annotation, ltl_to_uca, AutomataError,
};
use crate::logic::{decompose, ConjunctiveSpec, RelevantProcesses, SpecError};
use crate::machines::{
    compose_all, cube_letter, GuaranteeTs, LocalStrategy, MachineError, Strategy, TransitionSystem,
};
use crate::Letter;

pub use lasso::{counterexample_lasso, Lasso};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Informational: does not affect the verdict.
    Warn,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub realizable: bool,
}

impl Report {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("process `{process}`: {what}")]
    AlphabetMismatch { process: String, what: String },
    #[error("expected machines for {expected} processes, got {got}")]
    ProcessCount { expected: usize, got: usize },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// Machines synthesized for one process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessSolution {
    pub name: String,
    pub strategy: Strategy,
    pub local: LocalStrategy,
    pub certificate: GuaranteeTs,
}

fn letter_json(l: &Letter) -> serde_json::Value {
    serde_json::Value::from(l.iter().cloned().collect::<Vec<_>>())
}

fn trace_json(trace: &[Letter]) -> serde_json::Value {
    serde_json::Value::from(trace.iter().map(letter_json).collect::<Vec<_>>())
}

/// Shortest input trace after which `concrete` and the deterministic
/// `abstract_ts` disagree on the abstract outputs. The last letter is the
/// input on which the outputs differ. `None` iff the abstract machine
/// simulates the concrete one.
pub fn simulation_witness(abstract_ts: &dyn TransitionSystem, concrete: &dyn TransitionSystem) -> Option<Vec<Letter>> {
    let observed = abstract_ts.outputs();
    let inputs = concrete.inputs();
    let differs = |t2: usize, t1: usize, c: usize| {
        let (o2, o1) = (concrete.output(t2, c), abstract_ts.output(t1, c));
        observed.iter().any(|v| o2.contains(v) != o1.contains(v))
    };
    let start = (concrete.initial(), abstract_ts.initial());
    let mut parent: HashMap<(usize, usize), Option<((usize, usize), usize)>> = HashMap::from([(start, None)]);
    let mut queue = VecDeque::from([start]);
    let trace_to = |parent: &HashMap<(usize, usize), Option<((usize, usize), usize)>>, mut node: (usize, usize)| {
        let mut cubes = Vec::new();
        while let Some(Some((p, c))) = parent.get(&node) {
            cubes.push(*c);
            node = *p;
        }
        cubes.reverse();
        cubes
    };
    while let Some((t2, t1)) = queue.pop_front() {
        for c in 0..concrete.num_cubes() {
            let next2 = concrete.successor(t2, c);
            let checked = next2.is_some() || (concrete.is_moore() && c == 0);
            if checked && differs(t2, t1, c) {
                let mut cubes = trace_to(&parent, (t2, t1));
                cubes.push(c);
                return Some(cubes.into_iter().map(|c| cube_letter(inputs, c)).collect());
            }
            let Some(s2) = next2 else { continue };
            let Some(s1) = abstract_ts.successor(t1, c) else {
                let mut cubes = trace_to(&parent, (t2, t1));
                cubes.push(c);
                return Some(cubes.into_iter().map(|c| cube_letter(inputs, c)).collect());
            };
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry((s2, s1)) {
                e.insert(Some(((t2, t1), c)));
                queue.push_back((s2, s1));
            }
        }
    }
    None
}

fn sorted(set: &BTreeSet<String>) -> Vec<String> {
    set.iter().cloned().collect()
}

/// Runs every check on a solution. Fails only on malformed input; the
/// verdict is in the report.
pub fn verify_solution(
    arch: &Architecture,
    spec: &ConjunctiveSpec,
    solution: &[ProcessSolution],
    relevant: &RelevantProcesses,
    state_cap: usize,
) -> Result<Report, VerifyError> {
    if solution.len() != arch.len() {
        return Err(VerifyError::ProcessCount {
            expected: arch.len(),
            got: solution.len(),
        });
    }
    let dec = decompose(spec, arch)?;
    let alphabet = arch.guarantee_alphabet(relevant);
    let vars = arch.variables();
    for (j, (p, sol)) in arch.processes.iter().zip(solution).enumerate() {
        let mismatch = |what: &str| {
            Err(VerifyError::AlphabetMismatch {
                process: p.name.clone(),
                what: what.to_string(),
            })
        };
        let (ins, outs) = (sorted(&p.inputs), sorted(&p.outputs));
        let s = sol.strategy.as_ts();
        if s.inputs() != ins.as_slice() || s.outputs() != outs.as_slice() {
            return mismatch("strategy alphabet differs from the architecture");
        }
        if sol.local.inputs != ins || sol.local.outputs != outs {
            return mismatch("local strategy alphabet differs from the architecture");
        }
        if sol.certificate.0.inputs != ins || sol.certificate.0.outputs != sorted(&alphabet.guarantee_outputs[j]) {
            return mismatch("certificate alphabet must be the inputs and guarantee outputs");
        }
    }

    let mut checks = Vec::new();
    for sol in solution {
        let witness = simulation_witness(&sol.certificate, sol.strategy.as_ts());
        checks.push(Check {
            name: format!("simulation:{}", sol.name),
            status: if witness.is_none() { Status::Pass } else { Status::Fail },
            witness: witness.map(|w| serde_json::json!({ "input": trace_json(&w) })),
            detail: None,
        });
    }

    let uca = ltl_to_uca(&spec.formula(), &vars, state_cap)?;
    let parts: Vec<&dyn TransitionSystem> = solution.iter().map(|s| s.strategy.as_ts()).collect();
    checks.push(match compose_all(&parts) {
        Err(MachineError::Combinational) => Check {
            name: "global-model-check".into(),
            status: Status::Fail,
            witness: None,
            detail: Some(MachineError::Combinational.to_string()),
        },
        Err(e) => return Err(e.into()),
        Ok(system) => {
            let rg = build_run_graph(&system, &uca)?;
            match find_valid_annotation(&rg) {
                Some(ann) => {
                    debug_assert!(check_annotation(&rg, &ann));
                    Check {
                        name: "global-model-check".into(),
                        status: Status::Pass,
                        witness: None,
                        detail: Some(format!("run graph with {} nodes annotated", rg.nodes.len())),
                    }
                }
                None => {
                    let l = counterexample_lasso(&rg).expect("no annotation implies a rejecting cycle");
                    Check {
                        name: "global-model-check".into(),
                        status: Status::Fail,
                        witness: Some(serde_json::json!({ "stem": trace_json(&l.stem), "loop": trace_json(&l.cycle) })),
                        detail: None,
                    }
                }
            }
        }
    });

    for sol in solution {
        let local = &sol.local;
        let bad = (0..local.num_states()).find_map(|t| {
            (0..local.num_cubes())
                .find(|&c| local.succ[t][c].is_some() != local.expects(t, c))
                .map(|c| (t, c))
        });
        checks.push(Check {
            name: format!("local-totality:{}", sol.name),
            status: if bad.is_none() { Status::Pass } else { Status::Fail },
            witness: bad.map(|(t, c)| {
                serde_json::json!({ "state": t, "input": letter_json(&cube_letter(&local.inputs, c)) })
            }),
            detail: None,
        });
    }

    for (j, sol) in solution.iter().enumerate() {
        let sub = dec.subspec(j);
        let missing: Vec<String> = sub
            .atomic_props()
            .difference(&arch.processes[j].variables())
            .cloned()
            .collect();
        let uca_j = ltl_to_uca(&sub.formula(), &vars, state_cap)?;
        let rg = build_run_graph(&sol.local, &uca_j)?;
        let lasso = counterexample_lasso(&rg);
        checks.push(Check {
            name: format!("local-annotation:{}", sol.name),
            status: if lasso.is_none() { Status::Pass } else { Status::Warn },
            witness: lasso.map(|l| serde_json::json!({ "stem": trace_json(&l.stem), "loop": trace_json(&l.cycle) })),
            detail: None,
        });
        checks.push(Check {
            name: format!("completeness-condition:{}", sol.name),
            status: if missing.is_empty() { Status::Pass } else { Status::Warn },
            witness: None,
            detail: (!missing.is_empty())
                .then(|| format!("subspecification mentions unobserved variables: {}", missing.join(", "))),
        });
    }

    let realizable = checks.iter().all(|c| c.status != Status::Fail);
    Ok(Report { checks, realizable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::architecture::Process;
    use crate::automata::DEFAULT_STATE_CAP;
    use crate::logic::relevant_processes;
    use crate::machines::{compute, restrict, MooreTs};

    fn robots(conjuncts: &[&str]) -> (Architecture, ConjunctiveSpec) {
        let arch = Architecture::new(
            vec![
                Process::new("r_1", ["at_crossing_1", "at_crossing_2", "go_2"], ["go_1", "m_1"]),
                Process::new("r_2", ["at_crossing_1", "at_crossing_2", "go_1"], ["go_2", "m_2"]),
            ],
            ["at_crossing_1", "at_crossing_2"],
        );
        (arch, ConjunctiveSpec::parse(conjuncts).unwrap())
    }

    const SAFE: &str = "G !((at_crossing_1 && X go_1) && (at_crossing_2 && X go_2))";
    const CROSS_1: &str = "G (at_crossing_1 -> X F go_1)";
    const CROSS_2: &str = "G (at_crossing_2 -> X F go_2)";

    fn solution(s1: MooreTs, s2: MooreTs) -> Vec<ProcessSolution> {
        use crate::machines::fixtures::{g1, g2};
        vec![
            ProcessSolution {
                name: "r_1".into(),
                local: restrict(&s1, &[&g2()]),
                strategy: Strategy::Moore(s1),
                certificate: g1(),
            },
            ProcessSolution {
                name: "r_2".into(),
                local: restrict(&s2, &[&g1()]),
                strategy: Strategy::Moore(s2),
                certificate: g2(),
            },
        ]
    }

    #[test]
    fn figure_solution_verifies_without_second_crossing() {
        use crate::machines::fixtures::{s1, s2};
        let (arch, spec) = robots(&[SAFE, CROSS_1]);
        let rel = relevant_processes(&decompose(&spec, &arch).unwrap(), &arch);
        let report = verify_solution(&arch, &spec, &solution(s1(), s2()), &rel, DEFAULT_STATE_CAP).unwrap();
        assert!(report.realizable, "{report:#?}");
        assert_eq!(report.check("global-model-check").unwrap().status, Status::Pass);
        assert_eq!(report.check("simulation:r_1").unwrap().status, Status::Pass);
        assert_eq!(report.check("local-totality:r_2").unwrap().status, Status::Pass);
    }

    #[test]
    fn figure_solution_starves_second_robot() {
        // r_2 always yields, so r_1 waiting at the crossing forever blocks it.
        use crate::machines::fixtures::{s1, s2};
        let (arch, spec) = robots(&[SAFE, CROSS_1, CROSS_2]);
        let rel = relevant_processes(&decompose(&spec, &arch).unwrap(), &arch);
        let report = verify_solution(&arch, &spec, &solution(s1(), s2()), &rel, DEFAULT_STATE_CAP).unwrap();
        assert!(!report.realizable);
        assert_eq!(report.failures().count(), 1);
        let w = report.check("global-model-check").unwrap().witness.clone().unwrap();
        let cycle: Vec<Letter> = serde_json::from_value(w["loop"].clone()).unwrap();
        assert!(cycle.iter().all(|l| l.contains("at_crossing_1") && !l.contains("go_2")));
    }

    #[test]
    fn mutated_strategy_has_replayable_counterexample() {
        use crate::machines::fixtures::{s1, s2};
        let (arch, spec) = robots(&[SAFE, CROSS_1, CROSS_2]);
        let rel = relevant_processes(&decompose(&spec, &arch).unwrap(), &arch);
        let mut bad = s2();
        // r_2 moves whenever it is in its first state, even if r_1 crosses.
        bad.labels[0].insert("go_2".into());
        let report = verify_solution(&arch, &spec, &solution(s1(), bad.clone()), &rel, DEFAULT_STATE_CAP).unwrap();
        assert!(!report.realizable);
        let sim = report.check("simulation:r_2").unwrap();
        assert_eq!(sim.status, Status::Fail);
        let trace: Vec<Letter> = serde_json::from_value(sim.witness.as_ref().unwrap()["input"].clone()).unwrap();
        let g = crate::machines::fixtures::g2();
        let (a, b) = (compute(&bad, &trace), compute(&g, &trace));
        assert_ne!(a.last().unwrap().contains("go_2"), b.last().unwrap().contains("go_2"));

        let global = report.check("global-model-check").unwrap();
        assert_eq!(global.status, Status::Fail);
        let w = global.witness.as_ref().unwrap();
        let stem: Vec<Letter> = serde_json::from_value(w["stem"].clone()).unwrap();
        let cycle: Vec<Letter> = serde_json::from_value(w["loop"].clone()).unwrap();
        let uca = ltl_to_uca(&spec.formula(), &arch.variables(), DEFAULT_STATE_CAP).unwrap();
        assert!(!uca.accepts_lasso(&stem, &cycle));
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        use crate::machines::fixtures::{s1, s2};
        let (arch, spec) = robots(&[SAFE, CROSS_1]);
        let rel = relevant_processes(&decompose(&spec, &arch).unwrap(), &arch);
        let sol = solution(s2(), s1());
        assert!(matches!(
            verify_solution(&arch, &spec, &sol, &rel, DEFAULT_STATE_CAP),
            Err(VerifyError::AlphabetMismatch { .. })
        ));
    }
}
