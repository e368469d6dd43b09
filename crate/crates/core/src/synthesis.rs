//! The certifying-synthesis loop: try growing size bounds until the
//! encoding becomes satisfiable, then decode, complete and verify.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::architecture::{ArchError, Architecture};
use crate::automata::{ltl_to_uca, AutomataError, DEFAULT_STATE_CAP};
use crate::encoding::{encode, Bounds, EncodeError, Mode, DEFAULT_CLAUSE_CAP};
use crate::logic::{decompose, relevant_processes, ConjunctiveSpec, RelevantProcesses, SpecError};
use crate::machines::{extend, extend_mealy, MachineError, Strategy};
use crate::solving::{decode, solve_instance, DecodeError, SolveError, SolveResult, SolverConfig};
use crate::verification::{verify_solution, ProcessSolution, Report, VerifyError};

/// Tie-break between pairs with the same total size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchedulePolicy {
    /// `(1,1), (1,2), (2,1), (2,2)` for maxima `(2,2)`.
    #[default]
    CertificateFirst,
    /// `(1,1), (2,1), (1,2), (2,2)` for maxima `(2,2)`.
    StrategyFirst,
}

/// Uniform bound pairs `(strategy, certificate)` by increasing sum.
pub fn bound_schedule(max_strategy: usize, max_certificate: usize, policy: SchedulePolicy) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (1..=max_strategy)
        .flat_map(|s| (1..=max_certificate).map(move |c| (s, c)))
        .collect();
    pairs.sort_by_key(|&(s, c)| match policy {
        SchedulePolicy::CertificateFirst => (s + c, s),
        SchedulePolicy::StrategyFirst => (s + c, c),
    });
    pairs
}

#[derive(Debug, Clone)]
pub struct SynthesisOptions {
    pub max_strategy: usize,
    pub max_certificate: usize,
    pub schedule: SchedulePolicy,
    pub mode: Mode,
    pub solver: SolverConfig,
    /// Directory receiving `bound_s{S}_c{C}.cnf` and its variable map.
    pub emit_dimacs: Option<PathBuf>,
    pub state_cap: usize,
    pub clause_cap: usize,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            max_strategy: 4,
            max_certificate: 4,
            schedule: SchedulePolicy::default(),
            mode: Mode::default(),
            solver: SolverConfig::default(),
            emit_dimacs: None,
            state_cap: DEFAULT_STATE_CAP,
            clause_cap: DEFAULT_CLAUSE_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttemptResult {
    Sat,
    Unsat,
    Unknown,
}

/// One encode-and-solve round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attempt {
    pub strategy: usize,
    pub certificate: usize,
    pub vars: usize,
    pub clauses: usize,
    pub encode_secs: f64,
    pub solve_secs: f64,
    pub result: AttemptResult,
}

/// A verified solution.
#[derive(Debug, Clone)]
pub struct Solution {
    pub processes: Vec<ProcessSolution>,
    pub bounds: Bounds,
    pub mode: Mode,
    pub attempts: Vec<Attempt>,
    pub report: Report,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum SynthesisOutcome {
    Realizable(Box<Solution>),
    /// No solution within the maximal bounds.
    Unrealizable { attempts: Vec<Attempt>, warnings: Vec<String> },
    /// The solver gave up on the given bounds.
    Unknown {
        strategy: usize,
        certificate: usize,
        attempts: Vec<Attempt>,
        warnings: Vec<String>,
    },
}

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error("invalid architecture: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Architecture(Vec<ArchError>),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    /// A decoded solution failed verification: a bug, never expected.
    #[error("decoded solution failed verification: {}", .0.failures().map(|c| c.name.as_str()).collect::<Vec<_>>().join(", "))]
    Unsound(Box<Report>),
    #[error("cannot write DIMACS output: {0}")]
    Io(#[from] std::io::Error),
}

/// Everything derived from the specification that does not depend on bounds.
pub struct Prepared {
    pub relevant: RelevantProcesses,
    pub ucas: Vec<crate::automata::UniversalCoBuchi>,
    pub warnings: Vec<String>,
}

/// Validates the inputs, decomposes and translates the subspecifications.
pub fn prepare(arch: &Architecture, spec: &ConjunctiveSpec, state_cap: usize) -> Result<Prepared, SynthesisError> {
    let mut warnings: Vec<String> = arch
        .validate()
        .map_err(SynthesisError::Architecture)?
        .iter()
        .map(ToString::to_string)
        .collect();
    let dec = decompose(spec, arch)?;
    let relevant = relevant_processes(&dec, arch);
    let vars = arch.variables();
    let mut ucas = Vec::with_capacity(arch.len());
    for (j, p) in arch.processes.iter().enumerate() {
        let sub = dec.subspec(j);
        ucas.push(ltl_to_uca(&sub.formula(), &vars, state_cap)?);
        let missing: BTreeSet<String> = sub.atomic_props().difference(&p.variables()).cloned().collect();
        if !missing.is_empty() {
            warnings.push(format!(
                "process `{}` does not observe {}; bounded search may miss solutions",
                p.name,
                missing.into_iter().collect::<Vec<_>>().join(", ")
            ));
        }
    }
    Ok(Prepared { relevant, ucas, warnings })
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Runs certifying synthesis up to the maximal bounds of `opts`.
pub fn synthesize(
    arch: &Architecture,
    spec: &ConjunctiveSpec,
    opts: &SynthesisOptions,
) -> Result<SynthesisOutcome, SynthesisError> {
    let Prepared { relevant, ucas, warnings } = prepare(arch, spec, opts.state_cap)?;
    let mut attempts = Vec::new();
    for (s, c) in bound_schedule(opts.max_strategy, opts.max_certificate, opts.schedule) {
        let bounds = Bounds::uniform(arch.len(), s, c);
        let started = Instant::now();
        let instance = encode(arch, &relevant, &ucas, &bounds, opts.mode, opts.clause_cap)?;
        let encode_secs = secs(started.elapsed());
        if let Some(dir) = &opts.emit_dimacs {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(format!("bound_s{s}_c{c}.cnf")), instance.to_dimacs())?;
            fs::write(dir.join(format!("bound_s{s}_c{c}.json")), instance.registry_json())?;
        }
        let started = Instant::now();
        let result = solve_instance(&instance, &opts.solver)?;
        let mut attempt = Attempt {
            strategy: s,
            certificate: c,
            vars: instance.num_vars,
            clauses: instance.clauses.len(),
            encode_secs,
            solve_secs: secs(started.elapsed()),
            result: AttemptResult::Unsat,
        };
        let model = match result {
            SolveResult::Unsat => {
                attempts.push(attempt);
                continue;
            }
            SolveResult::Unknown => {
                attempt.result = AttemptResult::Unknown;
                attempts.push(attempt);
                return Ok(SynthesisOutcome::Unknown {
                    strategy: s,
                    certificate: c,
                    attempts,
                    warnings,
                });
            }
            SolveResult::Sat(m) => m,
        };
        attempt.result = AttemptResult::Sat;
        attempts.push(attempt);

        let mut processes = Vec::with_capacity(arch.len());
        for (p, (local, certificate)) in arch.processes.iter().zip(decode(&model, &instance)?) {
            let strategy = match opts.mode {
                Mode::Moore => Strategy::Moore(extend(&local, &certificate)?),
                Mode::Mealy => Strategy::Mealy(extend_mealy(&local, &certificate)?),
            };
            processes.push(ProcessSolution {
                name: p.name.clone(),
                strategy,
                local,
                certificate,
            });
        }
        let report = verify_solution(arch, spec, &processes, &relevant, opts.state_cap)?;
        if !report.realizable {
            return Err(SynthesisError::Unsound(Box::new(report)));
        }
        return Ok(SynthesisOutcome::Realizable(Box::new(Solution {
            processes,
            bounds,
            mode: opts.mode,
            attempts,
            report,
            warnings,
        })));
    }
    Ok(SynthesisOutcome::Unrealizable { attempts, warnings })
}
