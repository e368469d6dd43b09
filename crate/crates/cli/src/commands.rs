use std::path::Path;
use std::time::{Duration, Instant};

use serde_json::json;

use certsynth::architecture::Architecture;
use certsynth::automata::DEFAULT_STATE_CAP;
use certsynth::bench::{generate, Family};
use certsynth::logic::{decompose as split, relevant_processes, ConjunctiveSpec};
use certsynth::machines::restrict;
use certsynth::solving::{SolverBackend, SolverConfig};
use certsynth::specfile::SpecFile;
use certsynth::synthesis::{synthesize, SynthesisOptions, SynthesisOutcome};
use certsynth::verification::{verify_solution, ProcessSolution};

use crate::exit;
use crate::solution_dir::{read_solution, write_solution};
use crate::{Format, SynthArgs};

fn fail(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    exit::ERROR
}

fn load(path: &Path) -> Result<(Architecture, ConjunctiveSpec), String> {
    let file = SpecFile::load(path).map_err(|e| e.to_string())?;
    let spec = file.spec().map_err(|e| e.to_string())?;
    Ok((file.architecture(), spec))
}

fn options(args: &SynthArgs) -> Result<SynthesisOptions, String> {
    let backend = match args.solver.as_str() {
        "builtin" => SolverBackend::Embedded,
        path => SolverBackend::External(path.into()),
    };
    let timeout = match args.timeout {
        Some(t) if !(t.is_finite() && t >= 0.0) => return Err(format!("invalid timeout `{t}`")),
        t => t.map(Duration::from_secs_f64),
    };
    Ok(SynthesisOptions {
        max_strategy: args.max_strategy,
        max_certificate: args.max_cert,
        schedule: args.schedule.into(),
        mode: args.mode.into(),
        solver: SolverConfig {
            backend,
            timeout,
            work_dir: None,
        },
        emit_dimacs: args.emit_dimacs.clone(),
        ..Default::default()
    })
}

/// Runs synthesis; on success writes the solution to `out` if given.
fn run(
    arch: &Architecture,
    spec: &ConjunctiveSpec,
    args: &SynthArgs,
    out: Option<(&Path, Format)>,
) -> Result<(u8, String), String> {
    let opts = options(args)?;
    match synthesize(arch, spec, &opts).map_err(|e| e.to_string())? {
        SynthesisOutcome::Realizable(sol) => {
            for w in &sol.warnings {
                eprintln!("warning: {w}");
            }
            if let Some((dir, format)) = out {
                write_solution(dir, &sol, format)?;
            }
            let (s, c) = (sol.bounds.strategy[0], sol.bounds.certificate[0]);
            Ok((exit::OK, format!("realizable strategy={s} certificate={c}")))
        }
        SynthesisOutcome::Unrealizable { warnings, .. } => {
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            Ok((
                exit::UNREALIZABLE,
                format!("unrealizable strategy<={} certificate<={}", args.max_strategy, args.max_cert),
            ))
        }
        SynthesisOutcome::Unknown {
            strategy, certificate, ..
        } => Ok((exit::UNKNOWN, format!("unknown strategy={strategy} certificate={certificate}"))),
    }
}

pub fn synth(spec_path: &Path, args: &SynthArgs, out: &Path, format: Format) -> u8 {
    let (arch, spec) = match load(spec_path) {
        Ok(x) => x,
        Err(e) => return fail(e),
    };
    match run(&arch, &spec, args, Some((out, format))) {
        Ok((code, line)) => {
            println!("{line}");
            code
        }
        Err(e) => fail(e),
    }
}

pub fn verify(spec_path: &Path, dir: &Path) -> u8 {
    let result = (|| {
        let (arch, spec) = load(spec_path)?;
        let machines = read_solution(dir, &arch)?;
        let dec = split(&spec, &arch).map_err(|e| e.to_string())?;
        let relevant = relevant_processes(&dec, &arch);
        let processes: Vec<ProcessSolution> = arch
            .processes
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let guarantees: Vec<_> = relevant.of(i).iter().map(|&k| &machines[k].1).collect();
                let (strategy, certificate) = machines[i].clone();
                ProcessSolution {
                    name: p.name.clone(),
                    local: restrict(strategy.as_ts(), &guarantees),
                    strategy,
                    certificate,
                }
            })
            .collect();
        verify_solution(&arch, &spec, &processes, &relevant, DEFAULT_STATE_CAP).map_err(|e| e.to_string())
    })();
    match result {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("json"));
            if report.realizable {
                exit::OK
            } else {
                exit::VERIFY_FAILED
            }
        }
        Err(e) => fail(e),
    }
}

pub fn decompose(spec_path: &Path) -> u8 {
    let result = (|| {
        let (arch, spec) = load(spec_path)?;
        if let Err(errors) = arch.validate() {
            return Err(errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "));
        }
        let dec = split(&spec, &arch).map_err(|e| e.to_string())?;
        let relevant = relevant_processes(&dec, &arch);
        let processes: Vec<_> = arch
            .processes
            .iter()
            .enumerate()
            .map(|(i, p)| {
                json!({
                    "name": p.name,
                    "conjuncts": dec.subspec(i).conjuncts.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "relevant": relevant.of(i).iter().map(|&k| &arch.processes[k].name).collect::<Vec<_>>(),
                })
            })
            .collect();
        Ok(json!({ "processes": processes }))
    })();
    match result {
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            exit::OK
        }
        Err(e) => fail(e),
    }
}

pub fn bench(family: &str, param: &str, args: &SynthArgs, out: Option<&Path>) -> u8 {
    let result = (|| -> Result<u8, String> {
        let fam: Family = family.parse().map_err(|e: certsynth::bench::BenchError| e.to_string())?;
        let file = generate(fam, param).map_err(|e| e.to_string())?;
        if let Some(dir) = out {
            std::fs::create_dir_all(dir).map_err(|e| format!("cannot create `{}`: {e}", dir.display()))?;
            file.save(&dir.join("spec.json")).map_err(|e| e.to_string())?;
        }
        let spec = file.spec().map_err(|e| e.to_string())?;
        let started = Instant::now();
        let (code, line) = run(
            &file.architecture(),
            &spec,
            args,
            out.map(|d| (d, Format::Json)),
        )?;
        println!(
            "{fam:<7} {param:<6} {line} time={:.3}s",
            started.elapsed().as_secs_f64()
        );
        Ok(code)
    })();
    result.unwrap_or_else(fail)
}
