mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use certsynth::architecture::{Architecture, Process};
use certsynth::automata::{check_annotation, find_valid_annotation, RunGraph, DEFAULT_STATE_CAP};
use certsynth::bench;
use certsynth::encoding::{dimacs_string, encode, parse_dimacs, Bounds, Mode, DEFAULT_CLAUSE_CAP};
use certsynth::logic::{decompose, parse_ltl, relevant_processes, ConjunctiveSpec, LtlFormula};
use certsynth::machines::{compose_all, restrict, GuaranteeTs, Strategy, TransitionSystem};
use certsynth::solving::{solve_clauses, Outcome};
use certsynth::specfile::SpecFile;
use certsynth::synthesis::{prepare, synthesize, Solution, SynthesisOptions, SynthesisOutcome};
use certsynth::verification::{counterexample_lasso, verify_solution, ProcessSolution};
use proptest::prelude::*;
use rand::Rng;

const OUTPUTS: [&str; 4] = ["o0", "o1", "o2", "o3"];
const ENV: [&str; 2] = ["e0", "e1"];
const ALL: [&str; 6] = ["o0", "o1", "o2", "o3", "e0", "e1"];

/// Three processes splitting the outputs by `owner`; each reads everything
/// it does not write.
fn arch_from(owner: &[usize]) -> Architecture {
    let procs = (0..3)
        .map(|p| {
            let outs: Vec<&str> = OUTPUTS.iter().zip(owner).filter(|(_, &o)| o == p).map(|(v, _)| *v).collect();
            let ins: Vec<&str> = ALL.iter().copied().filter(|v| !outs.contains(v)).collect();
            Process::new(&format!("p{p}"), ins, outs)
        })
        .collect();
    Architecture::new(procs, ENV)
}

fn random_graph(seed: u64, max_nodes: usize) -> (Vec<Vec<usize>>, Vec<bool>) {
    let mut rng = common::rng(seed);
    let n = rng.gen_range(1..=max_nodes);
    let density = rng.gen_range(0.05..0.4);
    let succ = (0..n).map(|_| (0..n).filter(|_| rng.gen_bool(density)).collect()).collect();
    let rejecting = (0..n).map(|_| rng.gen_bool(0.3)).collect();
    (succ, rejecting)
}

fn graph(succ: &[Vec<usize>], rejecting: &[bool]) -> RunGraph {
    RunGraph::from_adjacency((0..succ.len()).map(|v| (v, 0)).collect(), rejecting.to_vec(), succ.to_vec(), 0)
}

fn brute_force_sat(num_vars: usize, clauses: &[Vec<i32>]) -> bool {
    (0..1u32 << num_vars).any(|bits| {
        clauses
            .iter()
            .all(|c| c.iter().any(|&l| (bits >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0)))
    })
}

fn robots_solution() -> &'static (Architecture, ConjunctiveSpec, Solution) {
    static CELL: OnceLock<(Architecture, ConjunctiveSpec, Solution)> = OnceLock::new();
    CELL.get_or_init(|| {
        let file = bench::robots(None);
        let (arch, spec) = (file.architecture(), file.spec().unwrap());
        let opts = SynthesisOptions {
            max_strategy: 2,
            max_certificate: 2,
            ..Default::default()
        };
        match synthesize(&arch, &spec, &opts).unwrap() {
            SynthesisOutcome::Realizable(sol) => (arch, spec, *sol),
            other => panic!("{other:?}"),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_covers_every_conjunct(owner in prop::collection::vec(0usize..3, 4), seed: u64) {
        let arch = arch_from(&owner);
        let mut rng = common::rng(seed);
        let conjuncts: Vec<LtlFormula> = (0..rng.gen_range(1..5))
            .map(|_| common::random_formula(&mut rng, &ALL, 5))
            .collect();
        let spec = ConjunctiveSpec::new(conjuncts.clone());
        let dec = decompose(&spec, &arch).unwrap();
        let rel = relevant_processes(&dec, &arch);
        let out: BTreeSet<String> = OUTPUTS.iter().map(|s| s.to_string()).collect();
        for c in &conjuncts {
            let atoms = c.atomic_props();
            let holders: Vec<usize> = (0..3).filter(|&p| dec.subspec(p).conjuncts.contains(c)).collect();
            prop_assert!(!holders.is_empty());
            for (p, proc) in arch.processes.iter().enumerate() {
                let expected = !atoms.is_disjoint(&proc.outputs) || atoms.is_disjoint(&out);
                prop_assert_eq!(holders.contains(&p), expected);
            }
        }
        for p in 0..3 {
            prop_assert!(!rel.of(p).contains(&p));
            let atoms = dec.subspec(p).atomic_props();
            for &k in rel.of(p) {
                prop_assert!(!arch.processes[k].outputs.is_disjoint(&atoms));
            }
        }
    }

    #[test]
    fn cdcl_agrees_with_truth_tables(
        num_vars in 1usize..=10,
        raw in prop::collection::vec((1i32..=10, 1i32..=10, 1i32..=10, 0u8..8), 0..45),
    ) {
        let n = num_vars as i32;
        let clauses: Vec<Vec<i32>> = raw
            .iter()
            .map(|&(a, b, c, signs)| {
                [a, b, c]
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| {
                        let v = (v - 1) % n + 1;
                        if signs >> k & 1 == 1 { -v } else { v }
                    })
                    .collect()
            })
            .collect();
        let expected = brute_force_sat(num_vars, &clauses);
        let got = solve_clauses(num_vars, &clauses, None);
        prop_assert_eq!(got, if expected { Outcome::Sat } else { Outcome::Unsat });
    }

    #[test]
    fn dimacs_round_trip(
        num_vars in 1usize..50,
        raw in prop::collection::vec(prop::collection::vec((1i32..50, any::<bool>()), 1..6), 0..30),
    ) {
        let clauses: Vec<Vec<i32>> = raw
            .iter()
            .map(|c| c.iter().map(|&(v, neg)| {
                let v = (v - 1) % num_vars as i32 + 1;
                if neg { -v } else { v }
            }).collect())
            .collect();
        let text = dimacs_string(num_vars, &clauses);
        prop_assert_eq!(parse_dimacs(&text).unwrap(), (num_vars, clauses));
    }

    #[test]
    fn printed_formulas_parse_back(seed: u64, size in 1usize..12) {
        let mut rng = common::rng(seed);
        let f = common::random_formula(&mut rng, &["a", "b", "c_1"], size);
        let text = f.to_string();
        prop_assert_eq!(parse_ltl(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn spec_files_round_trip(owner in prop::collection::vec(0usize..3, 4), seed: u64) {
        let arch = arch_from(&owner);
        let mut rng = common::rng(seed);
        let conjuncts = (0..rng.gen_range(0..4)).map(|_| common::random_formula(&mut rng, &ALL, 6)).collect();
        let spec = ConjunctiveSpec::new(conjuncts);
        let file = SpecFile::new(&arch, &spec);
        let back = SpecFile::from_json(&file.to_json()).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(back.architecture(), arch);
        prop_assert_eq!(back.spec().unwrap(), spec);
    }

    #[test]
    fn annotations_exist_exactly_without_rejecting_cycles(seed: u64) {
        let (succ, rejecting) = random_graph(seed, 10);
        let rg = graph(&succ, &rejecting);
        let found = find_valid_annotation(&rg);
        prop_assert_eq!(found.is_some(), common::annotation_exists(&succ, &rejecting, 0));
        if let Some(ann) = found {
            prop_assert!(check_annotation(&rg, &ann));
            prop_assert!(ann.values[0].is_some());
            for (v, out) in succ.iter().enumerate() {
                let Some(x) = ann.values[v] else { continue };
                for &w in out {
                    let fits = ann.values[w].is_some_and(|y| if rejecting[w] { y > x } else { y >= x });
                    prop_assert!(fits, "edge {} -> {}", v, w);
                }
            }
        }
    }

    #[test]
    fn counterexample_lassos_replay(seed: u64) {
        let (succ, rejecting) = random_graph(seed, 12);
        let rg = graph(&succ, &rejecting);
        let lasso = counterexample_lasso(&rg);
        prop_assert_eq!(lasso.is_some(), !common::annotation_exists(&succ, &rejecting, 0));
        if let Some(l) = lasso {
            prop_assert_eq!(l.stem.len(), l.stem_nodes.len());
            prop_assert_eq!(l.cycle.len(), l.cycle_nodes.len());
            prop_assert!(!l.cycle_nodes.is_empty());
            prop_assert!(rejecting[l.cycle_nodes[0]]);
            let path: Vec<usize> = l.stem_nodes.iter().chain(&l.cycle_nodes).chain([&l.cycle_nodes[0]]).copied().collect();
            prop_assert_eq!(path[0], 0);
            for w in path.windows(2) {
                prop_assert!(succ[w[0]].contains(&w[1]), "{:?}", path);
            }
        }
    }

    #[test]
    fn decoded_machines_respect_bounds(seed: u64) {
        let mut rng = common::rng(seed);
        let f = common::random_formula(&mut rng, &["i", "o"], 6);
        let arch = Architecture::new(vec![Process::new("p", ["i"], ["o"])], ["i"]);
        let spec = ConjunctiveSpec::new(vec![f.clone()]);
        let opts = SynthesisOptions { max_strategy: 2, max_certificate: 2, ..Default::default() };
        match synthesize(&arch, &spec, &opts).unwrap() {
            SynthesisOutcome::Realizable(sol) => {
                let p = &sol.processes[0];
                prop_assert!(p.strategy.as_ts().num_states() <= 2);
                prop_assert!(p.certificate.num_states() <= 2);
                prop_assert!(p.strategy.as_ts().is_total() && p.certificate.is_total());
                prop_assert!(p.local.num_states() <= 2);
                prop_assert!(common::model_check(p.strategy.as_ts(), &f));
            }
            SynthesisOutcome::Unrealizable { attempts, .. } => prop_assert_eq!(attempts.len(), 4),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    /// Whatever the verifier accepts after a random label flip also passes
    /// the independent model checker.
    #[test]
    fn verifier_is_sound_under_mutation(process in 0usize..2, target in 0usize..2, state in 0usize..2, bit in 0usize..2) {
        let (arch, spec, sol) = robots_solution();
        let mut machines: Vec<(Strategy, GuaranteeTs)> =
            sol.processes.iter().map(|p| (p.strategy.clone(), p.certificate.clone())).collect();
        let flip = |m: &mut certsynth::machines::MooreTs| {
            let state = state % m.labels.len();
            let var = m.outputs[bit % m.outputs.len()].clone();
            let label = &mut m.labels[state];
            if !label.remove(&var) {
                label.insert(var);
            }
        };
        match (target, &mut machines[process]) {
            (0, (Strategy::Moore(m), _)) => flip(m),
            (_, (_, g)) => flip(&mut g.0),
        }
        let dec = decompose(spec, arch).unwrap();
        let relevant = relevant_processes(&dec, arch);
        let processes: Vec<ProcessSolution> = arch
            .processes
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let gs: Vec<&GuaranteeTs> = relevant.of(i).iter().map(|&k| &machines[k].1).collect();
                ProcessSolution {
                    name: p.name.clone(),
                    local: restrict(machines[i].0.as_ts(), &gs),
                    strategy: machines[i].0.clone(),
                    certificate: machines[i].1.clone(),
                }
            })
            .collect();
        let report = verify_solution(arch, spec, &processes, &relevant, DEFAULT_STATE_CAP).unwrap();
        if report.realizable {
            let parts: Vec<&dyn TransitionSystem> = machines.iter().map(|m| m.0.as_ts()).collect();
            prop_assert!(common::model_check(&compose_all(&parts).unwrap(), &spec.formula()));
        }
    }
}

#[test]
fn encoding_is_deterministic() {
    let file = bench::robots(None);
    let (arch, spec) = (file.architecture(), file.spec().unwrap());
    let text = || {
        let prep = prepare(&arch, &spec, DEFAULT_STATE_CAP).unwrap();
        encode(&arch, &prep.relevant, &prep.ucas, &Bounds::uniform(2, 2, 2), Mode::Moore, DEFAULT_CLAUSE_CAP)
            .unwrap()
            .to_dimacs()
    };
    assert_eq!(text(), text());
}

#[test]
fn some_mutation_is_caught() {
    let (arch, spec, sol) = robots_solution();
    let dec = decompose(spec, arch).unwrap();
    let relevant = relevant_processes(&dec, arch);
    let mut caught = 0;
    for state in 0..2 {
        let mut processes = sol.processes.clone();
        let Strategy::Moore(m) = &mut processes[1].strategy else { panic!("moore") };
        let n = m.labels.len();
        let label = &mut m.labels[state % n];
        if !label.remove("go_2") {
            label.insert("go_2".into());
        }
        let report = verify_solution(arch, spec, &processes, &relevant, DEFAULT_STATE_CAP).unwrap();
        caught += usize::from(!report.realizable);
    }
    assert!(caught > 0);
}
