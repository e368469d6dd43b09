//! Independent oracles shared by the integration tests. None of them uses
//! the crate's automata, annotation or solving code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use certsynth::logic::LtlFormula;
use certsynth::machines::{cube_letter, GuaranteeTs, MooreTs, TransitionSystem};
use certsynth::{letter, Letter};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random formula with at most `size` operators and atoms.
pub fn random_formula(rng: &mut ChaCha8Rng, atoms: &[&str], size: usize) -> LtlFormula {
    let atom = |rng: &mut ChaCha8Rng| LtlFormula::atom(atoms[rng.gen_range(0..atoms.len())]);
    if size <= 1 {
        return match rng.gen_range(0..10) {
            0 => LtlFormula::True,
            1 => LtlFormula::False,
            _ => atom(rng),
        };
    }
    let unary = |rng: &mut ChaCha8Rng, f: LtlFormula| match rng.gen_range(0..4) {
        0 => f.not(),
        1 => f.next(),
        2 => f.eventually(),
        _ => f.globally(),
    };
    if size == 2 || rng.gen_bool(0.4) {
        let f = random_formula(rng, atoms, size - 1);
        return unary(rng, f);
    }
    let left = rng.gen_range(1..size - 1);
    let a = random_formula(rng, atoms, left);
    let b = random_formula(rng, atoms, size - 1 - left);
    match rng.gen_range(0..5) {
        0 => a.and(b),
        1 => a.or(b),
        2 => a.implies(b),
        3 => a.iff(b),
        _ => a.until(b),
    }
}

pub fn random_letter(rng: &mut ChaCha8Rng, atoms: &[&str]) -> Letter {
    atoms.iter().filter(|_| rng.gen_bool(0.5)).map(|a| a.to_string()).collect()
}

/// Truth of `f` at position 0 of `stem · cycle^ω`, by fixpoint iteration
/// over the `|stem| + |cycle|` distinct positions.
pub fn eval_lasso(f: &LtlFormula, stem: &[Letter], cycle: &[Letter]) -> bool {
    assert!(!cycle.is_empty());
    let word: Vec<&Letter> = stem.iter().chain(cycle).collect();
    let n = word.len();
    let next = |p: usize| if p + 1 < n { p + 1 } else { stem.len() };
    fn go(f: &LtlFormula, word: &[&Letter], next: &dyn Fn(usize) -> usize) -> Vec<bool> {
        let n = word.len();
        let fix = |init: bool, step: &dyn Fn(usize, &[bool]) -> bool| {
            let mut v = vec![init; n];
            loop {
                let w: Vec<bool> = (0..n).map(|p| step(p, &v)).collect();
                if w == v {
                    return v;
                }
                v = w;
            }
        };
        use LtlFormula::*;
        match f {
            True => vec![true; n],
            False => vec![false; n],
            Atom(a) => word.iter().map(|l| l.contains(a)).collect(),
            Not(a) => go(a, word, next).into_iter().map(|x| !x).collect(),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => {
                let (x, y) = (go(a, word, next), go(b, word, next));
                (0..n)
                    .map(|p| match f {
                        And(..) => x[p] && y[p],
                        Or(..) => x[p] || y[p],
                        Implies(..) => !x[p] || y[p],
                        _ => x[p] == y[p],
                    })
                    .collect()
            }
            Next(a) => {
                let x = go(a, word, next);
                (0..n).map(|p| x[next(p)]).collect()
            }
            Until(a, b) => {
                let (x, y) = (go(a, word, next), go(b, word, next));
                fix(false, &|p, v| y[p] || (x[p] && v[next(p)]))
            }
            Eventually(a) => {
                let x = go(a, word, next);
                fix(false, &|p, v| x[p] || v[next(p)])
            }
            Globally(a) => {
                let x = go(a, word, next);
                fix(true, &|p, v| x[p] && v[next(p)])
            }
        }
    }
    go(f, &word, &next)[0]
}

/// Core syntax for the closure construction.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Core {
    True,
    Atom(String),
    Not(Box<Core>),
    And(Box<Core>, Box<Core>),
    Or(Box<Core>, Box<Core>),
    Next(Box<Core>),
    Until(Box<Core>, Box<Core>),
}

fn core(f: &LtlFormula) -> Core {
    use LtlFormula as L;
    let b = |f: &LtlFormula| Box::new(core(f));
    match f {
        L::True => Core::True,
        L::False => Core::Not(Box::new(Core::True)),
        L::Atom(a) => Core::Atom(a.clone()),
        L::Not(a) => Core::Not(b(a)),
        L::And(x, y) => Core::And(b(x), b(y)),
        L::Or(x, y) => Core::Or(b(x), b(y)),
        L::Implies(x, y) => Core::Or(Box::new(Core::Not(b(x))), b(y)),
        L::Iff(x, y) => {
            let (x, y) = (core(x), core(y));
            Core::Or(
                Box::new(Core::And(Box::new(x.clone()), Box::new(y.clone()))),
                Box::new(Core::And(Box::new(Core::Not(Box::new(x))), Box::new(Core::Not(Box::new(y))))),
            )
        }
        L::Next(a) => Core::Next(b(a)),
        L::Until(x, y) => Core::Until(b(x), b(y)),
        L::Eventually(a) => Core::Until(Box::new(Core::True), b(a)),
        L::Globally(a) => Core::Not(Box::new(Core::Until(Box::new(Core::True), Box::new(Core::Not(b(a)))))),
    }
}

fn temporal(f: &Core, out: &mut Vec<Core>) {
    match f {
        Core::True | Core::Atom(_) => {}
        Core::Not(a) => temporal(a, out),
        Core::And(a, b) | Core::Or(a, b) => {
            temporal(a, out);
            temporal(b, out);
        }
        Core::Next(a) => {
            temporal(a, out);
            if !out.contains(f) {
                out.push(f.clone());
            }
        }
        Core::Until(a, b) => {
            temporal(a, out);
            temporal(b, out);
            if !out.contains(f) {
                out.push(f.clone());
            }
        }
    }
}

fn holds(f: &Core, letter: &Letter, temps: &[Core], bits: usize) -> bool {
    match f {
        Core::True => true,
        Core::Atom(a) => letter.contains(a),
        Core::Not(a) => !holds(a, letter, temps, bits),
        Core::And(a, b) => holds(a, letter, temps, bits) && holds(b, letter, temps, bits),
        Core::Or(a, b) => holds(a, letter, temps, bits) || holds(b, letter, temps, bits),
        Core::Next(_) | Core::Until(..) => {
            let j = temps.iter().position(|t| t == f).expect("temporal subformula");
            bits >> j & 1 == 1
        }
    }
}

/// Whether every computation of the complete machine `ts` satisfies `f`.
///
/// Searches the product of the machine's Kripke structure with the
/// elementary-set automaton of `!f` for a fair cycle.
pub fn model_check(ts: &dyn TransitionSystem, f: &LtlFormula) -> bool {
    let neg = Core::Not(Box::new(core(f)));
    let mut temps = Vec::new();
    temporal(&neg, &mut temps);
    let m = temps.len();
    let cubes = ts.num_cubes();
    // Kripke states: (machine state, current input cube).
    let kripke: Vec<(usize, usize)> = (0..ts.num_states()).flat_map(|t| (0..cubes).map(move |c| (t, c))).collect();
    let label = |k: usize| -> Letter {
        let (t, c) = kripke[k];
        let mut l = cube_letter(ts.inputs(), c);
        l.extend(ts.output(t, c));
        l
    };
    let labels: Vec<Letter> = (0..kripke.len()).map(label).collect();
    let node = |k: usize, bits: usize| k << m | bits;
    let total = kripke.len() << m;
    let consistent_step = |k: usize, bits: usize, k2: usize, bits2: usize| {
        temps.iter().enumerate().all(|(j, t)| {
            let now = bits >> j & 1 == 1;
            match t {
                Core::Next(a) => now == holds(a, &labels[k2], &temps, bits2),
                Core::Until(a, b) => {
                    now == (holds(b, &labels[k], &temps, bits)
                        || (holds(a, &labels[k], &temps, bits) && bits2 >> j & 1 == 1))
                }
                _ => unreachable!(),
            }
        })
    };
    let mut succ = vec![Vec::new(); total];
    for k in 0..kripke.len() {
        let (t, c) = kripke[k];
        let Some(t2) = ts.successor(t, c) else { continue };
        for bits in 0..1usize << m {
            for c2 in 0..cubes {
                let k2 = t2 * cubes + c2;
                for bits2 in 0..1usize << m {
                    if consistent_step(k, bits, k2, bits2) {
                        succ[node(k, bits)].push(node(k2, bits2));
                    }
                }
            }
        }
    }
    let mut seen = vec![false; total];
    let mut stack = Vec::new();
    for c in 0..cubes {
        let k = ts.initial() * cubes + c;
        for bits in 0..1usize << m {
            if holds(&neg, &labels[k], &temps, bits) {
                seen[node(k, bits)] = true;
                stack.push(node(k, bits));
            }
        }
    }
    while let Some(v) = stack.pop() {
        for &w in &succ[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    let fair = |v: usize, j: usize| {
        let (k, bits) = (v >> m, v & ((1 << m) - 1));
        match &temps[j] {
            Core::Until(_, b) => bits >> j & 1 == 0 || holds(b, &labels[k], &temps, bits),
            _ => true,
        }
    };
    // A reachable strongly connected set with an internal edge that meets
    // every fairness set is a counterexample.
    for comp in sccs(&succ) {
        if !seen[comp[0]] {
            continue;
        }
        let inside: BTreeSet<usize> = comp.iter().copied().collect();
        let cyclic = comp.iter().any(|&v| succ[v].iter().any(|w| inside.contains(w)));
        if cyclic && (0..m).all(|j| comp.iter().any(|&v| fair(v, j))) {
            return false;
        }
    }
    true
}

/// Strongly connected components by two depth-first passes.
fn sccs(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut order = Vec::with_capacity(n);
    let mut done = vec![false; n];
    for root in 0..n {
        if done[root] {
            continue;
        }
        done[root] = true;
        let mut stack = vec![(root, 0usize)];
        while let Some((v, i)) = stack.pop() {
            if i < succ[v].len() {
                stack.push((v, i + 1));
                let w = succ[v][i];
                if !done[w] {
                    done[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
            }
        }
    }
    let mut pred = vec![Vec::new(); n];
    for (v, out) in succ.iter().enumerate() {
        for &w in out {
            pred[w].push(v);
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for &root in order.iter().rev() {
        if comp[root] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![root];
        comp[root] = id;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in &pred[v] {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        out.push(members);
    }
    out
}

/// Exhaustive search for a valid annotation: values range over ⊥ and
/// `0..=r` with `r` the number of rejecting nodes, which suffices because
/// the longest-path count never exceeds it.
pub fn annotation_exists(succ: &[Vec<usize>], rejecting: &[bool], initial: usize) -> bool {
    let n = succ.len();
    let r = rejecting.iter().filter(|&&b| b).count();
    // Assign in breadth-first order so edges are checked early.
    let mut order = vec![initial];
    let mut placed = vec![false; n];
    placed[initial] = true;
    let mut i = 0;
    while i < order.len() {
        for &w in &succ[order[i]] {
            if !placed[w] {
                placed[w] = true;
                order.push(w);
            }
        }
        i += 1;
    }
    order.extend((0..n).filter(|&v| !placed[v]));
    let mut pred = vec![Vec::new(); n];
    for (v, out) in succ.iter().enumerate() {
        for &w in out {
            pred[w].push(v);
        }
    }
    let ok_edge = |a: Option<usize>, b: Option<usize>, target: usize| match (a, b) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => {
            if rejecting[target] {
                y > x
            } else {
                y >= x
            }
        }
    };
    fn search(
        pos: usize,
        order: &[usize],
        values: &mut Vec<Option<Option<usize>>>,
        r: usize,
        initial: usize,
        succ: &[Vec<usize>],
        pred: &[Vec<usize>],
        ok_edge: &dyn Fn(Option<usize>, Option<usize>, usize) -> bool,
    ) -> bool {
        let Some(&v) = order.get(pos) else { return true };
        let choices: Vec<Option<usize>> = std::iter::once(None).chain((0..=r).map(Some)).collect();
        for val in choices {
            if v == initial && val.is_none() {
                continue;
            }
            values[v] = Some(val);
            let fits = succ[v].iter().all(|&w| values[w].map_or(true, |x| ok_edge(val, x, w)))
                && pred[v].iter().all(|&u| values[u].map_or(true, |x| ok_edge(x, val, v)));
            if fits && search(pos + 1, order, values, r, initial, succ, pred, ok_edge) {
                return true;
            }
        }
        values[v] = None;
        false
    }
    let mut values = vec![None; n];
    search(0, &order, &mut values, r, initial, succ, &pred, &ok_edge)
}

/// Certificate of the second robot: it moves exactly when the first robot
/// was not at the crossing in the previous step.
pub fn figure_g2() -> GuaranteeTs {
    let inputs: Vec<String> = ["at_crossing_1", "at_crossing_2", "go_1"].map(String::from).to_vec();
    let succ = (0..2)
        .map(|_| {
            (0..8)
                .map(|c| if cube_letter(&inputs, c).contains("at_crossing_1") { 0 } else { 1 })
                .collect()
        })
        .collect();
    GuaranteeTs(MooreTs::new(
        inputs,
        vec!["go_2".into()],
        0,
        succ,
        vec![letter::<_, &str>([]), letter(["go_2"])],
    ))
}

/// Strategy of the first robot: it moves exactly when it was at the
/// crossing in the previous step.
pub fn figure_s1() -> MooreTs {
    let inputs: Vec<String> = ["at_crossing_1", "at_crossing_2", "go_2"].map(String::from).to_vec();
    let succ = (0..2)
        .map(|_| {
            (0..8)
                .map(|c| if cube_letter(&inputs, c).contains("at_crossing_1") { 0 } else { 1 })
                .collect()
        })
        .collect();
    MooreTs::new(
        inputs,
        vec!["go_1".into(), "m_1".into()],
        0,
        succ,
        vec![letter(["go_1"]), letter::<_, &str>([])],
    )
}

/// Every complete Moore machine with `states` states over the given
/// alphabet, initial state 0.
pub fn all_moore(inputs: &[String], outputs: &[String], states: usize) -> Vec<MooreTs> {
    let cubes = 1usize << inputs.len();
    let labels_per_state = 1usize << outputs.len();
    let succ_choices = states.pow((states * cubes) as u32);
    let label_choices = labels_per_state.pow(states as u32);
    let mut all = Vec::with_capacity(succ_choices * label_choices);
    for s in 0..succ_choices {
        let mut code = s;
        let succ: Vec<Vec<usize>> = (0..states)
            .map(|_| {
                (0..cubes)
                    .map(|_| {
                        let t = code % states;
                        code /= states;
                        t
                    })
                    .collect()
            })
            .collect();
        for l in 0..label_choices {
            let mut code = l;
            let labels: Vec<Letter> = (0..states)
                .map(|_| {
                    let bits = code % labels_per_state;
                    code /= labels_per_state;
                    cube_letter(outputs, bits)
                })
                .collect();
            all.push(MooreTs::new(inputs.to_vec(), outputs.to_vec(), 0, succ.clone(), labels));
        }
    }
    all
}
