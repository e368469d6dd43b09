use std::collections::{BTreeSet, HashMap};

use super::{
    cube_letter, simulates, GuaranteeTs, LocalStrategy, MachineError, MealyTs, MooreTs,
    TransitionSystem,
};
use crate::Letter;

#[derive(Clone, Copy)]
enum Source {
    /// Bit of the strategy's input cube.
    Input(usize),
    /// Output of the strategy itself.
    Own,
    /// Label of the certificate with this index.
    Certificate(usize),
    /// Not observed by anyone involved; ranges freely.
    Free(usize),
}

type Belief = Vec<usize>;

/// Restricts a complete strategy to the inputs that keep the history
/// consistent with `guarantees`. The strategy tracks the set of joint
/// certificate states compatible with what it has observed; an input is
/// kept iff some state in that set produces, on the observed variables,
/// the certificate outputs the input carries. When each strategy state is
/// reached with a single belief set, the result keeps the strategy's state
/// numbering.
pub fn restrict(s: &dyn TransitionSystem, guarantees: &[&GuaranteeTs]) -> LocalStrategy {
    let mut base = LocalStrategy::from_complete(s);
    if guarantees.is_empty() {
        return base;
    }
    let inputs = s.inputs();
    let own = s.outputs();
    let mut free: Vec<String> = Vec::new();
    let sources: Vec<Vec<(Source, String)>> = guarantees
        .iter()
        .map(|g| {
            g.inputs()
                .iter()
                .map(|v| {
                    let src = if let Some(k) = inputs.iter().position(|x| x == v) {
                        Source::Input(k)
                    } else if own.contains(v) {
                        Source::Own
                    } else if let Some(m) = guarantees.iter().position(|h| h.outputs().contains(v)) {
                        Source::Certificate(m)
                    } else {
                        let k = free.iter().position(|x| x == v).unwrap_or_else(|| {
                            free.push(v.clone());
                            free.len() - 1
                        });
                        Source::Free(k)
                    };
                    (src, v.clone())
                })
                .collect()
        })
        .collect();
    // Observed certificate outputs: (certificate, variable, input bit).
    let observed: Vec<(usize, String, usize)> = guarantees
        .iter()
        .enumerate()
        .flat_map(|(m, g)| {
            g.outputs()
                .iter()
                .filter_map(|v| inputs.iter().position(|x| x == v).map(|k| (m, v.clone(), k)))
                .collect::<Vec<_>>()
        })
        .collect();
    let associated: Vec<String> = {
        let mut a: Vec<String> = observed.iter().map(|(_, v, _)| v.clone()).collect();
        a.sort();
        a.dedup();
        a
    };

    let consistent = |b: &Belief, cube: usize| {
        observed
            .iter()
            .all(|(m, v, k)| (cube >> k & 1 == 1) == guarantees[*m].0.labels[b[*m]].contains(v))
    };
    let step = |b: &Belief, t: usize, cube: usize, out: &mut BTreeSet<Belief>| {
        let own_label = s.output(t, cube);
        for h in 0..1usize << free.len() {
            let next: Belief = guarantees
                .iter()
                .enumerate()
                .map(|(m, g)| {
                    let gcube = sources[m].iter().enumerate().fold(0usize, |acc, (bit, (src, v))| {
                        let val = match *src {
                            Source::Input(k) => cube >> k & 1 == 1,
                            Source::Own => own_label.contains(v),
                            Source::Certificate(j) => guarantees[j].0.labels[b[j]].contains(v),
                            Source::Free(k) => h >> k & 1 == 1,
                        };
                        acc | (val as usize) << bit
                    });
                    g.0.succ[b[m]][gcube]
                })
                .collect();
            out.insert(next);
        }
    };

    let cubes = s.num_cubes();
    let start_belief: BTreeSet<Belief> = BTreeSet::from([guarantees.iter().map(|g| g.0.initial).collect()]);
    let start = (s.initial(), start_belief);
    let mut ids: HashMap<(usize, BTreeSet<Belief>), usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut succ: Vec<Vec<Option<usize>>> = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let (t, beliefs) = states[next].clone();
        let mut row = Vec::with_capacity(cubes);
        for cube in 0..cubes {
            let mut after = BTreeSet::new();
            for b in beliefs.iter().filter(|b| consistent(b, cube)) {
                step(b, t, cube, &mut after);
            }
            if after.is_empty() {
                row.push(None);
                continue;
            }
            let key = (s.successor(t, cube).expect("complete strategy"), after);
            let len = states.len();
            let id = *ids.entry(key.clone()).or_insert_with(|| {
                states.push(key);
                len
            });
            row.push(Some(id));
        }
        succ.push(row);
        next += 1;
    }

    let expectation = |beliefs: &BTreeSet<Belief>| -> Letter {
        associated
            .iter()
            .filter(|v| {
                beliefs.iter().all(|b| {
                    observed
                        .iter()
                        .filter(|(_, x, _)| x == *v)
                        .all(|(m, _, _)| guarantees[*m].0.labels[b[*m]].contains(*v))
                })
            })
            .cloned()
            .collect()
    };

    let distinct: BTreeSet<usize> = states.iter().map(|(t, _)| *t).collect();
    let bijective = distinct.len() == states.len() && states.len() == s.num_states();
    let n = states.len();
    let position = |i: usize| if bijective { states[i].0 } else { i };
    let mut new_succ = vec![Vec::new(); n];
    let mut labels = vec![Vec::new(); n];
    let mut expectations = vec![Letter::new(); n];
    for i in 0..n {
        let p = position(i);
        new_succ[p] = succ[i].iter().map(|o| o.map(position)).collect();
        labels[p] = (0..cubes).map(|c| s.output(states[i].0, c)).collect();
        expectations[p] = expectation(&states[i].1);
    }
    base.associated = associated;
    base.initial = position(0);
    base.succ = new_succ;
    base.labels = labels;
    base.expectations = expectations;
    base
}

/// Completes a local strategy: it behaves as `s` while `s` is defined and
/// follows `own` from the first undefined transition on, emitting `own`'s
/// labels and nothing on the remaining outputs.
pub fn extend(s: &LocalStrategy, own: &GuaranteeTs) -> Result<MooreTs, MachineError> {
    if !s.moore {
        return Err(MachineError::Malformed("Moore extension of a Mealy strategy".into()));
    }
    let m = extend_mealy(s, own)?;
    let succ = m
        .succ
        .iter()
        .map(|row| row.iter().map(|o| o.expect("total")).collect())
        .collect();
    let labels = m.labels.iter().map(|row| row[0].clone()).collect();
    Ok(MooreTs::new(m.inputs, m.outputs, m.initial, succ, labels))
}

/// Extension for strategies in either output discipline.
pub fn extend_mealy(s: &LocalStrategy, own: &GuaranteeTs) -> Result<MealyTs, MachineError> {
    if simulates(own, s)?.is_none() {
        return Err(MachineError::NotSimulated);
    }
    let cubes = s.num_cubes();
    if s.is_total() {
        return Ok(MealyTs {
            inputs: s.inputs.clone(),
            outputs: s.outputs.clone(),
            initial: s.initial,
            succ: s.succ.clone(),
            labels: s.labels.clone(),
        });
    }
    // States are (Some(t), u) while tracking `s`, (None, u) afterwards.
    let start = (Some(s.initial), own.0.initial);
    let mut ids = HashMap::from([(start, 0usize)]);
    let mut states = vec![start];
    let mut succ = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let (t, u) = states[next];
        let mut row = Vec::with_capacity(cubes);
        for cube in 0..cubes {
            let u2 = own.0.succ[u][cube];
            let key = match t.and_then(|t| s.succ[t][cube]) {
                Some(t2) => (Some(t2), u2),
                None => (None, u2),
            };
            let len = states.len();
            let id = *ids.entry(key).or_insert_with(|| {
                states.push(key);
                len
            });
            row.push(Some(id));
        }
        succ.push(row);
        next += 1;
    }
    let labels = states
        .iter()
        .map(|&(t, u)| match t {
            Some(t) => s.labels[t].clone(),
            None => vec![own.0.labels[u].clone(); cubes],
        })
        .collect();
    Ok(MealyTs {
        inputs: s.inputs.clone(),
        outputs: s.outputs.clone(),
        initial: 0,
        succ,
        labels,
    })
}

/// Defined input letters of every state, for inspection and tests.
pub fn defined_inputs(s: &LocalStrategy) -> Vec<Vec<Letter>> {
    (0..s.num_states())
        .map(|t| {
            (0..s.num_cubes())
                .filter(|&c| s.succ[t][c].is_some())
                .map(|c| cube_letter(&s.inputs, c))
                .collect()
        })
        .collect()
}
