use std::collections::{BTreeSet, HashMap};

use super::{cube_letter, letter_cube, MachineError, MealyTs, MooreTs, TransitionSystem};
use crate::Letter;

fn merged(a: &[String], b: &[String]) -> Vec<String> {
    a.iter().chain(b).cloned().collect::<BTreeSet<_>>().into_iter().collect()
}

/// Binary parallel composition of Moore machines: each component reads the
/// external input joined with the other's current label. Only the
/// reachable part is built.
pub fn parallel_compose(a: &MooreTs, b: &MooreTs) -> Result<MooreTs, MachineError> {
    if let Some(v) = a.outputs.iter().find(|v| b.outputs.contains(v)) {
        return Err(MachineError::OutputOverlap(v.clone()));
    }
    let outputs = merged(&a.outputs, &b.outputs);
    let inputs: Vec<String> = merged(&a.inputs, &b.inputs)
        .into_iter()
        .filter(|v| !outputs.contains(v))
        .collect();
    let cubes = 1usize << inputs.len();
    let start = (a.initial, b.initial);
    let mut ids = HashMap::from([(start, 0usize)]);
    let mut states = vec![start];
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let (ta, tb) = states[next];
        let mut row = Vec::with_capacity(cubes);
        for cube in 0..cubes {
            let ext = cube_letter(&inputs, cube);
            let mut seen_by_a = ext.clone();
            seen_by_a.extend(b.labels[tb].iter().cloned());
            let mut seen_by_b = ext;
            seen_by_b.extend(a.labels[ta].iter().cloned());
            let key = (
                a.succ[ta][letter_cube(&a.inputs, &seen_by_a)],
                b.succ[tb][letter_cube(&b.inputs, &seen_by_b)],
            );
            let id = *ids.entry(key).or_insert_with(|| {
                states.push(key);
                states.len() - 1
            });
            row.push(id);
        }
        succ.push(row);
        next += 1;
    }
    let labels = states
        .iter()
        .map(|&(ta, tb)| a.labels[ta].union(&b.labels[tb]).cloned().collect())
        .collect();
    Ok(MooreTs::new(inputs, outputs, 0, succ, labels))
}

/// Composition of any number of machines. Outputs that are read by some
/// component may depend on the current input (Mealy components), so at each
/// joint state and external input the unique consistent valuation of the
/// read outputs is searched. The joint transition is undefined as soon as
/// one component's transition is.
pub fn compose_all(parts: &[&dyn TransitionSystem]) -> Result<MealyTs, MachineError> {
    let mut outputs: Vec<String> = Vec::new();
    for p in parts {
        for v in p.outputs() {
            if outputs.contains(v) {
                return Err(MachineError::OutputOverlap(v.clone()));
            }
            outputs.push(v.clone());
        }
    }
    outputs.sort();
    let read: BTreeSet<String> = parts.iter().flat_map(|p| p.inputs().iter().cloned()).collect();
    let inputs: Vec<String> = read.iter().filter(|v| !outputs.contains(v)).cloned().collect();
    let internal: Vec<String> = outputs.iter().filter(|v| read.contains(*v)).cloned().collect();
    if internal.len() > 16 {
        return Err(MachineError::AlphabetMismatch("too many shared outputs".into()));
    }
    let cubes = 1usize << inputs.len();
    let start: Vec<usize> = parts.iter().map(|p| p.initial()).collect();
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut succ: Vec<Vec<Option<usize>>> = Vec::new();
    let mut labels: Vec<Vec<Letter>> = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let joint = states[next].clone();
        let mut row = Vec::with_capacity(cubes);
        let mut label_row = Vec::with_capacity(cubes);
        for cube in 0..cubes {
            let ext = cube_letter(&inputs, cube);
            let moore_only = parts.iter().all(|p| p.is_moore());
            let mut found: Option<(Letter, Vec<usize>)> = None;
            for guess in 0..1usize << internal.len() {
                let assumed = cube_letter(&internal, guess);
                let mut env = ext.clone();
                env.extend(assumed.iter().cloned());
                let mut produced = Letter::new();
                let mut cubes_seen = Vec::with_capacity(parts.len());
                for (p, &t) in parts.iter().zip(&joint) {
                    let c = letter_cube(p.inputs(), &env);
                    produced.extend(p.output(t, c));
                    cubes_seen.push(c);
                }
                let consistent = internal.iter().all(|v| produced.contains(v) == assumed.contains(v));
                if !consistent {
                    continue;
                }
                if found.is_some() {
                    return Err(MachineError::Combinational);
                }
                found = Some((produced, cubes_seen));
                if moore_only {
                    break;
                }
            }
            let Some((produced, cubes_seen)) = found else {
                return Err(MachineError::Combinational);
            };
            let targets: Option<Vec<usize>> = parts
                .iter()
                .zip(&joint)
                .zip(&cubes_seen)
                .map(|((p, &t), &c)| p.successor(t, c))
                .collect();
            let id = targets.map(|key| {
                let len = states.len();
                *ids.entry(key.clone()).or_insert_with(|| {
                    states.push(key);
                    len
                })
            });
            row.push(id);
            label_row.push(produced);
        }
        succ.push(row);
        labels.push(label_row);
        next += 1;
    }
    Ok(MealyTs {
        inputs,
        outputs,
        initial: 0,
        succ,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{compute, LocalStrategy};
    use super::*;
    use crate::letter;

    #[test]
    fn robots_composition() {
        let comp = parallel_compose(&s1(), &s2()).unwrap();
        assert_eq!(comp.inputs, vec!["at_crossing_1".to_string(), "at_crossing_2".to_string()]);
        let trace = compute(
            &comp,
            &[letter(["at_crossing_1"]), letter::<_, &str>([]), letter(["at_crossing_2"])],
        );
        assert_eq!(
            trace,
            vec![
                letter(["at_crossing_1", "go_1"]),
                letter(["go_1"]),
                letter(["at_crossing_2", "go_2"]),
            ]
        );
    }

    #[test]
    fn non_interacting_product() {
        let a = MooreTs::new(vec!["i".into()], vec!["x".into()], 0, vec![vec![0, 1], vec![1, 0]], vec![letter::<_, &str>([]), letter(["x"])]);
        let b = MooreTs::new(vec!["j".into()], vec!["y".into()], 0, vec![vec![1, 1], vec![0, 0]], vec![letter::<_, &str>([]), letter(["y"])]);
        let comp = parallel_compose(&a, &b).unwrap();
        assert_eq!(comp.num_states(), 4);
        let general = compose_all(&[&a, &b]).unwrap();
        let input = vec![letter(["i"]), letter(["j"]), letter(["i", "j"]), letter::<_, &str>([])];
        assert_eq!(compute(&comp, &input), compute(&general, &input));
    }

    #[test]
    fn overlap_rejected() {
        assert!(matches!(parallel_compose(&s1(), &s1()), Err(MachineError::OutputOverlap(_))));
    }

    #[test]
    fn general_composition_matches_binary_on_robots() {
        let bin = parallel_compose(&s1(), &s2()).unwrap();
        let gen = compose_all(&[&s1(), &s2()]).unwrap();
        let inputs = [letter(["at_crossing_1"]), letter(["at_crossing_2"]), letter::<_, &str>([]), letter(["at_crossing_1", "at_crossing_2"])];
        assert_eq!(compute(&bin, &inputs), compute(&gen, &inputs));
    }

    #[test]
    fn partial_component_blocks_composition() {
        let mut local = LocalStrategy::from_complete(&s1());
        for c in 0..8 {
            local.succ[0][c] = None;
        }
        let gen = compose_all(&[&local, &s2()]).unwrap();
        assert!(compute(&gen, &[letter::<_, &str>([])]).is_empty());
    }
}
