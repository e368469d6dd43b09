use std::collections::BTreeSet;

use super::{MachineError, TransitionSystem};

/// Greatest simulation of `concrete` by the deterministic `abstract_ts`,
/// observing the outputs of `abstract_ts`. Returns the relation as pairs
/// `(concrete state, abstract state)`, or `None` if it excludes the
/// initial pair.
///
/// A pair is kept while the outputs agree on the observed variables and
/// every defined concrete transition is matched by the abstract transition
/// on the same input into a kept pair. For Mealy concrete machines the
/// outputs are compared on the inputs with a defined transition.
pub fn simulates(
    abstract_ts: &dyn TransitionSystem,
    concrete: &dyn TransitionSystem,
) -> Result<Option<BTreeSet<(usize, usize)>>, MachineError> {
    if abstract_ts.inputs() != concrete.inputs() {
        return Err(MachineError::AlphabetMismatch("simulation needs equal inputs".into()));
    }
    let observed = abstract_ts.outputs();
    if let Some(v) = observed.iter().find(|v| !concrete.outputs().contains(v)) {
        return Err(MachineError::AlphabetMismatch(format!("`{v}` is not an output of the concrete machine")));
    }
    let (n2, n1) = (concrete.num_states(), abstract_ts.num_states());
    let cubes = concrete.num_cubes();
    let agrees = |t2: usize, t1: usize, c: usize| {
        let o2 = concrete.output(t2, c);
        let o1 = abstract_ts.output(t1, c);
        observed.iter().all(|v| o2.contains(v) == o1.contains(v))
    };
    let mut rel = vec![vec![false; n1]; n2];
    for (t2, row) in rel.iter_mut().enumerate() {
        for (t1, cell) in row.iter_mut().enumerate() {
            let mut ok = (0..cubes)
                .filter(|&c| concrete.successor(t2, c).is_some())
                .all(|c| agrees(t2, t1, c));
            if concrete.is_moore() {
                ok &= agrees(t2, t1, 0);
            }
            *cell = ok;
        }
    }
    loop {
        let mut changed = false;
        for t2 in 0..n2 {
            for t1 in 0..n1 {
                if !rel[t2][t1] {
                    continue;
                }
                let matched = (0..cubes).all(|c| match concrete.successor(t2, c) {
                    None => true,
                    Some(s2) => match abstract_ts.successor(t1, c) {
                        Some(s1) => rel[s2][s1],
                        None => false,
                    },
                });
                if !matched {
                    rel[t2][t1] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    if !rel[concrete.initial()][abstract_ts.initial()] {
        return Ok(None);
    }
    let pairs = (0..n2)
        .flat_map(|t2| (0..n1).map(move |t1| (t2, t1)))
        .filter(|&(t2, t1)| rel[t2][t1])
        .collect();
    Ok(Some(pairs))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{GuaranteeTs, LocalStrategy, MooreTs};
    use super::*;
    use crate::letter;

    #[test]
    fn reflexive() {
        let s = s1();
        let rel = simulates(&s, &s).unwrap().unwrap();
        assert!(rel.contains(&(0, 0)) && rel.contains(&(1, 1)));
    }

    #[test]
    fn certificate_simulates_strategy() {
        assert!(simulates(&g1(), &s1()).unwrap().is_some());
        assert!(simulates(&g2(), &s2()).unwrap().is_some());
    }

    #[test]
    fn mismatching_certificate() {
        let mut g = g1().0;
        g.labels = vec![letter::<_, &str>([]), letter(["go_1"])];
        assert!(simulates(&GuaranteeTs(g), &s1()).unwrap().is_none());
    }

    #[test]
    fn partial_strategy_needs_fewer_matches() {
        let s = s1();
        let mut g: MooreTs = g1().0;
        // Break the certificate on inputs with go_2 in its first state.
        for c in 0..8 {
            if c & 4 != 0 {
                g.succ[0][c] = 1 - g.succ[0][c];
            }
        }
        assert!(simulates(&g, &s).unwrap().is_none());
        let mut local = LocalStrategy::from_complete(&s);
        for c in 0..8 {
            if c & 4 != 0 {
                local.succ[0][c] = None;
            }
        }
        assert!(simulates(&g, &local).unwrap().is_some());
    }

    #[test]
    fn input_mismatch_is_an_error() {
        assert!(simulates(&g2(), &s1()).is_err());
    }
}
