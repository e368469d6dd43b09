use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{
    cube_letter, letter_cube, GuaranteeTs, LocalStrategy, MachineError, MealyTs, MooreTs, Strategy,
    TransitionSystem,
};
use crate::Letter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MachineKind {
    Moore,
    Mealy,
    Local,
    Certificate,
}

/// JSON form of a machine. Inputs of transitions are listed as the set of
/// true input variables; missing transitions are undefined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineFile {
    pub kind: MachineKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub process: Option<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub associated: Vec<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub mealy: bool,
    pub initial: usize,
    pub states: Vec<StateEntry>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateEntry {
    #[serde(default)]
    pub label: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expects: Vec<String>,
    pub transitions: Vec<TransitionEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionEntry {
    pub input: Vec<String>,
    pub target: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<Vec<String>>,
}

fn names(l: &Letter) -> Vec<String> {
    l.iter().cloned().collect()
}

impl MachineFile {
    fn build(
        kind: MachineKind,
        ts: &dyn TransitionSystem,
        mealy: bool,
        associated: Vec<String>,
        expectations: Option<&[Letter]>,
    ) -> Self {
        let states = (0..ts.num_states())
            .map(|t| StateEntry {
                label: if mealy { vec![] } else { names(&ts.output(t, 0)) },
                expects: expectations.map(|e| names(&e[t])).unwrap_or_default(),
                transitions: (0..ts.num_cubes())
                    .filter_map(|c| {
                        ts.successor(t, c).map(|target| TransitionEntry {
                            input: names(&cube_letter(ts.inputs(), c)),
                            target,
                            output: mealy.then(|| names(&ts.output(t, c))),
                        })
                    })
                    .collect(),
            })
            .collect();
        MachineFile {
            kind,
            process: None,
            inputs: ts.inputs().to_vec(),
            outputs: ts.outputs().to_vec(),
            associated,
            mealy,
            initial: ts.initial(),
            states,
        }
    }

    pub fn from_moore(ts: &MooreTs) -> Self {
        Self::build(MachineKind::Moore, ts, false, vec![], None)
    }

    pub fn from_certificate(g: &GuaranteeTs) -> Self {
        Self::build(MachineKind::Certificate, g, false, vec![], None)
    }

    pub fn from_mealy(ts: &MealyTs) -> Self {
        Self::build(MachineKind::Mealy, ts, true, vec![], None)
    }

    pub fn from_local(s: &LocalStrategy) -> Self {
        Self::build(
            MachineKind::Local,
            s,
            !s.moore,
            s.associated.clone(),
            Some(&s.expectations),
        )
    }

    pub fn from_strategy(s: &Strategy) -> Self {
        match s {
            Strategy::Moore(m) => Self::from_moore(m),
            Strategy::Mealy(m) => Self::from_mealy(m),
        }
    }

    pub fn with_process(mut self, name: &str) -> Self {
        self.process = Some(name.to_string());
        self
    }

    /// Partial tables: successor and output per state and cube.
    #[allow(clippy::type_complexity)]
    fn tables(&self) -> Result<(Vec<Vec<Option<usize>>>, Vec<Vec<Letter>>), MachineError> {
        let n = self.states.len();
        let cubes = 1usize
            .checked_shl(self.inputs.len() as u32)
            .filter(|_| self.inputs.len() <= 20)
            .ok_or_else(|| MachineError::Malformed("too many inputs".into()))?;
        if n == 0 || self.initial >= n {
            return Err(MachineError::Malformed("initial state out of range".into()));
        }
        let mut succ = vec![vec![None; cubes]; n];
        let mut labels = vec![vec![Letter::new(); cubes]; n];
        for (t, st) in self.states.iter().enumerate() {
            let label: Letter = st.label.iter().cloned().collect();
            if let Some(v) = label.iter().find(|v| !self.outputs.contains(v)) {
                return Err(MachineError::Malformed(format!("label variable `{v}` is not an output")));
            }
            for l in labels[t].iter_mut() {
                *l = label.clone();
            }
            for tr in &st.transitions {
                let input: Letter = tr.input.iter().cloned().collect();
                if let Some(v) = input.iter().find(|v| !self.inputs.contains(v)) {
                    return Err(MachineError::Malformed(format!("transition input `{v}` is not an input")));
                }
                if tr.target >= n {
                    return Err(MachineError::Malformed(format!("target {} out of range", tr.target)));
                }
                let c = letter_cube(&self.inputs, &input);
                if succ[t][c].is_some() {
                    return Err(MachineError::Malformed(format!("state {t} has two transitions on one input")));
                }
                succ[t][c] = Some(tr.target);
                if let Some(out) = &tr.output {
                    let out: Letter = out.iter().cloned().collect();
                    if let Some(v) = out.iter().find(|v| !self.outputs.contains(v)) {
                        return Err(MachineError::Malformed(format!("output `{v}` is not an output")));
                    }
                    labels[t][c] = out;
                } else if self.mealy {
                    return Err(MachineError::Malformed("Mealy transition without output".into()));
                }
            }
        }
        Ok((succ, labels))
    }

    fn total(succ: Vec<Vec<Option<usize>>>) -> Result<Vec<Vec<usize>>, MachineError> {
        succ.into_iter()
            .enumerate()
            .map(|(t, row)| {
                row.into_iter()
                    .collect::<Option<Vec<usize>>>()
                    .ok_or_else(|| MachineError::Malformed(format!("state {t} is missing transitions")))
            })
            .collect()
    }

    pub fn to_moore(&self) -> Result<MooreTs, MachineError> {
        if self.mealy {
            return Err(MachineError::Malformed("expected a Moore machine".into()));
        }
        let (succ, labels) = self.tables()?;
        let ts = MooreTs {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            initial: self.initial,
            succ: Self::total(succ)?,
            labels: labels.into_iter().map(|row| row[0].clone()).collect(),
        };
        ts.check()?;
        Ok(ts)
    }

    pub fn to_certificate(&self) -> Result<GuaranteeTs, MachineError> {
        Ok(GuaranteeTs(self.to_moore()?))
    }

    pub fn to_mealy(&self) -> Result<MealyTs, MachineError> {
        let (succ, labels) = self.tables()?;
        let ts = MealyTs {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            initial: self.initial,
            succ,
            labels,
        };
        ts.check()?;
        if !ts.is_total() {
            return Err(MachineError::Malformed("complete strategy is missing transitions".into()));
        }
        Ok(ts)
    }

    pub fn to_strategy(&self) -> Result<Strategy, MachineError> {
        if self.mealy {
            Ok(Strategy::Mealy(self.to_mealy()?))
        } else {
            Ok(Strategy::Moore(self.to_moore()?))
        }
    }

    pub fn to_local(&self) -> Result<LocalStrategy, MachineError> {
        let (succ, labels) = self.tables()?;
        let s = LocalStrategy {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            associated: self.associated.clone(),
            initial: self.initial,
            succ,
            labels,
            expectations: self
                .states
                .iter()
                .map(|st| st.expects.iter().cloned().collect())
                .collect(),
            moore: !self.mealy,
        };
        s.check()?;
        Ok(s)
    }
}

fn state_label(l: &Letter) -> String {
    format!("{{{}}}", l.iter().cloned().collect::<Vec<_>>().join(","))
}

fn edge_label(ts: &dyn TransitionSystem, cube: usize) -> String {
    ts.inputs()
        .iter()
        .enumerate()
        .map(|(k, v)| if cube >> k & 1 == 1 { v.clone() } else { format!("!{v}") })
        .collect::<Vec<_>>()
        .join(" & ")
}

fn dot_common(ts: &dyn TransitionSystem, name: &str, state_text: &dyn Fn(usize) -> String, mealy: bool) -> String {
    let mut s = format!("digraph \"{name}\" {{\n  rankdir=LR;\n  init [shape=point];\n");
    for t in 0..ts.num_states() {
        let _ = writeln!(s, "  s{t} [shape=circle, label=\"{}\"];", state_text(t));
    }
    let _ = writeln!(s, "  init -> s{};", ts.initial());
    for t in 0..ts.num_states() {
        for c in 0..ts.num_cubes() {
            if let Some(t2) = ts.successor(t, c) {
                let mut label = edge_label(ts, c);
                if mealy {
                    label.push_str(" / ");
                    label.push_str(&state_label(&ts.output(t, c)));
                }
                let _ = writeln!(s, "  s{t} -> s{t2} [label=\"{label}\"];");
            }
        }
    }
    s.push_str("}\n");
    s
}

pub(crate) fn machine_dot(ts: &MooreTs, name: &str) -> String {
    dot_common(ts, name, &|t| state_label(&ts.labels[t]), false)
}

pub(crate) fn general_dot(ts: &MealyTs, name: &str) -> String {
    dot_common(ts, name, &|t| format!("t{t}"), true)
}

pub(crate) fn local_dot(ts: &LocalStrategy, name: &str) -> String {
    let text = |t: usize| {
        let own = if ts.moore { state_label(&ts.labels[t][0]) } else { format!("t{t}") };
        if ts.associated.is_empty() {
            own
        } else {
            format!("{own} expects {}", state_label(&ts.expectations[t]))
        }
    };
    dot_common(ts, name, &text, !ts.moore)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::restrict;
    use super::*;

    #[test]
    fn moore_round_trip() {
        let file = MachineFile::from_moore(&s1());
        let text = serde_json::to_string_pretty(&file).unwrap();
        let back: MachineFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_moore().unwrap(), s1());
    }

    #[test]
    fn local_round_trip() {
        let local = restrict(&s1(), &[&g2()]);
        let file = MachineFile::from_local(&local);
        assert_eq!(file.to_local().unwrap(), local);
    }

    #[test]
    fn mealy_round_trip() {
        let m = MealyTs::from_moore(&s2());
        assert_eq!(MachineFile::from_mealy(&m).to_mealy().unwrap(), m);
    }

    #[test]
    fn missing_transition_is_rejected_for_complete_machines() {
        let mut file = MachineFile::from_moore(&s1());
        file.states[0].transitions.pop();
        assert!(file.to_moore().is_err());
        assert!(file.to_local().is_ok());
    }

    #[test]
    fn dot_mentions_labels() {
        let dot = s1().to_dot("s1");
        assert!(dot.contains("{go_1}"));
        assert!(dot.contains("init -> s0"));
    }
}
