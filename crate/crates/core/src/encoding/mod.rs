//! The bounded SAT constraint system for certifying synthesis with local
//! strategies.
//!
//! For every process `p_j` the instance searches a local strategy `T_j`
//! (Moore or Mealy labelled over `O_j ∪ O^A_j`) and a certificate `G_j`
//! (Moore, over `I_j` and `O^g_j`). The constraint families are
//!
//! * (a) certificates are complete and deterministic,
//! * (b) the strategy is simulated by its own certificate,
//! * (c) the strategy simulates the certificates of its relevant processes
//!   on the associated outputs,
//! * (d) the strategy is defined exactly on inputs that agree with its
//!   associated-output labelling,
//! * (e) the run graph with the automaton of `φ_j` has a valid annotation.
//!
//! Input cubes are enumerated explicitly.

mod dimacs;
mod registry;

use std::collections::{BTreeSet, HashMap};
use std::io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::architecture::Architecture;
use crate::automata::UniversalCoBuchi;
use crate::logic::RelevantProcesses;
use crate::machines::cube_letter;

pub use dimacs::{dimacs_string, parse_dimacs, write_dimacs, DimacsError};
pub use registry::{SemVar, VariableRegistry};

/// Largest number of local inputs whose cubes are enumerated.
pub const MAX_LOCAL_INPUTS: usize = 12;
/// Default limit on the number of clauses.
pub const DEFAULT_CLAUSE_CAP: usize = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Moore,
    Mealy,
}

/// Size bounds per process.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    pub strategy: Vec<usize>,
    pub certificate: Vec<usize>,
}

impl Bounds {
    pub fn uniform(processes: usize, strategy: usize, certificate: usize) -> Self {
        Bounds {
            strategy: vec![strategy; processes],
            certificate: vec![certificate; processes],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("process `{process}` reads {count} inputs; at most {MAX_LOCAL_INPUTS} are supported")]
    TooManyInputs { process: String, count: usize },
    #[error("instance exceeds the clause cap of {cap}")]
    ClauseCap { cap: usize },
    #[error("bounds must be positive and given for each of the {processes} processes")]
    BadBounds { processes: usize },
    #[error("expected one automaton per process")]
    AutomataCount,
}

/// What the encoding knows about one process.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessLayout {
    pub name: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub associated: Vec<String>,
    pub guarantee_outputs: Vec<String>,
    pub strategy_size: usize,
    pub certificate_size: usize,
}

impl ProcessLayout {
    pub fn num_cubes(&self) -> usize {
        1 << self.inputs.len()
    }

    /// Own outputs followed by associated outputs.
    pub fn labelled(&self) -> impl Iterator<Item = &String> {
        self.outputs.iter().chain(&self.associated)
    }
}

/// A CNF formula together with the meaning of its variables.
#[derive(Debug, Clone)]
pub struct CnfInstance {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    pub registry: VariableRegistry,
    pub layouts: Vec<ProcessLayout>,
    pub mode: Mode,
}

impl CnfInstance {
    pub fn write_dimacs<W: io::Write>(&self, out: &mut W) -> io::Result<()> {
        write_dimacs(out, self.num_vars, &self.clauses)
    }

    pub fn to_dimacs(&self) -> String {
        dimacs_string(self.num_vars, &self.clauses)
    }

    /// JSON sidecar mapping semantic names to variable indices.
    pub fn registry_json(&self) -> String {
        serde_json::to_string_pretty(&self.registry.to_map()).expect("map of strings")
    }

    /// DIMACS index of a semantic variable, if the encoding uses it.
    pub fn lookup(&self, var: &SemVar) -> Option<u32> {
        self.registry.get(var)
    }
}

/// Guard of an automaton edge split by the process's variables. Literals
/// on variables outside `I_j ∪ O_j` are dropped: the edge is present for
/// some valuation of them, and the automaton is universal.
struct LocalGuard {
    mask: usize,
    value: usize,
    outputs: Vec<(usize, bool)>,
    target: usize,
}

/// Builder for the constraint families. Every `constrain_*` method returns
/// its clauses and allocates the variables it needs.
pub struct Encoder<'a> {
    layouts: Vec<ProcessLayout>,
    relevant: Vec<Vec<usize>>,
    ucas: &'a [UniversalCoBuchi],
    guards: Vec<Vec<Vec<LocalGuard>>>,
    widths: Vec<usize>,
    mode: Mode,
    registry: VariableRegistry,
}

fn sorted(set: &BTreeSet<String>) -> Vec<String> {
    set.iter().cloned().collect()
}

fn braces(vars: &[String], cube: usize) -> String {
    let l = cube_letter(vars, cube);
    format!("{{{}}}", l.into_iter().collect::<Vec<_>>().join(","))
}

/// Number of bits needed for values `0..=n`.
fn width_for(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()).max(1) as usize
}

fn exactly_one(lits: &[i32], out: &mut Vec<Vec<i32>>) {
    out.push(lits.to_vec());
    at_most_one(lits, out);
}

fn at_most_one(lits: &[i32], out: &mut Vec<Vec<i32>>) {
    for a in 0..lits.len() {
        for b in a + 1..lits.len() {
            out.push(vec![-lits[a], -lits[b]]);
        }
    }
}

impl<'a> Encoder<'a> {
    pub fn new(
        arch: &Architecture,
        relevant: &RelevantProcesses,
        ucas: &'a [UniversalCoBuchi],
        bounds: &Bounds,
        mode: Mode,
    ) -> Result<Self, EncodeError> {
        let n = arch.len();
        if ucas.len() != n {
            return Err(EncodeError::AutomataCount);
        }
        if bounds.strategy.len() != n
            || bounds.certificate.len() != n
            || bounds.strategy.iter().chain(&bounds.certificate).any(|&b| b == 0)
        {
            return Err(EncodeError::BadBounds { processes: n });
        }
        let alphabet = arch.guarantee_alphabet(relevant);
        let mut layouts = Vec::with_capacity(n);
        for (j, p) in arch.processes.iter().enumerate() {
            if p.inputs.len() > MAX_LOCAL_INPUTS {
                return Err(EncodeError::TooManyInputs {
                    process: p.name.clone(),
                    count: p.inputs.len(),
                });
            }
            layouts.push(ProcessLayout {
                name: p.name.clone(),
                inputs: sorted(&p.inputs),
                outputs: sorted(&p.outputs),
                associated: sorted(&alphabet.associated_outputs[j]),
                guarantee_outputs: sorted(&alphabet.guarantee_outputs[j]),
                strategy_size: bounds.strategy[j],
                certificate_size: bounds.certificate[j],
            });
        }
        let guards = layouts
            .iter()
            .zip(ucas)
            .map(|(lay, uca)| {
                uca.transitions
                    .iter()
                    .map(|edges| {
                        edges
                            .iter()
                            .map(|(g, q2)| {
                                let mut lg = LocalGuard {
                                    mask: 0,
                                    value: 0,
                                    outputs: Vec::new(),
                                    target: *q2,
                                };
                                for (v, &b) in &g.lits {
                                    if let Some(k) = lay.inputs.iter().position(|x| x == v) {
                                        lg.mask |= 1 << k;
                                        lg.value |= (b as usize) << k;
                                    } else if let Some(k) = lay.outputs.iter().position(|x| x == v) {
                                        lg.outputs.push((k, b));
                                    }
                                }
                                lg
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let widths = layouts
            .iter()
            .zip(ucas)
            .map(|(l, u)| width_for(l.strategy_size * u.num_states()))
            .collect();
        Ok(Encoder {
            layouts,
            relevant: (0..n).map(|j| relevant.of(j).iter().copied().collect()).collect(),
            ucas,
            guards,
            widths,
            mode,
            registry: VariableRegistry::new(),
        })
    }

    pub fn layouts(&self) -> &[ProcessLayout] {
        &self.layouts
    }

    fn trans_t(&mut self, j: usize, t: usize, i: usize, t2: usize) -> i32 {
        let l = &self.layouts[j];
        self.registry.intern(SemVar::TransT { j, t, i, t2 }, || {
            format!("trans_T({},{t},{},{t2})", l.name, braces(&l.inputs, i))
        }) as i32
    }

    /// Label variable `v` (index into `labelled()`) of state `t` when
    /// reading cube `i`. Associated outputs are always state-indexed.
    fn out_t(&mut self, j: usize, t: usize, i: usize, v: usize) -> i32 {
        let l = &self.layouts[j];
        let name = l.labelled().nth(v).expect("label index").clone();
        if self.mode == Mode::Mealy && v < l.outputs.len() {
            self.registry.intern(SemVar::OutT { j, t, i: Some(i), v }, || {
                format!("out_T({},{t},{},{name})", l.name, braces(&l.inputs, i))
            }) as i32
        } else {
            self.registry
                .intern(SemVar::OutT { j, t, i: None, v }, || format!("out_T({},{t},{name})", l.name)) as i32
        }
    }

    fn trans_g(&mut self, j: usize, u: usize, i: usize, u2: usize) -> i32 {
        let l = &self.layouts[j];
        self.registry.intern(SemVar::TransG { j, u, i, u2 }, || {
            format!("trans_G({},{u},{},{u2})", l.name, braces(&l.inputs, i))
        }) as i32
    }

    fn out_g(&mut self, j: usize, u: usize, v: usize) -> i32 {
        let l = &self.layouts[j];
        self.registry.intern(SemVar::OutG { j, u, v }, || {
            format!("out_G({},{u},{})", l.name, l.guarantee_outputs[v])
        }) as i32
    }

    fn sim_tg(&mut self, j: usize, t: usize, u: usize) -> i32 {
        let l = &self.layouts[j];
        self.registry
            .intern(SemVar::SimTG { j, t, u }, || format!("sim_TG({},{t},{u})", l.name)) as i32
    }

    fn sim_gt(&mut self, k: usize, j: usize, u: usize, t: usize) -> i32 {
        let (lk, lj) = (&self.layouts[k], &self.layouts[j]);
        self.registry.intern(SemVar::SimGT { k, j, u, t }, || {
            format!("sim_GT({},{},{u},{t})", lk.name, lj.name)
        }) as i32
    }

    fn reach(&mut self, j: usize, t: usize, q: usize) -> i32 {
        let l = &self.layouts[j];
        self.registry
            .intern(SemVar::Reach { j, t, q }, || format!("reach({},{t},{q})", l.name)) as i32
    }

    fn bit(&mut self, j: usize, t: usize, q: usize, b: usize) -> i32 {
        let l = &self.layouts[j];
        self.registry
            .intern(SemVar::Bit { j, t, q, b }, || format!("bound({},{t},{q})[{b}]", l.name)) as i32
    }

    /// Literals whose conjunction is `valid^j(t, i)`: the associated
    /// outputs in cube `i` equal the labelling of `t`.
    fn valid_lits(&mut self, j: usize, t: usize, i: usize) -> Vec<i32> {
        let l = &self.layouts[j];
        let base = l.outputs.len();
        let bits: Vec<(usize, bool)> = l
            .associated
            .iter()
            .enumerate()
            .map(|(a, v)| {
                let k = l.inputs.iter().position(|x| x == v).expect("associated outputs are inputs");
                (base + a, i >> k & 1 == 1)
            })
            .collect();
        bits.into_iter()
            .map(|(v, b)| {
                let x = self.out_t(j, t, i, v);
                if b {
                    x
                } else {
                    -x
                }
            })
            .collect()
    }

    /// (a) `G_j` has exactly one successor per state and input.
    pub fn constrain_guarantee_total(&mut self, j: usize) -> Vec<Vec<i32>> {
        let (g, cubes) = (self.layouts[j].certificate_size, self.layouts[j].num_cubes());
        let mut out = Vec::new();
        for u in 0..g {
            for i in 0..cubes {
                let lits: Vec<i32> = (0..g).map(|u2| self.trans_g(j, u, i, u2)).collect();
                exactly_one(&lits, &mut out);
            }
        }
        out
    }

    /// (b) `T_j ≼_{O^g_j} G_j`. Since `G_j` is deterministic and complete,
    /// "some matching certificate transition into a related pair" becomes
    /// "every certificate transition on the same input leads to one".
    pub fn constrain_self_simulation(&mut self, j: usize) -> Vec<Vec<i32>> {
        let lay = self.layouts[j].clone();
        let (ts, gs, cubes) = (lay.strategy_size, lay.certificate_size, lay.num_cubes());
        let mut out = vec![vec![self.sim_tg(j, 0, 0)]];
        let shared: Vec<(usize, usize)> = lay
            .guarantee_outputs
            .iter()
            .enumerate()
            .map(|(w, v)| (lay.outputs.iter().position(|x| x == v).expect("own output"), w))
            .collect();
        let label_cubes = if self.mode == Mode::Mealy { cubes } else { 1 };
        for t in 0..ts {
            for u in 0..gs {
                let sim = self.sim_tg(j, t, u);
                for &(v, w) in &shared {
                    let og = self.out_g(j, u, w);
                    for i in 0..label_cubes {
                        let ot = self.out_t(j, t, i, v);
                        out.push(vec![-sim, -ot, og]);
                        out.push(vec![-sim, ot, -og]);
                    }
                }
                for i in 0..cubes {
                    for t2 in 0..ts {
                        let tr = self.trans_t(j, t, i, t2);
                        for u2 in 0..gs {
                            let tg = self.trans_g(j, u, i, u2);
                            let next = self.sim_tg(j, t2, u2);
                            out.push(vec![-sim, -tr, -tg, next]);
                        }
                    }
                }
            }
        }
        out
    }

    /// (c) `T_j` simulates `G_k` on `O^A_j ∩ O^g_k` along inputs that agree
    /// on `I_j ∩ I_k`, agree with `T_j`'s own outputs on `I_k ∩ O_j`, and
    /// are valid for `T_j`. Output agreement does not
    /// depend on the input pair, so it is stated once per related pair.
    /// The existential over strategy successors is discharged by (d).
    pub fn constrain_cross_simulation(&mut self, k: usize, j: usize) -> Vec<Vec<i32>> {
        let (lj, lk) = (self.layouts[j].clone(), self.layouts[k].clone());
        let mut out = vec![vec![self.sim_gt(k, j, 0, 0)]];
        let agree: Vec<(usize, usize)> = lj
            .associated
            .iter()
            .enumerate()
            .filter_map(|(a, v)| {
                lk.guarantee_outputs
                    .iter()
                    .position(|x| x == v)
                    .map(|w| (lj.outputs.len() + a, w))
            })
            .collect();
        // Bits of I_k: taken from the cube of I_j or enumerated freely.
        let from_j: Vec<Option<usize>> = lk
            .inputs
            .iter()
            .map(|v| lj.inputs.iter().position(|x| x == v))
            .collect();
        let free: Vec<usize> = (0..lk.inputs.len()).filter(|&b| from_j[b].is_none()).collect();
        // Free bits that are outputs of p_j must match what T_j emits.
        let own: Vec<Option<usize>> = free
            .iter()
            .map(|&b| lj.outputs.iter().position(|x| *x == lk.inputs[b]))
            .collect();
        for u in 0..lk.certificate_size {
            for t in 0..lj.strategy_size {
                let sim = self.sim_gt(k, j, u, t);
                for &(v, w) in &agree {
                    let og = self.out_g(k, u, w);
                    let ot = self.out_t(j, t, 0, v);
                    out.push(vec![-sim, -ot, og]);
                    out.push(vec![-sim, ot, -og]);
                }
                for i2 in 0..lj.num_cubes() {
                    let valid = self.valid_lits(j, t, i2);
                    let fixed = from_j
                        .iter()
                        .enumerate()
                        .filter_map(|(b, src)| src.map(|s| ((i2 >> s) & 1) << b))
                        .fold(0, |a, x| a | x);
                    for e in 0..1usize << free.len() {
                        let i = free
                            .iter()
                            .enumerate()
                            .fold(fixed, |a, (x, &b)| a | ((e >> x) & 1) << b);
                        let mut emitted = Vec::new();
                        for (x, w) in own.iter().enumerate() {
                            if let Some(w) = *w {
                                let ot = self.out_t(j, t, i2, w);
                                emitted.push(if (e >> x) & 1 == 1 { -ot } else { ot });
                            }
                        }
                        for u2 in 0..lk.certificate_size {
                            let tg = self.trans_g(k, u, i, u2);
                            for t2 in 0..lj.strategy_size {
                                let tr = self.trans_t(j, t, i2, t2);
                                let next = self.sim_gt(k, j, u2, t2);
                                let mut c = vec![-sim];
                                c.extend(valid.iter().map(|l| -l));
                                c.extend(&emitted);
                                c.extend([-tg, -tr, next]);
                                out.push(c);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// (d) A transition exists iff the input is valid; at most one.
    pub fn constrain_local_totality(&mut self, j: usize) -> Vec<Vec<i32>> {
        let (ts, cubes) = (self.layouts[j].strategy_size, self.layouts[j].num_cubes());
        let mut out = Vec::new();
        for t in 0..ts {
            for i in 0..cubes {
                let valid = self.valid_lits(j, t, i);
                let trans: Vec<i32> = (0..ts).map(|t2| self.trans_t(j, t, i, t2)).collect();
                let mut c: Vec<i32> = valid.iter().map(|l| -l).collect();
                c.extend(&trans);
                out.push(c);
                for &tr in &trans {
                    for &l in &valid {
                        out.push(vec![-tr, l]);
                    }
                }
                at_most_one(&trans, &mut out);
            }
        }
        out
    }

    /// Comparator `bound(t2,q2) ▷ bound(t,q)`, strict iff `q2` rejects.
    /// Only the forward implication is encoded, which suffices because the
    /// comparator occurs positively.
    fn compare(&mut self, j: usize, t: usize, q: usize, t2: usize, q2: usize, out: &mut Vec<Vec<i32>>) -> i32 {
        let w = self.widths[j];
        let strict = self.ucas[j].is_rejecting(q2);
        let top = SemVar::Cmp { j, t, q, t2, q2, b: w - 1 };
        if let Some(x) = self.registry.get(&top) {
            return x as i32;
        }
        let name = self.layouts[j].name.clone();
        let mut x = 0;
        for b in (0..w).rev() {
            let xb = self.registry.intern(SemVar::Cmp { j, t, q, t2, q2, b }, || {
                format!("cmp({name},{t},{q},{t2},{q2})[{b}]")
            }) as i32;
            if b == w - 1 {
                x = xb;
            }
            let hi = self.bit(j, t2, q2, b);
            let lo = self.bit(j, t, q, b);
            out.push(vec![-xb, hi, -lo]);
            if b > 0 {
                let rest = self.registry.intern(SemVar::Cmp { j, t, q, t2, q2, b: b - 1 }, || {
                    format!("cmp({name},{t},{q},{t2},{q2})[{}]", b - 1)
                }) as i32;
                out.push(vec![-xb, hi, rest]);
                out.push(vec![-xb, -lo, rest]);
            } else if strict {
                out.push(vec![-xb, hi]);
                out.push(vec![-xb, -lo]);
            }
        }
        x
    }

    /// (e) Reachability and bounded rejecting visits in the run graph of
    /// `T_j` and the automaton of `φ_j`.
    pub fn constrain_annotation(&mut self, j: usize) -> Vec<Vec<i32>> {
        let (ts, cubes) = (self.layouts[j].strategy_size, self.layouts[j].num_cubes());
        let q0 = self.ucas[j].initial;
        let mut out = vec![vec![self.reach(j, 0, q0)]];
        for t in 0..ts {
            for q in 0..self.ucas[j].num_states() {
                let reach = self.reach(j, t, q);
                for e in 0..self.guards[j][q].len() {
                    let (mask, value, q2) = {
                        let g = &self.guards[j][q][e];
                        (g.mask, g.value, g.target)
                    };
                    let outs = self.guards[j][q][e].outputs.clone();
                    for i in (0..cubes).filter(|i| i & mask == value) {
                        let mut base = vec![-reach];
                        for &(v, b) in &outs {
                            let o = self.out_t(j, t, i, v);
                            base.push(if b { -o } else { o });
                        }
                        for t2 in 0..ts {
                            let tr = self.trans_t(j, t, i, t2);
                            let r2 = self.reach(j, t2, q2);
                            let mut c = base.clone();
                            c.extend([-tr, r2]);
                            out.push(c);
                            if (t2, q2) == (t, q) && !self.ucas[j].is_rejecting(q2) {
                                continue;
                            }
                            let cmp = self.compare(j, t, q, t2, q2, &mut out);
                            let mut c = base.clone();
                            c.extend([-tr, cmp]);
                            out.push(c);
                        }
                    }
                }
            }
        }
        out
    }

    /// Mealy mode only: every state has a transition for every valuation
    /// of the non-associated inputs, for some associated completion.
    pub fn constrain_mealy_env_totality(&mut self, j: usize) -> Vec<Vec<i32>> {
        if self.mode != Mode::Mealy {
            return Vec::new();
        }
        let lay = self.layouts[j].clone();
        let assoc_mask = lay
            .associated
            .iter()
            .map(|v| 1usize << lay.inputs.iter().position(|x| x == v).expect("input"))
            .fold(0, |a, b| a | b);
        let mut out = Vec::new();
        for t in 0..lay.strategy_size {
            for base in (0..lay.num_cubes()).filter(|c| c & assoc_mask == 0) {
                let mut c = Vec::new();
                for i in (0..lay.num_cubes()).filter(|i| i & !assoc_mask == base) {
                    for t2 in 0..lay.strategy_size {
                        c.push(self.trans_t(j, t, i, t2));
                    }
                }
                out.push(c);
            }
        }
        out
    }

    pub fn relevant(&self, j: usize) -> &[usize] {
        &self.relevant[j]
    }

    pub fn finish(self, clauses: Vec<Vec<i32>>) -> CnfInstance {
        CnfInstance {
            num_vars: self.registry.len(),
            clauses,
            registry: self.registry,
            layouts: self.layouts,
            mode: self.mode,
        }
    }
}

/// Builds the whole instance: per process, in order, (a), (b), (c) for
/// each relevant process, (d), (e) and the Mealy extra.
pub fn encode(
    arch: &Architecture,
    relevant: &RelevantProcesses,
    ucas: &[UniversalCoBuchi],
    bounds: &Bounds,
    mode: Mode,
    clause_cap: usize,
) -> Result<CnfInstance, EncodeError> {
    let mut enc = Encoder::new(arch, relevant, ucas, bounds, mode)?;
    let mut clauses = Vec::new();
    let check = |clauses: &Vec<Vec<i32>>| {
        if clauses.len() > clause_cap {
            Err(EncodeError::ClauseCap { cap: clause_cap })
        } else {
            Ok(())
        }
    };
    for j in 0..arch.len() {
        clauses.extend(enc.constrain_guarantee_total(j));
        clauses.extend(enc.constrain_self_simulation(j));
        check(&clauses)?;
        for k in enc.relevant(j).to_vec() {
            clauses.extend(enc.constrain_cross_simulation(k, j));
            check(&clauses)?;
        }
        clauses.extend(enc.constrain_local_totality(j));
        clauses.extend(enc.constrain_annotation(j));
        clauses.extend(enc.constrain_mealy_env_totality(j));
        check(&clauses)?;
    }
    Ok(enc.finish(clauses))
}

/// Per-process index of the semantic variables, used when decoding.
pub(crate) fn process_vars(instance: &CnfInstance) -> Vec<HashMap<SemVar, u32>> {
    let mut out = vec![HashMap::new(); instance.layouts.len()];
    for id in 1..=instance.registry.len() as u32 {
        let var = instance.registry.var(id);
        let j = match var {
            SemVar::TransT { j, .. } | SemVar::OutT { j, .. } | SemVar::TransG { j, .. } | SemVar::OutG { j, .. } => j,
            _ => continue,
        };
        out[j].insert(var, id);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::architecture::Process;
    use crate::automata::{ltl_to_uca, DEFAULT_STATE_CAP};
    use crate::logic::{decompose, relevant_processes, ConjunctiveSpec};
    use crate::solving::{solve_clauses, Outcome};

    fn single(inputs: &[&str], outputs: &[&str], spec: &str) -> (Architecture, RelevantProcesses, Vec<UniversalCoBuchi>) {
        let arch = Architecture::new(vec![Process::new("p", inputs.iter().copied(), outputs.iter().copied())], inputs.iter().copied());
        let spec = ConjunctiveSpec::parse(&[spec]).unwrap();
        let dec = decompose(&spec, &arch).unwrap();
        let rel = relevant_processes(&dec, &arch);
        let alphabet = arch.variables();
        let ucas = vec![ltl_to_uca(&dec.subspec(0).formula(), &alphabet, DEFAULT_STATE_CAP).unwrap()];
        (arch, rel, ucas)
    }

    fn sat(arch: &Architecture, rel: &RelevantProcesses, ucas: &[UniversalCoBuchi], s: usize, c: usize) -> bool {
        let inst = encode(arch, rel, ucas, &Bounds::uniform(arch.len(), s, c), Mode::Moore, DEFAULT_CLAUSE_CAP).unwrap();
        solve_clauses(inst.num_vars, &inst.clauses, None) == Outcome::Sat
    }

    #[test]
    fn width() {
        assert_eq!((width_for(1), width_for(2), width_for(3), width_for(4)), (1, 2, 2, 3));
    }

    #[test]
    fn guarantee_totality_clause_counts() {
        let (arch, rel, ucas) = single(&["i"], &["o"], "G o");
        let mut enc = Encoder::new(&arch, &rel, &ucas, &Bounds::uniform(1, 1, 2), Mode::Moore).unwrap();
        // 2 states × 2 inputs × (one at-least-one + one pairwise clause).
        assert_eq!(enc.constrain_guarantee_total(0).len(), 8);
        let mut enc = Encoder::new(&arch, &rel, &ucas, &Bounds::uniform(1, 1, 1), Mode::Moore).unwrap();
        let cls = enc.constrain_guarantee_total(0);
        assert!(cls.iter().all(|c| c.len() == 1 && c[0] > 0));
    }

    #[test]
    fn contradictory_spec_is_unsat() {
        let (arch, rel, ucas) = single(&["i"], &["go_1"], "G go_1 && F !go_1");
        for b in 1..=3 {
            assert!(!sat(&arch, &rel, &ucas, b, 1));
        }
    }

    #[test]
    fn trivial_spec_is_sat_at_one() {
        let (arch, rel, ucas) = single(&["i"], &["o"], "true");
        assert!(sat(&arch, &rel, &ucas, 1, 1));
    }

    #[test]
    fn delayed_copy_needs_two_states() {
        let (arch, rel, ucas) = single(&["i"], &["o"], "G (X o <-> i)");
        assert!(!sat(&arch, &rel, &ucas, 1, 1));
        assert!(sat(&arch, &rel, &ucas, 2, 1));
    }

    #[test]
    fn no_cross_simulation_without_relevant_processes() {
        let (arch, rel, ucas) = single(&["i"], &["o"], "G o");
        let enc = Encoder::new(&arch, &rel, &ucas, &Bounds::uniform(1, 1, 1), Mode::Moore).unwrap();
        assert!(enc.relevant(0).is_empty());
    }

    #[test]
    fn moore_mode_has_no_env_totality_clauses() {
        let (arch, rel, ucas) = single(&["i"], &["o"], "G o");
        let mut enc = Encoder::new(&arch, &rel, &ucas, &Bounds::uniform(1, 2, 1), Mode::Moore).unwrap();
        assert!(enc.constrain_mealy_env_totality(0).is_empty());
        let mut enc = Encoder::new(&arch, &rel, &ucas, &Bounds::uniform(1, 2, 1), Mode::Mealy).unwrap();
        // Without associated outputs: one clause per state and input cube.
        assert_eq!(enc.constrain_mealy_env_totality(0).len(), 4);
    }

    #[test]
    fn forced_output_mismatch_is_unsat() {
        // One process whose output is read by another: its 1-state
        // certificate and 1-state strategy must agree on `o`.
        let arch = Architecture::new(
            vec![Process::new("a", ["i"], ["o"]), Process::new("b", ["o"], ["x"])],
            ["i"],
        );
        let spec = ConjunctiveSpec::parse(&["G o", "G (x <-> true)"]).unwrap();
        let dec = decompose(&spec, &arch).unwrap();
        let rel = relevant_processes(&dec, &arch);
        let alphabet = arch.variables();
        let ucas: Vec<_> = (0..2)
            .map(|j| ltl_to_uca(&dec.subspec(j).formula(), &alphabet, DEFAULT_STATE_CAP).unwrap())
            .collect();
        let mut enc = Encoder::new(&arch, &rel, &ucas, &Bounds::uniform(2, 1, 1), Mode::Moore).unwrap();
        let mut cls = enc.constrain_self_simulation(0);
        cls.extend(enc.constrain_local_totality(0));
        cls.extend(enc.constrain_annotation(0));
        let o_g = enc.registry.get(&SemVar::OutG { j: 0, u: 0, v: 0 }).unwrap() as i32;
        let inst = enc.finish(cls.clone());
        assert_eq!(solve_clauses(inst.num_vars, &inst.clauses, None), Outcome::Sat);
        cls.push(vec![-o_g]);
        assert_eq!(solve_clauses(inst.num_vars, &cls, None), Outcome::Unsat);
    }

    #[test]
    fn too_many_inputs() {
        let ins: Vec<String> = (0..13).map(|k| format!("i{k}")).collect();
        let arch = Architecture::new(vec![Process::new("p", ins.iter().map(String::as_str), ["o"])], ins.iter().map(String::as_str));
        let rel = RelevantProcesses { sets: vec![BTreeSet::new()] };
        let ucas = vec![ltl_to_uca(&crate::logic::LtlFormula::True, &arch.variables(), 10).unwrap()];
        assert!(matches!(
            Encoder::new(&arch, &rel, &ucas, &Bounds::uniform(1, 1, 1), Mode::Moore),
            Err(EncodeError::TooManyInputs { .. })
        ));
    }

    #[test]
    fn dimacs_of_instance_parses_back() {
        let (arch, rel, ucas) = single(&["i"], &["o"], "G (X o <-> i)");
        let inst = encode(&arch, &rel, &ucas, &Bounds::uniform(1, 2, 1), Mode::Moore, DEFAULT_CLAUSE_CAP).unwrap();
        let (nv, cls) = parse_dimacs(&inst.to_dimacs()).unwrap();
        assert_eq!((nv, cls), (inst.num_vars, inst.clauses.clone()));
        let map: std::collections::BTreeMap<String, u32> = serde_json::from_str(&inst.registry_json()).unwrap();
        assert_eq!(map.len(), inst.num_vars);
        assert!(map.contains_key("reach(p,0,0)") || map.keys().any(|k| k.starts_with("reach(p,0,")));
    }

    #[test]
    fn clause_cap() {
        let (arch, rel, ucas) = single(&["i"], &["o"], "G (X o <-> i)");
        assert_eq!(
            encode(&arch, &rel, &ucas, &Bounds::uniform(1, 2, 1), Mode::Moore, 3).unwrap_err(),
            EncodeError::ClauseCap { cap: 3 }
        );
    }
}
