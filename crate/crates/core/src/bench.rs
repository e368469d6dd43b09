//! Generators for the parameterised benchmark families.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::architecture::{Architecture, Process};
use crate::specfile::SpecFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Latch,
    Shift,
    Robots,
    Adder,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Latch, Family::Shift, Family::Robots, Family::Adder];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Family::Latch => "latch",
            Family::Shift => "shift",
            Family::Robots => "robots",
            Family::Adder => "adder",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("unknown family `{0}` (expected latch, shift, robots or adder)")]
    UnknownFamily(String),
    #[error("bad parameter `{param}` for {family}: {why}")]
    BadParam { family: Family, param: String, why: String },
}

impl FromStr for Family {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| BenchError::UnknownFamily(s.to_string()))
    }
}

/// Problem for `family` at `param`: a positive bit count, or for robots
/// `n1,n2` (a single `n` means `n,n`; `0` drops the extra objectives).
pub fn generate(family: Family, param: &str) -> Result<SpecFile, BenchError> {
    let bad = |why: &str| BenchError::BadParam {
        family,
        param: param.to_string(),
        why: why.to_string(),
    };
    let count = || -> Result<usize, BenchError> {
        match param.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(bad("expected a positive integer")),
            Ok(n) => Ok(n),
        }
    };
    match family {
        Family::Latch => Ok(latch(count()?)),
        Family::Shift => Ok(shift(count()?)),
        Family::Adder => Ok(adder(count()?)),
        Family::Robots => {
            let parts: Vec<&str> = param.split(',').map(str::trim).collect();
            let nums = parts
                .iter()
                .map(|p| p.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| bad("expected `n` or `n1,n2`"))?;
            match nums.as_slice() {
                [0] => Ok(robots(None)),
                [n] => Ok(robots(Some((*n, *n)))),
                [a, b] if *a > 0 && *b > 0 => Ok(robots(Some((*a, *b)))),
                _ => Err(bad("expected `0`, `n` or `n1,n2` with positive entries")),
            }
        }
    }
}

fn file(arch: Architecture, conjuncts: Vec<String>) -> SpecFile {
    SpecFile {
        processes: arch.processes,
        env_outputs: arch.env_outputs,
        conjuncts,
    }
}

/// `n` independent latches sharing an update signal.
pub fn latch(n: usize) -> SpecFile {
    let procs = (1..=n)
        .map(|i| Process::new(&format!("p_{i}"), [format!("inp_{i}"), "upd".into()], [format!("out_{i}")]))
        .collect();
    let env: Vec<String> = (1..=n).map(|i| format!("inp_{i}")).chain(["upd".into()]).collect();
    let conjuncts = (1..=n)
        .map(|i| format!("G ((upd -> (X out_{i} <-> inp_{i})) && (!upd -> (X out_{i} <-> out_{i})))"))
        .collect();
    file(Architecture::new(procs, env), conjuncts)
}

/// Process `k` delays input `k + 1` (cyclically); every process sees all inputs.
pub fn shift(n: usize) -> SpecFile {
    let inputs: Vec<String> = (1..=n).map(|i| format!("i_{i}")).collect();
    let procs = (1..=n)
        .map(|k| Process::new(&format!("p_{k}"), inputs.clone(), [format!("o_{k}")]))
        .collect();
    let conjuncts = (1..=n).map(|k| format!("G (X o_{k} <-> i_{})", k % n + 1)).collect();
    file(Architecture::new(procs, inputs), conjuncts)
}

fn adder_bit(i: usize, carry_in: &str) -> [String; 2] {
    let (x, y, c) = (format!("x_{i}"), format!("y_{i}"), carry_in);
    [
        format!("G (X c_{i} <-> (({x} && {y}) || ({c} && (({x} && !{y}) || (!{x} && {y})))))"),
        format!(
            "G (X s_{i} <-> (({x} && !{y} && !{c}) || (!{x} && {y} && !{c}) || (!{x} && !{y} && {c}) || ({x} && {y} && {c})))"
        ),
    ]
}

/// Ripple-carry adder over `n` bits, numbered from 0; bit 0 reads `c_in`.
pub fn adder(n: usize) -> SpecFile {
    let carry_in = |i: usize| if i == 0 { "c_in".to_string() } else { format!("c_{}", i - 1) };
    let procs = (0..n)
        .map(|i| {
            Process::new(
                &format!("p_{i}"),
                [format!("x_{i}"), format!("y_{i}"), carry_in(i)],
                [format!("c_{i}"), format!("s_{i}")],
            )
        })
        .collect();
    let env: Vec<String> = (0..n)
        .flat_map(|i| [format!("x_{i}"), format!("y_{i}")])
        .chain(["c_in".into()])
        .collect();
    let conjuncts = (0..n).flat_map(|i| adder_bit(i, &carry_in(i))).collect();
    file(Architecture::new(procs, env), conjuncts)
}

/// Two robots sharing a crossing, optionally visiting their machine every
/// `n_i`-th step.
pub fn robots(add: Option<(usize, usize)>) -> SpecFile {
    let procs = vec![
        Process::new("r_1", ["at_crossing_1", "at_crossing_2", "go_2"], ["go_1", "m_1"]),
        Process::new("r_2", ["at_crossing_1", "at_crossing_2", "go_1"], ["go_2", "m_2"]),
    ];
    let mut conjuncts = vec![
        "G !((at_crossing_1 && X go_1) && (at_crossing_2 && X go_2))".to_string(),
        "G (at_crossing_1 -> X F go_1)".to_string(),
        "G (at_crossing_2 -> X F go_2)".to_string(),
    ];
    if let Some((n1, n2)) = add {
        for (i, n) in [(1, n1), (2, n2)] {
            let nexts = |k: usize| "X ".repeat(k);
            let chain: Vec<String> = (1..n)
                .map(|k| format!("{}!m_{i}", nexts(k)))
                .chain([format!("{}m_{i}", nexts(n))])
                .collect();
            conjuncts.push(format!("m_{i}"));
            conjuncts.push(format!("G (m_{i} -> ({}))", chain.join(" && ")));
        }
    }
    file(Architecture::new(procs, ["at_crossing_1", "at_crossing_2"]), conjuncts)
}
