use std::io::{self, Write};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

/// Writes clauses in DIMACS CNF.
pub fn write_dimacs<W: Write>(out: &mut W, num_vars: usize, clauses: &[Vec<i32>]) -> io::Result<()> {
    writeln!(out, "p cnf {} {}", num_vars, clauses.len())?;
    let mut line = String::new();
    for c in clauses {
        line.clear();
        for l in c {
            line.push_str(&l.to_string());
            line.push(' ');
        }
        line.push('0');
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn dimacs_string(num_vars: usize, clauses: &[Vec<i32>]) -> String {
    let mut buf = Vec::new();
    write_dimacs(&mut buf, num_vars, clauses).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

/// Parses DIMACS CNF. Comment lines are skipped; clauses may span lines.
pub fn parse_dimacs(text: &str) -> Result<(usize, Vec<Vec<i32>>), DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |msg: String| DimacsError::Syntax { line: k + 1, msg };
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" || header.is_some() {
                return Err(err("bad problem line".into()));
            }
            let v = parts[2].parse().map_err(|_| err("bad variable count".into()))?;
            let c = parts[3].parse().map_err(|_| err("bad clause count".into()))?;
            header = Some((v, c));
            continue;
        }
        let (nv, _) = header.ok_or_else(|| err("clause before problem line".into()))?;
        for tok in line.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| err(format!("bad literal `{tok}`")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() as usize > nv {
                return Err(err(format!("literal {l} exceeds variable count")));
            } else {
                current.push(l);
            }
        }
    }
    let (nv, nc) = header.ok_or(DimacsError::Syntax {
        line: 0,
        msg: "missing problem line".into(),
    })?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != nc {
        return Err(DimacsError::Syntax {
            line: 0,
            msg: format!("header announces {nc} clauses, found {}", clauses.len()),
        });
    }
    Ok((nv, clauses))
}
