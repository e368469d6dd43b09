use std::fs::File;
use std::io::{BufWriter, Read};
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use super::{Model, SolveError, SolveResult, SolverConfig};
use crate::encoding::write_dimacs;

/// Runs an external solver on a DIMACS file and parses its answer.
pub(super) fn run(
    exe: &Path,
    num_vars: usize,
    clauses: &[Vec<i32>],
    config: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    let dir = match &config.work_dir {
        Some(d) => {
            std::fs::create_dir_all(d)?;
            tempfile::tempdir_in(d)?
        }
        None => tempfile::tempdir()?,
    };
    let cnf = dir.path().join("instance.cnf");
    {
        let mut w = BufWriter::new(File::create(&cnf)?);
        write_dimacs(&mut w, num_vars, clauses)?;
    }
    let mut child = Command::new(exe)
        .arg(&cnf)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()?;
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = thread::spawn(move || {
        let mut s = String::new();
        stdout.read_to_string(&mut s).map(|_| s)
    });
    let deadline = config.timeout.map(|d| Instant::now() + d);
    loop {
        if child.try_wait()?.is_some() {
            break;
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            let _ = child.kill();
            let _ = child.wait();
            return Ok(SolveResult::Unknown);
        }
        thread::sleep(Duration::from_millis(5));
    }
    let text = reader
        .join()
        .map_err(|_| SolveError::MalformedOutput("reader thread panicked".into()))??;
    parse_output(&text, num_vars)
}

/// Parses SAT-competition style output. Variables missing from the `v`
/// lines are set to false.
pub(crate) fn parse_output(text: &str, num_vars: usize) -> Result<SolveResult, SolveError> {
    let mut status = None;
    let mut values = vec![false; num_vars];
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("v ") {
            for tok in rest.split_whitespace() {
                let l: i64 = tok
                    .parse()
                    .map_err(|_| SolveError::MalformedOutput(format!("bad literal `{tok}`")))?;
                if l == 0 {
                    continue;
                }
                let v = l.unsigned_abs() as usize;
                if v > num_vars {
                    return Err(SolveError::MalformedOutput(format!("variable {v} out of range")));
                }
                values[v - 1] = l > 0;
            }
        }
    }
    match status.as_deref() {
        Some("SATISFIABLE") => Ok(SolveResult::Sat(Model { values })),
        Some("UNSATISFIABLE") => Ok(SolveResult::Unsat),
        Some("UNKNOWN") => Ok(SolveResult::Unknown),
        Some(other) => Err(SolveError::MalformedOutput(format!("unknown status `{other}`"))),
        None => Err(SolveError::MalformedOutput("no status line".into())),
    }
}
