//! Runs an external DIMACS solver as a child process.
//!
//! The command is a whitespace-separated template. `{input}` is replaced by
//! the CNF path; without it the path is appended. `{output}` names a scratch
//! file for solvers that write their result to a file (as minisat does); its
//! contents are read together with standard output.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicU64, Ordering};
use std::thread;
use std::time::{Duration, Instant};

use thiserror::Error;

use super::{check_model, Model, SolveResult, SolveStats, SolveStatus};
use crate::cnf::{parse_dimacs, ClauseSink as _, CnfFormula, DimacsError};

/// Environment variable holding the default solver command.
pub const SOLVER_ENV: &str = "SETSAT_SOLVER";

#[derive(Debug, Error)]
pub enum ExternalError {
    #[error("empty solver command")]
    EmptyCommand,
    #[error("failed to launch `{command}`: {source}")]
    Launch {
        command: String,
        source: std::io::Error,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot read instance: {0}")]
    Instance(#[from] DimacsError),
    #[error("unrecognized solver output")]
    UnrecognizedOutput,
    #[error("solver model does not satisfy the instance")]
    BadModel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolver {
    pub command: String,
    pub timeout: Option<Duration>,
}

static SCRATCH: AtomicU64 = AtomicU64::new(0);

fn scratch_path() -> PathBuf {
    let n = SCRATCH.fetch_add(1, Ordering::Relaxed);
    std::env::temp_dir().join(format!("setsat-{}-{n}.out", std::process::id()))
}

impl ExternalSolver {
    pub fn new(command: impl Into<String>, timeout: Option<Duration>) -> Self {
        Self {
            command: command.into(),
            timeout,
        }
    }

    /// Solver configured through [`SOLVER_ENV`], if set and non-empty.
    pub fn from_env(timeout: Option<Duration>) -> Option<Self> {
        std::env::var(SOLVER_ENV)
            .ok()
            .filter(|c| !c.trim().is_empty())
            .map(|c| Self::new(c, timeout))
    }

    /// Solves the DIMACS file at `path`. The file is also parsed here so a
    /// reported model can be checked.
    pub fn solve_file(&self, path: &Path) -> Result<SolveResult, ExternalError> {
        let formula = parse_dimacs(BufReader::new(File::open(path)?))?;
        self.solve_parsed(path, &formula)
    }

    /// Like [`solve_file`](Self::solve_file) when the formula is already in
    /// memory. `formula` must be the contents of `path`.
    pub fn solve_parsed(
        &self,
        path: &Path,
        formula: &CnfFormula,
    ) -> Result<SolveResult, ExternalError> {
        let started = Instant::now();
        let mut parts = self.command.split_whitespace();
        let program = parts.next().ok_or(ExternalError::EmptyCommand)?;
        let input = path.to_string_lossy();
        let output = scratch_path();
        let mut has_input = false;
        let mut uses_output = false;
        let mut args = Vec::new();
        for part in parts {
            has_input |= part.contains("{input}");
            uses_output |= part.contains("{output}");
            args.push(
                part.replace("{input}", &input)
                    .replace("{output}", &output.to_string_lossy()),
            );
        }
        if !has_input {
            args.push(input.into_owned());
        }
        let mut child = Command::new(program)
            .args(&args)
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|source| ExternalError::Launch {
                command: self.command.clone(),
                source,
            })?;
        let mut stdout = child.stdout.take().expect("piped");
        let reader = thread::spawn(move || {
            let mut text = String::new();
            stdout.read_to_string(&mut text).map(|_| text)
        });
        let deadline = self.timeout.map(|t| started + t);
        let timed_out = loop {
            if child.try_wait()?.is_some() {
                break false;
            }
            if deadline.is_some_and(|d| Instant::now() >= d) {
                let _ = child.kill();
                let _ = child.wait();
                break true;
            }
            thread::sleep(Duration::from_millis(10));
        };
        let mut text = reader.join().expect("reader thread")?;
        if uses_output {
            if let Ok(extra) = std::fs::read_to_string(&output) {
                text.push('\n');
                text.push_str(&extra);
            }
            let _ = std::fs::remove_file(&output);
        }
        let stats = SolveStats {
            elapsed: started.elapsed(),
            ..SolveStats::default()
        };
        if timed_out {
            return Ok(SolveResult {
                status: SolveStatus::Timeout,
                model: None,
                stats,
            });
        }
        let (status, model) = parse_output(&text, formula.num_vars())?;
        if let Some(m) = &model {
            if !check_model(formula, m).unwrap_or(false) {
                return Err(ExternalError::BadModel);
            }
        }
        Ok(SolveResult {
            status,
            model,
            stats,
        })
    }
}

/// Reads a verdict and, for SAT, the model from solver output.
///
/// Accepts competition style (`s SATISFIABLE` plus `v` lines) and result
/// files (`SAT` followed by a line of literals).
pub fn parse_output(
    text: &str,
    num_vars: usize,
) -> Result<(SolveStatus, Option<Model>), ExternalError> {
    let mut status = None;
    let mut values = vec![false; num_vars];
    let mut saw_literals = false;
    for line in text.lines() {
        let line = line.trim();
        let verdict = line.strip_prefix("s ").unwrap_or(line).trim();
        match verdict {
            "SAT" | "SATISFIABLE" => {
                status = Some(SolveStatus::Sat);
                continue;
            }
            "UNSAT" | "UNSATISFIABLE" => {
                status = Some(SolveStatus::Unsat);
                continue;
            }
            "INDET" | "UNKNOWN" | "INDETERMINATE" => {
                status = Some(SolveStatus::Timeout);
                continue;
            }
            _ => {}
        }
        let body = match line.strip_prefix("v ") {
            Some(b) => b,
            None if status == Some(SolveStatus::Sat) => line,
            None => continue,
        };
        let Ok(lits) = body
            .split_whitespace()
            .map(str::parse::<i64>)
            .collect::<Result<Vec<_>, _>>()
        else {
            continue;
        };
        for v in lits {
            if v == 0 {
                continue;
            }
            let index = v.unsigned_abs() as usize - 1;
            if index < num_vars {
                values[index] = v > 0;
            }
            saw_literals = true;
        }
    }
    match status {
        Some(SolveStatus::Sat) if saw_literals || num_vars == 0 => {
            Ok((SolveStatus::Sat, Some(Model::new(values))))
        }
        Some(SolveStatus::Sat) | None => Err(ExternalError::UnrecognizedOutput),
        Some(other) => Ok((other, None)),
    }
}
