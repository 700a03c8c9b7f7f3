//! Satisfiability checking: an internal CDCL solver, a model enumerator for
//! tiny formulas, and an adapter for external DIMACS solvers.

mod cdcl;
mod enumerate;
mod external;

use std::fmt;
use std::time::Duration;

use thiserror::Error;

use crate::cnf::{ClauseSink as _, CnfFormula, Lit, Var};

pub use cdcl::solve_internal;
pub use enumerate::{count_models, enumerate_models};
pub use external::{parse_output, ExternalError, ExternalSolver, SOLVER_ENV};

/// A total assignment. Index `i` holds the value of variable `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn new(values: Vec<bool>) -> Self {
        Self { values }
    }

    pub fn value(&self, var: Var) -> bool {
        self.values[var.index()]
    }

    pub fn lit_value(&self, lit: Lit) -> bool {
        self.value(lit.var()) == lit.is_positive()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// The assignment as signed DIMACS literals.
    pub fn literals(&self) -> impl Iterator<Item = Lit> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| Var::new(i as u32 + 1).lit(v))
    }

    /// Writes `v`-lines terminated by `0`, the usual solver output format.
    pub fn write<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut line = String::from("v");
        for lit in self.literals() {
            line.push(' ');
            line.push_str(&lit.to_string());
            if line.len() > 72 {
                writeln!(out, "{line}")?;
                line = String::from("v");
            }
        }
        line.push_str(" 0");
        writeln!(out, "{line}")
    }

    /// Reads a model from `v`-lines (or bare literal lines). Variables not
    /// mentioned are false; `num_vars` fixes the length.
    pub fn read(text: &str, num_vars: usize) -> Result<Self, ModelParseError> {
        let mut values = vec![false; num_vars];
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('s') {
                continue;
            }
            let body = line.strip_prefix('v').unwrap_or(line);
            for tok in body.split_whitespace() {
                let value: i64 = tok.parse().map_err(|_| ModelParseError {
                    line: n + 1,
                    message: format!("bad literal `{tok}`"),
                })?;
                if value == 0 {
                    continue;
                }
                let index = value.unsigned_abs() as usize - 1;
                if index >= num_vars {
                    return Err(ModelParseError {
                        line: n + 1,
                        message: format!("variable {} out of range", index + 1),
                    });
                }
                values[index] = value > 0;
            }
        }
        Ok(Self { values })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ModelParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Sat,
    Unsat,
    Timeout,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Sat => "SAT",
            SolveStatus::Unsat => "UNSAT",
            SolveStatus::Timeout => "TIMEOUT",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub restarts: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Present exactly when `status` is `Sat`.
    pub model: Option<Model>,
    pub stats: SolveStats,
}

/// Limits on a solver run. `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub time: Option<Duration>,
    pub conflicts: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn seconds(secs: u64) -> Self {
        Self {
            time: Some(Duration::from_secs(secs)),
            conflicts: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("model assigns {got} variables, formula has {expected}")]
pub struct PartialModel {
    pub expected: usize,
    pub got: usize,
}

/// True iff every clause of `formula` has a true literal under `model`.
pub fn check_model(formula: &CnfFormula, model: &Model) -> Result<bool, PartialModel> {
    if model.len() < formula.num_vars() {
        return Err(PartialModel {
            expected: formula.num_vars(),
            got: model.len(),
        });
    }
    Ok(formula
        .clauses()
        .all(|c| c.iter().any(|&l| model.lit_value(l))))
}
