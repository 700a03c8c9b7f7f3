//! Unit propagation as a post-treatment of generated formulas.
//!
//! Literals forced by unit clauses are fixed, satisfied clauses removed and
//! false literals dropped, until no unit clause is left. The variables that
//! still occur are renumbered densely in ascending order of their old ids.
//! A [`Reconstruction`] keeps what is needed to turn a model of the residual
//! formula back into a model of the original.

use std::fmt;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::cnf::{ClauseSink as _, CnfFormula, Lit, Var};
use crate::solver::Model;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplifyStatus {
    Simplified,
    ProvedUnsat,
}

impl fmt::Display for SimplifyStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimplifyStatus::Simplified => "simplified",
            SimplifyStatus::ProvedUnsat => "unsat",
        })
    }
}

/// Maps between the original and the residual variable numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    original_vars: usize,
    status: SimplifyStatus,
    /// Fixed variables in ascending order.
    fixed: Vec<(Var, bool)>,
    /// `(old, new)` pairs in ascending order of both.
    renaming: Vec<(Var, Var)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructionError {
    #[error("residual model has {got} variables, expected {expected}")]
    Incomplete { expected: usize, got: usize },
    #[error("formula was proved unsatisfiable")]
    Unsat,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Reconstruction {
    /// The identity map over `vars` variables.
    pub fn identity(vars: usize) -> Self {
        Self {
            original_vars: vars,
            status: SimplifyStatus::Simplified,
            fixed: Vec::new(),
            renaming: (1..=vars as u32)
                .map(|v| (Var::new(v), Var::new(v)))
                .collect(),
        }
    }

    pub fn status(&self) -> SimplifyStatus {
        self.status
    }

    pub fn original_vars(&self) -> usize {
        self.original_vars
    }

    pub fn fixed(&self) -> &[(Var, bool)] {
        &self.fixed
    }

    pub fn renaming(&self) -> &[(Var, Var)] {
        &self.renaming
    }

    pub fn residual_vars(&self) -> usize {
        self.renaming.len()
    }

    /// Rebuilds a full assignment from a model of the residual formula.
    /// Variables that were neither fixed nor kept occur only in satisfied
    /// clauses; they are set to false.
    pub fn extend_model(&self, residual: &Model) -> Result<Model, ReconstructionError> {
        if self.status == SimplifyStatus::ProvedUnsat {
            return Err(ReconstructionError::Unsat);
        }
        if residual.len() < self.renaming.len() {
            return Err(ReconstructionError::Incomplete {
                expected: self.renaming.len(),
                got: residual.len(),
            });
        }
        let mut values = vec![false; self.original_vars];
        for &(v, b) in &self.fixed {
            values[v.index()] = b;
        }
        for &(old, new) in &self.renaming {
            values[old.index()] = residual.value(new);
        }
        Ok(Model::new(values))
    }

    /// Writes the `.fixed` sidecar:
    ///
    /// ```text
    /// vars <original count>
    /// status simplified|unsat
    /// f <var> 0|1
    /// r <old> <new>
    /// ```
    pub fn write<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "vars {}", self.original_vars)?;
        writeln!(out, "status {}", self.status)?;
        for &(v, b) in &self.fixed {
            writeln!(out, "f {} {}", v.id(), u8::from(b))?;
        }
        for &(old, new) in &self.renaming {
            writeln!(out, "r {} {}", old.id(), new.id())?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(input: R) -> Result<Self, ReconstructionError> {
        let mut r = Self {
            original_vars: 0,
            status: SimplifyStatus::Simplified,
            fixed: Vec::new(),
            renaming: Vec::new(),
        };
        for (n, line) in input.lines().enumerate() {
            let line = line.map_err(|e| ReconstructionError::Io(e.to_string()))?;
            let bad = |message: &str| ReconstructionError::Syntax {
                line: n + 1,
                message: message.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let num = |i: usize| -> Result<u32, ReconstructionError> {
                fields
                    .get(i)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad("expected a number"))
            };
            let var = |i: usize| -> Result<Var, ReconstructionError> {
                match num(i)? {
                    0 => Err(bad("variable ids start at 1")),
                    v => Ok(Var::new(v)),
                }
            };
            match fields.first().copied() {
                None => {}
                Some("vars") => r.original_vars = num(1)? as usize,
                Some("status") => {
                    r.status = match fields.get(1).copied() {
                        Some("simplified") => SimplifyStatus::Simplified,
                        Some("unsat") => SimplifyStatus::ProvedUnsat,
                        _ => return Err(bad("unknown status")),
                    }
                }
                Some("f") => r.fixed.push((var(1)?, num(2)? != 0)),
                Some("r") => r.renaming.push((var(1)?, var(2)?)),
                Some(_) => return Err(bad("unknown record")),
            }
        }
        let too_big = r
            .fixed
            .iter()
            .map(|f| f.0)
            .chain(r.renaming.iter().map(|p| p.0))
            .any(|v| v.index() >= r.original_vars);
        if too_big {
            return Err(ReconstructionError::Syntax {
                line: 0,
                message: "variable beyond declared count".into(),
            });
        }
        Ok(r)
    }
}

/// Result of [`unit_propagate`].
#[derive(Debug, Clone)]
pub struct Simplification {
    pub formula: CnfFormula,
    pub reconstruction: Reconstruction,
}

impl Simplification {
    pub fn status(&self) -> SimplifyStatus {
        self.reconstruction.status
    }

    pub fn extend_model(&self, residual: &Model) -> Result<Model, ReconstructionError> {
        self.reconstruction.extend_model(residual)
    }
}

const UNDEF: u8 = 2;

/// Propagates unit clauses to a fixpoint. Units are processed first-in
/// first-out in the order they are emitted or derived.
///
/// A proved-unsatisfiable result carries a residual formula made of the
/// single empty clause.
pub fn unit_propagate(formula: &CnfFormula) -> Simplification {
    let n = formula.num_vars();
    let mut assigns = vec![UNDEF; n];
    let mut queue: Vec<Lit> = Vec::new();
    let value = |assigns: &[u8], l: Lit| -> u8 {
        let a = assigns[l.var().index()];
        if a == UNDEF {
            UNDEF
        } else {
            a ^ u8::from(!l.is_positive())
        }
    };
    let mut unsat = false;

    // Watches of clauses with two or more literals, keyed by the literal
    // that falsifies a watch.
    let mut watches: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    let code = |l: Lit| 2 * l.var().index() + usize::from(!l.is_positive());
    let mut clauses: Vec<Vec<Lit>> = Vec::with_capacity(formula.num_clauses());
    for c in formula.clauses() {
        clauses.push(c.to_vec());
    }
    for (i, c) in clauses.iter().enumerate() {
        match c.len() {
            0 => unsat = true,
            1 => match value(&assigns, c[0]) {
                0 => unsat = true,
                UNDEF => {
                    assigns[c[0].var().index()] = u8::from(c[0].is_positive());
                    queue.push(c[0]);
                }
                _ => {}
            },
            _ => {
                watches[code(!c[0])].push(i);
                watches[code(!c[1])].push(i);
            }
        }
    }

    let mut head = 0;
    while !unsat && head < queue.len() {
        let p = queue[head];
        head += 1;
        let false_lit = !p;
        let ws = std::mem::take(&mut watches[code(p)]);
        let mut keep = Vec::with_capacity(ws.len());
        for (k, &ci) in ws.iter().enumerate() {
            if unsat {
                keep.extend_from_slice(&ws[k..]);
                break;
            }
            let c = &mut clauses[ci];
            if c[0] == false_lit {
                c.swap(0, 1);
            }
            if value(&assigns, c[0]) == 1 {
                keep.push(ci);
                continue;
            }
            let mut moved = false;
            for j in 2..c.len() {
                if value(&assigns, c[j]) != 0 {
                    c.swap(1, j);
                    watches[code(!c[1])].push(ci);
                    moved = true;
                    break;
                }
            }
            if moved {
                continue;
            }
            keep.push(ci);
            let first = c[0];
            match value(&assigns, first) {
                0 => unsat = true,
                UNDEF => {
                    assigns[first.var().index()] = u8::from(first.is_positive());
                    queue.push(first);
                }
                _ => {}
            }
        }
        watches[code(p)] = keep;
    }

    if unsat {
        let mut residual = CnfFormula::new();
        residual.add_empty_clause();
        return Simplification {
            formula: residual,
            reconstruction: Reconstruction {
                original_vars: n,
                status: SimplifyStatus::ProvedUnsat,
                fixed: Vec::new(),
                renaming: Vec::new(),
            },
        };
    }

    // Residual clauses in original order, literals in original order.
    let mut kept: Vec<Vec<Lit>> = Vec::new();
    let mut kept_from: Vec<usize> = Vec::new();
    let mut occurs = vec![false; n];
    for (i, c) in formula.clauses().enumerate() {
        if c.iter().any(|&l| value(&assigns, l) == 1) {
            continue;
        }
        let rest: Vec<Lit> = c
            .iter()
            .copied()
            .filter(|&l| value(&assigns, l) == UNDEF)
            .collect();
        debug_assert!(rest.len() >= 2, "fixpoint leaves no short clause");
        for l in &rest {
            occurs[l.var().index()] = true;
        }
        kept.push(rest);
        kept_from.push(i);
    }

    let mut residual = CnfFormula::new();
    let mut new_id = vec![None; n];
    let mut renaming = Vec::new();
    let mut fixed = Vec::new();
    for v in 0..n {
        let var = Var::new(v as u32 + 1);
        if assigns[v] != UNDEF {
            fixed.push((var, assigns[v] == 1));
        } else if occurs[v] {
            let nv = residual.new_var(formula.origin(var).clone());
            new_id[v] = Some(nv);
            renaming.push((var, nv));
        }
    }
    let mut groups = formula.groups().iter().peekable();
    for (c, &from) in kept.iter().zip(&kept_from) {
        while let Some((label, _)) = groups.next_if(|g| g.1 <= from) {
            residual.push_group_at(label.clone(), residual.num_clauses());
        }
        let lits: Vec<Lit> = c
            .iter()
            .map(|l| new_id[l.var().index()].expect("kept").lit(l.is_positive()))
            .collect();
        residual.add_clause(&lits);
    }
    for (label, _) in groups {
        residual.push_group_at(label.clone(), residual.num_clauses());
    }

    Simplification {
        formula: residual,
        reconstruction: Reconstruction {
            original_vars: n,
            status: SimplifyStatus::Simplified,
            fixed,
            renaming,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{ClauseSink, VariableOrigin};

    fn formula(vars: usize, clauses: &[&[i32]]) -> CnfFormula {
        let mut f = CnfFormula::new();
        for _ in 0..vars {
            f.new_var(VariableOrigin::Anonymous);
        }
        for c in clauses {
            let lits: Vec<Lit> = c.iter().map(|&l| Lit::from_dimacs(l)).collect();
            f.add_clause(&lits);
        }
        f
    }

    #[test]
    fn chain_fixes_everything() {
        let s = unit_propagate(&formula(2, &[&[1], &[-1, 2]]));
        assert_eq!(s.status(), SimplifyStatus::Simplified);
        assert_eq!(s.formula.num_clauses(), 0);
        assert_eq!(s.formula.num_vars(), 0);
        assert_eq!(
            s.reconstruction.fixed(),
            &[(Var::new(1), true), (Var::new(2), true)]
        );
    }

    #[test]
    fn contradiction_proved() {
        let s = unit_propagate(&formula(1, &[&[1], &[-1]]));
        assert_eq!(s.status(), SimplifyStatus::ProvedUnsat);
        assert!(s.formula.has_empty_clause());
        assert!(s.extend_model(&Model::new(vec![])).is_err());
    }

    #[test]
    fn derived_conflict_proved() {
        let s = unit_propagate(&formula(3, &[&[1], &[-1, 2], &[-1, 3], &[-2, -3]]));
        assert_eq!(s.status(), SimplifyStatus::ProvedUnsat);
    }

    #[test]
    fn compaction_is_ascending() {
        let s = unit_propagate(&formula(5, &[&[2], &[-2, 4, 5], &[1, 5], &[3, 2]]));
        assert_eq!(
            s.reconstruction.renaming(),
            &[
                (Var::new(1), Var::new(1)),
                (Var::new(4), Var::new(2)),
                (Var::new(5), Var::new(3))
            ]
        );
        let clauses: Vec<Vec<i32>> = s
            .formula
            .clauses()
            .map(|c| c.iter().map(|l| l.to_dimacs()).collect())
            .collect();
        assert_eq!(clauses, vec![vec![2, 3], vec![1, 3]]);
        let full = s
            .extend_model(&Model::new(vec![true, false, true]))
            .unwrap();
        assert_eq!(full.values(), &[true, true, false, false, true]);
    }

    #[test]
    fn identity_passthrough() {
        let f = formula(2, &[&[1, 2]]);
        let s = unit_propagate(&f);
        assert_eq!(s.reconstruction, Reconstruction::identity(2));
        let m = Model::new(vec![false, true]);
        assert_eq!(s.extend_model(&m).unwrap(), m);
    }

    #[test]
    fn sidecar_round_trip() {
        let s = unit_propagate(&formula(4, &[&[1], &[-1, 2, 3], &[-2, 4, 3]]));
        let mut buf = Vec::new();
        s.reconstruction.write(&mut buf).unwrap();
        let back = Reconstruction::read(buf.as_slice()).unwrap();
        assert_eq!(back, s.reconstruction);
        assert!(Reconstruction::read("vars 1\nf 2 1\n".as_bytes()).is_err());
        assert!(Reconstruction::read("bogus\n".as_bytes()).is_err());
    }

    #[test]
    fn groups_follow_clauses() {
        let mut f = formula(3, &[]);
        f.begin_group("a");
        f.add_clause(&[Lit::from_dimacs(1)]);
        f.begin_group("b");
        f.add_clause(&[Lit::from_dimacs(2), Lit::from_dimacs(3)]);
        let s = unit_propagate(&f);
        let stats = s.formula.stats();
        assert_eq!(
            stats.per_group,
            vec![("a".to_string(), 0), ("b".to_string(), 1)]
        );
    }
}
