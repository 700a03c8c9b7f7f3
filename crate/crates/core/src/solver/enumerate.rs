//! Exhaustive model enumeration for small formulas.
//!
//! Plain DPLL with chronological backtracking: every variable is branched on
//! in index order (false before true), so each total model is visited exactly
//! once and no blocking clauses are needed.

use super::Model;
use crate::cnf::{ClauseSink as _, CnfFormula};

const UNDEF: u8 = 2;

struct Enumerator {
    clauses: Vec<Vec<u32>>,
    watches: Vec<Vec<u32>>,
    assigns: Vec<u8>,
    trail: Vec<u32>,
    /// Trail position and whether the second branch was taken.
    decisions: Vec<(usize, bool)>,
    qhead: usize,
}

impl Enumerator {
    fn value(&self, l: u32) -> u8 {
        let a = self.assigns[(l >> 1) as usize];
        if a == UNDEF {
            UNDEF
        } else {
            a ^ (l & 1) as u8
        }
    }

    fn assign(&mut self, l: u32) {
        self.assigns[(l >> 1) as usize] = (l & 1 == 0) as u8;
        self.trail.push(l);
    }

    /// False on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = p ^ 1;
            let ws = std::mem::take(&mut self.watches[p as usize]);
            let mut keep = Vec::with_capacity(ws.len());
            let mut ok = true;
            for (i, &c) in ws.iter().enumerate() {
                if !ok {
                    keep.extend_from_slice(&ws[i..]);
                    break;
                }
                let lits = &mut self.clauses[c as usize];
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                let mut moved = false;
                if self.assigns[(first >> 1) as usize] != UNDEF
                    && self.assigns[(first >> 1) as usize] ^ (first & 1) as u8 == 1
                {
                    keep.push(c);
                    continue;
                }
                for k in 2..lits.len() {
                    let l = lits[k];
                    let a = self.assigns[(l >> 1) as usize];
                    if a == UNDEF || a ^ (l & 1) as u8 == 1 {
                        lits.swap(1, k);
                        let w = (lits[1] ^ 1) as usize;
                        self.watches[w].push(c);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                keep.push(c);
                match self.value(first) {
                    0 => ok = false,
                    UNDEF => self.assign(first),
                    _ => {}
                }
            }
            self.watches[p as usize] = keep;
            if !ok {
                return false;
            }
        }
        true
    }

    /// Undo to before the most recent open decision and flip it. False when
    /// the search space is exhausted.
    fn backtrack(&mut self) -> bool {
        while let Some((pos, flipped)) = self.decisions.pop() {
            let decided = self.trail[pos];
            for &l in &self.trail[pos..] {
                self.assigns[(l >> 1) as usize] = UNDEF;
            }
            self.trail.truncate(pos);
            self.qhead = pos;
            if !flipped {
                self.decisions.push((pos, true));
                self.assign(decided ^ 1);
                return true;
            }
        }
        false
    }
}

/// Calls `visit` on every total model of `formula`, in lexicographic order
/// of the assignment (variable 1 most significant, false before true). Stops
/// early when `visit` returns false. Returns the number of models visited.
pub fn enumerate_models(formula: &CnfFormula, mut visit: impl FnMut(&Model) -> bool) -> u64 {
    let n = formula.num_vars();
    let mut e = Enumerator {
        clauses: Vec::new(),
        watches: vec![Vec::new(); 2 * n],
        assigns: vec![UNDEF; n],
        trail: Vec::new(),
        decisions: Vec::new(),
        qhead: 0,
    };
    let mut units = Vec::new();
    for clause in formula.clauses() {
        let lits: Vec<u32> = clause
            .iter()
            .map(|l| 2 * l.var().index() as u32 + (!l.is_positive()) as u32)
            .collect();
        match lits.len() {
            0 => return 0,
            1 => units.push(lits[0]),
            _ => {
                let c = e.clauses.len() as u32;
                e.watches[(lits[0] ^ 1) as usize].push(c);
                e.watches[(lits[1] ^ 1) as usize].push(c);
                e.clauses.push(lits);
            }
        }
    }
    for u in units {
        match e.value(u) {
            0 => return 0,
            UNDEF => e.assign(u),
            _ => {}
        }
    }

    let mut count = 0;
    let mut next_var = 0usize;
    loop {
        let consistent = e.propagate();
        if consistent {
            while next_var < n && e.assigns[next_var] != UNDEF {
                next_var += 1;
            }
            if next_var == n {
                count += 1;
                let model = Model::new(e.assigns.iter().map(|&a| a == 1).collect());
                if !visit(&model) {
                    return count;
                }
            } else {
                e.decisions.push((e.trail.len(), false));
                e.assign(2 * next_var as u32 + 1);
                continue;
            }
        }
        if !e.backtrack() {
            return count;
        }
        next_var = 0;
    }
}

/// Number of total models of `formula`.
pub fn count_models(formula: &CnfFormula) -> u64 {
    enumerate_models(formula, |_| true)
}
