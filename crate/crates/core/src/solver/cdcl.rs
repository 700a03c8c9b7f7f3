//! Conflict-driven clause learning with two watched literals.
//!
//! Branching starts from the static "most occurrences, true first" order:
//! activities are seeded with occurrence counts and the saved phase starts at
//! true. Conflicts then bump activities (VSIDS) and assignments are remembered
//! (phase saving). Restarts follow the Luby sequence.

use std::time::Instant;

use super::{check_model, Budget, Model, SolveResult, SolveStats, SolveStatus};
use crate::cnf::{ClauseSink as _, CnfFormula};

const UNDEF: u8 = 2;
const NO_REASON: u32 = u32::MAX;
const RESTART_UNIT: u64 = 100;
const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;

/// Literal code: `2 * var_index + negated`.
type L = u32;

#[derive(Clone, Copy)]
struct Watch {
    cref: u32,
    blocker: L,
}

struct Clause {
    lits: Vec<L>,
    learnt: bool,
    deleted: bool,
    lbd: u32,
    activity: f64,
}

/// Binary max-heap of variables ordered by activity.
struct Heap {
    items: Vec<u32>,
    pos: Vec<usize>,
}

const NOT_IN_HEAP: usize = usize::MAX;

impl Heap {
    fn contains(&self, v: u32) -> bool {
        self.pos[v as usize] != NOT_IN_HEAP
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.items[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let pv = self.items[parent];
            if act[pv as usize] >= act[v as usize] {
                break;
            }
            self.items[i] = pv;
            self.pos[pv as usize] = i;
            i = parent;
        }
        self.items[i] = v;
        self.pos[v as usize] = i;
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.items[i];
        let n = self.items.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let c = if r < n && act[self.items[r] as usize] > act[self.items[l] as usize] {
                r
            } else {
                l
            };
            let cv = self.items[c];
            if act[cv as usize] <= act[v as usize] {
                break;
            }
            self.items[i] = cv;
            self.pos[cv as usize] = i;
            i = c;
        }
        self.items[i] = v;
        self.pos[v as usize] = i;
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.items.push(v);
        let i = self.items.len() - 1;
        self.pos[v as usize] = i;
        self.up(i, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        let top = *self.items.first()?;
        let last = self.items.pop().expect("non-empty");
        self.pos[top as usize] = NOT_IN_HEAP;
        if !self.items.is_empty() {
            self.items[0] = last;
            self.pos[last as usize] = 0;
            self.down(0, act);
        }
        Some(top)
    }
}

struct Solver {
    clauses: Vec<Clause>,
    watches: Vec<Vec<Watch>>,
    assigns: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<L>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: Heap,
    polarity: Vec<bool>,
    seen: Vec<bool>,
    learnts: usize,
    max_learnts: f64,
    stats: SolveStats,
}

/// Luby sequence value for index `x` (0-based), scaled by powers of `y`.
fn luby(y: f64, mut x: u64) -> f64 {
    let (mut size, mut seq) = (1u64, 0u32);
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq as i32)
}

impl Solver {
    fn new(num_vars: usize) -> Self {
        Self {
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            assigns: vec![UNDEF; num_vars],
            level: vec![0; num_vars],
            reason: vec![NO_REASON; num_vars],
            trail: Vec::with_capacity(num_vars),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; num_vars],
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: Heap {
                items: Vec::with_capacity(num_vars),
                pos: vec![NOT_IN_HEAP; num_vars],
            },
            polarity: vec![true; num_vars],
            seen: vec![false; num_vars],
            learnts: 0,
            max_learnts: 0.0,
            stats: SolveStats::default(),
        }
    }

    #[inline]
    fn value(&self, l: L) -> u8 {
        let a = self.assigns[(l >> 1) as usize];
        if a == UNDEF {
            UNDEF
        } else {
            a ^ (l & 1) as u8
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: L, reason: u32) {
        let v = (l >> 1) as usize;
        self.assigns[v] = (l & 1 == 0) as u8;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn attach(&mut self, cref: u32) {
        let c = &self.clauses[cref as usize].lits;
        let (a, b) = (c[0], c[1]);
        self.watches[(a ^ 1) as usize].push(Watch { cref, blocker: b });
        self.watches[(b ^ 1) as usize].push(Watch { cref, blocker: a });
    }

    /// Returns the conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[p as usize]);
            let (mut i, mut j) = (0, 0);
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref;
                let lits = &mut self.clauses[cref as usize].lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                let first_value = {
                    let a = self.assigns[(first >> 1) as usize];
                    if a == UNDEF {
                        UNDEF
                    } else {
                        a ^ (first & 1) as u8
                    }
                };
                if first != w.blocker && first_value == 1 {
                    ws[j] = Watch {
                        cref,
                        blocker: first,
                    };
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..lits.len() {
                    let l = lits[k];
                    let a = self.assigns[(l >> 1) as usize];
                    if a == UNDEF || a ^ (l & 1) as u8 == 1 {
                        lits.swap(1, k);
                        let watch_on = (lits[1] ^ 1) as usize;
                        self.watches[watch_on].push(Watch {
                            cref,
                            blocker: first,
                        });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = Watch {
                    cref,
                    blocker: first,
                };
                j += 1;
                if first_value == 0 {
                    conflict = Some(cref);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, cref);
                }
            }
            ws.truncate(j);
            self.watches[p as usize] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        if self.heap.contains(v as u32) {
            let i = self.heap.pos[v];
            self.heap.up(i, &self.activity);
        }
    }

    fn bump_clause(&mut self, cref: u32) {
        let c = &mut self.clauses[cref as usize];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learnt) {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP learning. Returns the learnt clause (asserting literal first,
    /// a literal of the backjump level second) and the backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<L>, u32) {
        let mut learnt: Vec<L> = vec![0];
        let mut path = 0;
        let mut p: Option<L> = None;
        let mut index = self.trail.len();
        loop {
            self.bump_clause(confl);
            let start = usize::from(p.is_some());
            let n = self.clauses[confl as usize].lits.len();
            for k in start..n {
                let q = self.clauses[confl as usize].lits[k];
                let v = (q >> 1) as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= self.decision_level() {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[(self.trail[index] >> 1) as usize] {
                    break;
                }
            }
            let pl = self.trail[index];
            let v = (pl >> 1) as usize;
            p = Some(pl);
            confl = self.reason[v];
            self.seen[v] = false;
            path -= 1;
            if path == 0 {
                break;
            }
        }
        learnt[0] = p.expect("conflict at positive level") ^ 1;

        // Drop literals implied by other literals of the clause.
        let mut kept = vec![learnt[0]];
        for &l in &learnt[1..] {
            let r = self.reason[(l >> 1) as usize];
            let redundant = r != NO_REASON
                && self.clauses[r as usize].lits[1..].iter().all(|&q| {
                    let u = (q >> 1) as usize;
                    self.seen[u] || self.level[u] == 0
                });
            if !redundant {
                kept.push(l);
            }
        }
        for &l in &learnt {
            self.seen[(l >> 1) as usize] = false;
        }
        let mut learnt = kept;

        let backjump = if learnt.len() == 1 {
            0
        } else {
            let (mut best, mut best_level) = (1, 0);
            for (k, &l) in learnt.iter().enumerate().skip(1) {
                let lv = self.level[(l >> 1) as usize];
                if lv > best_level {
                    best = k;
                    best_level = lv;
                }
            }
            learnt.swap(1, best);
            best_level
        };
        (learnt, backjump)
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = (l >> 1) as usize;
            self.assigns[v] = UNDEF;
            self.reason[v] = NO_REASON;
            self.polarity[v] = l & 1 == 0;
            self.heap.insert(v as u32, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    fn pick_branch(&mut self) -> Option<L> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v as usize] == UNDEF {
                let neg = !self.polarity[v as usize];
                return Some(2 * v + neg as u32);
            }
        }
        None
    }

    fn lbd(&mut self, lits: &[L]) -> u32 {
        let mut levels: Vec<u32> = lits
            .iter()
            .map(|&l| self.level[(l >> 1) as usize])
            .collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    fn locked(&self, cref: u32) -> bool {
        let c = &self.clauses[cref as usize];
        let v = (c.lits[0] >> 1) as usize;
        self.reason[v] == cref && self.value(c.lits[0]) == 1
    }

    /// Deletes the less useful half of the learnt clauses.
    fn reduce_db(&mut self) {
        let mut candidates: Vec<u32> = (0..self.clauses.len() as u32)
            .filter(|&c| {
                let cl = &self.clauses[c as usize];
                cl.learnt && !cl.deleted && cl.lbd > 2 && cl.lits.len() > 2
            })
            .collect();
        candidates.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a as usize], &self.clauses[b as usize]);
            cb.lbd
                .cmp(&ca.lbd)
                .then(ca.activity.total_cmp(&cb.activity))
        });
        let target = candidates.len() / 2;
        let mut removed = 0;
        for &c in &candidates {
            if removed >= target {
                break;
            }
            if self.locked(c) {
                continue;
            }
            let cl = &mut self.clauses[c as usize];
            cl.deleted = true;
            cl.lits = Vec::new();
            removed += 1;
        }
        self.learnts -= removed;
        for w in &mut self.watches {
            w.clear();
        }
        for c in 0..self.clauses.len() as u32 {
            let cl = &self.clauses[c as usize];
            if !cl.deleted && cl.lits.len() >= 2 {
                self.attach(c);
            }
        }
    }

    fn model(&self) -> Model {
        Model::new(self.assigns.iter().map(|&a| a == 1).collect())
    }
}

/// Complete CDCL search. A `Sat` result carries a model that has been checked
/// against every clause of `formula`.
pub fn solve_internal(formula: &CnfFormula, budget: Budget) -> SolveResult {
    let started = Instant::now();
    let n = formula.num_vars();
    let mut s = Solver::new(n);
    let finish = |s: Solver, status: SolveStatus| {
        let mut stats = s.stats.clone();
        stats.elapsed = started.elapsed();
        let model = (status == SolveStatus::Sat).then(|| s.model());
        if let Some(m) = &model {
            assert!(
                check_model(formula, m).unwrap_or(false),
                "internal solver produced a non-model"
            );
        }
        SolveResult {
            status,
            model,
            stats,
        }
    };

    let mut occurrences = vec![0u64; n];
    for clause in formula.clauses() {
        for l in clause {
            occurrences[l.var().index()] += 1;
        }
    }
    let max_occ = occurrences.iter().copied().max().unwrap_or(0).max(1) as f64;
    for (a, &o) in s.activity.iter_mut().zip(&occurrences) {
        *a = o as f64 / max_occ;
    }
    for v in 0..n as u32 {
        s.heap.insert(v, &s.activity);
    }

    for clause in formula.clauses() {
        let lits: Vec<L> = clause
            .iter()
            .map(|l| 2 * l.var().index() as u32 + (!l.is_positive()) as u32)
            .collect();
        match lits.len() {
            0 => return finish(s, SolveStatus::Unsat),
            1 => match s.value(lits[0]) {
                0 => return finish(s, SolveStatus::Unsat),
                UNDEF => s.enqueue(lits[0], NO_REASON),
                _ => {}
            },
            _ => {
                let cref = s.clauses.len() as u32;
                s.clauses.push(Clause {
                    lits,
                    learnt: false,
                    deleted: false,
                    lbd: 0,
                    activity: 0.0,
                });
                s.attach(cref);
            }
        }
    }
    s.max_learnts = (s.clauses.len() as f64 / 3.0).max(2000.0);

    let deadline = budget.time.map(|t| started + t);
    let mut restart_index = 0;
    let mut restart_limit = (luby(2.0, 0) * RESTART_UNIT as f64) as u64;
    let mut since_restart = 0u64;
    loop {
        if let Some(confl) = s.propagate() {
            s.stats.conflicts += 1;
            since_restart += 1;
            if s.decision_level() == 0 {
                return finish(s, SolveStatus::Unsat);
            }
            let (learnt, backjump) = s.analyze(confl);
            s.cancel_until(backjump);
            if learnt.len() == 1 {
                s.enqueue(learnt[0], NO_REASON);
            } else {
                let lbd = s.lbd(&learnt);
                let cref = s.clauses.len() as u32;
                let first = learnt[0];
                s.clauses.push(Clause {
                    lits: learnt,
                    learnt: true,
                    deleted: false,
                    lbd,
                    activity: 0.0,
                });
                s.attach(cref);
                s.bump_clause(cref);
                s.learnts += 1;
                s.enqueue(first, cref);
            }
            s.var_inc /= VAR_DECAY;
            s.cla_inc /= CLAUSE_DECAY;
            if budget.conflicts.is_some_and(|c| s.stats.conflicts >= c) {
                return finish(s, SolveStatus::Timeout);
            }
            if s.stats.conflicts % 64 == 0 && deadline.is_some_and(|d| Instant::now() >= d) {
                return finish(s, SolveStatus::Timeout);
            }
        } else {
            if since_restart >= restart_limit {
                s.cancel_until(0);
                s.stats.restarts += 1;
                restart_index += 1;
                since_restart = 0;
                restart_limit = (luby(2.0, restart_index) * RESTART_UNIT as f64) as u64;
            }
            if s.learnts as f64 >= s.max_learnts + s.trail.len() as f64 {
                s.reduce_db();
                s.max_learnts *= 1.1;
            }
            match s.pick_branch() {
                None => return finish(s, SolveStatus::Sat),
                Some(l) => {
                    s.stats.decisions += 1;
                    if s.stats.decisions % 4096 == 0
                        && deadline.is_some_and(|d| Instant::now() >= d)
                    {
                        return finish(s, SolveStatus::Timeout);
                    }
                    s.trail_lim.push(s.trail.len());
                    s.enqueue(l, NO_REASON);
                }
            }
        }
    }
}
