//! CNF formulas: variable allocation with provenance, clause storage,
//! statistics and DIMACS input/output.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, BufRead, Write};
use std::ops::Not;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{ElementId, ProblemModel, SetId};

/// A propositional variable, numbered from 1 as in DIMACS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    pub fn new(id: u32) -> Self {
        assert!(id > 0, "variable ids start at 1");
        Var(id)
    }

    #[inline]
    pub fn id(self) -> u32 {
        self.0
    }

    /// Zero-based index, for dense per-variable tables.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    #[inline]
    pub fn pos(self) -> Lit {
        Lit(self.0 as i32)
    }

    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Lit {
        Lit(-(self.0 as i32))
    }

    #[inline]
    pub fn lit(self, positive: bool) -> Lit {
        if positive {
            self.pos()
        } else {
            self.neg()
        }
    }
}

/// A signed variable in DIMACS convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(i32);

impl Lit {
    pub fn from_dimacs(value: i32) -> Self {
        assert!(value != 0, "0 is not a literal");
        Lit(value)
    }

    #[inline]
    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    #[inline]
    pub fn var(self) -> Var {
        Var(self.0.unsigned_abs())
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
}

impl Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Where a variable came from. This is what a decoder needs to read a model.
///
/// SGP indices (players, positions, groups, weeks) are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VariableOrigin {
    /// No recorded meaning (e.g. read from a plain DIMACS file).
    Anonymous,
    /// `x_F`: element `element` belongs to set `set`.
    Support { set: String, element: String },
    /// Output `position` of totalizer node `node` built for constraint `constraint`.
    Totalizer {
        constraint: usize,
        node: usize,
        position: usize,
    },
    /// Difference witness for `element` in a set inequality.
    Witness { constraint: usize, element: String },
    /// Player plays in group of week, any position.
    TmeAux {
        player: usize,
        group: usize,
        week: usize,
    },
    /// Player is the `position`-th member of group of week.
    DePosition {
        player: usize,
        position: usize,
        group: usize,
        week: usize,
    },
}

impl fmt::Display for VariableOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VariableOrigin::Anonymous => write!(f, "anonymous"),
            VariableOrigin::Support { set, element } => write!(f, "support {set} {element}"),
            VariableOrigin::Totalizer {
                constraint,
                node,
                position,
            } => write!(f, "totalizer {constraint} {node} {position}"),
            VariableOrigin::Witness {
                constraint,
                element,
            } => write!(f, "witness {constraint} {element}"),
            VariableOrigin::TmeAux {
                player,
                group,
                week,
            } => write!(f, "tme {player} {group} {week}"),
            VariableOrigin::DePosition {
                player,
                position,
                group,
                week,
            } => write!(f, "de {player} {position} {group} {week}"),
        }
    }
}

impl FromStr for VariableOrigin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let num = |i: usize| -> Result<usize, String> {
            parts
                .get(i)
                .ok_or_else(|| format!("missing field in origin `{s}`"))?
                .parse()
                .map_err(|_| format!("bad number in origin `{s}`"))
        };
        let text = |i: usize| -> Result<String, String> {
            parts
                .get(i)
                .map(|p| p.to_string())
                .ok_or_else(|| format!("missing field in origin `{s}`"))
        };
        let (kind, arity) = match parts.first() {
            Some(&"anonymous") => (0, 1),
            Some(&"support") => (1, 3),
            Some(&"totalizer") => (2, 4),
            Some(&"witness") => (3, 3),
            Some(&"tme") => (4, 4),
            Some(&"de") => (5, 5),
            _ => return Err(format!("unknown origin `{s}`")),
        };
        if parts.len() != arity {
            return Err(format!("wrong field count in origin `{s}`"));
        }
        Ok(match kind {
            0 => VariableOrigin::Anonymous,
            1 => VariableOrigin::Support {
                set: text(1)?,
                element: text(2)?,
            },
            2 => VariableOrigin::Totalizer {
                constraint: num(1)?,
                node: num(2)?,
                position: num(3)?,
            },
            3 => VariableOrigin::Witness {
                constraint: num(1)?,
                element: text(2)?,
            },
            4 => VariableOrigin::TmeAux {
                player: num(1)?,
                group: num(2)?,
                week: num(3)?,
            },
            _ => VariableOrigin::DePosition {
                player: num(1)?,
                position: num(2)?,
                group: num(3)?,
                week: num(4)?,
            },
        })
    }
}

/// Anything clauses can be generated into.
///
/// Builders are written against this trait so the same generator can either
/// store a formula, count it, or stream it to disk.
pub trait ClauseSink {
    fn new_var(&mut self, origin: VariableOrigin) -> Var;

    /// Adds a clause. Duplicate literals are merged and tautologies dropped.
    fn add_clause(&mut self, lits: &[Lit]);

    /// Starts a new group of clauses; statistics are attributed per group.
    fn begin_group(&mut self, _label: &str) {}

    fn num_vars(&self) -> usize;
}

/// Normalized clause length, or `None` for a tautology.
#[inline]
fn distinct_len(lits: &[Lit]) -> Option<usize> {
    let mut len = lits.len();
    for i in 1..lits.len() {
        for j in 0..i {
            if lits[j] == lits[i] {
                len -= 1;
                break;
            }
            if lits[j] == !lits[i] {
                return None;
            }
        }
    }
    Some(len)
}

/// Clause-arity histogram plus totals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EncodingStats {
    pub variables: usize,
    pub clauses: usize,
    pub empty: usize,
    pub unit: usize,
    pub binary: usize,
    pub ternary: usize,
    pub other: usize,
    /// Clause count per group, in emission order.
    pub per_group: Vec<(String, usize)>,
}

impl EncodingStats {
    fn record(&mut self, len: usize) {
        self.clauses += 1;
        match len {
            0 => self.empty += 1,
            1 => self.unit += 1,
            2 => self.binary += 1,
            3 => self.ternary += 1,
            _ => self.other += 1,
        }
        if let Some(last) = self.per_group.last_mut() {
            last.1 += 1;
        }
    }

    pub fn histogram_total(&self) -> usize {
        self.empty + self.unit + self.binary + self.ternary + self.other
    }

    /// Sum of clause counts over groups whose label starts with `prefix`.
    pub fn group_total(&self, prefix: &str) -> usize {
        self.per_group
            .iter()
            .filter(|(l, _)| l.starts_with(prefix))
            .map(|(_, n)| n)
            .sum()
    }
}

/// Sink that only counts what would have been generated.
#[derive(Debug, Default)]
pub struct ClauseCounter {
    stats: EncodingStats,
}

impl ClauseCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn into_stats(self) -> EncodingStats {
        self.stats
    }

    pub fn stats(&self) -> &EncodingStats {
        &self.stats
    }
}

impl ClauseSink for ClauseCounter {
    fn new_var(&mut self, _origin: VariableOrigin) -> Var {
        self.stats.variables += 1;
        Var(self.stats.variables as u32)
    }

    #[inline]
    fn add_clause(&mut self, lits: &[Lit]) {
        if let Some(len) = distinct_len(lits) {
            self.stats.record(len);
        }
    }

    fn begin_group(&mut self, label: &str) {
        self.stats.per_group.push((label.to_string(), 0));
    }

    fn num_vars(&self) -> usize {
        self.stats.variables
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("element {element} is not in the support of {set}")]
    NotInSupport { set: String, element: String },
}

/// An append-only clause store with a variable allocator.
#[derive(Debug, Clone, Default)]
pub struct CnfFormula {
    origins: Vec<VariableOrigin>,
    lits: Vec<Lit>,
    starts: Vec<usize>,
    groups: Vec<(String, usize)>,
    support: HashMap<(SetId, ElementId), Var>,
}

impl CnfFormula {
    pub fn new() -> Self {
        Self {
            starts: vec![0],
            ..Self::default()
        }
    }

    pub fn num_clauses(&self) -> usize {
        self.starts.len() - 1
    }

    pub fn clause(&self, index: usize) -> &[Lit] {
        &self.lits[self.starts[index]..self.starts[index + 1]]
    }

    pub fn clauses(&self) -> impl ExactSizeIterator<Item = &[Lit]> + '_ {
        self.starts.windows(2).map(|w| &self.lits[w[0]..w[1]])
    }

    pub fn origin(&self, var: Var) -> &VariableOrigin {
        &self.origins[var.index()]
    }

    pub fn origins(&self) -> &[VariableOrigin] {
        &self.origins
    }

    /// Total number of literal occurrences.
    pub fn num_literals(&self) -> usize {
        self.lits.len()
    }

    pub fn has_empty_clause(&self) -> bool {
        self.starts.windows(2).any(|w| w[0] == w[1])
    }

    /// Clause groups as `(label, first clause index)`.
    pub fn groups(&self) -> &[(String, usize)] {
        &self.groups
    }

    /// Appends the FALSE marker.
    pub fn add_empty_clause(&mut self) {
        self.add_clause(&[]);
    }

    /// Returns the support variable `x_F`, allocating it on first use.
    pub fn support_var(
        &mut self,
        model: &ProblemModel,
        set: SetId,
        element: ElementId,
    ) -> Result<Var, CnfError> {
        if let Some(v) = self.support.get(&(set, element)) {
            return Ok(*v);
        }
        let var = model.set(set);
        if !var.contains(element) {
            return Err(CnfError::NotInSupport {
                set: var.name().to_string(),
                element: model.universe().label(element).to_string(),
            });
        }
        let v = self.new_var(VariableOrigin::Support {
            set: var.name().to_string(),
            element: model.universe().label(element).to_string(),
        });
        self.support.insert((set, element), v);
        Ok(v)
    }

    pub fn stats(&self) -> EncodingStats {
        let mut stats = EncodingStats {
            variables: self.num_vars(),
            ..EncodingStats::default()
        };
        let mut next_group = 0;
        for (i, clause) in self.clauses().enumerate() {
            while next_group < self.groups.len() && self.groups[next_group].1 == i {
                stats.per_group.push((self.groups[next_group].0.clone(), 0));
                next_group += 1;
            }
            stats.record(clause.len());
        }
        for (label, _) in &self.groups[next_group..] {
            stats.per_group.push((label.clone(), 0));
        }
        stats
    }

    pub(crate) fn push_group_at(&mut self, label: String, start: usize) {
        self.groups.push((label, start));
    }
}

impl ClauseSink for CnfFormula {
    fn new_var(&mut self, origin: VariableOrigin) -> Var {
        self.origins.push(origin);
        Var(self.origins.len() as u32)
    }

    fn add_clause(&mut self, lits: &[Lit]) {
        let Some(len) = distinct_len(lits) else {
            return;
        };
        for l in lits {
            assert!(
                l.var().index() < self.origins.len(),
                "literal {l} uses an unallocated variable"
            );
        }
        if len == lits.len() {
            self.lits.extend_from_slice(lits);
        } else {
            for (i, l) in lits.iter().enumerate() {
                if !lits[..i].contains(l) {
                    self.lits.push(*l);
                }
            }
        }
        self.starts.push(self.lits.len());
    }

    fn begin_group(&mut self, label: &str) {
        let at = self.num_clauses();
        self.groups.push((label.to_string(), at));
    }

    fn num_vars(&self) -> usize {
        self.origins.len()
    }
}

/// Writes `formula` in DIMACS CNF.
///
/// Variables with a known origin are listed as `c var <id> = <origin>` comment
/// lines before the header; the FALSE marker is written as a bare `0` line.
pub fn emit_dimacs<W: Write>(formula: &CnfFormula, mut out: W) -> io::Result<()> {
    write_origin_comments(formula.origins(), &mut out)?;
    writeln!(
        out,
        "p cnf {} {}",
        formula.num_vars(),
        formula.num_clauses()
    )?;
    let mut line = String::new();
    for clause in formula.clauses() {
        line.clear();
        push_clause_line(&mut line, clause);
        out.write_all(line.as_bytes())?;
    }
    out.flush()
}

fn write_origin_comments<W: Write>(origins: &[VariableOrigin], out: &mut W) -> io::Result<()> {
    for (i, origin) in origins.iter().enumerate() {
        if *origin != VariableOrigin::Anonymous {
            writeln!(out, "c var {} = {}", i + 1, origin)?;
        }
    }
    Ok(())
}

fn push_clause_line(line: &mut String, clause: &[Lit]) {
    use std::fmt::Write as _;
    for l in clause {
        let _ = write!(line, "{} ", l.0);
    }
    line.push_str("0\n");
}

/// Streams a generator straight to DIMACS without storing the clauses.
///
/// `build` is run twice: once to count, once to write. It must be
/// deterministic.
pub fn stream_dimacs<W, F>(mut out: W, build: F) -> io::Result<EncodingStats>
where
    W: Write,
    F: Fn(&mut dyn ClauseSink),
{
    struct Recorder {
        counter: ClauseCounter,
        origins: Vec<VariableOrigin>,
    }
    impl ClauseSink for Recorder {
        fn new_var(&mut self, origin: VariableOrigin) -> Var {
            self.origins.push(origin.clone());
            self.counter.new_var(origin)
        }
        fn add_clause(&mut self, lits: &[Lit]) {
            self.counter.add_clause(lits)
        }
        fn begin_group(&mut self, label: &str) {
            self.counter.begin_group(label)
        }
        fn num_vars(&self) -> usize {
            self.counter.num_vars()
        }
    }
    struct Writer<'w, W: Write> {
        out: &'w mut W,
        vars: usize,
        line: String,
        error: Option<io::Error>,
    }
    impl<W: Write> ClauseSink for Writer<'_, W> {
        fn new_var(&mut self, _origin: VariableOrigin) -> Var {
            self.vars += 1;
            Var(self.vars as u32)
        }
        fn add_clause(&mut self, lits: &[Lit]) {
            let Some(len) = distinct_len(lits) else {
                return;
            };
            if self.error.is_some() {
                return;
            }
            self.line.clear();
            if len == lits.len() {
                push_clause_line(&mut self.line, lits);
            } else {
                let dedup: Vec<Lit> = lits
                    .iter()
                    .enumerate()
                    .filter(|(i, l)| !lits[..*i].contains(l))
                    .map(|(_, l)| *l)
                    .collect();
                push_clause_line(&mut self.line, &dedup);
            }
            if let Err(e) = self.out.write_all(self.line.as_bytes()) {
                self.error = Some(e);
            }
        }
        fn num_vars(&self) -> usize {
            self.vars
        }
    }

    let mut recorder = Recorder {
        counter: ClauseCounter::new(),
        origins: Vec::new(),
    };
    build(&mut recorder);
    let stats = recorder.counter.into_stats();
    write_origin_comments(&recorder.origins, &mut out)?;
    writeln!(out, "p cnf {} {}", stats.variables, stats.clauses)?;
    let mut writer = Writer {
        out: &mut out,
        vars: 0,
        line: String::new(),
        error: None,
    };
    build(&mut writer);
    if let Some(e) = writer.error {
        return Err(e);
    }
    out.flush()?;
    Ok(stats)
}

#[derive(Debug, Error)]
pub enum DimacsError {
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// Reads a DIMACS CNF file. `c var <id> = <origin>` comments restore origins.
pub fn parse_dimacs<R: BufRead>(input: R) -> Result<CnfFormula, DimacsError> {
    let syntax = |line: usize, message: String| DimacsError::Syntax { line, message };
    let mut header: Option<(usize, usize)> = None;
    let mut origins: HashMap<usize, VariableOrigin> = HashMap::new();
    let mut formula = CnfFormula::new();
    let mut current: Vec<Lit> = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = n + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('c') {
            if let Some(rest) = comment.trim_start().strip_prefix("var ") {
                if let Some((id, origin)) = rest.split_once(" = ") {
                    let id: usize = id
                        .trim()
                        .parse()
                        .map_err(|_| syntax(lineno, format!("bad variable id `{id}`")))?;
                    let origin = origin.parse().map_err(|e| syntax(lineno, e))?;
                    origins.insert(id, origin);
                }
            }
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('p') {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() != 3 || fields[0] != "cnf" {
                return Err(syntax(lineno, "expected `p cnf <vars> <clauses>`".into()));
            }
            let vars = fields[1]
                .parse()
                .map_err(|_| syntax(lineno, "bad variable count".into()))?;
            let clauses = fields[2]
                .parse()
                .map_err(|_| syntax(lineno, "bad clause count".into()))?;
            header = Some((vars, clauses));
            for id in 1..=vars {
                let origin = origins.remove(&id).unwrap_or(VariableOrigin::Anonymous);
                formula.new_var(origin);
            }
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(syntax(lineno, "clause before `p cnf` header".into()));
        };
        for token in trimmed.split_whitespace() {
            let value: i32 = token
                .parse()
                .map_err(|_| syntax(lineno, format!("bad literal `{token}`")))?;
            if value == 0 {
                formula.add_clause(&current);
                current.clear();
            } else {
                if value.unsigned_abs() as usize > vars {
                    return Err(syntax(lineno, format!("literal {value} exceeds header")));
                }
                current.push(Lit(value));
            }
        }
    }
    let Some((_, clauses)) = header else {
        return Err(syntax(0, "missing `p cnf` header".into()));
    };
    if !current.is_empty() {
        formula.add_clause(&current);
    }
    if formula.num_clauses() > clauses {
        return Err(syntax(
            0,
            format!(
                "header declares {clauses} clauses, found {}",
                formula.num_clauses()
            ),
        ));
    }
    Ok(formula)
}

/// Sidecar describing every variable of an encoded formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    pub origins: Vec<VariableOrigin>,
    /// True when the emitted CNF is a unit-propagated residual of this formula.
    pub simplified: bool,
}

impl VarMap {
    pub fn from_formula(formula: &CnfFormula, simplified: bool) -> Self {
        Self {
            origins: formula.origins().to_vec(),
            simplified,
        }
    }

    pub fn write<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "c setsat varmap vars={} simplified={}",
            self.origins.len(),
            if self.simplified { "yes" } else { "no" }
        )?;
        for (i, origin) in self.origins.iter().enumerate() {
            writeln!(out, "{} {}", i + 1, origin)?;
        }
        out.flush()
    }

    pub fn read<R: BufRead>(input: R) -> Result<Self, DimacsError> {
        let syntax = |line: usize, message: String| DimacsError::Syntax { line, message };
        let mut origins = Vec::new();
        let mut simplified = false;
        for (n, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('c') {
                if comment.contains("simplified=yes") {
                    simplified = true;
                }
                continue;
            }
            let (id, origin) = line
                .split_once(' ')
                .ok_or_else(|| syntax(n + 1, "expected `<id> <origin>`".into()))?;
            let id: usize = id
                .parse()
                .map_err(|_| syntax(n + 1, format!("bad id `{id}`")))?;
            if id == 0 {
                return Err(syntax(n + 1, "variable ids start at 1".into()));
            }
            if origins.len() < id {
                origins.resize(id, VariableOrigin::Anonymous);
            }
            origins[id - 1] = origin.parse().map_err(|e| syntax(n + 1, e))?;
        }
        Ok(Self {
            origins,
            simplified,
        })
    }
}
