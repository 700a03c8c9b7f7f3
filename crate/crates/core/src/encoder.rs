//! Translation of set constraints into clauses over support variables.
//!
//! Each rule works element-wise over the supports involved: an element either
//! lies in a given support or not, and every combination gets its own clause
//! family. Supports are sorted, so the combinations are found by merging.
//! Families are emitted in a fixed order, elements in universe order within a
//! family.

use thiserror::Error;

use crate::cardinality;
use crate::cnf::{ClauseSink, CnfError, CnfFormula, Lit, Var, VariableOrigin};
use crate::model::{Constraint, ElementId, ProblemModel, SetId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error("{0} needs at least two operand sets")]
    TooFewOperands(&'static str),
}

type Result<T> = std::result::Result<T, EncodeError>;

/// Encodes every constraint of `model`.
///
/// Support variables are allocated first, set by set in declaration order and
/// element by element in universe order. Each constraint's clauses form one
/// group labelled `<index>:<kind>`.
pub fn encode_model(model: &ProblemModel) -> Result<CnfFormula> {
    let mut f = CnfFormula::new();
    for (i, set) in model.sets().iter().enumerate() {
        for &x in set.support() {
            f.support_var(model, SetId(i as u32), x)?;
        }
    }
    for (index, constraint) in model.constraints().iter().enumerate() {
        f.begin_group(&format!("{index}:{}", constraint.kind()));
        encode_constraint(model, index, constraint, &mut f)?;
    }
    Ok(f)
}

/// Dispatches one constraint to its rule. `index` tags auxiliary variables.
pub fn encode_constraint(
    model: &ProblemModel,
    index: usize,
    constraint: &Constraint,
    f: &mut CnfFormula,
) -> Result<()> {
    match constraint {
        Constraint::Member {
            element,
            set,
            positive,
        } => encode_member(model, *element, *set, *positive, f),
        Constraint::Equal {
            left,
            right,
            positive: true,
        } => encode_equal(model, *left, *right, f),
        Constraint::Equal {
            left,
            right,
            positive: false,
        } => encode_not_equal(model, *left, *right, index, f),
        Constraint::Intersection {
            left,
            right,
            result,
        } => encode_intersection(model, *left, *right, *result, f),
        Constraint::EmptyIntersection { sets } => encode_empty_intersection(model, sets, f),
        Constraint::Union {
            left,
            right,
            result,
        } => encode_union(model, *left, *right, *result, f),
        Constraint::Subset { sub, sup } => encode_subset(model, *sub, *sup, f),
        Constraint::Difference {
            left,
            right,
            result,
        } => encode_difference(model, *left, *right, *result, f),
        Constraint::MultiUnion { sets, result } => encode_multi_union(model, sets, *result, f),
        Constraint::MultiIntersection { sets, result } => {
            encode_multi_intersection(model, sets, *result, f)
        }
        Constraint::CardinalityEq { set, k } => {
            let inputs = support_lits(model, *set, f)?;
            cardinality::encode_cardinality_eq(&inputs, *k, index, f);
            Ok(())
        }
        Constraint::CardinalityAtMost { set, k } => {
            let inputs = support_lits(model, *set, f)?;
            cardinality::encode_cardinality_atmost(&inputs, *k, index, f);
            Ok(())
        }
        Constraint::ConstantAssign { set, elements } => encode_constant(model, *set, elements, f),
        Constraint::OverlapAtMostOne { left, right } => {
            encode_overlap_at_most_one(model, *left, *right, f)
        }
    }
}

fn var(model: &ProblemModel, f: &mut CnfFormula, set: SetId, x: ElementId) -> Result<Var> {
    Ok(f.support_var(model, set, x)?)
}

fn support_lits(model: &ProblemModel, set: SetId, f: &mut CnfFormula) -> Result<Vec<Lit>> {
    model
        .set(set)
        .support()
        .iter()
        .map(|&x| var(model, f, set, x).map(Var::pos))
        .collect()
}

/// Elements of the union of `supports`, each with the indices of the supports
/// that contain it, by k-way merge of the sorted supports.
fn signatures(supports: &[&[ElementId]]) -> Vec<(ElementId, Vec<usize>)> {
    let mut heads = vec![0usize; supports.len()];
    let mut out = Vec::new();
    loop {
        let next = supports
            .iter()
            .zip(&heads)
            .filter_map(|(s, &h)| s.get(h))
            .min()
            .copied();
        let Some(x) = next else {
            return out;
        };
        let mut members = Vec::new();
        for (i, s) in supports.iter().enumerate() {
            if s.get(heads[i]) == Some(&x) {
                members.push(i);
                heads[i] += 1;
            }
        }
        out.push((x, members));
    }
}

/// Membership masks (bit `i` set when in support `i`) for up to three sets.
fn masks(model: &ProblemModel, sets: &[SetId]) -> Vec<(ElementId, u8)> {
    let supports: Vec<&[ElementId]> = sets.iter().map(|&s| model.set(s).support()).collect();
    signatures(&supports)
        .into_iter()
        .map(|(x, m)| (x, m.iter().fold(0u8, |acc, &i| acc | (1 << i))))
        .collect()
}

const F: u8 = 1;
const G: u8 = 2;
const H: u8 = 4;

/// `x ∈ F` / `x ∉ F`. Positive membership outside the support is a failure.
pub fn encode_member(
    model: &ProblemModel,
    element: ElementId,
    set: SetId,
    positive: bool,
    f: &mut CnfFormula,
) -> Result<()> {
    if model.set(set).contains(element) {
        let v = var(model, f, set, element)?;
        f.add_clause(&[v.lit(positive)]);
    } else if positive {
        f.add_empty_clause();
    }
    Ok(())
}

/// `F = G`.
pub fn encode_equal(model: &ProblemModel, fs: SetId, gs: SetId, f: &mut CnfFormula) -> Result<()> {
    let m = masks(model, &[fs, gs]);
    for &(x, mask) in &m {
        if mask == F | G {
            let (a, b) = (var(model, f, fs, x)?, var(model, f, gs, x)?);
            f.add_clause(&[a.neg(), b.pos()]);
            f.add_clause(&[b.neg(), a.pos()]);
        }
    }
    for &(x, mask) in &m {
        if mask == F {
            let a = var(model, f, fs, x)?;
            f.add_clause(&[a.neg()]);
        }
    }
    for &(x, mask) in &m {
        if mask == G {
            let b = var(model, f, gs, x)?;
            f.add_clause(&[b.neg()]);
        }
    }
    Ok(())
}

/// `F ≠ G`, with one witness variable `d_x ↔ (x ∈ F) ⊕ (x ∈ G)` per element
/// of either support and a clause asking for some witness.
pub fn encode_not_equal(
    model: &ProblemModel,
    fs: SetId,
    gs: SetId,
    constraint: usize,
    f: &mut CnfFormula,
) -> Result<()> {
    let m = masks(model, &[fs, gs]);
    if m.is_empty() {
        f.add_empty_clause();
        return Ok(());
    }
    let mut witnesses = Vec::with_capacity(m.len());
    for &(x, _) in &m {
        witnesses.push(f.new_var(VariableOrigin::Witness {
            constraint,
            element: model.universe().label(x).to_string(),
        }));
    }
    for (&(x, mask), d) in m.iter().zip(&witnesses) {
        match mask {
            m if m == F | G => {
                let (a, b) = (var(model, f, fs, x)?, var(model, f, gs, x)?);
                f.add_clause(&[d.neg(), a.pos(), b.pos()]);
                f.add_clause(&[d.neg(), a.neg(), b.neg()]);
                f.add_clause(&[d.pos(), a.neg(), b.pos()]);
                f.add_clause(&[d.pos(), a.pos(), b.neg()]);
            }
            _ => {
                let side = if mask == F { fs } else { gs };
                let a = var(model, f, side, x)?;
                f.add_clause(&[d.neg(), a.pos()]);
                f.add_clause(&[d.pos(), a.neg()]);
            }
        }
    }
    let any: Vec<Lit> = witnesses.iter().map(|d| d.pos()).collect();
    f.add_clause(&any);
    Ok(())
}

/// `F ∩ G = H`.
pub fn encode_intersection(
    model: &ProblemModel,
    fs: SetId,
    gs: SetId,
    hs: SetId,
    f: &mut CnfFormula,
) -> Result<()> {
    let m = masks(model, &[fs, gs, hs]);
    for &(x, mask) in &m {
        if mask == F | G | H {
            let (a, b, c) = (
                var(model, f, fs, x)?,
                var(model, f, gs, x)?,
                var(model, f, hs, x)?,
            );
            f.add_clause(&[a.neg(), b.neg(), c.pos()]);
            f.add_clause(&[c.neg(), a.pos()]);
            f.add_clause(&[c.neg(), b.pos()]);
        }
    }
    for &(x, mask) in &m {
        if mask == F | G {
            let (a, b) = (var(model, f, fs, x)?, var(model, f, gs, x)?);
            f.add_clause(&[a.neg(), b.neg()]);
        }
    }
    for &(x, mask) in &m {
        if mask & H != 0 && mask & (F | G) != F | G {
            let c = var(model, f, hs, x)?;
            f.add_clause(&[c.neg()]);
        }
    }
    Ok(())
}

/// `F1 ∩ … ∩ Fn = ∅`: one clause per element common to all supports.
pub fn encode_empty_intersection(
    model: &ProblemModel,
    sets: &[SetId],
    f: &mut CnfFormula,
) -> Result<()> {
    if sets.len() < 2 {
        return Err(EncodeError::TooFewOperands("empty-intersection"));
    }
    let supports: Vec<&[ElementId]> = sets.iter().map(|&s| model.set(s).support()).collect();
    for (x, members) in signatures(&supports) {
        if members.len() == sets.len() {
            let clause = sets
                .iter()
                .map(|&s| var(model, f, s, x).map(Var::neg))
                .collect::<Result<Vec<_>>>()?;
            f.add_clause(&clause);
        }
    }
    Ok(())
}

/// `F ∪ G = H`.
pub fn encode_union(
    model: &ProblemModel,
    fs: SetId,
    gs: SetId,
    hs: SetId,
    f: &mut CnfFormula,
) -> Result<()> {
    let m = masks(model, &[fs, gs, hs]);
    for &(x, mask) in &m {
        if mask == F | G | H {
            let (a, b, c) = (
                var(model, f, fs, x)?,
                var(model, f, gs, x)?,
                var(model, f, hs, x)?,
            );
            f.add_clause(&[c.neg(), a.pos(), b.pos()]);
            f.add_clause(&[a.neg(), c.pos()]);
            f.add_clause(&[b.neg(), c.pos()]);
        }
    }
    for (side, sv) in [(F, fs), (G, gs)] {
        for &(x, mask) in &m {
            if mask == side | H {
                let (a, c) = (var(model, f, sv, x)?, var(model, f, hs, x)?);
                f.add_clause(&[a.neg(), c.pos()]);
                f.add_clause(&[c.neg(), a.pos()]);
            }
        }
    }
    for &(x, mask) in &m {
        if mask == H {
            let c = var(model, f, hs, x)?;
            f.add_clause(&[c.neg()]);
        }
    }
    for (side, sv) in [(F, fs), (G, gs)] {
        for &(x, mask) in &m {
            if mask & side != 0 && mask & H == 0 {
                let a = var(model, f, sv, x)?;
                f.add_clause(&[a.neg()]);
            }
        }
    }
    Ok(())
}

/// `F ⊆ G`.
pub fn encode_subset(model: &ProblemModel, fs: SetId, gs: SetId, f: &mut CnfFormula) -> Result<()> {
    let m = masks(model, &[fs, gs]);
    for &(x, mask) in &m {
        if mask == F | G {
            let (a, b) = (var(model, f, fs, x)?, var(model, f, gs, x)?);
            f.add_clause(&[a.neg(), b.pos()]);
        }
    }
    for &(x, mask) in &m {
        if mask == F {
            let a = var(model, f, fs, x)?;
            f.add_clause(&[a.neg()]);
        }
    }
    Ok(())
}

/// `H = F ∖ G`.
pub fn encode_difference(
    model: &ProblemModel,
    fs: SetId,
    gs: SetId,
    hs: SetId,
    f: &mut CnfFormula,
) -> Result<()> {
    let m = masks(model, &[fs, gs, hs]);
    for &(x, mask) in &m {
        if mask == F | G | H {
            let (a, b, c) = (
                var(model, f, fs, x)?,
                var(model, f, gs, x)?,
                var(model, f, hs, x)?,
            );
            f.add_clause(&[a.neg(), b.pos(), c.pos()]);
            f.add_clause(&[c.neg(), a.pos()]);
            f.add_clause(&[c.neg(), b.neg()]);
        }
    }
    for &(x, mask) in &m {
        if mask == F {
            let a = var(model, f, fs, x)?;
            f.add_clause(&[a.neg()]);
        }
    }
    for &(x, mask) in &m {
        if mask & H != 0 && mask & F == 0 {
            let c = var(model, f, hs, x)?;
            f.add_clause(&[c.neg()]);
        }
    }
    for &(x, mask) in &m {
        if mask == F | H {
            let (a, c) = (var(model, f, fs, x)?, var(model, f, hs, x)?);
            f.add_clause(&[a.neg(), c.pos()]);
            f.add_clause(&[c.neg(), a.pos()]);
        }
    }
    for &(x, mask) in &m {
        if mask == F | G {
            let (a, b) = (var(model, f, fs, x)?, var(model, f, gs, x)?);
            f.add_clause(&[a.neg(), b.pos()]);
        }
    }
    Ok(())
}

/// `H = F1 ∪ … ∪ Fn`.
///
/// Each element of `H`'s support is handled once, with the operands whose
/// support contains it: `x_H` is equivalent to their disjunction (one long
/// clause plus one binary per operand). Elements of `H` in no operand are
/// false, and operand elements outside `H` are false.
pub fn encode_multi_union(
    model: &ProblemModel,
    sets: &[SetId],
    hs: SetId,
    f: &mut CnfFormula,
) -> Result<()> {
    if sets.len() < 2 {
        return Err(EncodeError::TooFewOperands("multi-union"));
    }
    let n = sets.len();
    let mut supports: Vec<&[ElementId]> = sets.iter().map(|&s| model.set(s).support()).collect();
    supports.push(model.set(hs).support());
    let sig = signatures(&supports);
    let in_h = |members: &[usize]| members.last() == Some(&n);
    // (I)
    for (x, members) in &sig {
        if in_h(members) && members.len() > 1 {
            let c = var(model, f, hs, *x)?;
            let mut long = vec![c.neg()];
            for &i in &members[..members.len() - 1] {
                long.push(var(model, f, sets[i], *x)?.pos());
            }
            f.add_clause(&long);
            for l in &long[1..] {
                f.add_clause(&[!*l, c.pos()]);
            }
        }
    }
    // (II)
    for (x, members) in &sig {
        if in_h(members) && members.len() == 1 {
            let c = var(model, f, hs, *x)?;
            f.add_clause(&[c.neg()]);
        }
    }
    // (III)
    for (i, &s) in sets.iter().enumerate() {
        for (x, members) in &sig {
            if !in_h(members) && members.contains(&i) {
                let a = var(model, f, s, *x)?;
                f.add_clause(&[a.neg()]);
            }
        }
    }
    Ok(())
}

/// `H = F1 ∩ … ∩ Fn`.
pub fn encode_multi_intersection(
    model: &ProblemModel,
    sets: &[SetId],
    hs: SetId,
    f: &mut CnfFormula,
) -> Result<()> {
    if sets.len() < 2 {
        return Err(EncodeError::TooFewOperands("multi-intersection"));
    }
    let n = sets.len();
    let mut supports: Vec<&[ElementId]> = sets.iter().map(|&s| model.set(s).support()).collect();
    supports.push(model.set(hs).support());
    let sig = signatures(&supports);
    let in_all = |members: &[usize]| members.iter().filter(|&&i| i < n).count() == n;
    let in_h = |members: &[usize]| members.last() == Some(&n);
    // (I)
    for (x, members) in &sig {
        if in_all(members) && in_h(members) {
            let c = var(model, f, hs, *x)?;
            let operands = sets
                .iter()
                .map(|&s| var(model, f, s, *x))
                .collect::<Result<Vec<_>>>()?;
            let mut long: Vec<Lit> = operands.iter().map(|v| v.neg()).collect();
            long.push(c.pos());
            f.add_clause(&long);
            for v in &operands {
                f.add_clause(&[c.neg(), v.pos()]);
            }
        }
    }
    // (II)
    for (x, members) in &sig {
        if in_all(members) && !in_h(members) {
            let clause = sets
                .iter()
                .map(|&s| var(model, f, s, *x).map(Var::neg))
                .collect::<Result<Vec<_>>>()?;
            f.add_clause(&clause);
        }
    }
    // (III)
    for (x, members) in &sig {
        if in_h(members) && !in_all(members) {
            let c = var(model, f, hs, *x)?;
            f.add_clause(&[c.neg()]);
        }
    }
    Ok(())
}

/// `F = {e1, …}`: one unit per support element, positive for the listed ones.
pub fn encode_constant(
    model: &ProblemModel,
    set: SetId,
    elements: &[ElementId],
    f: &mut CnfFormula,
) -> Result<()> {
    for &x in model.set(set).support() {
        let v = var(model, f, set, x)?;
        f.add_clause(&[v.lit(elements.binary_search(&x).is_ok())]);
    }
    Ok(())
}

/// `|F ∩ G| ≤ 1` as `¬i_F ∨ ¬j_F ∨ ¬i_G ∨ ¬j_G` for every pair `j < i` of
/// elements common to both supports.
pub fn encode_overlap_at_most_one(
    model: &ProblemModel,
    fs: SetId,
    gs: SetId,
    f: &mut CnfFormula,
) -> Result<()> {
    let common: Vec<ElementId> = masks(model, &[fs, gs])
        .into_iter()
        .filter(|&(_, m)| m == F | G)
        .map(|(x, _)| x)
        .collect();
    let lits = common
        .iter()
        .map(|&x| Ok((var(model, f, fs, x)?.neg(), var(model, f, gs, x)?.neg())))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..lits.len() {
        for j in 0..i {
            f.add_clause(&[lits[i].0, lits[j].0, lits[i].1, lits[j].1]);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Universe;

    /// Universe {a, b, c, d}; each set given by its support labels.
    fn model(sets: &[&[&str]]) -> (ProblemModel, Vec<SetId>) {
        let u = Universe::new(["a", "b", "c", "d"]).unwrap();
        let mut m = ProblemModel::new(u);
        let names = ["F", "G", "H", "K", "L"];
        let ids = sets
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let support: Vec<ElementId> =
                    s.iter().map(|l| m.universe().lookup(l).unwrap()).collect();
                m.declare_set(names[i], support).unwrap()
            })
            .collect();
        (m, ids)
    }

    fn encoded(m: &ProblemModel, run: impl FnOnce(&ProblemModel, &mut CnfFormula)) -> CnfFormula {
        let mut f = CnfFormula::new();
        for (i, set) in m.sets().iter().enumerate() {
            for &x in set.support() {
                f.support_var(m, SetId(i as u32), x).unwrap();
            }
        }
        run(m, &mut f);
        f
    }

    fn arities(f: &CnfFormula) -> Vec<usize> {
        let mut a: Vec<usize> = f.clauses().map(<[Lit]>::len).collect();
        a.sort_unstable();
        a
    }

    #[test]
    fn member_rules() {
        let (m, s) = model(&[&["a", "b"]]);
        let a = m.universe().lookup("a").unwrap();
        let c = m.universe().lookup("c").unwrap();
        let f = encoded(&m, |m, f| encode_member(m, a, s[0], true, f).unwrap());
        assert_eq!(arities(&f), vec![1]);
        let f = encoded(&m, |m, f| encode_member(m, c, s[0], true, f).unwrap());
        assert!(f.has_empty_clause());
        let f = encoded(&m, |m, f| encode_member(m, c, s[0], false, f).unwrap());
        assert_eq!(f.num_clauses(), 0);
    }

    #[test]
    fn equal_counts() {
        let (m, s) = model(&[&["a", "b"], &["a", "b"]]);
        let f = encoded(&m, |m, f| encode_equal(m, s[0], s[1], f).unwrap());
        assert_eq!(arities(&f), vec![2, 2, 2, 2]);
        let (m, s) = model(&[&["a", "b"], &["a"]]);
        let f = encoded(&m, |m, f| encode_equal(m, s[0], s[1], f).unwrap());
        assert_eq!(arities(&f), vec![1, 2, 2]);
    }

    #[test]
    fn not_equal_of_empty_supports_fails() {
        let (m, s) = model(&[&[], &[]]);
        let f = encoded(&m, |m, f| encode_not_equal(m, s[0], s[1], 0, f).unwrap());
        assert!(f.has_empty_clause());
    }

    #[test]
    fn intersection_counts() {
        let (m, s) = model(&[&["a"], &["a"], &["a"]]);
        let f = encoded(&m, |m, f| {
            encode_intersection(m, s[0], s[1], s[2], f).unwrap()
        });
        assert_eq!(arities(&f), vec![2, 2, 3]);
        let (m, s) = model(&[&["a"], &["b"], &["a", "b"]]);
        let f = encoded(&m, |m, f| {
            encode_intersection(m, s[0], s[1], s[2], f).unwrap()
        });
        assert_eq!(arities(&f), vec![1, 1]);
        let (m, s) = model(&[&["a"], &["a"], &[]]);
        let f = encoded(&m, |m, f| {
            encode_intersection(m, s[0], s[1], s[2], f).unwrap()
        });
        assert_eq!(arities(&f), vec![2]);
    }

    #[test]
    fn empty_intersection_counts() {
        let (m, s) = model(&[&["a", "b"], &["a", "b"]]);
        let f = encoded(&m, |m, f| encode_empty_intersection(m, &s, f).unwrap());
        assert_eq!(arities(&f), vec![2, 2]);
        let (m, s) = model(&[&["a"], &["b"]]);
        let f = encoded(&m, |m, f| encode_empty_intersection(m, &s, f).unwrap());
        assert_eq!(f.num_clauses(), 0);
    }

    #[test]
    fn union_counts() {
        let (m, s) = model(&[&["a", "b"], &["a", "b"], &["a", "b"]]);
        let f = encoded(&m, |m, f| encode_union(m, s[0], s[1], s[2], f).unwrap());
        assert_eq!(arities(&f), vec![2, 2, 2, 2, 3, 3]);
        let (m, s) = model(&[&["a"], &["a"], &[]]);
        let f = encoded(&m, |m, f| encode_union(m, s[0], s[1], s[2], f).unwrap());
        assert_eq!(arities(&f), vec![1, 1]);
    }

    #[test]
    fn subset_counts() {
        let (m, s) = model(&[&["a", "b"], &["a", "b"]]);
        let f = encoded(&m, |m, f| encode_subset(m, s[0], s[1], f).unwrap());
        assert_eq!(arities(&f), vec![2, 2]);
        let (m, s) = model(&[&["a", "b"], &["a"]]);
        let f = encoded(&m, |m, f| encode_subset(m, s[0], s[1], f).unwrap());
        assert_eq!(arities(&f), vec![1, 2]);
    }

    #[test]
    fn difference_families() {
        let (m, s) = model(&[&[], &["a"], &["a"]]);
        let f = encoded(&m, |m, f| {
            encode_difference(m, s[0], s[1], s[2], f).unwrap()
        });
        assert_eq!(arities(&f), vec![1]);
        let (m, s) = model(&[&["a"], &["a"], &[]]);
        let f = encoded(&m, |m, f| {
            encode_difference(m, s[0], s[1], s[2], f).unwrap()
        });
        let a_f = f.clause(0).to_vec();
        assert_eq!(a_f.len(), 2);
        assert!(!a_f[0].is_positive() && a_f[1].is_positive());
    }

    #[test]
    fn multi_union_three_operands() {
        let (m, s) = model(&[&["a"], &["a"], &["a"], &["a"]]);
        let f = encoded(&m, |m, f| encode_multi_union(m, &s[..3], s[3], f).unwrap());
        assert_eq!(arities(&f), vec![2, 2, 2, 4]);
    }

    #[test]
    fn multi_intersection_three_operands() {
        let (m, s) = model(&[&["a"], &["a"], &["a"], &["a"]]);
        let f = encoded(&m, |m, f| {
            encode_multi_intersection(m, &s[..3], s[3], f).unwrap()
        });
        assert_eq!(arities(&f), vec![2, 2, 2, 4]);
        let (m, s) = model(&[&["a"], &[], &["a"], &["a"]]);
        let f = encoded(&m, |m, f| {
            encode_multi_intersection(m, &s[..3], s[3], f).unwrap()
        });
        assert_eq!(arities(&f), vec![1]);
    }

    #[test]
    fn overlap_pairs() {
        let (m, s) = model(&[&["a", "b", "c"], &["a", "b", "c", "d"]]);
        let f = encoded(&m, |m, f| {
            encode_overlap_at_most_one(m, s[0], s[1], f).unwrap()
        });
        assert_eq!(arities(&f), vec![4, 4, 4]);
    }

    #[test]
    fn constant_assignment_units() {
        let (m, s) = model(&[&["a", "b", "c"]]);
        let b = m.universe().lookup("b").unwrap();
        let f = encoded(&m, |m, f| encode_constant(m, s[0], &[b], f).unwrap());
        let signs: Vec<bool> = f.clauses().map(|c| c[0].is_positive()).collect();
        assert_eq!(signs, vec![false, true, false]);
    }

    #[test]
    fn model_groups_per_constraint() {
        let (mut m, s) = model(&[&["a", "b"], &["a", "b"]]);
        m.add_constraint(Constraint::Subset {
            sub: s[0],
            sup: s[1],
        })
        .unwrap();
        m.add_constraint(Constraint::CardinalityEq { set: s[0], k: 1 })
            .unwrap();
        let f = encode_model(&m).unwrap();
        let stats = f.stats();
        assert_eq!(stats.per_group[0], ("0:subset".to_string(), 2));
        // n = 2 totalizer: 6 clauses + 2 comparator units
        assert_eq!(stats.per_group[1], ("1:card-eq".to_string(), 8));
        assert_eq!(stats.variables, 4 + 2);
    }

    #[test]
    fn signatures_merge() {
        let a = [ElementId(0), ElementId(2)];
        let b = [ElementId(1), ElementId(2)];
        assert_eq!(
            signatures(&[&a, &b]),
            vec![
                (ElementId(0), vec![0]),
                (ElementId(1), vec![1]),
                (ElementId(2), vec![0, 1])
            ]
        );
    }
}
