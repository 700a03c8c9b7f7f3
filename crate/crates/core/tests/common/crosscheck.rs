//! Exhaustive decoding of small instances across encodings.

use std::collections::BTreeSet;

use setsat::sgp::{
    build_instance, decode_schedule, verify_schedule, Schedule, SgpConfig, SgpVariant,
};
use setsat::solver::enumerate_models;

/// Canonical schedules decoded from every model of the instance, with the
/// number of models.
pub fn decoded(
    config: SgpConfig,
    variant: SgpVariant,
) -> Result<(BTreeSet<Schedule>, u64), String> {
    let inst = build_instance(config, variant).map_err(|e| e.to_string())?;
    let mut out = BTreeSet::new();
    let mut error = None;
    let n = enumerate_models(&inst.formula, |m| {
        match decode_schedule(variant, config, m, inst.formula.origins()) {
            Ok(s) => {
                let verdict = verify_schedule(config, &s);
                if !verdict.is_valid() {
                    error = Some(format!("{}: model decodes to {verdict}", variant.name()));
                    return false;
                }
                out.insert(s.canonical());
            }
            Err(e) => {
                error = Some(format!("{}: {e}", variant.name()));
                return false;
            }
        }
        true
    });
    match error {
        Some(e) => Err(e),
        None => Ok((out, n)),
    }
}

/// Every schedule of `config` up to group order, by direct search over
/// partitions of the golfers.
pub fn all_schedules(config: SgpConfig) -> BTreeSet<Schedule> {
    let q = config.players();
    let mut weeks_options = Vec::new();
    partitions(
        &(1..=q).collect::<Vec<_>>(),
        config.group_size,
        &mut Vec::new(),
        &mut weeks_options,
    );
    let mut out = BTreeSet::new();
    extend(&weeks_options, config.weeks, &mut Vec::new(), &mut out);
    out
}

fn partitions(rest: &[usize], p: usize, acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
    if rest.is_empty() {
        out.push(acc.clone());
        return;
    }
    // The smallest remaining golfer anchors the next group.
    let (first, others) = (rest[0], &rest[1..]);
    for combo in combinations(others, p - 1) {
        let mut group = vec![first];
        group.extend(&combo);
        let left: Vec<usize> = others
            .iter()
            .copied()
            .filter(|x| !combo.contains(x))
            .collect();
        acc.push(group);
        partitions(&left, p, acc, out);
        acc.pop();
    }
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut with: Vec<Vec<usize>> = combinations(&items[1..], k - 1)
        .into_iter()
        .map(|mut c| {
            c.insert(0, items[0]);
            c
        })
        .collect();
    with.extend(combinations(&items[1..], k));
    with
}

fn meets_twice(weeks: &[Vec<Vec<usize>>], candidate: &[Vec<usize>]) -> bool {
    candidate.iter().any(|g| {
        weeks.iter().any(|week| {
            week.iter()
                .any(|h| g.iter().filter(|x| h.contains(x)).count() >= 2)
        })
    })
}

fn extend(
    options: &[Vec<Vec<usize>>],
    w: usize,
    acc: &mut Vec<Vec<Vec<usize>>>,
    out: &mut BTreeSet<Schedule>,
) {
    if acc.len() == w {
        out.insert(Schedule { weeks: acc.clone() }.canonical());
        return;
    }
    for week in options {
        if !meets_twice(acc, week) {
            acc.push(week.clone());
            extend(options, w, acc, out);
            acc.pop();
        }
    }
}

/// DE, TME and SCE on `config` decode to the same schedules, which are the
/// schedules found by direct search.
pub fn agreement(config: SgpConfig) -> Result<Vec<(String, usize, u64)>, String> {
    let expected = all_schedules(config);
    let mut rows = Vec::new();
    for v in [SgpVariant::DE, SgpVariant::TME, SgpVariant::SCE] {
        let (got, models) = decoded(config, v)?;
        if got != expected {
            return Err(format!(
                "{} {config}: {} schedules, direct search finds {}",
                v.name(),
                got.len(),
                expected.len()
            ));
        }
        rows.push((v.name(), got.len(), models));
    }
    Ok(rows)
}
