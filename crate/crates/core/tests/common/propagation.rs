//! Unit propagation: equisatisfiability, model extension, idempotence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use setsat::report::reference_configs;
use setsat::sgp::{build_instance, SgpConfig, SgpVariant};
use setsat::solver::enumerate_models;
use setsat::{
    check_model, solve_internal, unit_propagate, Budget, ClauseSink, CnfFormula, Lit,
    SimplifyStatus, SolveStatus, VariableOrigin,
};

/// Random formula over at most 20 variables. Short clauses are common so
/// that propagation has work to do.
pub fn random_formula(rng: &mut ChaCha8Rng) -> CnfFormula {
    let vars: usize = rng.gen_range(1..=20);
    let clauses = rng.gen_range(0..=4 * vars);
    let mut f = CnfFormula::new();
    for _ in 0..vars {
        f.new_var(VariableOrigin::Anonymous);
    }
    for _ in 0..clauses {
        let len = match rng.gen_range(0..10) {
            0..=1 => 1,
            2..=4 => 2,
            5..=8 => 3,
            _ => 4,
        };
        let lits: Vec<Lit> = (0..len)
            .map(|_| {
                let v = rng.gen_range(1..=vars as i32);
                Lit::from_dimacs(if rng.gen_bool(0.5) { v } else { -v })
            })
            .collect();
        f.add_clause(&lits);
    }
    f
}

fn satisfiable_by_enumeration(f: &CnfFormula) -> bool {
    enumerate_models(f, |_| false) > 0
}

/// Runs `count` random formulas. The original and the residual must agree
/// on satisfiability according to the internal solver and to enumeration,
/// and a residual model must extend to a model of the original.
pub fn random_equisat(count: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sat = 0;
    for i in 0..count {
        let f = random_formula(&mut rng);
        let s = unit_propagate(&f);
        let original = solve_internal(&f, Budget::unlimited());
        let expect = satisfiable_by_enumeration(&f);
        if (original.status == SolveStatus::Sat) != expect {
            return Err(format!(
                "formula {i}: solver says {}, enumeration {expect}",
                original.status
            ));
        }
        let residual = solve_internal(&s.formula, Budget::unlimited());
        match (s.status(), residual.status) {
            (SimplifyStatus::ProvedUnsat, _) if expect => {
                return Err(format!(
                    "formula {i}: propagation refuted a satisfiable formula"
                ))
            }
            (SimplifyStatus::ProvedUnsat, SolveStatus::Unsat) => {}
            (SimplifyStatus::Simplified, SolveStatus::Sat) => {
                if !expect {
                    return Err(format!("formula {i}: residual sat, original unsat"));
                }
                let m = residual.model.expect("sat result has a model");
                let full = s
                    .extend_model(&m)
                    .map_err(|e| format!("formula {i}: {e}"))?;
                if check_model(&f, &full) != Ok(true) {
                    return Err(format!(
                        "formula {i}: extended model falsifies the original"
                    ));
                }
                sat += 1;
            }
            (SimplifyStatus::Simplified, SolveStatus::Unsat) if !expect => {}
            (st, rs) => {
                return Err(format!(
                    "formula {i}: propagation {st}, residual {rs}, sat {expect}"
                ))
            }
        }
    }
    Ok(sat)
}

fn same_clauses(a: &CnfFormula, b: &CnfFormula) -> bool {
    a.num_vars() == b.num_vars()
        && a.num_clauses() == b.num_clauses()
        && a.clauses().zip(b.clauses()).all(|(x, y)| x == y)
}

/// Propagating a residual again fixes nothing and renames nothing.
pub fn idempotent(f: &CnfFormula) -> Result<(), String> {
    let once = unit_propagate(f);
    if once.status() == SimplifyStatus::ProvedUnsat {
        return Ok(());
    }
    let twice = unit_propagate(&once.formula);
    let r = &twice.reconstruction;
    if !r.fixed().is_empty() {
        return Err(format!("second pass fixed {} variables", r.fixed().len()));
    }
    if r.renaming().iter().any(|(a, b)| a != b) || r.residual_vars() != once.formula.num_vars() {
        return Err("second pass renamed variables".into());
    }
    if !same_clauses(&once.formula, &twice.formula) {
        return Err("second pass changed the clauses".into());
    }
    Ok(())
}

/// Instances checked for idempotence: every variant on every reference
/// configuration, except DE beyond the two smallest (its clause lists are
/// too large to store).
pub fn sgp_jobs() -> Vec<(SgpConfig, SgpVariant)> {
    let mut jobs = Vec::new();
    for (i, c) in reference_configs().into_iter().enumerate() {
        let variants: &[SgpVariant] = if i < 2 {
            &[
                SgpVariant::DE,
                SgpVariant::TME,
                SgpVariant::TME_SB,
                SgpVariant::SCE,
                SgpVariant::SCE_SBC,
                SgpVariant::SCE_SBM,
            ]
        } else {
            &[
                SgpVariant::TME,
                SgpVariant::TME_SB,
                SgpVariant::SCE,
                SgpVariant::SCE_SBC,
                SgpVariant::SCE_SBM,
            ]
        };
        jobs.extend(variants.iter().map(|&v| (c, v)));
    }
    jobs
}

pub fn sgp_idempotence() -> Result<usize, String> {
    use rayon::prelude::*;
    let jobs = sgp_jobs();
    jobs.par_iter()
        .map(|&(c, v)| {
            let inst = build_instance(c, v).map_err(|e| e.to_string())?;
            idempotent(&inst.formula).map_err(|e| format!("{} {c}: {e}", v.name()))
        })
        .collect::<Result<Vec<()>, String>>()?;
    Ok(jobs.len())
}

/// The membership units added by symmetry breaking are all satisfied and
/// removed, and the residual has no unit clauses left.
pub fn sbc_units_vanish(config: SgpConfig) -> Result<usize, String> {
    let inst = build_instance(config, SgpVariant::SCE_SBC).map_err(|e| e.to_string())?;
    let added: usize = inst
        .formula
        .stats()
        .per_group
        .iter()
        .filter(|(l, _)| l.ends_with(":member"))
        .map(|(_, n)| n)
        .sum();
    let s = unit_propagate(&inst.formula);
    if s.status() != SimplifyStatus::Simplified {
        return Err(format!("{config}: propagation refuted SBC"));
    }
    let stats = s.formula.stats();
    let left: usize = stats
        .per_group
        .iter()
        .filter(|(l, _)| l.ends_with(":member"))
        .map(|(_, n)| n)
        .sum();
    if left != 0 || stats.unit != 0 {
        return Err(format!(
            "{config}: {left} membership clauses and {} units remain",
            stats.unit
        ));
    }
    Ok(added)
}
