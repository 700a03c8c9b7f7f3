mod common;

use common::propagation::{
    idempotent, random_equisat, random_formula, sbc_units_vanish, sgp_idempotence,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use setsat::report::reference_configs;
use setsat::{encode_model, parse_model, unit_propagate, SimplifyStatus};

#[test]
fn thousand_random_formulas() {
    let sat = random_equisat(1000, 7).unwrap_or_else(|e| panic!("{e}"));
    // Both outcomes should be exercised.
    assert!(sat > 50 && sat < 950, "{sat} satisfiable");
}

#[test]
fn generated_instances_are_fixpoints_after_one_pass() {
    sgp_idempotence().unwrap_or_else(|e| panic!("{e}"));
}

#[test]
fn sbc_membership_units_disappear() {
    for config in reference_configs() {
        let added = sbc_units_vanish(config).unwrap_or_else(|e| panic!("{e}"));
        let expected = config.players() + (config.weeks - 1) * config.group_size.min(config.groups);
        assert_eq!(added, expected, "{config}");
    }
}

#[test]
fn contradictory_membership_is_refuted() {
    let m = parse_model("universe a b c;\nset F support {a b};\nconstraint c in F;").unwrap();
    let s = unit_propagate(&encode_model(&m).unwrap());
    assert_eq!(s.status(), SimplifyStatus::ProvedUnsat);
    assert!(s.formula.has_empty_clause());
}

proptest! {
    #[test]
    fn random_formulas_are_idempotent(seed in any::<u64>()) {
        let f = random_formula(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(idempotent(&f), Ok(()));
    }
}
