//! Every constraint kind against brute-force set semantics, over all
//! support choices on a four-element universe.

mod common;

use common::oracle::{check_kind, kinds};

fn run(name: &str) {
    let kind = kinds()
        .into_iter()
        .find(|k| k.name == name)
        .expect("known kind");
    let cases = check_kind(&kind).unwrap_or_else(|e| panic!("{e}"));
    assert!(cases > 0);
}

macro_rules! kind_tests {
    ($($test:ident => $name:literal),* $(,)?) => {
        $(#[test] fn $test() { run($name); })*
    };
}

kind_tests! {
    member => "member",
    not_member => "not-member",
    equal => "equal",
    not_equal => "not-equal",
    subset => "subset",
    overlap => "overlap",
    empty_intersection_pair => "empty-intersection-2",
    empty_intersection_triple => "empty-intersection-3",
    intersection => "intersection",
    union => "union",
    difference => "difference",
    multi_union => "multi-union",
    multi_intersection => "multi-intersection",
    card_eq => "card-eq",
    card_atmost => "card-atmost",
    constant => "constant",
}

#[test]
fn every_kind_is_covered() {
    let names: Vec<&str> = kinds().iter().map(|k| k.name).collect();
    assert_eq!(names.len(), 16);
}
