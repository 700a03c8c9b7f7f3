//! Brute-force set semantics against enumerated CNF models.
//!
//! A set value is a bitmask over a universe of at most four elements. For a
//! constraint over `s` sets every support choice (`16^s` of them) is tried;
//! the projection of the CNF models onto support variables must equal the
//! set of assignments that satisfy the constraint.

use std::collections::BTreeSet;

use rayon::prelude::*;
use setsat::solver::enumerate_models;
use setsat::{encode_model, Constraint, ElementId, ProblemModel, SetId, Universe, VariableOrigin};

pub const UNIVERSE: usize = 4;

type Assignment = Vec<u8>;

/// One constraint family: how many sets it uses, extra parameters, the
/// constraint builder and the reference semantics.
pub struct Kind {
    pub name: &'static str,
    pub sets: usize,
    /// Extra integer parameter values (element index, bound, constant mask).
    pub params: Vec<u32>,
    pub build: fn(&[SetId], u32) -> Option<Constraint>,
    pub holds: fn(&[u8], u32) -> bool,
}

fn ids(n: usize) -> Vec<SetId> {
    (0..n as u32).map(SetId).collect()
}

fn elems(mask: u32) -> Vec<ElementId> {
    (0..UNIVERSE as u32)
        .filter(|e| mask >> e & 1 == 1)
        .map(ElementId)
        .collect()
}

fn popcount(x: u8) -> u32 {
    x.count_ones()
}

pub fn kinds() -> Vec<Kind> {
    let all_masks: Vec<u32> = (0..1 << UNIVERSE).collect();
    let elements: Vec<u32> = (0..UNIVERSE as u32).collect();
    let bounds: Vec<u32> = (0..=UNIVERSE as u32 + 1).collect();
    vec![
        Kind {
            name: "member",
            sets: 1,
            params: elements.clone(),
            build: |s, e| {
                Some(Constraint::Member {
                    element: ElementId(e),
                    set: s[0],
                    positive: true,
                })
            },
            holds: |v, e| v[0] >> e & 1 == 1,
        },
        Kind {
            name: "not-member",
            sets: 1,
            params: elements,
            build: |s, e| {
                Some(Constraint::Member {
                    element: ElementId(e),
                    set: s[0],
                    positive: false,
                })
            },
            holds: |v, e| v[0] >> e & 1 == 0,
        },
        Kind {
            name: "equal",
            sets: 2,
            params: vec![0],
            build: |s, _| {
                Some(Constraint::Equal {
                    left: s[0],
                    right: s[1],
                    positive: true,
                })
            },
            holds: |v, _| v[0] == v[1],
        },
        Kind {
            name: "not-equal",
            sets: 2,
            params: vec![0],
            build: |s, _| {
                Some(Constraint::Equal {
                    left: s[0],
                    right: s[1],
                    positive: false,
                })
            },
            holds: |v, _| v[0] != v[1],
        },
        Kind {
            name: "subset",
            sets: 2,
            params: vec![0],
            build: |s, _| {
                Some(Constraint::Subset {
                    sub: s[0],
                    sup: s[1],
                })
            },
            holds: |v, _| v[0] & !v[1] == 0,
        },
        Kind {
            name: "overlap",
            sets: 2,
            params: vec![0],
            build: |s, _| {
                Some(Constraint::OverlapAtMostOne {
                    left: s[0],
                    right: s[1],
                })
            },
            holds: |v, _| popcount(v[0] & v[1]) <= 1,
        },
        Kind {
            name: "empty-intersection-2",
            sets: 2,
            params: vec![0],
            build: |s, _| Some(Constraint::EmptyIntersection { sets: s.to_vec() }),
            holds: |v, _| v[0] & v[1] == 0,
        },
        Kind {
            name: "empty-intersection-3",
            sets: 3,
            params: vec![0],
            build: |s, _| Some(Constraint::EmptyIntersection { sets: s.to_vec() }),
            holds: |v, _| v[0] & v[1] & v[2] == 0,
        },
        Kind {
            name: "intersection",
            sets: 3,
            params: vec![0],
            build: |s, _| {
                Some(Constraint::Intersection {
                    left: s[0],
                    right: s[1],
                    result: s[2],
                })
            },
            holds: |v, _| v[0] & v[1] == v[2],
        },
        Kind {
            name: "union",
            sets: 3,
            params: vec![0],
            build: |s, _| {
                Some(Constraint::Union {
                    left: s[0],
                    right: s[1],
                    result: s[2],
                })
            },
            holds: |v, _| v[0] | v[1] == v[2],
        },
        Kind {
            name: "difference",
            sets: 3,
            params: vec![0],
            build: |s, _| {
                Some(Constraint::Difference {
                    left: s[0],
                    right: s[1],
                    result: s[2],
                })
            },
            holds: |v, _| v[0] & !v[1] == v[2],
        },
        Kind {
            name: "multi-union",
            sets: 4,
            params: vec![0],
            build: |s, _| {
                Some(Constraint::MultiUnion {
                    sets: s[..3].to_vec(),
                    result: s[3],
                })
            },
            holds: |v, _| v[0] | v[1] | v[2] == v[3],
        },
        Kind {
            name: "multi-intersection",
            sets: 4,
            params: vec![0],
            build: |s, _| {
                Some(Constraint::MultiIntersection {
                    sets: s[..3].to_vec(),
                    result: s[3],
                })
            },
            holds: |v, _| v[0] & v[1] & v[2] == v[3],
        },
        Kind {
            name: "card-eq",
            sets: 1,
            params: bounds.clone(),
            build: |s, k| {
                Some(Constraint::CardinalityEq {
                    set: s[0],
                    k: k as usize,
                })
            },
            holds: |v, k| popcount(v[0]) == k,
        },
        Kind {
            name: "card-atmost",
            sets: 1,
            params: bounds,
            build: |s, k| {
                Some(Constraint::CardinalityAtMost {
                    set: s[0],
                    k: k as usize,
                })
            },
            holds: |v, k| popcount(v[0]) <= k,
        },
        Kind {
            name: "constant",
            sets: 1,
            params: all_masks,
            // Constants outside the support are rejected when the model is
            // built; the builder reports that case as `None`.
            build: |s, m| {
                Some(Constraint::ConstantAssign {
                    set: s[0],
                    elements: elems(m),
                })
            },
            holds: |v, m| v[0] as u32 == m,
        },
    ]
}

fn model_for(supports: &[u8], constraint: Constraint) -> Option<ProblemModel> {
    let labels: Vec<String> = (0..UNIVERSE).map(|i| format!("e{i}")).collect();
    let mut m = ProblemModel::new(Universe::new(labels).unwrap());
    for (i, &s) in supports.iter().enumerate() {
        m.declare_set(format!("S{i}"), elems(s as u32)).unwrap();
    }
    m.add_constraint(constraint).ok()?;
    Some(m)
}

/// Projected CNF solutions of `model`, one mask per set.
pub fn projected(model: &ProblemModel) -> BTreeSet<Assignment> {
    let f = encode_model(model).expect("encodes");
    // (variable index, set index, element bit)
    let support: Vec<(usize, usize, u8)> = f
        .origins()
        .iter()
        .enumerate()
        .filter_map(|(i, o)| match o {
            VariableOrigin::Support { set, element } => {
                Some((i, set[1..].parse().unwrap(), element[1..].parse().unwrap()))
            }
            _ => None,
        })
        .collect();
    let sets = model.sets().len();
    let mut out = BTreeSet::new();
    enumerate_models(&f, |m| {
        let mut a = vec![0u8; sets];
        for &(i, s, e) in &support {
            if m.values()[i] {
                a[s] |= 1 << e;
            }
        }
        out.insert(a);
        true
    });
    out
}

/// Assignments within the supports that satisfy `holds`.
pub fn brute_force(supports: &[u8], holds: impl Fn(&[u8]) -> bool) -> BTreeSet<Assignment> {
    let mut out = BTreeSet::new();
    let mut a = vec![0u8; supports.len()];
    loop {
        if holds(&a) {
            out.insert(a.clone());
        }
        // Next submask tuple, odometer style.
        let mut i = 0;
        loop {
            if i == a.len() {
                return out;
            }
            a[i] = next_submask(a[i], supports[i]);
            if a[i] != 0 {
                break;
            }
            i += 1;
        }
    }
}

/// Next submask of `sup` after `x` in increasing order, wrapping to 0.
fn next_submask(x: u8, sup: u8) -> u8 {
    (x.wrapping_sub(sup)) & sup
}

/// Compares one kind over every support choice and parameter. Returns the
/// number of cases checked.
pub fn check_kind(kind: &Kind) -> Result<usize, String> {
    let choices = 1usize << (UNIVERSE * kind.sets);
    (0..choices)
        .into_par_iter()
        .map(|code| {
            let supports: Vec<u8> = (0..kind.sets)
                .map(|i| (code >> (UNIVERSE * i) & 0xf) as u8)
                .collect();
            let mut n = 0;
            for &param in &kind.params {
                let Some(c) = (kind.build)(&ids(kind.sets), param) else {
                    continue;
                };
                let Some(model) = model_for(&supports, c) else {
                    continue;
                };
                let cnf = projected(&model);
                let bf = brute_force(&supports, |v| (kind.holds)(v, param));
                if cnf != bf {
                    return Err(format!(
                        "{}: supports {:?} param {param}: cnf {} vs brute force {} solutions",
                        kind.name,
                        supports,
                        cnf.len(),
                        bf.len()
                    ));
                }
                n += 1;
            }
            Ok(n)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

pub fn encoder_suite() -> Result<usize, String> {
    kinds().iter().map(check_kind).sum()
}
