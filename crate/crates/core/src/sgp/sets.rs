//! The set model, written out as DSL text and parsed back.
//!
//! Golfers are `p1..pq`. `G_w_g` is group `g` of week `w` and `W_w` the
//! golfers playing in week `w`. Overlap-form intersections are `I_a_b_c_d`.

use super::{SgpConfig, Socialization, Symmetry};
use crate::model::{Constraint, ProblemModel};
use crate::parser::parse_model;

fn players(range: impl Iterator<Item = usize>) -> String {
    range.map(|i| format!("p{i}")).collect::<Vec<_>>().join(" ")
}

fn group(w: usize, g: usize) -> String {
    format!("G_{w}_{g}")
}

struct Text {
    out: String,
    social: Socialization,
}

impl Text {
    fn line(&mut self, s: impl AsRef<str>) {
        self.out.push_str(s.as_ref());
        self.out.push('\n');
    }

    /// Week `w` covers exactly `members` (given as a support literal).
    fn week_cover(&mut self, config: SgpConfig, w: usize, members: &str) {
        self.line(format!("set W_{w} support {{{members}}};"));
        self.line(format!("constraint W_{w} == {{{members}}};"));
        let groups: Vec<String> = (1..=config.groups).map(|g| group(w, g)).collect();
        if groups.len() == 1 {
            self.line(format!("constraint {} == W_{w};", groups[0]));
        } else {
            self.line(format!("constraint union({}) == W_{w};", groups.join(", ")));
        }
    }

    /// The two groups share at most one golfer. `support` is used for the
    /// intersection set of the cardinality form.
    fn meet_once(&mut self, a: (usize, usize), b: (usize, usize), support: &str) {
        let (ga, gb) = (group(a.0, a.1), group(b.0, b.1));
        match self.social {
            Socialization::Implication => {
                self.line(format!("constraint overlap({ga}, {gb}) <= 1;"))
            }
            Socialization::Cardinality => {
                let i = format!("I_{}_{}_{}_{}", a.0, a.1, b.0, b.1);
                self.line(format!("set {i} support {{{support}}};"));
                self.line(format!("constraint inter({ga}, {gb}) == {i};"));
                self.line(format!("constraint card {i} <= 1;"));
            }
        }
    }
}

/// DSL text of a set-model variant. `symmetry` must be `None`,
/// `Constraints` or `Model`.
pub fn sce_text(config: SgpConfig, symmetry: Symmetry, social: Socialization) -> String {
    let mut t = Text {
        out: String::new(),
        social,
    };
    let (g, p, w, q) = (
        config.groups,
        config.group_size,
        config.weeks,
        config.players(),
    );
    let all = players(1..=q);
    t.line(format!("universe {all};"));
    if symmetry == Symmetry::Model {
        sbm_body(&mut t, config);
        return t.out;
    }
    for wk in 1..=w {
        for k in 1..=g {
            t.line(format!("set {} support {{{all}}};", group(wk, k)));
        }
    }
    for wk in 1..=w {
        for k in 1..=g {
            t.line(format!("constraint card {} == {p};", group(wk, k)));
        }
    }
    for wk in 1..=w {
        t.week_cover(config, wk, &all);
    }
    // Every pair of groups from different weeks. Restricting to g1 >= g2
    // would let a pair meet in G_{w1,1} and G_{w2,2}.
    for w1 in 1..=w {
        for w2 in 1..w1 {
            for g1 in 1..=g {
                for g2 in 1..=g {
                    t.meet_once((w1, g1), (w2, g2), &all);
                }
            }
        }
    }
    if symmetry == Symmetry::Constraints {
        for (i, j) in sbc_members(config) {
            let (wk, k) = j;
            t.line(format!("constraint p{i} in {};", group(wk, k)));
        }
    }
    t.out
}

/// `(golfer, (week, group))` placements added by membership symmetry
/// breaking: the first week is filled in order, and golfer `j <= min(p, g)`
/// plays in group `j` every later week.
fn sbc_members(config: SgpConfig) -> Vec<(usize, (usize, usize))> {
    let (g, p, w, q) = (
        config.groups,
        config.group_size,
        config.weeks,
        config.players(),
    );
    let mut out: Vec<_> = (1..=q).map(|i| (i, (1, i.div_ceil(p)))).collect();
    for wk in 2..=w {
        for j in 1..=p.min(g) {
            out.push((j, (wk, j)));
        }
    }
    out
}

fn sbm_body(t: &mut Text, config: SgpConfig) {
    let (g, p, w, q) = (
        config.groups,
        config.group_size,
        config.weeks,
        config.players(),
    );
    let m = p.min(g);
    let rest = players(m + 1..=q);
    let first_week = |k: usize| players((k - 1) * p + 1..=k * p);
    for k in 1..=g {
        t.line(format!(
            "set {} support {{{}}};",
            group(1, k),
            first_week(k)
        ));
    }
    for wk in 2..=w {
        for k in 1..=g {
            t.line(format!("set {} support {{{rest}}};", group(wk, k)));
        }
    }
    for k in 1..=g {
        t.line(format!(
            "constraint {} == {{{}}};",
            group(1, k),
            first_week(k)
        ));
    }
    for k in 1..=g {
        t.line(format!("constraint card {} == {p};", group(1, k)));
    }
    for wk in 2..=w {
        for k in 1..=g {
            let size = if k <= m { p - 1 } else { p };
            t.line(format!("constraint card {} == {size};", group(wk, k)));
        }
    }
    for wk in 2..=w {
        t.week_cover(config, wk, &rest);
    }
    // Groups k <= m share golfer p_k in every later week, so nobody else
    // may be in both.
    for w1 in 2..=w {
        for w2 in 2..w1 {
            for k in 1..=m {
                t.line(format!(
                    "constraint inter({}, {}) == {{}};",
                    group(w1, k),
                    group(w2, k)
                ));
            }
        }
    }
    // First-week groups against later weeks. Group 1 of week 1 only matters
    // when g < p, where it makes the instance unsatisfiable.
    let first = if g < p { 1 } else { 2 };
    for g1 in first..=g {
        for w1 in 2..=w {
            for g2 in 1..=g {
                let support = players((g1 - 1) * p + 1..=g1 * p);
                t.meet_once((1, g1), (w1, g2), &support);
            }
        }
    }
    for w1 in 2..=w {
        for w2 in 2..w1 {
            for k in m + 1..=g {
                t.meet_once((w1, k), (w2, k), &rest);
            }
        }
    }
    for w1 in 2..=w {
        for w2 in 2..w1 {
            for g1 in 1..=g {
                for g2 in 1..=g {
                    if g1 != g2 {
                        t.meet_once((w1, g1), (w2, g2), &rest);
                    }
                }
            }
        }
    }
}

fn parse(text: &str) -> ProblemModel {
    parse_model(text).expect("generated set model is valid")
}

/// Plain set model: group sizes, weekly cover and socialization.
pub fn build_sce_model(config: SgpConfig, social: Socialization) -> ProblemModel {
    parse(&sce_text(config, Symmetry::None, social))
}

/// Adds the membership symmetry-breaking constraints to a model built by
/// [`build_sce_model`].
pub fn apply_sbc(model: &ProblemModel, config: SgpConfig) -> ProblemModel {
    let mut out = model.clone();
    for (i, (wk, k)) in sbc_members(config) {
        let element = out
            .universe()
            .lookup(&format!("p{i}"))
            .expect("golfer in universe");
        let set = out.set_id(&group(wk, k)).expect("group declared");
        out.add_constraint(Constraint::Member {
            element,
            set,
            positive: true,
        })
        .expect("valid member constraint");
    }
    out
}

/// Set model with the first week fixed and the first `min(p, g)` golfers
/// pinned to their groups in later weeks. Later-week sets hold the other
/// golfers only; decoding adds the pinned golfer back.
pub fn build_sbm_model(config: SgpConfig, social: Socialization) -> ProblemModel {
    parse(&sce_text(config, Symmetry::Model, social))
}
