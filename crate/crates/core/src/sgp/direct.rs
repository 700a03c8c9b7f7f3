//! Direct encodings over position variables.
//!
//! `pos(i, j, k, l)` is true when golfer `i` is the `j`-th member of group `k`
//! in week `l`. TME adds `member(i, k, l)`, true when golfer `i` plays in
//! group `k` in week `l` at any position.

use super::SgpConfig;
use crate::cnf::{ClauseSink, Lit, Var, VariableOrigin};

/// Variable numbering shared by the direct builders and the decoder. All
/// indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectLayout {
    q: usize,
    p: usize,
    g: usize,
    w: usize,
}

impl DirectLayout {
    pub fn new(config: SgpConfig) -> Self {
        Self {
            q: config.players(),
            p: config.group_size,
            g: config.groups,
            w: config.weeks,
        }
    }

    pub fn position_vars(&self) -> usize {
        self.q * self.p * self.g * self.w
    }

    pub fn member_vars(&self) -> usize {
        self.q * self.g * self.w
    }

    #[inline]
    pub fn pos(&self, player: usize, position: usize, group: usize, week: usize) -> Var {
        let id = (((week - 1) * self.g + group - 1) * self.p + position - 1) * self.q + player;
        Var::new(id as u32)
    }

    #[inline]
    pub fn member(&self, player: usize, group: usize, week: usize) -> Var {
        let id = self.position_vars() + ((week - 1) * self.g + group - 1) * self.q + player;
        Var::new(id as u32)
    }

    fn allocate_positions<S: ClauseSink + ?Sized>(&self, sink: &mut S) {
        assert_eq!(sink.num_vars(), 0, "direct builders need a fresh sink");
        for week in 1..=self.w {
            for group in 1..=self.g {
                for position in 1..=self.p {
                    for player in 1..=self.q {
                        let v = sink.new_var(VariableOrigin::DePosition {
                            player,
                            position,
                            group,
                            week,
                        });
                        debug_assert_eq!(v, self.pos(player, position, group, week));
                    }
                }
            }
        }
    }

    fn allocate_members<S: ClauseSink + ?Sized>(&self, sink: &mut S) {
        for week in 1..=self.w {
            for group in 1..=self.g {
                for player in 1..=self.q {
                    let v = sink.new_var(VariableOrigin::TmeAux {
                        player,
                        group,
                        week,
                    });
                    debug_assert_eq!(v, self.member(player, group, week));
                }
            }
        }
    }
}

/// Rules shared by DE and TME: every golfer plays, at most once per group,
/// in one group per week, and every position holds exactly one golfer.
/// `full_pairs` selects all position pairs across two groups instead of the
/// triangular range.
fn base_rules<S: ClauseSink + ?Sized>(l: &DirectLayout, full_pairs: bool, sink: &mut S) {
    let (q, p, g, w) = (l.q, l.p, l.g, l.w);

    sink.begin_group("plays-every-week");
    let mut buf: Vec<Lit> = Vec::with_capacity(p * g.max(q));
    for i in 1..=q {
        for wk in 1..=w {
            buf.clear();
            for j in 1..=p {
                for k in 1..=g {
                    buf.push(l.pos(i, j, k, wk).pos());
                }
            }
            sink.add_clause(&buf);
        }
    }

    sink.begin_group("one-position-per-group");
    for i in 1..=q {
        for wk in 1..=w {
            for j in 1..=p {
                for k in 1..=g {
                    for j2 in j + 1..=p {
                        sink.add_clause(&[l.pos(i, j, k, wk).neg(), l.pos(i, j2, k, wk).neg()]);
                    }
                }
            }
        }
    }

    sink.begin_group("one-group-per-week");
    for i in 1..=q {
        for wk in 1..=w {
            for j in 1..=p {
                for k in 1..=g {
                    for k2 in k + 1..=g {
                        let from = if full_pairs { 1 } else { j + 1 };
                        for j2 in from..=p {
                            sink.add_clause(&[
                                l.pos(i, j, k, wk).neg(),
                                l.pos(i, j2, k2, wk).neg(),
                            ]);
                        }
                    }
                }
            }
        }
    }

    sink.begin_group("position-filled");
    for wk in 1..=w {
        for j in 1..=p {
            for k in 1..=g {
                buf.clear();
                buf.extend((1..=q).map(|i| l.pos(i, j, k, wk).pos()));
                sink.add_clause(&buf);
            }
        }
    }

    sink.begin_group("position-unique");
    for wk in 1..=w {
        for j in 1..=p {
            for k in 1..=g {
                for i in 1..=q {
                    for i2 in i + 1..=q {
                        sink.add_clause(&[l.pos(i, j, k, wk).neg(), l.pos(i2, j, k, wk).neg()]);
                    }
                }
            }
        }
    }
}

/// Direct encoding: position variables only.
pub fn build_de<S: ClauseSink + ?Sized>(config: SgpConfig, sink: &mut S) {
    let l = DirectLayout::new(config);
    l.allocate_positions(sink);
    base_rules(&l, false, sink);

    // Two golfers who meet in week w1 cannot meet in a later week w2,
    // whatever positions they hold.
    sink.begin_group("socialization");
    let (q, p, g, w) = (l.q, l.p, l.g, l.w);
    for w1 in 1..=w {
        for g1 in 1..=g {
            for w2 in w1 + 1..=w {
                for g2 in 1..=g {
                    for i in 1..=q {
                        for i2 in i + 1..=q {
                            for a in 1..=p {
                                let x = l.pos(i, a, g1, w1).neg();
                                for b in 1..=p {
                                    let y = l.pos(i2, b, g1, w1).neg();
                                    for c in 1..=p {
                                        let z = l.pos(i, c, g2, w2).neg();
                                        for d in 1..=p {
                                            sink.add_clause(&[x, y, z, l.pos(i2, d, g2, w2).neg()]);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Triska-Musliu encoding: membership auxiliaries carry the socialization
/// rule, and position pairs across groups use the full range.
pub fn build_tme<S: ClauseSink + ?Sized>(config: SgpConfig, sink: &mut S) {
    let l = DirectLayout::new(config);
    l.allocate_positions(sink);
    l.allocate_members(sink);
    base_rules(&l, true, sink);
    let (q, p, g, w) = (l.q, l.p, l.g, l.w);

    sink.begin_group("membership");
    let mut buf = Vec::with_capacity(p + 1);
    for i in 1..=q {
        for k in 1..=g {
            for wk in 1..=w {
                let m = l.member(i, k, wk);
                buf.clear();
                buf.push(m.neg());
                buf.extend((1..=p).map(|j| l.pos(i, j, k, wk).pos()));
                sink.add_clause(&buf);
                for j in 1..=p {
                    sink.add_clause(&[l.pos(i, j, k, wk).neg(), m.pos()]);
                }
            }
        }
    }

    sink.begin_group("socialization");
    for w1 in 1..=w {
        for g1 in 1..=g {
            for w2 in w1 + 1..=w {
                for g2 in 1..=g {
                    for i in 1..=q {
                        for i2 in i + 1..=q {
                            sink.add_clause(&[
                                l.member(i, g1, w1).neg(),
                                l.member(i2, g1, w1).neg(),
                                l.member(i, g2, w2).neg(),
                                l.member(i2, g2, w2).neg(),
                            ]);
                        }
                    }
                }
            }
        }
    }
}

/// TME with ordering clauses: positions inside a group, groups of a week by
/// their first golfer, and weeks by the second golfer of their first group.
/// The inner golfer index `m` runs up to and including `i`.
pub fn build_tme_sb<S: ClauseSink + ?Sized>(config: SgpConfig, sink: &mut S) {
    build_tme(config, sink);
    let l = DirectLayout::new(config);
    let (q, p, g, w) = (l.q, l.p, l.g, l.w);

    sink.begin_group("order-positions");
    for i in 1..=q {
        for j in 1..p {
            for k in 1..=g {
                for wk in 1..=w {
                    for m in 1..=i {
                        sink.add_clause(&[l.pos(i, j, k, wk).neg(), l.pos(m, j + 1, k, wk).neg()]);
                    }
                }
            }
        }
    }

    sink.begin_group("order-groups");
    for i in 1..=q {
        for k in 1..g {
            for wk in 1..=w {
                for m in 1..=i {
                    sink.add_clause(&[l.pos(i, 1, k, wk).neg(), l.pos(m, 1, k + 1, wk).neg()]);
                }
            }
        }
    }

    sink.begin_group("order-weeks");
    if p >= 2 {
        for i in 1..=q {
            for wk in 1..w {
                for m in 1..=i {
                    sink.add_clause(&[l.pos(i, 2, 1, wk).neg(), l.pos(m, 2, 1, wk + 1).neg()]);
                }
            }
        }
    }
}
