//! Encoding-independent schedule checker.

use std::collections::HashMap;
use std::fmt;

use super::{Schedule, SgpConfig};

/// Outcome of [`verify_schedule`]: empty when the schedule is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Verdict {
    pub violations: Vec<String>,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("VALID");
        }
        write!(f, "INVALID: {}", self.violations.join("; "))
    }
}

/// Checks that every week splits all golfers into `g` groups of `p`, and
/// that no pair of golfers shares a group twice.
pub fn verify_schedule(config: SgpConfig, schedule: &Schedule) -> Verdict {
    let (g, p, w, q) = (
        config.groups,
        config.group_size,
        config.weeks,
        config.players(),
    );
    let mut v = Vec::new();
    if schedule.weeks.len() != w {
        v.push(format!(
            "expected {w} weeks, found {}",
            schedule.weeks.len()
        ));
    }
    let mut met: HashMap<(usize, usize), usize> = HashMap::new();
    for (wi, week) in schedule.weeks.iter().enumerate() {
        let wn = wi + 1;
        if week.len() != g {
            v.push(format!(
                "week {wn}: expected {g} groups, found {}",
                week.len()
            ));
        }
        let mut plays = vec![0usize; q + 1];
        for (gi, group) in week.iter().enumerate() {
            if group.len() != p {
                v.push(format!(
                    "group size: week {wn} group {} has {} golfers",
                    gi + 1,
                    group.len()
                ));
            }
            for &a in group {
                if a == 0 || a > q {
                    v.push(format!("week {wn}: unknown golfer {a}"));
                    continue;
                }
                plays[a] += 1;
            }
            for (i, &a) in group.iter().enumerate() {
                for &b in &group[..i] {
                    let key = (a.min(b), a.max(b));
                    let first = *met.entry(key).or_insert(wn);
                    if first != wn {
                        v.push(format!(
                            "pair meets twice: {} and {} in weeks {first} and {wn}",
                            key.0, key.1
                        ));
                    }
                }
            }
        }
        for (player, &n) in plays.iter().enumerate().skip(1) {
            if n != 1 {
                v.push(format!("week {wn}: golfer {player} plays {n} times"));
            }
        }
    }
    Verdict { violations: v }
}
