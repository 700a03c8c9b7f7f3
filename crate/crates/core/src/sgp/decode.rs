//! Reading a schedule back out of a satisfying assignment.

use thiserror::Error;

use super::{Encoding, Schedule, SgpConfig, SgpVariant, Symmetry};
use crate::cnf::VariableOrigin;
use crate::solver::Model;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("model has {got} variables, variable map has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("week {week} group {group} position {position} holds golfers {first} and {second}")]
    PositionConflict {
        week: usize,
        group: usize,
        position: usize,
        first: usize,
        second: usize,
    },
    #[error("week {week} group {group} position {position} is empty")]
    EmptyPosition {
        week: usize,
        group: usize,
        position: usize,
    },
    #[error("week {week} group {group} is empty")]
    EmptyGroup { week: usize, group: usize },
    #[error("variable {0} lies outside the instance")]
    OutOfRange(String),
    #[error("no group variables found; the variable map does not match the variant")]
    NoGroupVariables,
}

fn parse_group(name: &str) -> Option<(usize, usize)> {
    let rest = name.strip_prefix("G_")?;
    let (w, g) = rest.split_once('_')?;
    Some((w.parse().ok()?, g.parse().ok()?))
}

fn parse_player(label: &str) -> Option<usize> {
    label.strip_prefix('p')?.parse().ok()
}

/// Builds the schedule encoded by `model`. `origins[i]` describes variable
/// `i + 1`; it comes from the formula or from a saved variable map.
pub fn decode_schedule(
    variant: SgpVariant,
    config: SgpConfig,
    model: &Model,
    origins: &[VariableOrigin],
) -> Result<Schedule, DecodeError> {
    if model.len() != origins.len() {
        return Err(DecodeError::LengthMismatch {
            expected: origins.len(),
            got: model.len(),
        });
    }
    let (g, p, w, q) = (
        config.groups,
        config.group_size,
        config.weeks,
        config.players(),
    );
    let mut weeks = vec![vec![Vec::new(); g]; w];
    let mut seen_any = false;
    let in_range = |player: usize, group: usize, week: usize| {
        (1..=q).contains(&player) && (1..=g).contains(&group) && (1..=w).contains(&week)
    };

    match variant.encoding {
        Encoding::De | Encoding::Tme => {
            let mut slots: Vec<Option<usize>> = vec![None; w * g * p];
            for (origin, &value) in origins.iter().zip(model.values()) {
                let VariableOrigin::DePosition {
                    player,
                    position,
                    group,
                    week,
                } = *origin
                else {
                    continue;
                };
                seen_any = true;
                if !in_range(player, group, week) || !(1..=p).contains(&position) {
                    return Err(DecodeError::OutOfRange(origin.to_string()));
                }
                if !value {
                    continue;
                }
                let slot = &mut slots[((week - 1) * g + group - 1) * p + position - 1];
                if let Some(first) = *slot {
                    return Err(DecodeError::PositionConflict {
                        week,
                        group,
                        position,
                        first,
                        second: player,
                    });
                }
                *slot = Some(player);
            }
            if !seen_any {
                return Err(DecodeError::NoGroupVariables);
            }
            for week in 1..=w {
                for group in 1..=g {
                    for position in 1..=p {
                        match slots[((week - 1) * g + group - 1) * p + position - 1] {
                            Some(player) => weeks[week - 1][group - 1].push(player),
                            None => {
                                return Err(DecodeError::EmptyPosition {
                                    week,
                                    group,
                                    position,
                                })
                            }
                        }
                    }
                }
            }
        }
        Encoding::Sce => {
            for (origin, &value) in origins.iter().zip(model.values()) {
                let VariableOrigin::Support { set, element } = origin else {
                    continue;
                };
                let Some((week, group)) = parse_group(set) else {
                    continue;
                };
                seen_any = true;
                let player = parse_player(element).unwrap_or(0);
                if !in_range(player, group, week) {
                    return Err(DecodeError::OutOfRange(origin.to_string()));
                }
                if value {
                    weeks[week - 1][group - 1].push(player);
                }
            }
            if !seen_any {
                return Err(DecodeError::NoGroupVariables);
            }
            if variant.symmetry == Symmetry::Model {
                for week in weeks.iter_mut().skip(1) {
                    for (j, group) in week.iter_mut().enumerate().take(p.min(g)) {
                        group.push(j + 1);
                    }
                }
            }
        }
    }

    for (wi, week) in weeks.iter_mut().enumerate() {
        for (gi, group) in week.iter_mut().enumerate() {
            if group.is_empty() {
                return Err(DecodeError::EmptyGroup {
                    week: wi + 1,
                    group: gi + 1,
                });
            }
            group.sort_unstable();
        }
    }
    Ok(Schedule { weeks })
}
