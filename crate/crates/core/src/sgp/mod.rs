//! Social Golfer Problem instances.
//!
//! `g` groups of `p` golfers play every week for `w` weeks; no two golfers
//! may share a group more than once. Three encodings are provided: a direct
//! one over position variables (DE), the same with per-group membership
//! auxiliaries (TME), and a set model compiled by the generic encoder (SCE).

mod decode;
mod direct;
mod sets;
mod verify;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cnf::{ClauseCounter, ClauseSink, CnfFormula, EncodingStats};
use crate::encoder::{encode_model, EncodeError};
use crate::model::ProblemModel;

pub use decode::{decode_schedule, DecodeError};
pub use direct::{build_de, build_tme, build_tme_sb, DirectLayout};
pub use sets::{apply_sbc, build_sbm_model, build_sce_model, sce_text};
pub use verify::{verify_schedule, Verdict};

/// Instance size `g-p-w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SgpConfig {
    pub groups: usize,
    pub group_size: usize,
    pub weeks: usize,
}

impl SgpConfig {
    pub fn new(groups: usize, group_size: usize, weeks: usize) -> Result<Self, SgpError> {
        if groups == 0 || group_size == 0 || weeks == 0 {
            return Err(SgpError::ZeroDimension);
        }
        Ok(Self {
            groups,
            group_size,
            weeks,
        })
    }

    /// Total number of golfers.
    pub fn players(&self) -> usize {
        self.groups * self.group_size
    }
}

impl fmt::Display for SgpConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{}", self.groups, self.group_size, self.weeks)
    }
}

impl FromStr for SgpConfig {
    type Err = SgpError;

    fn from_str(s: &str) -> Result<Self, SgpError> {
        let parts: Vec<usize> = s
            .split('-')
            .map(|x| {
                x.trim()
                    .parse()
                    .map_err(|_| SgpError::BadConfig(s.to_string()))
            })
            .collect::<Result<_, _>>()?;
        match parts[..] {
            [g, p, w] => Self::new(g, p, w),
            _ => Err(SgpError::BadConfig(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SgpError {
    #[error("g, p and w must all be at least 1")]
    ZeroDimension,
    #[error("expected g-p-w, got `{0}`")]
    BadConfig(String),
    #[error("{0}")]
    InvalidVariant(String),
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Encoding {
    De,
    Tme,
    Sce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    None,
    /// Ordering clauses on top of TME.
    TmeSb,
    /// Membership constraints added to the set model.
    Constraints,
    /// Set model with fixed first week and reduced supports.
    Model,
}

/// How the set model forbids two golfers from meeting twice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Socialization {
    /// One clause per pair of golfers and pair of groups.
    #[default]
    Implication,
    /// `|G ∩ H| <= 1` through an explicit intersection set.
    Cardinality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SgpVariant {
    pub encoding: Encoding,
    pub symmetry: Symmetry,
    pub socialization: Socialization,
}

impl SgpVariant {
    pub fn new(
        encoding: Encoding,
        symmetry: Symmetry,
        socialization: Socialization,
    ) -> Result<Self, SgpError> {
        let ok = match symmetry {
            Symmetry::None => true,
            Symmetry::TmeSb => encoding == Encoding::Tme,
            Symmetry::Constraints | Symmetry::Model => encoding == Encoding::Sce,
        };
        if !ok {
            return Err(SgpError::InvalidVariant(format!(
                "symmetry breaking `{}` does not apply to {}",
                symmetry_name(symmetry),
                encoding_name(encoding)
            )));
        }
        if encoding != Encoding::Sce && socialization != Socialization::Implication {
            return Err(SgpError::InvalidVariant(
                "the socialization form only applies to the set model".into(),
            ));
        }
        Ok(Self {
            encoding,
            symmetry,
            socialization,
        })
    }

    pub const DE: Self = Self::fixed(Encoding::De, Symmetry::None);
    pub const TME: Self = Self::fixed(Encoding::Tme, Symmetry::None);
    pub const TME_SB: Self = Self::fixed(Encoding::Tme, Symmetry::TmeSb);
    pub const SCE: Self = Self::fixed(Encoding::Sce, Symmetry::None);
    pub const SCE_SBC: Self = Self::fixed(Encoding::Sce, Symmetry::Constraints);
    pub const SCE_SBM: Self = Self::fixed(Encoding::Sce, Symmetry::Model);

    const fn fixed(encoding: Encoding, symmetry: Symmetry) -> Self {
        Self {
            encoding,
            symmetry,
            socialization: Socialization::Implication,
        }
    }

    /// Table name, e.g. `TME^SB` or `SCE^SBM`.
    pub fn name(&self) -> String {
        let base = encoding_name(self.encoding);
        let sb = match self.symmetry {
            Symmetry::None => "",
            Symmetry::TmeSb => "^SB",
            Symmetry::Constraints => "^SBC",
            Symmetry::Model => "^SBM",
        };
        let card = match self.socialization {
            Socialization::Implication => "",
            Socialization::Cardinality => "(card)",
        };
        format!("{base}{sb}{card}")
    }
}

fn encoding_name(e: Encoding) -> &'static str {
    match e {
        Encoding::De => "DE",
        Encoding::Tme => "TME",
        Encoding::Sce => "SCE",
    }
}

fn symmetry_name(s: Symmetry) -> &'static str {
    match s {
        Symmetry::None => "none",
        Symmetry::TmeSb => "tme",
        Symmetry::Constraints => "constraints",
        Symmetry::Model => "model",
    }
}

/// A generated instance. Set-model variants keep the model they came from.
#[derive(Debug, Clone)]
pub struct Instance {
    pub formula: CnfFormula,
    pub model: Option<ProblemModel>,
}

/// The set model for a set-based variant.
pub fn set_model(config: SgpConfig, variant: SgpVariant) -> Option<ProblemModel> {
    match (variant.encoding, variant.symmetry) {
        (Encoding::Sce, Symmetry::None) => Some(build_sce_model(config, variant.socialization)),
        (Encoding::Sce, Symmetry::Constraints) => Some(apply_sbc(
            &build_sce_model(config, variant.socialization),
            config,
        )),
        (Encoding::Sce, Symmetry::Model) => Some(build_sbm_model(config, variant.socialization)),
        _ => None,
    }
}

/// Generates the clauses of a direct variant into `sink`. Returns false for
/// set-based variants, which go through [`encode_model`].
pub fn build_direct<S: ClauseSink + ?Sized>(
    config: SgpConfig,
    variant: SgpVariant,
    sink: &mut S,
) -> bool {
    match (variant.encoding, variant.symmetry) {
        (Encoding::De, _) => build_de(config, sink),
        (Encoding::Tme, Symmetry::TmeSb) => build_tme_sb(config, sink),
        (Encoding::Tme, _) => build_tme(config, sink),
        (Encoding::Sce, _) => return false,
    }
    true
}

pub fn build_instance(config: SgpConfig, variant: SgpVariant) -> Result<Instance, SgpError> {
    if let Some(model) = set_model(config, variant) {
        let formula = encode_model(&model)?;
        return Ok(Instance {
            formula,
            model: Some(model),
        });
    }
    let mut formula = CnfFormula::new();
    build_direct(config, variant, &mut formula);
    Ok(Instance {
        formula,
        model: None,
    })
}

/// Size of an instance. Direct variants are counted without storing clauses.
pub fn instance_stats(config: SgpConfig, variant: SgpVariant) -> Result<EncodingStats, SgpError> {
    if let Some(model) = set_model(config, variant) {
        return Ok(encode_model(&model)?.stats());
    }
    let mut counter = ClauseCounter::new();
    build_direct(config, variant, &mut counter);
    Ok(counter.into_stats())
}

/// A schedule: `weeks[w][g]` lists the (1-based) golfers of group `g` in week
/// `w`, in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Schedule {
    pub weeks: Vec<Vec<Vec<usize>>>,
}

impl Schedule {
    /// Same schedule with groups sorted within each week, so that schedules
    /// differing only by group numbering compare equal.
    pub fn canonical(&self) -> Schedule {
        let mut weeks = self.weeks.clone();
        for week in &mut weeks {
            for group in week.iter_mut() {
                group.sort_unstable();
            }
            week.sort();
        }
        Schedule { weeks }
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, week) in self.weeks.iter().enumerate() {
            write!(f, "week {}:", i + 1)?;
            for group in week {
                let names: Vec<String> = group.iter().map(|p| p.to_string()).collect();
                write!(f, " [{}]", names.join(" "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
