//! Problem models over finite sets.
//!
//! A [`ProblemModel`] is a universe of constants, a list of set variables each
//! drawing its elements from a *support* (a subset of the universe), and a list
//! of constraints over those sets. Elements and sets are interned to dense
//! integer ids when the model is built; everything downstream is index based.
//!
//! Models are normally assembled from a [`ModelDraft`], which refers to sets
//! and elements by name and can be checked with [`validate`] before it is
//! turned into a model.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

/// Position of an element within its universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub u32);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Position of a set variable in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetId(pub u32);

impl SetId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Ordered, duplicate-free collection of element labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    labels: Vec<String>,
    lookup: HashMap<String, ElementId>,
}

impl Universe {
    pub fn new<I, S>(labels: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(ModelError::EmptyUniverse);
        }
        let mut lookup = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if lookup.insert(label.clone(), ElementId(i as u32)).is_some() {
                return Err(ModelError::DuplicateElement(label.clone()));
            }
        }
        Ok(Self { labels, lookup })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false: a universe has at least one element.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, id: ElementId) -> &str {
        &self.labels[id.index()]
    }

    pub fn lookup(&self, label: &str) -> Option<ElementId> {
        self.lookup.get(label).copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.labels.len() as u32).map(ElementId)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// A set variable `F` ranging over the subsets of its support.
///
/// The support is kept sorted by element index and free of duplicates, so two
/// variables declared with the same elements in different orders are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetVariable {
    name: String,
    support: Vec<ElementId>,
}

impl SetVariable {
    pub fn new(name: impl Into<String>, support: impl IntoIterator<Item = ElementId>) -> Self {
        let mut support: Vec<ElementId> = support.into_iter().collect();
        support.sort_unstable();
        support.dedup();
        Self {
            name: name.into(),
            support,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn support(&self) -> &[ElementId] {
        &self.support
    }

    pub fn contains(&self, element: ElementId) -> bool {
        self.support.binary_search(&element).is_ok()
    }
}

/// A set constraint, generic over how sets (`S`) and elements (`E`) are named.
///
/// Built models use interned ids; drafts use plain strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Constraint<S = SetId, E = ElementId> {
    /// `x ∈ F` (positive) or `x ∉ F`.
    Member { element: E, set: S, positive: bool },
    /// `F = G` (positive) or `F ≠ G`.
    Equal { left: S, right: S, positive: bool },
    /// `F ∩ G = H`.
    Intersection { left: S, right: S, result: S },
    /// `F1 ∩ … ∩ Fn = ∅`.
    EmptyIntersection { sets: Vec<S> },
    /// `F ∪ G = H`.
    Union { left: S, right: S, result: S },
    /// `F ⊆ G`.
    Subset { sub: S, sup: S },
    /// `H = F ∖ G`.
    Difference { left: S, right: S, result: S },
    /// `H = F1 ∪ … ∪ Fn`.
    MultiUnion { sets: Vec<S>, result: S },
    /// `H = F1 ∩ … ∩ Fn`.
    MultiIntersection { sets: Vec<S>, result: S },
    /// `|F| = k`.
    CardinalityEq { set: S, k: usize },
    /// `|F| ≤ k`.
    CardinalityAtMost { set: S, k: usize },
    /// `F = {e1, …, em}` for elements of the support of `F`.
    ConstantAssign { set: S, elements: Vec<E> },
    /// `|F ∩ G| ≤ 1`, stated pairwise: no two elements are in both sets.
    OverlapAtMostOne { left: S, right: S },
}

impl<S, E> Constraint<S, E> {
    /// Short name of the constraint kind, used to label clause groups.
    pub fn kind(&self) -> &'static str {
        match self {
            Constraint::Member { positive: true, .. } => "member",
            Constraint::Member {
                positive: false, ..
            } => "not-member",
            Constraint::Equal { positive: true, .. } => "equal",
            Constraint::Equal {
                positive: false, ..
            } => "not-equal",
            Constraint::Intersection { .. } => "intersection",
            Constraint::EmptyIntersection { .. } => "empty-intersection",
            Constraint::Union { .. } => "union",
            Constraint::Subset { .. } => "subset",
            Constraint::Difference { .. } => "difference",
            Constraint::MultiUnion { .. } => "multi-union",
            Constraint::MultiIntersection { .. } => "multi-intersection",
            Constraint::CardinalityEq { .. } => "card-eq",
            Constraint::CardinalityAtMost { .. } => "card-atmost",
            Constraint::ConstantAssign { .. } => "constant",
            Constraint::OverlapAtMostOne { .. } => "overlap",
        }
    }

    /// Every set mentioned by the constraint, in syntactic order.
    pub fn sets(&self) -> Vec<&S> {
        match self {
            Constraint::Member { set, .. }
            | Constraint::CardinalityEq { set, .. }
            | Constraint::CardinalityAtMost { set, .. }
            | Constraint::ConstantAssign { set, .. } => vec![set],
            Constraint::Equal { left, right, .. }
            | Constraint::OverlapAtMostOne { left, right } => vec![left, right],
            Constraint::Subset { sub, sup } => vec![sub, sup],
            Constraint::Intersection {
                left,
                right,
                result,
            }
            | Constraint::Union {
                left,
                right,
                result,
            }
            | Constraint::Difference {
                left,
                right,
                result,
            } => vec![left, right, result],
            Constraint::EmptyIntersection { sets } => sets.iter().collect(),
            Constraint::MultiUnion { sets, result }
            | Constraint::MultiIntersection { sets, result } => {
                sets.iter().chain(std::iter::once(result)).collect()
            }
        }
    }

    /// Rewrites set and element references, failing on the first unresolved one.
    pub fn try_map<S2, E2, Err>(
        &self,
        mut set: impl FnMut(&S) -> Result<S2, Err>,
        mut element: impl FnMut(&E) -> Result<E2, Err>,
    ) -> Result<Constraint<S2, E2>, Err> {
        let mut sets = |v: &[S]| v.iter().map(&mut set).collect::<Result<Vec<_>, _>>();
        Ok(match self {
            Constraint::Member {
                element: e,
                set: s,
                positive,
            } => Constraint::Member {
                element: element(e)?,
                set: set(s)?,
                positive: *positive,
            },
            Constraint::Equal {
                left,
                right,
                positive,
            } => Constraint::Equal {
                left: set(left)?,
                right: set(right)?,
                positive: *positive,
            },
            Constraint::Intersection {
                left,
                right,
                result,
            } => Constraint::Intersection {
                left: set(left)?,
                right: set(right)?,
                result: set(result)?,
            },
            Constraint::EmptyIntersection { sets: v } => {
                Constraint::EmptyIntersection { sets: sets(v)? }
            }
            Constraint::Union {
                left,
                right,
                result,
            } => Constraint::Union {
                left: set(left)?,
                right: set(right)?,
                result: set(result)?,
            },
            Constraint::Subset { sub, sup } => Constraint::Subset {
                sub: set(sub)?,
                sup: set(sup)?,
            },
            Constraint::Difference {
                left,
                right,
                result,
            } => Constraint::Difference {
                left: set(left)?,
                right: set(right)?,
                result: set(result)?,
            },
            Constraint::MultiUnion { sets: v, result } => {
                let v = sets(v)?;
                Constraint::MultiUnion {
                    sets: v,
                    result: set(result)?,
                }
            }
            Constraint::MultiIntersection { sets: v, result } => {
                let v = sets(v)?;
                Constraint::MultiIntersection {
                    sets: v,
                    result: set(result)?,
                }
            }
            Constraint::CardinalityEq { set: s, k } => Constraint::CardinalityEq {
                set: set(s)?,
                k: *k,
            },
            Constraint::CardinalityAtMost { set: s, k } => Constraint::CardinalityAtMost {
                set: set(s)?,
                k: *k,
            },
            Constraint::ConstantAssign { set: s, elements } => Constraint::ConstantAssign {
                set: set(s)?,
                elements: elements
                    .iter()
                    .map(&mut element)
                    .collect::<Result<Vec<_>, _>>()?,
            },
            Constraint::OverlapAtMostOne { left, right } => Constraint::OverlapAtMostOne {
                left: set(left)?,
                right: set(right)?,
            },
        })
    }

    /// Two-operand multi-union/intersection are stored as their binary forms.
    fn canonical(self) -> Self {
        match self {
            Constraint::MultiUnion { mut sets, result } if sets.len() == 2 => {
                let right = sets.pop().unwrap();
                let left = sets.pop().unwrap();
                Constraint::Union {
                    left,
                    right,
                    result,
                }
            }
            Constraint::MultiIntersection { mut sets, result } if sets.len() == 2 => {
                let right = sets.pop().unwrap();
                let left = sets.pop().unwrap();
                Constraint::Intersection {
                    left,
                    right,
                    result,
                }
            }
            other => other,
        }
    }

    fn operand_count_ok(&self) -> bool {
        match self {
            Constraint::EmptyIntersection { sets }
            | Constraint::MultiUnion { sets, .. }
            | Constraint::MultiIntersection { sets, .. } => sets.len() >= 2,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("universe must contain at least one element")]
    EmptyUniverse,
    #[error("duplicate element {0} in universe")]
    DuplicateElement(String),
    #[error("duplicate set {0}")]
    DuplicateSet(String),
    #[error("unknown set id {0}")]
    UnknownSetId(u32),
    #[error("unknown element id {0}")]
    UnknownElementId(u32),
    #[error("element {element} assigned to {set} lies outside its support")]
    OutsideSupport { set: String, element: String },
    #[error("{0} needs at least two operand sets")]
    TooFewOperands(&'static str),
    #[error("invalid model: {0}")]
    Invalid(ValidationReport),
}

/// A validated set-constraint model.
#[derive(Debug, Clone)]
pub struct ProblemModel {
    universe: Universe,
    sets: Vec<SetVariable>,
    names: HashMap<String, SetId>,
    constraints: Vec<Constraint>,
}

impl PartialEq for ProblemModel {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe
            && self.sets == other.sets
            && self.constraints == other.constraints
    }
}

impl Eq for ProblemModel {}

impl ProblemModel {
    pub fn new(universe: Universe) -> Self {
        Self {
            universe,
            sets: Vec::new(),
            names: HashMap::new(),
            constraints: Vec::new(),
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn sets(&self) -> &[SetVariable] {
        &self.sets
    }

    pub fn set(&self, id: SetId) -> &SetVariable {
        &self.sets[id.index()]
    }

    pub fn set_id(&self, name: &str) -> Option<SetId> {
        self.names.get(name).copied()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn declare_set(
        &mut self,
        name: impl Into<String>,
        support: impl IntoIterator<Item = ElementId>,
    ) -> Result<SetId, ModelError> {
        let var = SetVariable::new(name, support);
        if let Some(e) = var
            .support
            .iter()
            .find(|e| e.index() >= self.universe.len())
        {
            return Err(ModelError::UnknownElementId(e.0));
        }
        if self.names.contains_key(&var.name) {
            return Err(ModelError::DuplicateSet(var.name));
        }
        let id = SetId(self.sets.len() as u32);
        self.names.insert(var.name.clone(), id);
        self.sets.push(var);
        Ok(id)
    }

    pub fn add_constraint(&mut self, constraint: Constraint) -> Result<(), ModelError> {
        for s in constraint.sets() {
            if s.index() >= self.sets.len() {
                return Err(ModelError::UnknownSetId(s.0));
            }
        }
        if !constraint.operand_count_ok() {
            return Err(ModelError::TooFewOperands(constraint.kind()));
        }
        match &constraint {
            Constraint::Member { element, .. } if element.index() >= self.universe.len() => {
                return Err(ModelError::UnknownElementId(element.0));
            }
            Constraint::ConstantAssign { set, elements } => {
                let var = self.set(*set);
                if let Some(e) = elements.iter().find(|e| !var.contains(**e)) {
                    return Err(ModelError::OutsideSupport {
                        set: var.name.clone(),
                        element: self
                            .universe
                            .labels
                            .get(e.index())
                            .cloned()
                            .unwrap_or_else(|| format!("#{}", e.0)),
                    });
                }
            }
            _ => {}
        }
        let constraint = match constraint {
            Constraint::ConstantAssign { set, mut elements } => {
                elements.sort_unstable();
                elements.dedup();
                Constraint::ConstantAssign { set, elements }
            }
            other => other.canonical(),
        };
        self.constraints.push(constraint);
        Ok(())
    }
}

/// A model whose sets and elements are still referred to by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelDraft {
    pub universe: Vec<String>,
    pub sets: Vec<(String, Vec<String>)>,
    pub constraints: Vec<Constraint<String, String>>,
}

impl ModelDraft {
    pub fn build(&self) -> Result<ProblemModel, ModelError> {
        let report = validate(self);
        if !report.is_ok() {
            return Err(ModelError::Invalid(report));
        }
        let universe = Universe::new(self.universe.iter().cloned())?;
        let mut model = ProblemModel::new(universe);
        for (name, support) in &self.sets {
            let ids: Vec<ElementId> = support
                .iter()
                .map(|l| model.universe.lookup(l).expect("validated"))
                .collect();
            model.declare_set(name.clone(), ids)?;
        }
        for c in &self.constraints {
            let resolved = c.try_map(
                |s| model.set_id(s).ok_or(()),
                |e| model.universe.lookup(e).ok_or(()),
            );
            model.add_constraint(resolved.expect("validated"))?;
        }
        Ok(model)
    }
}

/// One problem found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyUniverse,
    DuplicateElement(String),
    DuplicateSet(String),
    /// A support or constraint names an element that is not in the universe.
    ElementNotInUniverse {
        context: String,
        element: String,
    },
    UnknownSet(String),
    /// A constant assignment names an element outside the set's support.
    OutsideSupport {
        set: String,
        element: String,
    },
    TooFewOperands(&'static str),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyUniverse => write!(f, "empty universe"),
            Violation::DuplicateElement(e) => write!(f, "duplicate element {e} in universe"),
            Violation::DuplicateSet(s) => write!(f, "duplicate set {s}"),
            Violation::ElementNotInUniverse { context, element } => {
                write!(f, "element not in universe: {element} (in {context})")
            }
            Violation::UnknownSet(s) => write!(f, "unknown set {s}"),
            Violation::OutsideSupport { set, element } => {
                write!(f, "element {element} outside the support of {set}")
            }
            Violation::TooFewOperands(kind) => write!(f, "{kind} needs at least two sets"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks referential integrity of a draft and reports every violation found.
pub fn validate(draft: &ModelDraft) -> ValidationReport {
    let mut violations = Vec::new();
    if draft.universe.is_empty() {
        violations.push(Violation::EmptyUniverse);
    }
    let mut elements = HashSet::new();
    for e in &draft.universe {
        if !elements.insert(e.as_str()) {
            violations.push(Violation::DuplicateElement(e.clone()));
        }
    }
    let mut supports: HashMap<&str, HashSet<&str>> = HashMap::new();
    for (name, support) in &draft.sets {
        if supports.contains_key(name.as_str()) {
            violations.push(Violation::DuplicateSet(name.clone()));
            continue;
        }
        for e in support {
            if !elements.contains(e.as_str()) {
                violations.push(Violation::ElementNotInUniverse {
                    context: format!("support of {name}"),
                    element: e.clone(),
                });
            }
        }
        supports.insert(name, support.iter().map(String::as_str).collect());
    }
    for c in &draft.constraints {
        for s in c.sets() {
            if !supports.contains_key(s.as_str()) {
                violations.push(Violation::UnknownSet(s.clone()));
            }
        }
        if !c.operand_count_ok() {
            violations.push(Violation::TooFewOperands(c.kind()));
        }
        match c {
            Constraint::Member { element, .. } if !elements.contains(element.as_str()) => {
                violations.push(Violation::ElementNotInUniverse {
                    context: c.kind().to_string(),
                    element: element.clone(),
                });
            }
            Constraint::ConstantAssign {
                set,
                elements: assigned,
            } => {
                for e in assigned {
                    if !elements.contains(e.as_str()) {
                        violations.push(Violation::ElementNotInUniverse {
                            context: format!("assignment to {set}"),
                            element: e.clone(),
                        });
                    } else if let Some(support) = supports.get(set.as_str()) {
                        if !support.contains(e.as_str()) {
                            violations.push(Violation::OutsideSupport {
                                set: set.clone(),
                                element: e.clone(),
                            });
                        }
                    }
                }
            }
            _ => {}
        }
    }
    ValidationReport { violations }
}
