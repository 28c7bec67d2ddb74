//! Cord and 1-handle invariants.
//!
//! A cord (or the oriented core of a 1-handle) is represented by the group
//! element `g` obtained by closing it up with paths in the boundary of a
//! tubular neighbourhood. Its class is read off from double cosets of the
//! peripheral subgroup `P` (oriented surfaces) or of the positive
//! peripheral subgroup `P+` (non-orientable surfaces).
//!
//! | case | core     | invariant                                   |
//! |------|----------|---------------------------------------------|
//! | 1, 2 | oriented | `PgP`                                       |
//! | 1, 2 | free     | `{PgP, Pg^-1P}`                             |
//! | 3    | oriented | `{P+gP+, P+ngnP+}`                          |
//! | 3    | free     | `{{P+gP+, P+ngnP+}, {P+g^-1P+, P+ng^-1nP+}}` |

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::double_coset::{DoubleCosetError, DoubleCosetId, DoubleCosetSpace};
use crate::enumeration::{enumerate, CosetTable, EnumerationError, EnumerationLimits, TableError};
use crate::input::SurfaceKnotInput;
use crate::validation::{validate_tables, ValidationReport};
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseLabel {
    /// Oriented surface, orientable handles.
    Case1,
    /// Oriented surface, non-orientable handles. Computed exactly as Case 1.
    Case2,
    /// Non-orientable surface.
    Case3,
}

impl CaseLabel {
    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(CaseLabel::Case1),
            2 => Some(CaseLabel::Case2),
            3 => Some(CaseLabel::Case3),
            _ => None,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            CaseLabel::Case1 => 1,
            CaseLabel::Case2 => 2,
            CaseLabel::Case3 => 3,
        }
    }

    pub fn requires_orientable(self) -> bool {
        self != CaseLabel::Case3
    }
}

/// Which invariant to compute: the case and whether the core carries an
/// orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HandleKind {
    pub case: CaseLabel,
    pub core_oriented: bool,
}

impl HandleKind {
    pub fn new(case: CaseLabel, core_oriented: bool) -> Self {
        HandleKind {
            case,
            core_oriented,
        }
    }
}

/// `{x, y}` stored as `(min, max)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnorderedPair<T> {
    first: T,
    second: T,
}

impl<T: Ord> UnorderedPair<T> {
    pub fn new(x: T, y: T) -> Self {
        if x <= y {
            UnorderedPair {
                first: x,
                second: y,
            }
        } else {
            UnorderedPair {
                first: y,
                second: x,
            }
        }
    }

    pub fn first(&self) -> &T {
        &self.first
    }

    pub fn second(&self) -> &T {
        &self.second
    }

    pub fn contains(&self, x: &T) -> bool {
        &self.first == x || &self.second == x
    }

    /// The other element, if `x` is a member.
    pub fn other(&self, x: &T) -> Option<&T> {
        if &self.first == x {
            Some(&self.second)
        } else if &self.second == x {
            Some(&self.first)
        } else {
            None
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        [&self.first, &self.second].into_iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HandleInvariant {
    OrientedCore(DoubleCosetId),
    UnorderedCore(UnorderedPair<DoubleCosetId>),
    Case3OrientedCore(UnorderedPair<DoubleCosetId>),
    Case3(UnorderedPair<UnorderedPair<DoubleCosetId>>),
}

impl HandleInvariant {
    pub fn kind_name(&self) -> &'static str {
        match self {
            HandleInvariant::OrientedCore(_) => "oriented_core",
            HandleInvariant::UnorderedCore(_) => "unordered_core",
            HandleInvariant::Case3OrientedCore(_) => "case3_oriented_core",
            HandleInvariant::Case3(_) => "case3",
        }
    }

    fn ids(&self) -> Vec<&DoubleCosetId> {
        match self {
            HandleInvariant::OrientedCore(d) => vec![d],
            HandleInvariant::UnorderedCore(p) | HandleInvariant::Case3OrientedCore(p) => {
                p.iter().collect()
            }
            HandleInvariant::Case3(pp) => pp.iter().flat_map(|p| p.iter()).collect(),
        }
    }
}

/// An equivalence class with a cord word realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HandleClass {
    pub invariant: HandleInvariant,
    pub representative: Word,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifierError {
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error("validation did not pass: {}", .0.join("; "))]
    ValidationFailed(Vec<String>),
    #[error("case {case} requires an {} surface", if *.orientable_required { "orientable" } else { "non-orientable" })]
    CaseMismatch { case: u8, orientable_required: bool },
    #[error("candidate has shape `{found}`, expected `{expected}`")]
    CandidateShape {
        expected: &'static str,
        found: &'static str,
    },
    #[error("no P+ table: the surface is orientable")]
    MissingPPlus,
    #[error("twist by n has not been certified by validation")]
    PreconditionUnverified,
    #[error("candidate refers to a different coset table")]
    TableMismatch,
    #[error(transparent)]
    Table(#[from] TableError),
}

impl From<DoubleCosetError> for ClassifierError {
    fn from(e: DoubleCosetError) -> Self {
        match e {
            DoubleCosetError::Table(t) => ClassifierError::Table(t),
            DoubleCosetError::TableMismatch => ClassifierError::TableMismatch,
            DoubleCosetError::PreconditionUnverified => ClassifierError::PreconditionUnverified,
        }
    }
}

/// Input together with its enumerated peripheral tables and a passing
/// validation report.
#[derive(Debug, Clone)]
pub struct ClassifierContext {
    input: SurfaceKnotInput,
    p: DoubleCosetSpace,
    p_plus: Option<DoubleCosetSpace>,
    report: ValidationReport,
    n: Word,
}

impl ClassifierContext {
    /// Enumerates `P` (and `P+` for non-orientable input), validates, and
    /// precomputes the double-coset partitions.
    pub fn build(
        input: SurfaceKnotInput,
        limits: EnumerationLimits,
    ) -> Result<Self, ClassifierError> {
        let pres = &input.presentation;
        let p_table = Arc::new(enumerate(pres, &input.p_generators, limits)?);
        let p_plus_table = match &input.p_plus_generators {
            Some(g) if !input.surface_orientable => Some(Arc::new(enumerate(pres, g, limits)?)),
            _ => None,
        };
        Self::from_tables(input, p_table, p_plus_table)
    }

    /// Like [`build`](Self::build) with tables enumerated elsewhere.
    pub fn from_tables(
        input: SurfaceKnotInput,
        p_table: Arc<CosetTable>,
        p_plus_table: Option<Arc<CosetTable>>,
    ) -> Result<Self, ClassifierError> {
        if p_table.subgroup_generators() != input.p_generators.as_slice()
            || p_plus_table.as_ref().map(|t| t.subgroup_generators())
                != input
                    .p_plus_generators
                    .as_deref()
                    .filter(|_| !input.surface_orientable)
        {
            return Err(ClassifierError::TableMismatch);
        }
        let report = validate_tables(&input, Ok(&p_table), p_plus_table.as_deref().map(Ok));
        if !report.is_passing() {
            return Err(ClassifierError::ValidationFailed(report.problems()));
        }
        let n = input.n_word.clone().unwrap_or_default();
        Ok(ClassifierContext {
            p: DoubleCosetSpace::new(p_table),
            p_plus: p_plus_table.map(DoubleCosetSpace::new),
            report,
            n,
            input,
        })
    }

    pub fn input(&self) -> &SurfaceKnotInput {
        &self.input
    }

    pub fn report(&self) -> &ValidationReport {
        &self.report
    }

    pub fn p_space(&self) -> &DoubleCosetSpace {
        &self.p
    }

    pub fn p_plus_space(&self) -> Option<&DoubleCosetSpace> {
        self.p_plus.as_ref()
    }

    /// The element `n` (empty for orientable input).
    pub fn n(&self) -> &Word {
        &self.n
    }

    fn pp(&self) -> Result<&DoubleCosetSpace, ClassifierError> {
        self.p_plus.as_ref().ok_or(ClassifierError::MissingPPlus)
    }

    /// Double-coset space the given case computes in.
    pub fn space_for(&self, case: CaseLabel) -> Result<&DoubleCosetSpace, ClassifierError> {
        self.check_case(case)?;
        match case {
            CaseLabel::Case3 => self.pp(),
            _ => Ok(&self.p),
        }
    }

    fn check_case(&self, case: CaseLabel) -> Result<(), ClassifierError> {
        if case.requires_orientable() != self.input.surface_orientable {
            return Err(ClassifierError::CaseMismatch {
                case: case.number(),
                orientable_required: case.requires_orientable(),
            });
        }
        Ok(())
    }

    /// `PgP` for the oriented cord with element `g`.
    pub fn oriented_cord_invariant(&self, g: &Word) -> Result<DoubleCosetId, ClassifierError> {
        Ok(self.p.id(g)?)
    }

    /// `P+gP+` for an oriented cord with local orientations, where `g` was
    /// formed with paths compatible with those orientations.
    pub fn local_oriented_cord_invariant(
        &self,
        g: &Word,
    ) -> Result<DoubleCosetId, ClassifierError> {
        Ok(self.pp()?.id(g)?)
    }

    fn twist(&self, d: &DoubleCosetId) -> Result<DoubleCosetId, ClassifierError> {
        Ok(self.pp()?.twist(&self.n, d, &self.report)?)
    }

    fn theta(&self, d: &DoubleCosetId) -> Result<UnorderedPair<DoubleCosetId>, ClassifierError> {
        Ok(UnorderedPair::new(d.clone(), self.twist(d)?))
    }

    /// Invariant of the class of `D` (the double coset of the core word).
    fn invariant_of(
        &self,
        kind: HandleKind,
        d: &DoubleCosetId,
    ) -> Result<HandleInvariant, ClassifierError> {
        Ok(match (kind.case, kind.core_oriented) {
            (CaseLabel::Case3, true) => HandleInvariant::Case3OrientedCore(self.theta(d)?),
            (CaseLabel::Case3, false) => {
                let inv = self.pp()?.invert(d)?;
                HandleInvariant::Case3(UnorderedPair::new(self.theta(d)?, self.theta(&inv)?))
            }
            (_, true) => HandleInvariant::OrientedCore(d.clone()),
            (_, false) => {
                HandleInvariant::UnorderedCore(UnorderedPair::new(d.clone(), self.p.invert(d)?))
            }
        })
    }

    pub fn handle_invariant(
        &self,
        kind: HandleKind,
        g: &Word,
    ) -> Result<HandleInvariant, ClassifierError> {
        let d = self.space_for(kind.case)?.id(g)?;
        self.invariant_of(kind, &d)
    }

    pub fn equivalent(
        &self,
        kind: HandleKind,
        g1: &Word,
        g2: &Word,
    ) -> Result<bool, ClassifierError> {
        Ok(self.handle_invariant(kind, g1)? == self.handle_invariant(kind, g2)?)
    }

    /// Whether `candidate` is the invariant of some handle of this kind.
    pub fn image_member(
        &self,
        kind: HandleKind,
        candidate: &HandleInvariant,
    ) -> Result<bool, ClassifierError> {
        let space = self.space_for(kind.case)?;
        let expected = match (kind.case, kind.core_oriented) {
            (CaseLabel::Case3, true) => "case3_oriented_core",
            (CaseLabel::Case3, false) => "case3",
            (_, true) => "oriented_core",
            (_, false) => "unordered_core",
        };
        if candidate.kind_name() != expected {
            return Err(ClassifierError::CandidateShape {
                expected,
                found: candidate.kind_name(),
            });
        }
        if candidate
            .ids()
            .iter()
            .any(|d| d.table() != space.table().id())
        {
            return Err(ClassifierError::TableMismatch);
        }
        Ok(match candidate {
            // Every double coset is realized by an oriented core.
            HandleInvariant::OrientedCore(_) => true,
            HandleInvariant::UnorderedCore(pair) => *pair.second() == space.invert(pair.first())?,
            HandleInvariant::Case3OrientedCore(pair) => {
                *pair.second() == self.twist(pair.first())?
            }
            HandleInvariant::Case3(outer) => {
                let orders = [
                    (outer.first(), outer.second()),
                    (outer.second(), outer.first()),
                ];
                let mut found = false;
                'search: for (x, y) in orders {
                    for d in x.iter() {
                        if *x == self.theta(d)? && *y == self.theta(&space.invert(d)?)? {
                            found = true;
                            break 'search;
                        }
                    }
                }
                found
            }
        })
    }

    /// The image of the invariant map, one entry per class, in increasing
    /// order of the smallest double coset reaching it.
    pub fn enumerate_classes(&self, kind: HandleKind) -> Result<Vec<HandleClass>, ClassifierError> {
        let space = self.space_for(kind.case)?;
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for class in space.all() {
            let invariant = self.invariant_of(kind, &class.id)?;
            if seen.insert(invariant.clone()) {
                out.push(HandleClass {
                    invariant,
                    representative: class.representative,
                });
            }
        }
        Ok(out)
    }

    /// A codomain value outside the image, when the invariant map is not
    /// surjective; `None` when it is.
    pub fn nonsurjectivity_witness(
        &self,
        kind: HandleKind,
    ) -> Result<Option<HandleInvariant>, ClassifierError> {
        let space = self.space_for(kind.case)?;
        let one = space.id(&Word::identity())?;
        let outside = || -> Result<Option<DoubleCosetId>, ClassifierError> {
            if space.table().index() > 1 {
                Ok(Some(space.id_of_coset(2)?))
            } else {
                Ok(None)
            }
        };
        let witness = match (kind.case, kind.core_oriented) {
            (CaseLabel::Case3, false) => {
                let trivial = self.theta(&one)?;
                let mut other = None;
                for class in space.all() {
                    let t = self.theta(&class.id)?;
                    if t != trivial {
                        other = Some(t);
                        break;
                    }
                }
                other.map(|t| HandleInvariant::Case3(UnorderedPair::new(trivial, t)))
            }
            (CaseLabel::Case3, true) => {
                let dn = space.id(&self.n)?;
                if dn != one {
                    // n outside P+: {P+nP+, P+1P+}.
                    Some(HandleInvariant::Case3OrientedCore(UnorderedPair::new(
                        dn, one,
                    )))
                } else {
                    outside()?
                        .map(|d| HandleInvariant::Case3OrientedCore(UnorderedPair::new(d, one)))
                }
            }
            (_, true) => None,
            (_, false) => {
                outside()?.map(|d| HandleInvariant::UnorderedCore(UnorderedPair::new(d, one)))
            }
        };
        debug_assert!(witness
            .as_ref()
            .is_none_or(|w| !self.image_member(kind, w).unwrap_or(true)));
        Ok(witness)
    }

    /// Builds a candidate from double cosets of the listed words: one word for
    /// an oriented core in cases 1/2, two for pairs, four for case 3 without
    /// core orientation (`{{w1, w2}, {w3, w4}}`).
    pub fn candidate_from_words(
        &self,
        kind: HandleKind,
        words: &[Word],
    ) -> Result<HandleInvariant, ClassifierError> {
        let space = self.space_for(kind.case)?;
        let ids = words
            .iter()
            .map(|w| space.id(w))
            .collect::<Result<Vec<_>, _>>()?;
        let expected = match (kind.case, kind.core_oriented) {
            (CaseLabel::Case3, false) => 4,
            (CaseLabel::Case3, true) | (_, false) => 2,
            (_, true) => 1,
        };
        if ids.len() != expected {
            return Err(ClassifierError::CandidateShape {
                expected: match expected {
                    1 => "1 word",
                    2 => "2 words",
                    _ => "4 words",
                },
                found: match ids.len() {
                    1 => "1 word",
                    2 => "2 words",
                    4 => "4 words",
                    _ => "wrong number of words",
                },
            });
        }
        let pair = |i: usize| UnorderedPair::new(ids[i].clone(), ids[i + 1].clone());
        Ok(match (kind.case, kind.core_oriented) {
            (CaseLabel::Case3, false) => {
                HandleInvariant::Case3(UnorderedPair::new(pair(0), pair(2)))
            }
            (CaseLabel::Case3, true) => HandleInvariant::Case3OrientedCore(pair(0)),
            (_, false) => HandleInvariant::UnorderedCore(pair(0)),
            (_, true) => HandleInvariant::OrientedCore(ids[0].clone()),
        })
    }

    fn subgroup_name(&self, d: &DoubleCosetId) -> &'static str {
        match &self.p_plus {
            Some(pp) if pp.table().id() == d.table() => "P+",
            _ => "P",
        }
    }

    fn dc_json(&self, d: &DoubleCosetId) -> Value {
        let space = match &self.p_plus {
            Some(pp) if pp.table().id() == d.table() => pp,
            _ => &self.p,
        };
        let rep = space
            .representative(d)
            .map(|w| self.input.presentation.render(&w))
            .unwrap_or_default();
        json!({
            "subgroup": self.subgroup_name(d),
            "canonical": d.canonical(),
            "orbit_size": d.size(),
            "representative": rep,
        })
    }

    /// Machine-readable form; pairs are listed in canonical order.
    pub fn invariant_json(&self, inv: &HandleInvariant) -> Value {
        let pair = |p: &UnorderedPair<DoubleCosetId>| {
            json!([self.dc_json(p.first()), self.dc_json(p.second())])
        };
        let value = match inv {
            HandleInvariant::OrientedCore(d) => self.dc_json(d),
            HandleInvariant::UnorderedCore(p) | HandleInvariant::Case3OrientedCore(p) => pair(p),
            HandleInvariant::Case3(pp) => json!([pair(pp.first()), pair(pp.second())]),
        };
        json!({ "kind": inv.kind_name(), "value": value })
    }

    /// Human-readable form, e.g. `{P(b)P#2, P(b)P#2}`.
    pub fn render(&self, inv: &HandleInvariant) -> String {
        RenderInvariant { ctx: self, inv }.to_string()
    }

    pub fn render_double_coset(&self, d: &DoubleCosetId) -> String {
        let name = self.subgroup_name(d);
        let space = self.space_for_id(d);
        let rep = space
            .representative(d)
            .map(|w| self.input.presentation.render(&w))
            .unwrap_or_else(|_| "?".into());
        format!("{name}({rep}){name}#{}", d.canonical())
    }

    fn space_for_id(&self, d: &DoubleCosetId) -> &DoubleCosetSpace {
        match &self.p_plus {
            Some(pp) if pp.table().id() == d.table() => pp,
            _ => &self.p,
        }
    }
}

struct RenderInvariant<'a> {
    ctx: &'a ClassifierContext,
    inv: &'a HandleInvariant,
}

impl fmt::Display for RenderInvariant<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dc = |d: &DoubleCosetId| self.ctx.render_double_coset(d);
        let pair =
            |p: &UnorderedPair<DoubleCosetId>| format!("{{{}, {}}}", dc(p.first()), dc(p.second()));
        match self.inv {
            HandleInvariant::OrientedCore(d) => f.write_str(&dc(d)),
            HandleInvariant::UnorderedCore(p) | HandleInvariant::Case3OrientedCore(p) => {
                f.write_str(&pair(p))
            }
            HandleInvariant::Case3(pp) => {
                write!(f, "{{{}, {}}}", pair(pp.first()), pair(pp.second()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::parse_input;

    const UNKNOTTED: &str = "group: t\nP: t\norientable: true";
    const T2: &str = "group: t\nP: t^2\norientable: true";
    const S3: &str = "group: a b\nrel: a^2\nrel: b^3\nrel: a b a b\nP: a\norientable: true";
    const D8: &str = "group: r s\nrel: r^4\nrel: s^2\nrel: r s r s\nP: r^2 , s\nP+: r^2\nn: s\norientable: false";

    fn ctx(text: &str) -> ClassifierContext {
        ClassifierContext::build(parse_input(text).unwrap(), EnumerationLimits::default()).unwrap()
    }

    fn w(c: &ClassifierContext, s: &str) -> Word {
        c.input().presentation.word(s).unwrap()
    }

    const C1O: HandleKind = HandleKind {
        case: CaseLabel::Case1,
        core_oriented: true,
    };
    const C1U: HandleKind = HandleKind {
        case: CaseLabel::Case1,
        core_oriented: false,
    };
    const C3O: HandleKind = HandleKind {
        case: CaseLabel::Case3,
        core_oriented: true,
    };
    const C3U: HandleKind = HandleKind {
        case: CaseLabel::Case3,
        core_oriented: false,
    };

    #[test]
    fn unordered_pair_is_symmetric() {
        assert_eq!(UnorderedPair::new(3, 1), UnorderedPair::new(1, 3));
        assert_eq!(UnorderedPair::new(3, 1).first(), &1);
        assert_eq!(UnorderedPair::new(2, 5).other(&5), Some(&2));
        assert!(
            UnorderedPair::new(UnorderedPair::new(1, 4), UnorderedPair::new(1, 2))
                .first()
                .contains(&2)
        );
    }

    #[test]
    fn unknotted_has_one_class() {
        let c = ctx(UNKNOTTED);
        let d = c.oriented_cord_invariant(&w(&c, "t^3")).unwrap();
        assert_eq!(d, c.oriented_cord_invariant(&Word::identity()).unwrap());
        let inv = c.handle_invariant(C1U, &w(&c, "t")).unwrap();
        assert_eq!(
            inv,
            HandleInvariant::UnorderedCore(UnorderedPair::new(d.clone(), d))
        );
        assert_eq!(c.enumerate_classes(C1O).unwrap().len(), 1);
        assert_eq!(c.enumerate_classes(C1U).unwrap().len(), 1);
        assert!(c.equivalent(C1O, &w(&c, "t t"), &Word::identity()).unwrap());
        assert_eq!(c.nonsurjectivity_witness(C1U).unwrap(), None);
        assert_eq!(c.nonsurjectivity_witness(C1O).unwrap(), None);
    }

    #[test]
    fn s3_synthetic() {
        let c = ctx(S3);
        let b = c.oriented_cord_invariant(&w(&c, "b")).unwrap();
        assert_eq!(b, c.oriented_cord_invariant(&w(&c, "a b a")).unwrap());
        assert_ne!(b, c.oriented_cord_invariant(&Word::identity()).unwrap());
        let inv = c.handle_invariant(C1U, &w(&c, "b")).unwrap();
        assert_eq!(
            inv,
            HandleInvariant::UnorderedCore(UnorderedPair::new(b.clone(), b))
        );
        assert!(!c.equivalent(C1O, &w(&c, "b"), &Word::identity()).unwrap());
        assert_eq!(c.enumerate_classes(C1O).unwrap().len(), 2);
        assert_eq!(c.enumerate_classes(C1U).unwrap().len(), 2);
        let case2 = HandleKind::new(CaseLabel::Case2, false);
        assert_eq!(
            c.handle_invariant(case2, &w(&c, "b")).unwrap(),
            c.handle_invariant(C1U, &w(&c, "b")).unwrap()
        );
        assert!(matches!(
            c.handle_invariant(C3O, &w(&c, "b")),
            Err(ClassifierError::CaseMismatch { case: 3, .. })
        ));
        assert!(matches!(
            c.local_oriented_cord_invariant(&w(&c, "b")),
            Err(ClassifierError::MissingPPlus)
        ));
    }

    #[test]
    fn parity_witness_case1() {
        let c = ctx(T2);
        let witness = c.nonsurjectivity_witness(C1U).unwrap().unwrap();
        let dt = c.oriented_cord_invariant(&w(&c, "t")).unwrap();
        let d1 = c.oriented_cord_invariant(&Word::identity()).unwrap();
        assert_eq!(
            witness,
            HandleInvariant::UnorderedCore(UnorderedPair::new(dt.clone(), d1.clone()))
        );
        assert!(!c.image_member(C1U, &witness).unwrap());
        let good = c.handle_invariant(C1U, &w(&c, "t")).unwrap();
        assert!(c.image_member(C1U, &good).unwrap());
        assert!(c
            .image_member(C1O, &HandleInvariant::OrientedCore(dt))
            .unwrap());
        assert!(matches!(
            c.image_member(C1O, &good),
            Err(ClassifierError::CandidateShape { .. })
        ));
    }

    #[test]
    fn dihedral_case3() {
        let c = ctx(D8);
        let r = c.local_oriented_cord_invariant(&w(&c, "r")).unwrap();
        assert_eq!(r, c.local_oriented_cord_invariant(&w(&c, "r^3")).unwrap());
        assert_ne!(r, c.local_oriented_cord_invariant(&w(&c, "s")).unwrap());
        assert_eq!(
            c.local_oriented_cord_invariant(&Word::identity())
                .unwrap()
                .canonical(),
            1
        );
        assert_eq!(
            c.handle_invariant(C3O, &w(&c, "r")).unwrap(),
            HandleInvariant::Case3OrientedCore(UnorderedPair::new(r.clone(), r))
        );
        let classes = c.enumerate_classes(C3O).unwrap();
        assert_eq!(classes.len(), 4);
        for class in &classes {
            let HandleInvariant::Case3OrientedCore(p) = &class.invariant else {
                panic!("wrong shape")
            };
            assert_eq!(p.first(), p.second());
            assert!(c.image_member(C3O, &class.invariant).unwrap());
        }
        let witness = c.nonsurjectivity_witness(C3O).unwrap().unwrap();
        let expected = c
            .candidate_from_words(C3O, &[w(&c, "s"), Word::identity()])
            .unwrap();
        assert_eq!(witness, expected);
        assert!(!c.image_member(C3O, &witness).unwrap());
        for class in c.enumerate_classes(C3U).unwrap() {
            assert!(c.image_member(C3U, &class.invariant).unwrap());
        }
        let w3 = c.nonsurjectivity_witness(C3U).unwrap().unwrap();
        assert!(!c.image_member(C3U, &w3).unwrap());
        assert!(matches!(
            c.handle_invariant(C1O, &Word::identity()),
            Err(ClassifierError::CaseMismatch { case: 1, .. })
        ));
    }

    #[test]
    fn failing_validation_blocks_context() {
        let text = D8.replace("P+: r^2", "P+: r");
        let err =
            ClassifierContext::build(parse_input(&text).unwrap(), EnumerationLimits::default())
                .unwrap_err();
        match err {
            ClassifierError::ValidationFailed(problems) => {
                assert!(problems.iter().any(|p| p.starts_with("p_plus_in_p")))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rendering_and_json() {
        let c = ctx(S3);
        let inv = c.handle_invariant(C1U, &w(&c, "b")).unwrap();
        assert_eq!(c.render(&inv), "{P(b)P#2, P(b)P#2}");
        let j = c.invariant_json(&inv);
        assert_eq!(j["kind"], "unordered_core");
        assert_eq!(j["value"][0]["orbit_size"], 2);
    }
}
