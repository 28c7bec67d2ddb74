//! Double cosets `H \ G / H` as orbits of right `H`-cosets under right
//! multiplication by `H`, together with the two induced maps used by the
//! classifier: inversion `HgH -> Hg^-1H` and the twist `HgH -> HngnH`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::enumeration::{CosetTable, TableError, TableId};
use crate::validation::ValidationReport;
use crate::word::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DoubleCosetError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("double coset belongs to a different coset table")]
    TableMismatch,
    #[error("twist requested without a validation report certifying n for this subgroup")]
    PreconditionUnverified,
}

/// A double coset `HgH`, identified by the smallest coset index in its orbit.
///
/// Equality, ordering and hashing use only the table and the canonical index.
#[derive(Clone)]
pub struct DoubleCosetId {
    table: TableId,
    canonical: usize,
    orbit: Arc<[usize]>,
}

impl DoubleCosetId {
    pub fn table(&self) -> TableId {
        self.table
    }

    /// Minimal coset index in the orbit.
    pub fn canonical(&self) -> usize {
        self.canonical
    }

    /// Sorted coset indices making up the double coset.
    pub fn orbit(&self) -> &[usize] {
        &self.orbit
    }

    /// Number of right cosets of `H` contained in the double coset.
    pub fn size(&self) -> usize {
        self.orbit.len()
    }
}

impl PartialEq for DoubleCosetId {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table && self.canonical == other.canonical
    }
}

impl Eq for DoubleCosetId {}

impl Hash for DoubleCosetId {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.table.hash(state);
        self.canonical.hash(state);
    }
}

impl PartialOrd for DoubleCosetId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DoubleCosetId {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.table, self.canonical).cmp(&(other.table, other.canonical))
    }
}

impl fmt::Debug for DoubleCosetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}[{}]", self.canonical, self.orbit.len())
    }
}

/// One double coset with a representative element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCosetClass {
    pub id: DoubleCosetId,
    /// Witness word of the canonical coset.
    pub representative: Word,
}

/// Precomputed double-coset partition of a coset table, with `H = K` the
/// table's own subgroup.
#[derive(Debug, Clone)]
pub struct DoubleCosetSpace {
    table: Arc<CosetTable>,
    orbit_of: Vec<u32>,
    orbits: Vec<Arc<[usize]>>,
}

impl DoubleCosetSpace {
    pub fn new(table: Arc<CosetTable>) -> Self {
        let n = table.index();
        let perms: Vec<Vec<usize>> = table
            .subgroup_generators()
            .iter()
            .filter(|w| !w.is_empty())
            .map(|w| {
                table
                    .permutation(w)
                    .expect("subgroup generators are words over the table alphabet")
            })
            .collect();
        let mut orbit_of = vec![u32::MAX; n];
        let mut orbits: Vec<Arc<[usize]>> = Vec::new();
        for start in 0..n {
            if orbit_of[start] != u32::MAX {
                continue;
            }
            let id = orbits.len() as u32;
            orbit_of[start] = id;
            let mut members = vec![start + 1];
            let mut head = 0;
            while head < members.len() {
                let c = members[head];
                head += 1;
                // Finite permutations: forward images already close the orbit.
                for p in &perms {
                    let d = p[c - 1];
                    if orbit_of[d - 1] == u32::MAX {
                        orbit_of[d - 1] = id;
                        members.push(d);
                    }
                }
            }
            members.sort_unstable();
            orbits.push(members.into());
        }
        DoubleCosetSpace {
            table,
            orbit_of,
            orbits,
        }
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    pub fn table_arc(&self) -> &Arc<CosetTable> {
        &self.table
    }

    /// Number of double cosets.
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    fn make_id(&self, orbit: usize) -> DoubleCosetId {
        let members = self.orbits[orbit].clone();
        DoubleCosetId {
            table: self.table.id(),
            canonical: members[0],
            orbit: members,
        }
    }

    /// Double coset containing right coset `c` (1-based).
    pub fn id_of_coset(&self, c: usize) -> Result<DoubleCosetId, DoubleCosetError> {
        if c == 0 || c > self.orbit_of.len() {
            return Err(TableError::IndexOutOfRange {
                index: c,
                size: self.orbit_of.len(),
            }
            .into());
        }
        Ok(self.make_id(self.orbit_of[c - 1] as usize))
    }

    /// Double coset `HgH`.
    pub fn id(&self, g: &Word) -> Result<DoubleCosetId, DoubleCosetError> {
        let c = self.table.trace(1, g)?;
        self.id_of_coset(c)
    }

    /// All double cosets in increasing canonical order.
    pub fn all(&self) -> Vec<DoubleCosetClass> {
        (0..self.orbits.len())
            .map(|o| {
                let id = self.make_id(o);
                let representative = self.table.witness(id.canonical).expect("valid coset");
                DoubleCosetClass { id, representative }
            })
            .collect()
    }

    fn check(&self, d: &DoubleCosetId) -> Result<(), DoubleCosetError> {
        if d.table != self.table.id() || d.canonical > self.orbit_of.len() {
            return Err(DoubleCosetError::TableMismatch);
        }
        Ok(())
    }

    pub fn representative(&self, d: &DoubleCosetId) -> Result<Word, DoubleCosetError> {
        self.check(d)?;
        Ok(self.table.witness(d.canonical)?)
    }

    /// `HgH -> Hg^-1H`.
    pub fn invert(&self, d: &DoubleCosetId) -> Result<DoubleCosetId, DoubleCosetError> {
        let g = self.representative(d)?;
        self.id(&g.invert())
    }

    /// `HgH -> HngnH`. Requires a report certifying that `n` normalizes `H`
    /// and squares into it, which makes the map well defined and an
    /// involution. The empty `n` needs no certificate.
    pub fn twist(
        &self,
        n: &Word,
        d: &DoubleCosetId,
        report: &ValidationReport,
    ) -> Result<DoubleCosetId, DoubleCosetError> {
        if !report.certifies_twist(self.table.id(), n) {
            return Err(DoubleCosetError::PreconditionUnverified);
        }
        self.twist_unchecked(n, d)
    }

    pub(crate) fn twist_unchecked(
        &self,
        n: &Word,
        d: &DoubleCosetId,
    ) -> Result<DoubleCosetId, DoubleCosetError> {
        let g = self.representative(d)?;
        self.id(&n.concat(&g).concat(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{enumerate, EnumerationLimits};
    use crate::input::{parse_input, GroupPresentation};
    use crate::validation::validate;

    fn space(p: &GroupPresentation, sub: &[&str]) -> DoubleCosetSpace {
        let words: Vec<Word> = sub.iter().map(|w| p.word(w).unwrap()).collect();
        DoubleCosetSpace::new(Arc::new(
            enumerate(p, &words, EnumerationLimits::default()).unwrap(),
        ))
    }

    fn s3() -> GroupPresentation {
        GroupPresentation::parse("a b | a^2, b^3, a b a b").unwrap()
    }

    #[test]
    fn s3_mod_involution() {
        let p = s3();
        let sp = space(&p, &["a"]);
        let db = sp.id(&p.word("b").unwrap()).unwrap();
        assert_eq!(db.orbit(), &[2, 3]);
        let da = sp.id(&p.word("a").unwrap()).unwrap();
        assert_eq!(da.orbit(), &[1]);
        assert_eq!(sp.id(&Word::identity()).unwrap().canonical(), 1);
        let all = sp.all();
        assert_eq!(all.len(), 2);
        assert_eq!(
            all.iter().map(|c| c.id.size()).collect::<Vec<_>>(),
            vec![1, 2]
        );
        assert_eq!(sp.invert(&db).unwrap(), db);
        assert_eq!(sp.invert(&da).unwrap(), da);
        assert_eq!(sp.id(&p.word("a b a").unwrap()).unwrap(), db);
    }

    #[test]
    fn index_one_table() {
        let p = GroupPresentation::parse("t").unwrap();
        let sp = space(&p, &["t"]);
        assert_eq!(sp.len(), 1);
        let d = sp.id(&p.word("t^5").unwrap()).unwrap();
        assert_eq!(d, sp.id(&p.word("t^-3").unwrap()).unwrap());
    }

    #[test]
    fn cyclic_five_trivial_subgroup_inversion() {
        let p = GroupPresentation::parse("a | a^5").unwrap();
        let sp = space(&p, &[]);
        let d = sp.id(&p.word("a").unwrap()).unwrap();
        assert_eq!(
            sp.invert(&d).unwrap(),
            sp.id(&p.word("a^4").unwrap()).unwrap()
        );
        assert_ne!(sp.invert(&d).unwrap(), d);
    }

    #[test]
    fn dihedral_twist() {
        let k = parse_input("group: r s\nrel: r^4\nrel: s^2\nrel: r s r s\nP: r^2 , s\nP+: r^2\nn: s\norientable: false").unwrap();
        let report = validate(&k, EnumerationLimits::default());
        let p = &k.presentation;
        let sp = DoubleCosetSpace::new(Arc::new(
            enumerate(
                p,
                k.p_plus_generators.as_ref().unwrap(),
                EnumerationLimits::default(),
            )
            .unwrap(),
        ));
        assert_eq!(sp.len(), 4);
        assert!(sp.all().iter().all(|c| c.id.size() == 1));
        let n = k.n_word.clone().unwrap();
        let dr = sp.id(&p.word("r").unwrap()).unwrap();
        assert_eq!(sp.twist(&n, &dr, &report).unwrap(), dr);
        let one = sp.id(&Word::identity()).unwrap();
        assert_eq!(sp.twist(&n, &one, &report).unwrap(), one);
        let empty_report = ValidationReport {
            checks: vec![],
            twist: None,
        };
        assert_eq!(
            sp.twist(&n, &dr, &empty_report),
            Err(DoubleCosetError::PreconditionUnverified)
        );
        for c in sp.all() {
            assert_eq!(
                sp.twist(&Word::identity(), &c.id, &empty_report).unwrap(),
                c.id
            );
        }
    }

    #[test]
    fn foreign_ids_are_rejected() {
        let p = s3();
        let a = space(&p, &["a"]);
        let b = space(&p, &["b"]);
        let d = b.id(&Word::identity()).unwrap();
        assert_eq!(a.invert(&d), Err(DoubleCosetError::TableMismatch));
    }
}
