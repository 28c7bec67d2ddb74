//! Todd-Coxeter coset enumeration.
//!
//! HLT strategy: each live coset, in order, has every relator scanned and
//! filled, after which any remaining gaps in its row are filled by new
//! definitions. Coincidences are processed through a queue with a
//! union-find forwarding array. A finished table is renumbered into
//! standard (breadth-first) order so that downstream identifiers are
//! reproducible.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::input::GroupPresentation;
use crate::word::{Letter, Word};

const NONE: u32 = u32::MAX;

/// Compaction kicks in once the table holds this many rows and more than
/// half of them are dead.
const COMPACT_MIN_ROWS: usize = if cfg!(test) { 64 } else { 1 << 14 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct EnumerationLimits {
    pub max_live_cosets: usize,
    pub max_total_defined: usize,
}

impl EnumerationLimits {
    pub const DEFAULT_MAX_LIVE: usize = 1_000_000;
    pub const DEFAULT_MAX_TOTAL: usize = 10_000_000;

    pub fn new(max_live_cosets: usize, max_total_defined: usize) -> Result<Self, EnumerationError> {
        if max_live_cosets == 0 || max_total_defined < max_live_cosets {
            return Err(EnumerationError::InvalidLimits {
                max_live_cosets,
                max_total_defined,
            });
        }
        Ok(EnumerationLimits {
            max_live_cosets,
            max_total_defined,
        })
    }

    /// Caps live cosets at `max_live`, keeping the total-definition cap at
    /// least as large.
    pub fn with_max_live(max_live: usize) -> Result<Self, EnumerationError> {
        Self::new(max_live, max_live.max(Self::DEFAULT_MAX_TOTAL))
    }
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_live_cosets: Self::DEFAULT_MAX_LIVE,
            max_total_defined: Self::DEFAULT_MAX_TOTAL,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    /// The index may be infinite or merely too large; this is never a proof
    /// of infinite index.
    #[error(
        "coset enumeration exhausted its budget ({live} live cosets, {defined} defined; \
         limits {max_live}/{max_total}); the index may be infinite or too large"
    )]
    ResourceExhausted {
        live: usize,
        defined: usize,
        max_live: usize,
        max_total: usize,
    },
    #[error(
        "invalid limits: max_live_cosets={max_live_cosets}, max_total_defined={max_total_defined}"
    )]
    InvalidLimits {
        max_live_cosets: usize,
        max_total_defined: usize,
    },
    #[error("subgroup word uses generator {generator}, outside the alphabet of size {alphabet}")]
    ForeignLetter { generator: usize, alphabet: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("coset {index} is out of range 1..={size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("word uses generator {generator}, outside the alphabet of size {alphabet}")]
    ForeignLetter { generator: usize, alphabet: usize },
}

/// Work counters for one enumeration run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct EnumerationStats {
    pub total_defined: usize,
    pub max_live: usize,
    pub coincidences: usize,
}

/// Content fingerprint of (presentation, subgroup generators).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TableId(u64);

impl TableId {
    fn of(pres: &GroupPresentation, subgroup: &[Word]) -> Self {
        let mut h = DefaultHasher::new();
        pres.hash(&mut h);
        subgroup.hash(&mut h);
        TableId(h.finish())
    }
}

/// Complete, standardized right-coset table of a finite-index subgroup.
///
/// Cosets are numbered `1..=index` with `1` the subgroup itself.
#[derive(Debug, Clone)]
pub struct CosetTable {
    id: TableId,
    generator_count: usize,
    subgroup_generators: Vec<Word>,
    /// Row-major, 0-based, `2 * generator_count` columns.
    action: Vec<u32>,
    /// Schreier tree of the standardization BFS: (parent coset, column).
    parent: Vec<(u32, u32)>,
    stats: EnumerationStats,
}

impl CosetTable {
    pub fn id(&self) -> TableId {
        self.id
    }

    pub fn index(&self) -> usize {
        self.parent.len()
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn subgroup_generators(&self) -> &[Word] {
        &self.subgroup_generators
    }

    pub fn stats(&self) -> EnumerationStats {
        self.stats
    }

    fn cols(&self) -> usize {
        2 * self.generator_count
    }

    /// Image of coset `c` (1-based) under a letter. Panics on bad input.
    pub fn act(&self, c: usize, l: Letter) -> usize {
        self.action[(c - 1) * self.cols() + l.column()] as usize + 1
    }

    fn check_word(&self, w: &Word) -> Result<(), TableError> {
        match w.max_generator() {
            Some(g) if g >= self.generator_count => Err(TableError::ForeignLetter {
                generator: g,
                alphabet: self.generator_count,
            }),
            _ => Ok(()),
        }
    }

    /// Applies `w` left to right starting from coset `start`.
    pub fn trace(&self, start: usize, w: &Word) -> Result<usize, TableError> {
        if start == 0 || start > self.index() {
            return Err(TableError::IndexOutOfRange {
                index: start,
                size: self.index(),
            });
        }
        self.check_word(w)?;
        let cols = self.cols();
        let mut c = start - 1;
        for l in w.letters() {
            c = self.action[c * cols + l.column()] as usize;
        }
        Ok(c + 1)
    }

    /// Whether `w` represents an element of the subgroup.
    pub fn contains(&self, w: &Word) -> Result<bool, TableError> {
        Ok(self.trace(1, w)? == 1)
    }

    /// A word carrying coset 1 to coset `c`: the path in the breadth-first
    /// spanning tree, hence of minimal length in the coset graph.
    pub fn witness(&self, c: usize) -> Result<Word, TableError> {
        if c == 0 || c > self.index() {
            return Err(TableError::IndexOutOfRange {
                index: c,
                size: self.index(),
            });
        }
        let mut letters = Vec::new();
        let mut cur = c - 1;
        while cur != 0 {
            let (p, col) = self.parent[cur];
            letters.push(Letter::from_column(col as usize));
            cur = p as usize;
        }
        letters.reverse();
        Ok(Word::free_reduce(letters))
    }

    /// Permutation of cosets (1-based values, 0-based positions) induced by
    /// right multiplication with `w`.
    pub fn permutation(&self, w: &Word) -> Result<Vec<usize>, TableError> {
        (1..=self.index()).map(|c| self.trace(c, w)).collect()
    }
}

/// Enumerates the cosets of `<subgroup>` in the group presented by `pres`.
pub fn enumerate(
    pres: &GroupPresentation,
    subgroup: &[Word],
    limits: EnumerationLimits,
) -> Result<CosetTable, EnumerationError> {
    let ngens = pres.generator_count();
    for w in subgroup {
        if let Some(g) = w.max_generator().filter(|&g| g >= ngens) {
            return Err(EnumerationError::ForeignLetter {
                generator: g,
                alphabet: ngens,
            });
        }
    }
    let mut e = Enumerator::new(ngens, limits);
    let subgroup_cols: Vec<Vec<u32>> = subgroup.iter().map(columns).collect();
    let relator_cols: Vec<Vec<u32>> = pres.relators().iter().map(columns).collect();
    e.run(&subgroup_cols, &relator_cols)?;
    let (action, parent) = e.standardize();
    let table = CosetTable {
        id: TableId::of(pres, subgroup),
        generator_count: ngens,
        subgroup_generators: subgroup.to_vec(),
        action,
        parent,
        stats: e.stats,
    };
    debug_assert!(pres
        .relators()
        .iter()
        .all(|r| (1..=table.index()).all(|c| table.trace(c, r) == Ok(c))));
    Ok(table)
}

fn columns(w: &Word) -> Vec<u32> {
    w.letters().iter().map(|l| l.column() as u32).collect()
}

struct Enumerator {
    cols: usize,
    table: Vec<u32>,
    /// Union-find forwarding; `forward[c] == c` iff `c` is live.
    forward: Vec<u32>,
    queue: Vec<u32>,
    live: usize,
    limits: EnumerationLimits,
    stats: EnumerationStats,
}

impl Enumerator {
    fn new(ngens: usize, limits: EnumerationLimits) -> Self {
        let cols = 2 * ngens;
        Enumerator {
            cols,
            table: vec![NONE; cols],
            forward: vec![0],
            queue: Vec::new(),
            live: 1,
            limits,
            stats: EnumerationStats {
                total_defined: 1,
                max_live: 1,
                coincidences: 0,
            },
        }
    }

    fn rows(&self) -> usize {
        self.forward.len()
    }

    fn is_live(&self, c: u32) -> bool {
        self.forward[c as usize] == c
    }

    #[inline]
    fn get(&self, c: u32, col: u32) -> u32 {
        self.table[c as usize * self.cols + col as usize]
    }

    #[inline]
    fn set(&mut self, c: u32, col: u32, d: u32) {
        self.table[c as usize * self.cols + col as usize] = d;
    }

    fn exhausted(&self) -> EnumerationError {
        EnumerationError::ResourceExhausted {
            live: self.live,
            defined: self.stats.total_defined,
            max_live: self.limits.max_live_cosets,
            max_total: self.limits.max_total_defined,
        }
    }

    fn define(&mut self, c: u32, col: u32) -> Result<u32, EnumerationError> {
        if self.live >= self.limits.max_live_cosets
            || self.stats.total_defined >= self.limits.max_total_defined
            || self.rows() >= NONE as usize
        {
            return Err(self.exhausted());
        }
        let d = self.rows() as u32;
        self.table.extend(std::iter::repeat_n(NONE, self.cols));
        self.forward.push(d);
        self.set(c, col, d);
        self.set(d, col ^ 1, c);
        self.live += 1;
        self.stats.total_defined += 1;
        self.stats.max_live = self.stats.max_live.max(self.live);
        Ok(d)
    }

    fn run(
        &mut self,
        subgroup: &[Vec<u32>],
        relators: &[Vec<u32>],
    ) -> Result<(), EnumerationError> {
        for w in subgroup {
            self.scan_and_fill(0, w)?;
        }
        let mut c = 0usize;
        while c < self.rows() {
            let cu = c as u32;
            if self.is_live(cu) {
                for r in relators {
                    self.scan_and_fill(cu, r)?;
                    if !self.is_live(cu) {
                        break;
                    }
                }
                if self.is_live(cu) {
                    for col in 0..self.cols as u32 {
                        if self.get(cu, col) == NONE {
                            self.define(cu, col)?;
                        }
                    }
                }
            }
            c += 1;
            if self.rows() >= COMPACT_MIN_ROWS && self.live * 2 < self.rows() {
                c = self.compact(c);
            }
        }
        Ok(())
    }

    fn scan_and_fill(&mut self, start: u32, w: &[u32]) -> Result<(), EnumerationError> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (start, start);
        let (mut i, mut j) = (0usize, w.len());
        loop {
            while i < j {
                let next = self.get(f, w[i]);
                if next == NONE {
                    break;
                }
                f = next;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let prev = self.get(b, w[j - 1] ^ 1);
                if prev == NONE {
                    break;
                }
                b = prev;
                j -= 1;
            }
            if j == i {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            if j == i + 1 {
                // Deduction closes the cycle.
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                return Ok(());
            }
            f = self.define(f, w[i])?;
            i += 1;
        }
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.forward[root as usize] != root {
            root = self.forward[root as usize];
        }
        let mut cur = c;
        while self.forward[cur as usize] != root {
            let next = self.forward[cur as usize];
            self.forward[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            let (keep, kill) = (ra.min(rb), ra.max(rb));
            self.forward[kill as usize] = keep;
            self.queue.push(kill);
            self.live -= 1;
            self.stats.coincidences += 1;
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        let mut qi = 0;
        while qi < self.queue.len() {
            let dead = self.queue[qi];
            qi += 1;
            for col in 0..self.cols as u32 {
                let d = self.get(dead, col);
                if d == NONE {
                    continue;
                }
                let inv = col ^ 1;
                self.set(d, inv, NONE);
                let mu = self.rep(dead);
                let nu = self.rep(d);
                let mu_x = self.get(mu, col);
                if mu_x != NONE {
                    self.merge(nu, mu_x);
                    continue;
                }
                let nu_inv = self.get(nu, inv);
                if nu_inv != NONE {
                    self.merge(mu, nu_inv);
                    continue;
                }
                self.set(mu, col, nu);
                self.set(nu, inv, mu);
            }
        }
        self.queue.clear();
    }

    /// Drops dead rows, preserving the relative order of live cosets.
    /// Returns the position of `cursor` in the new numbering.
    fn compact(&mut self, cursor: usize) -> usize {
        let rows = self.rows();
        let mut new_index = vec![NONE; rows];
        let mut next = 0u32;
        let mut new_cursor = None;
        for (c, slot) in new_index.iter_mut().enumerate() {
            if c == cursor {
                new_cursor = Some(next as usize);
            }
            if self.forward[c] == c as u32 {
                *slot = next;
                next += 1;
            }
        }
        let new_cursor = new_cursor.unwrap_or(next as usize);
        let mut table = Vec::with_capacity(next as usize * self.cols);
        for c in 0..rows {
            if new_index[c] == NONE {
                continue;
            }
            for col in 0..self.cols {
                let d = self.table[c * self.cols + col];
                table.push(if d == NONE {
                    NONE
                } else {
                    new_index[d as usize]
                });
            }
        }
        self.table = table;
        self.forward = (0..next).collect();
        new_cursor
    }

    /// Breadth-first renumbering from coset 0, scanning columns in order.
    fn standardize(&mut self) -> (Vec<u32>, Vec<(u32, u32)>) {
        let rows = self.rows();
        let mut order: Vec<u32> = Vec::with_capacity(self.live);
        let mut new_index = vec![NONE; rows];
        let mut parent = Vec::with_capacity(self.live);
        new_index[0] = 0;
        order.push(0);
        parent.push((0, 0));
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            for col in 0..self.cols as u32 {
                let raw = self.get(c, col);
                debug_assert_ne!(raw, NONE, "incomplete table after enumeration");
                let d = self.rep(raw);
                if new_index[d as usize] == NONE {
                    new_index[d as usize] = order.len() as u32;
                    parent.push((head as u32, col));
                    order.push(d);
                }
            }
            head += 1;
        }
        let mut action = Vec::with_capacity(order.len() * self.cols);
        for &c in &order {
            for col in 0..self.cols as u32 {
                let d = self.rep(self.get(c, col));
                action.push(new_index[d as usize]);
            }
        }
        (action, parent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(s: &str) -> GroupPresentation {
        GroupPresentation::parse(s).unwrap()
    }

    fn table(p: &GroupPresentation, sub: &[&str]) -> CosetTable {
        let words: Vec<Word> = sub.iter().map(|w| p.word(w).unwrap()).collect();
        enumerate(p, &words, EnumerationLimits::default()).unwrap()
    }

    fn check_invariants(p: &GroupPresentation, t: &CosetTable) {
        let n = t.index();
        for g in 0..p.generator_count() {
            let mut seen = vec![false; n + 1];
            for c in 1..=n {
                let d = t.act(c, Letter::pos(g));
                assert!(!seen[d], "generator column is not a permutation");
                seen[d] = true;
                assert_eq!(t.act(d, Letter::neg(g)), c);
            }
        }
        for c in 1..=n {
            for r in p.relators() {
                assert_eq!(t.trace(c, r).unwrap(), c);
            }
            assert_eq!(t.trace(1, &t.witness(c).unwrap()).unwrap(), c);
        }
        for s in t.subgroup_generators() {
            assert_eq!(t.trace(1, s).unwrap(), 1);
        }
        assert!(t.witness(1).unwrap().is_empty());
        // Standard numbering: scanning rows in order discovers cosets in order.
        let mut next = 2;
        for c in 1..=n {
            for col in 0..2 * p.generator_count() {
                let d = t.act(c, Letter::from_column(col));
                if d >= next {
                    assert_eq!(d, next);
                    next += 1;
                }
            }
        }
    }

    #[test]
    fn cyclic_four_mod_square() {
        let p = pres("a | a^4");
        let t = table(&p, &["a^2"]);
        assert_eq!(t.index(), 2);
        let a = p.word("a").unwrap();
        assert_eq!(t.trace(1, &a).unwrap(), 2);
        assert_eq!(t.trace(2, &a).unwrap(), 1);
        check_invariants(&p, &t);
    }

    #[test]
    fn symmetric_group_mod_involution() {
        let p = pres("a b | a^2, b^3, a b a b");
        let t = table(&p, &["a"]);
        assert_eq!(t.index(), 3);
        assert_eq!(t.trace(1, &p.word("b b b").unwrap()).unwrap(), 1);
        assert!(t.contains(&p.word("a").unwrap()).unwrap());
        assert!(!t.contains(&p.word("b").unwrap()).unwrap());
        check_invariants(&p, &t);
        let full = table(&p, &[]);
        assert_eq!(full.index(), 6);
        check_invariants(&p, &full);
    }

    #[test]
    fn free_cyclic_whole_group() {
        let p = pres("t");
        let t = table(&p, &["t"]);
        assert_eq!(t.index(), 1);
        assert_eq!(t.trace(1, &Word::identity()).unwrap(), 1);
        let t2 = table(&p, &["t^2"]);
        assert_eq!(t2.index(), 2);
        assert!(!t2.contains(&p.word("t").unwrap()).unwrap());
        assert!(t2.contains(&Word::identity()).unwrap());
    }

    #[test]
    fn larger_groups() {
        // S4 x C2, order 48.
        let p = pres("a b c | a^2, b^3, a b a b a b a b, c^2, a c a^-1 c^-1, b c b^-1 c^-1");
        let t = table(&p, &[]);
        assert_eq!(t.index(), 48);
        check_invariants(&p, &t);
        // A5.
        let p = pres("a b | a^2, b^3, a b a b a b a b a b");
        let t = table(&p, &[]);
        assert_eq!(t.index(), 60);
        check_invariants(&p, &t);
        let t = table(&p, &["b"]);
        assert_eq!(t.index(), 20);
        check_invariants(&p, &t);
    }

    #[test]
    fn exhaustion_is_reported() {
        let p = pres("a b | a b a^-1 b^-1");
        let err = enumerate(&p, &[], EnumerationLimits::new(50, 500).unwrap()).unwrap_err();
        assert!(matches!(err, EnumerationError::ResourceExhausted { .. }));
        assert!(EnumerationLimits::new(10, 5).is_err());
        assert!(EnumerationLimits::new(0, 5).is_err());
    }

    #[test]
    fn trace_errors() {
        let p = pres("a | a^3");
        let t = table(&p, &[]);
        assert!(matches!(
            t.trace(4, &Word::identity()),
            Err(TableError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            t.trace(1, &Word::generator(1)),
            Err(TableError::ForeignLetter { .. })
        ));
    }

    #[test]
    fn heavy_coincidence_run() {
        // Trivial group with a presentation that needs many coincidences.
        let p = pres("a b | a b a^-1 b^-2, b a b^-1 a^-2");
        let t = table(&p, &[]);
        assert_eq!(t.index(), 1);
        // Quaternion group via a dicyclic presentation.
        let p = pres("a b | a^4, a^2 b^-2, b^-1 a b a");
        let t = table(&p, &[]);
        assert_eq!(t.index(), 8);
        check_invariants(&p, &t);
    }
}
