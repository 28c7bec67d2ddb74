//! Homomorphisms to symmetric groups, used to separate cords whose coset
//! tables cannot be enumerated (typically because a peripheral subgroup has
//! infinite index).
//!
//! If two elements have different invariants after applying a homomorphism
//! `G -> S_d`, their invariants in `G` differ as well.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::classifier::{CaseLabel, ClassifierError, HandleKind, UnorderedPair};
use crate::enumeration::{CosetTable, EnumerationLimits};
use crate::input::{GroupPresentation, SurfaceKnotInput};
use crate::validation::validate;
use crate::word::Word;

const UNSET: u32 = u32::MAX;

/// A permutation of `0..degree`, acting on the right: `p.compose(q)` applies
/// `p` first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    /// Builds a permutation from its image list; `None` unless it is a
    /// bijection of `0..len`.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Permutation(images))
    }

    /// Builds a permutation of `0..degree` from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Option<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                *images.get_mut(x as usize)? = cycle[(i + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, point: u32) -> u32 {
        self.0[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation(inv)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Cycle notation, e.g. `(0 1 2)(3 4)`; the identity is `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            any = true;
            f.write_str("(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                write!(f, "{x}")?;
                x = self.0[x] as usize;
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// Images of the generators under a homomorphism `G -> S_degree`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PermutationAssignment {
    pub degree: usize,
    pub images: Vec<Permutation>,
}

impl PermutationAssignment {
    pub fn new(degree: usize, images: Vec<Permutation>) -> Self {
        debug_assert!(images.iter().all(|p| p.degree() == degree));
        PermutationAssignment { degree, images }
    }

    /// Image of `w`; letters are applied left to right.
    pub fn evaluate(&self, w: &Word) -> Permutation {
        let mut acc = Permutation::identity(self.degree);
        for l in w.letters() {
            let p = &self.images[l.generator()];
            acc = if l.is_inverted() {
                acc.compose(&p.inverse())
            } else {
                acc.compose(p)
            };
        }
        acc
    }

    /// Whether every relator maps to the identity.
    pub fn satisfies(&self, pres: &GroupPresentation) -> bool {
        self.images.len() == pres.generator_count()
            && pres
                .relators()
                .iter()
                .all(|r| self.evaluate(r).is_identity())
    }

    /// Whether the image acts transitively on `0..degree`.
    pub fn is_transitive(&self) -> bool {
        orbit_of_zero(self.degree, &self.images) == self.degree
    }

    /// Writes the images in cycle notation, `name=(..)` per generator.
    pub fn describe<S: AsRef<str>>(&self, names: &[S]) -> String {
        self.images
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let name = names
                    .get(i)
                    .map(|s| s.as_ref().to_string())
                    .unwrap_or_else(|| format!("g{i}"));
                format!("{name}={p}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl PermutationAssignment {
    /// The action of the generators on the cosets of a table, on points
    /// `0..index`. With the trivial subgroup this is the regular
    /// representation.
    pub fn from_table(table: &CosetTable) -> Self {
        let images = (0..table.generator_count())
            .map(|g| {
                let p = table
                    .permutation(&Word::generator(g))
                    .expect("generator of the table");
                Permutation(p.into_iter().map(|x| x as u32 - 1).collect())
            })
            .collect();
        PermutationAssignment::new(table.index(), images)
    }
}

fn orbit_of_zero(degree: usize, perms: &[Permutation]) -> usize {
    if degree == 0 {
        return 0;
    }
    let mut seen = vec![false; degree];
    seen[0] = true;
    let mut stack = vec![0u32];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for p in perms {
            let y = p.apply(x);
            if !seen[y as usize] {
                seen[y as usize] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count
}

/// Outcome of a bounded homomorphism search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub assignments: Vec<PermutationAssignment>,
    /// The node budget ran out before the search space was exhausted.
    pub truncated: bool,
    pub nodes: u64,
}

/// Backtracking search for homomorphisms `G -> S_degree`.
///
/// Generator images are filled in point by point (generator 0 first), and a
/// branch is cut as soon as some relator traced from some point closes up at
/// a different point. Results come out in lexicographic order of the image
/// lists.
#[derive(Debug, Clone)]
pub struct HomomorphismSearch<'a> {
    pres: &'a GroupPresentation,
    degree: usize,
    limit: usize,
    transitive_only: bool,
    node_budget: u64,
}

impl<'a> HomomorphismSearch<'a> {
    pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

    pub fn new(pres: &'a GroupPresentation, degree: usize) -> Self {
        HomomorphismSearch {
            pres,
            degree,
            limit: usize::MAX,
            transitive_only: false,
            node_budget: Self::DEFAULT_NODE_BUDGET,
        }
    }

    /// Stop after this many homomorphisms.
    pub fn limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }

    pub fn transitive_only(mut self, yes: bool) -> Self {
        self.transitive_only = yes;
        self
    }

    pub fn node_budget(mut self, budget: u64) -> Self {
        self.node_budget = budget;
        self
    }

    pub fn run(&self) -> SearchOutcome {
        let k = self.pres.generator_count();
        let d = self.degree;
        let mut state = SearchState {
            img: vec![vec![UNSET; d]; k],
            pre: vec![vec![UNSET; d]; k],
            out: Vec::new(),
            nodes: 0,
            truncated: false,
        };
        if self.limit > 0 {
            if d == 0 {
                // S_0 is trivial; only an empty alphabet maps anywhere useful.
                if k == 0 {
                    state.out.push(PermutationAssignment::new(0, Vec::new()));
                }
            } else {
                self.descend(&mut state, 0);
            }
        }
        SearchOutcome {
            assignments: state.out,
            truncated: state.truncated,
            nodes: state.nodes,
        }
    }

    fn descend(&self, st: &mut SearchState, slot: usize) {
        let d = self.degree;
        let k = self.pres.generator_count();
        if slot == k * d {
            let images: Vec<Permutation> = st.img.iter().map(|v| Permutation(v.clone())).collect();
            let a = PermutationAssignment::new(d, images);
            if !self.transitive_only || a.is_transitive() {
                st.out.push(a);
            }
            return;
        }
        let (g, x) = (slot / d, slot % d);
        for y in 0..d {
            if st.out.len() >= self.limit || st.truncated {
                return;
            }
            if st.pre[g][y] != UNSET {
                continue;
            }
            st.nodes += 1;
            if st.nodes > self.node_budget {
                st.truncated = true;
                return;
            }
            st.img[g][x] = y as u32;
            st.pre[g][y] = x as u32;
            if self.consistent(st) {
                self.descend(st, slot + 1);
            }
            st.img[g][x] = UNSET;
            st.pre[g][y] = UNSET;
        }
    }

    fn consistent(&self, st: &SearchState) -> bool {
        for r in self.pres.relators() {
            'start: for start in 0..self.degree as u32 {
                let mut x = start;
                for l in r.letters() {
                    let table = if l.is_inverted() {
                        &st.pre[l.generator()]
                    } else {
                        &st.img[l.generator()]
                    };
                    x = table[x as usize];
                    if x == UNSET {
                        continue 'start;
                    }
                }
                if x != start {
                    return false;
                }
            }
        }
        true
    }
}

struct SearchState {
    img: Vec<Vec<u32>>,
    pre: Vec<Vec<u32>>,
    out: Vec<PermutationAssignment>,
    nodes: u64,
    truncated: bool,
}

/// All homomorphisms `G -> S_degree`, at most `limit` of them.
pub fn find_homomorphisms(
    pres: &GroupPresentation,
    degree: usize,
    limit: usize,
) -> Vec<PermutationAssignment> {
    HomomorphismSearch::new(pres, degree)
        .limit(limit)
        .run()
        .assignments
}

/// Closure of a set of permutations under composition, sorted.
pub fn generate_group(degree: usize, gens: &[Permutation]) -> Vec<Permutation> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.compose(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut all: Vec<Permutation> = seen.into_iter().collect();
    all.sort();
    all
}

/// The set `<left> x <right>`, sorted. Finite groups need no inverses.
pub fn double_coset(
    left: &[Permutation],
    x: &Permutation,
    right: &[Permutation],
) -> Vec<Permutation> {
    let mut seen: BTreeSet<Permutation> = BTreeSet::from([x.clone()]);
    let mut queue = VecDeque::from([x.clone()]);
    while let Some(y) = queue.pop_front() {
        let next = left
            .iter()
            .map(|h| h.compose(&y))
            .chain(right.iter().map(|h| y.compose(h)));
        for z in next {
            if seen.insert(z.clone()) {
                queue.push_back(z);
            }
        }
    }
    seen.into_iter().collect()
}

/// Canonical element (the smallest) of `<h> x <h>`.
fn canonical(h: &[Permutation], x: &Permutation) -> Permutation {
    double_coset(h, x, h).swap_remove(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeparationOptions {
    pub max_degree: usize,
    /// Homomorphisms tried per degree.
    pub max_homs: usize,
    pub node_budget: u64,
}

impl Default for SeparationOptions {
    fn default() -> Self {
        SeparationOptions {
            max_degree: 6,
            max_homs: 64,
            node_budget: HomomorphismSearch::DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Separation {
    /// Under `assignment` the two invariants differ.
    Distinct {
        degree: usize,
        assignment: PermutationAssignment,
    },
    /// No homomorphism within the limits told the two apart.
    Unknown {
        homomorphisms_tried: usize,
        /// Some degree's search hit the node budget.
        truncated: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum ImageInvariant {
    Single(Permutation),
    Pair(UnorderedPair<Permutation>),
    PairOfPairs(UnorderedPair<UnorderedPair<Permutation>>),
}

struct Image<'a> {
    a: &'a PermutationAssignment,
    h: Vec<Permutation>,
    n: Permutation,
}

impl<'a> Image<'a> {
    fn new(a: &'a PermutationAssignment, h_words: &[Word], n_word: &Word) -> Self {
        Image {
            a,
            h: h_words.iter().map(|w| a.evaluate(w)).collect(),
            n: a.evaluate(n_word),
        }
    }

    fn dc(&self, g: &Permutation) -> Permutation {
        canonical(&self.h, g)
    }

    fn theta(&self, g: &Permutation) -> UnorderedPair<Permutation> {
        UnorderedPair::new(self.dc(g), self.dc(&self.n.compose(g).compose(&self.n)))
    }

    fn invariant(&self, kind: HandleKind, w: &Word) -> ImageInvariant {
        self.invariant_of(kind, &self.a.evaluate(w))
    }

    fn invariant_of(&self, kind: HandleKind, g: &Permutation) -> ImageInvariant {
        match (kind.case, kind.core_oriented) {
            (CaseLabel::Case3, true) => ImageInvariant::Pair(self.theta(g)),
            (CaseLabel::Case3, false) => ImageInvariant::PairOfPairs(UnorderedPair::new(
                self.theta(g),
                self.theta(&g.inverse()),
            )),
            (_, true) => ImageInvariant::Single(self.dc(g)),
            (_, false) => {
                ImageInvariant::Pair(UnorderedPair::new(self.dc(g), self.dc(&g.inverse())))
            }
        }
    }
}

/// Subgroup words and twisting element the invariant of `kind` is built from.
fn peripheral_data(
    input: &SurfaceKnotInput,
    kind: HandleKind,
) -> Result<(Vec<Word>, Word), ClassifierError> {
    Ok(match kind.case {
        CaseLabel::Case3 => (
            input
                .p_plus_generators
                .clone()
                .ok_or(ClassifierError::MissingPPlus)?,
            input.n_word.clone().unwrap_or_default(),
        ),
        _ => (input.p_generators.clone(), Word::identity()),
    })
}

/// Number of classes of `kind`, computed by running over every element of
/// the image of `assignment`. For a faithful assignment this is the exact
/// class count.
pub fn brute_force_class_count(
    input: &SurfaceKnotInput,
    kind: HandleKind,
    assignment: &PermutationAssignment,
) -> Result<usize, ClassifierError> {
    let (h_words, n_word) = peripheral_data(input, kind)?;
    let image = Image::new(assignment, &h_words, &n_word);
    let seen: HashSet<ImageInvariant> = generate_group(assignment.degree, &assignment.images)
        .iter()
        .map(|g| image.invariant_of(kind, g))
        .collect();
    Ok(seen.len())
}

/// Whether `g1` and `g2` have the same invariant of `kind` after applying
/// `assignment`.
pub fn same_image_invariant(
    input: &SurfaceKnotInput,
    kind: HandleKind,
    assignment: &PermutationAssignment,
    g1: &Word,
    g2: &Word,
) -> Result<bool, ClassifierError> {
    let (h_words, n_word) = peripheral_data(input, kind)?;
    let image = Image::new(assignment, &h_words, &n_word);
    Ok(image.invariant(kind, g1) == image.invariant(kind, g2))
}

/// Looks for a homomorphism to a symmetric group under which the invariants
/// of `g1` and `g2` differ. Only transitive homomorphisms of degree
/// `2..=max_degree` are tried.
///
/// Validation failures are refused; checks that cannot be decided (because a
/// table is out of reach) are not, since that is the situation this routine
/// is for.
pub fn quotient_separate(
    input: &SurfaceKnotInput,
    kind: HandleKind,
    g1: &Word,
    g2: &Word,
    options: SeparationOptions,
) -> Result<Separation, ClassifierError> {
    if kind.case.requires_orientable() != input.surface_orientable {
        return Err(ClassifierError::CaseMismatch {
            case: kind.case.number(),
            orientable_required: kind.case.requires_orientable(),
        });
    }
    let limits = EnumerationLimits::new(100_000, 1_000_000).expect("limits are positive");
    let report = validate(input, limits);
    if report.has_failures() {
        return Err(ClassifierError::ValidationFailed(report.problems()));
    }
    let pres = &input.presentation;
    let (h_words, n_word) = peripheral_data(input, kind)?;
    let mut tried = 0;
    let mut truncated = false;
    for degree in 2..=options.max_degree {
        let outcome = HomomorphismSearch::new(pres, degree)
            .limit(options.max_homs)
            .transitive_only(true)
            .node_budget(options.node_budget)
            .run();
        truncated |= outcome.truncated;
        for a in outcome.assignments {
            tried += 1;
            let image = Image::new(&a, &h_words, &n_word);
            if image.invariant(kind, g1) != image.invariant(kind, g2) {
                return Ok(Separation::Distinct {
                    degree,
                    assignment: a,
                });
            }
        }
    }
    Ok(Separation::Unknown {
        homomorphisms_tried: tried,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::parse_input;

    fn pres(s: &str) -> GroupPresentation {
        GroupPresentation::parse(s).unwrap()
    }

    #[test]
    fn permutation_basics() {
        let p = Permutation::from_cycles(4, &[&[0, 1, 2]]).unwrap();
        let q = Permutation::from_cycles(4, &[&[2, 3]]).unwrap();
        // 0 -p-> 1 -q-> 1, 2 -p-> 0, 1 -p-> 2 -q-> 3
        assert_eq!(p.compose(&q).images(), &[1, 3, 0, 2]);
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(p.to_string(), "(0 1 2)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert!(Permutation::from_images(vec![0, 0]).is_none());
        assert!(Permutation::from_images(vec![0, 2]).is_none());
    }

    #[test]
    fn evaluation_is_a_right_action() {
        let a = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        let asg = PermutationAssignment::new(3, vec![a.clone(), b.clone()]);
        let p = pres("a b | a^2, b^2, a b a b a b");
        assert!(asg.satisfies(&p));
        assert_eq!(asg.evaluate(&p.word("a b").unwrap()), a.compose(&b));
        assert_eq!(asg.evaluate(&p.word("b^-1").unwrap()), b);
        assert!(asg.is_transitive());
    }

    #[test]
    fn homomorphism_counts() {
        // Hom(Z, S3) = 6, Hom(Z/2, S3) = 4, Hom(Z/3, S3) = 3.
        assert_eq!(find_homomorphisms(&pres("t"), 3, usize::MAX).len(), 6);
        assert_eq!(find_homomorphisms(&pres("a | a^2"), 3, usize::MAX).len(), 4);
        assert_eq!(find_homomorphisms(&pres("a | a^3"), 3, usize::MAX).len(), 3);
        // Hom(Z^2, S3): commuting pairs = |S3| * number of conjugacy classes.
        assert_eq!(
            find_homomorphisms(&pres("a b | a b a^-1 b^-1"), 3, usize::MAX).len(),
            18
        );
        assert_eq!(find_homomorphisms(&pres("t"), 4, 5).len(), 5);
        for a in find_homomorphisms(&pres("a b | a^2, b^3, a b a b"), 4, usize::MAX) {
            assert!(a.satisfies(&pres("a b | a^2, b^3, a b a b")));
        }
    }

    #[test]
    fn results_are_lexicographic() {
        let homs = find_homomorphisms(&pres("a b | a^2, b^2"), 3, usize::MAX);
        let keys: Vec<Vec<Vec<u32>>> = homs
            .iter()
            .map(|a| a.images.iter().map(|p| p.images().to_vec()).collect())
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(homs.len(), 16);
    }

    #[test]
    fn budget_truncates() {
        let out = HomomorphismSearch::new(&pres("a b"), 5)
            .node_budget(100)
            .run();
        assert!(out.truncated);
        assert!(out.nodes <= 101);
    }

    #[test]
    fn transitive_filter() {
        let all = HomomorphismSearch::new(&pres("t"), 3).run().assignments;
        let tr = HomomorphismSearch::new(&pres("t"), 3)
            .transitive_only(true)
            .run()
            .assignments;
        assert_eq!(all.len(), 6);
        assert_eq!(tr.len(), 2);
    }

    #[test]
    fn group_closure_and_double_cosets() {
        let a = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        assert_eq!(generate_group(3, &[a.clone(), b.clone()]).len(), 6);
        let dc = double_coset(std::slice::from_ref(&a), &b, std::slice::from_ref(&a));
        assert_eq!(dc.len(), 4);
    }

    #[test]
    fn separates_trefoil_cords() {
        // Spun trefoil: P = <a> has infinite index, so tables are out of reach.
        let k =
            parse_input("group: a b\nrel: a b a b^-1 a^-1 b^-1\nP: a\norientable: true").unwrap();
        let pr = &k.presentation;
        let kind = HandleKind::new(CaseLabel::Case1, true);
        let r = quotient_separate(
            &k,
            kind,
            &pr.word("b").unwrap(),
            &Word::identity(),
            SeparationOptions::default(),
        )
        .unwrap();
        match r {
            Separation::Distinct { degree, assignment } => {
                assert_eq!(degree, 3);
                assert!(assignment.satisfies(pr));
            }
            other => panic!("expected separation, got {other:?}"),
        }
        // a and 1 lie in the same double coset, so nothing separates them.
        let r = quotient_separate(
            &k,
            kind,
            &pr.word("a").unwrap(),
            &Word::identity(),
            SeparationOptions::default(),
        )
        .unwrap();
        assert!(
            matches!(r, Separation::Unknown { homomorphisms_tried, .. } if homomorphisms_tried > 0)
        );
        let bad = HandleKind::new(CaseLabel::Case3, true);
        assert!(matches!(
            quotient_separate(
                &k,
                bad,
                &Word::identity(),
                &Word::identity(),
                SeparationOptions::default()
            ),
            Err(ClassifierError::CaseMismatch { .. })
        ));
    }

    #[test]
    fn separates_dihedral_case3() {
        let k = parse_input("group: r s\nrel: r^4\nrel: s^2\nrel: r s r s\nP: r^2 , s\nP+: r^2\nn: s\norientable: false")
            .unwrap();
        let pr = &k.presentation;
        let kind = HandleKind::new(CaseLabel::Case3, true);
        let r = quotient_separate(
            &k,
            kind,
            &pr.word("r").unwrap(),
            &pr.word("s").unwrap(),
            SeparationOptions::default(),
        )
        .unwrap();
        assert!(matches!(r, Separation::Distinct { .. }));
        let r = quotient_separate(
            &k,
            kind,
            &pr.word("r").unwrap(),
            &pr.word("r^3").unwrap(),
            SeparationOptions::default(),
        )
        .unwrap();
        assert!(matches!(r, Separation::Unknown { .. }));
    }
}
