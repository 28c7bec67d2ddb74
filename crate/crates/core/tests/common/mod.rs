//! Brute-force oracle shared by the integration tests. Groups are handled as
//! explicit sets of permutations; nothing here goes through coset tables.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use skg_core::{SurfaceKnotInput, Word};

/// Permutation of `0..n` as an image list, acting on the right.
pub type Perm = Vec<usize>;

/// `p` then `q`.
pub fn mul(p: &Perm, q: &Perm) -> Perm {
    p.iter().map(|&x| q[x]).collect()
}

pub fn inv(p: &Perm) -> Perm {
    let mut r = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        r[x] = i;
    }
    r
}

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

pub fn cycles(n: usize, cs: &[&[usize]]) -> Perm {
    let mut p = identity(n);
    for c in cs {
        for (i, &x) in c.iter().enumerate() {
            p[x] = c[(i + 1) % c.len()];
        }
    }
    p
}

pub fn rotation(n: usize) -> Perm {
    (0..n).map(|i| (i + 1) % n).collect()
}

pub fn reflection(n: usize) -> Perm {
    (0..n).map(|i| (n - i) % n).collect()
}

/// Image of a word, letters applied left to right.
pub fn eval(gens: &[Perm], w: &Word) -> Perm {
    let n = gens.first().map_or(1, |g| g.len());
    let mut acc = identity(n);
    for l in w.letters() {
        let g = &gens[l.generator()];
        acc = if l.is_inverted() {
            mul(&acc, &inv(g))
        } else {
            mul(&acc, g)
        };
    }
    acc
}

/// All elements of the group generated by `gens`, as a sorted list.
pub fn closure(n: usize, gens: &[Perm]) -> Vec<Perm> {
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(identity(n));
    queue.push_back(identity(n));
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = mul(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut v: Vec<Perm> = seen.into_iter().collect();
    v.sort();
    v
}

/// The set `H x H` for the subgroup `h` (given as its full element list).
pub fn dcoset(h: &[Perm], x: &Perm) -> BTreeSet<Perm> {
    let mut out = BTreeSet::new();
    for a in h {
        let ax = mul(a, x);
        for b in h {
            out.insert(mul(&ax, b));
        }
    }
    out
}

/// The double-coset partition of `elements` by `h`.
pub fn partition(elements: &[Perm], h: &[Perm]) -> BTreeSet<BTreeSet<Perm>> {
    elements.iter().map(|x| dcoset(h, x)).collect()
}

/// Faithful permutation images of the generators of the finite bundled
/// inputs, with the group order.
pub fn faithful(name: &str) -> Option<(Vec<Perm>, usize)> {
    let s3 = vec![cycles(3, &[&[0, 1]]), cycles(3, &[&[0, 1, 2]])];
    Some(match name {
        "s3-synthetic.skg" | "s3-case3-pplus-eq-p.skg" => (s3, 6),
        "d8-case3.skg" => (vec![rotation(4), reflection(4)], 8),
        "d12-case3.skg" => (vec![rotation(6), reflection(6)], 12),
        "s4-case3.skg" => (vec![cycles(4, &[&[0, 1]]), cycles(4, &[&[1, 2, 3]])], 24),
        "projective-plane.skg" => (vec![cycles(2, &[&[0, 1]])], 2),
        _ => return None,
    })
}

type Dc = BTreeSet<Perm>;

/// A handle invariant computed directly on group elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BruteInvariant {
    One(Dc),
    Pair(BTreeSet<Dc>),
    PairOfPairs(BTreeSet<BTreeSet<Dc>>),
}

pub struct BruteClassifier {
    pub elements: Vec<Perm>,
    pub h: Vec<Perm>,
    pub n: Perm,
    pub gens: Vec<Perm>,
}

impl BruteClassifier {
    /// `case3` selects `P+` and the twist by `n`; otherwise `P`.
    pub fn new(input: &SurfaceKnotInput, gens: Vec<Perm>, case3: bool) -> Self {
        let n = gens[0].len();
        let elements = closure(n, &gens);
        let h_words = if case3 {
            input.p_plus_generators.clone().unwrap()
        } else {
            input.p_generators.clone()
        };
        let h_gens: Vec<Perm> = h_words.iter().map(|w| eval(&gens, w)).collect();
        let h = closure(n, &h_gens);
        let nn = if case3 {
            eval(&gens, input.n_word.as_ref().unwrap())
        } else {
            identity(n)
        };
        BruteClassifier {
            elements,
            h,
            n: nn,
            gens,
        }
    }

    pub fn dc(&self, g: &Perm) -> Dc {
        dcoset(&self.h, g)
    }

    fn pair(a: Dc, b: Dc) -> BTreeSet<Dc> {
        [a, b].into_iter().collect()
    }

    fn theta(&self, g: &Perm) -> BTreeSet<Dc> {
        Self::pair(self.dc(g), self.dc(&mul(&mul(&self.n, g), &self.n)))
    }

    pub fn invariant(&self, case3: bool, oriented: bool, g: &Perm) -> BruteInvariant {
        match (case3, oriented) {
            (false, true) => BruteInvariant::One(self.dc(g)),
            (false, false) => BruteInvariant::Pair(Self::pair(self.dc(g), self.dc(&inv(g)))),
            (true, true) => BruteInvariant::Pair(self.theta(g)),
            (true, false) => BruteInvariant::PairOfPairs(
                [self.theta(g), self.theta(&inv(g))].into_iter().collect(),
            ),
        }
    }

    /// The image of the invariant map.
    pub fn image(&self, case3: bool, oriented: bool) -> BTreeSet<BruteInvariant> {
        self.elements
            .iter()
            .map(|g| self.invariant(case3, oriented, g))
            .collect()
    }
}
