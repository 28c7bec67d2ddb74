//! Built-in test inputs: finite groups with known orders and faithful
//! permutation representations, and a set of `.skg` files.

use crate::input::GroupPresentation;
use crate::quotient::Permutation;

/// A finite group given both by a presentation and by permutations of its
/// generators that realize it faithfully.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    pub name: &'static str,
    pub presentation: GroupPresentation,
    pub order: usize,
    /// Images of the generators, in presentation order.
    pub permutations: Vec<Permutation>,
    /// Subgroups, each given by generating words.
    pub subgroups: Vec<Vec<&'static str>>,
}

impl FiniteGroup {
    fn new(
        name: &'static str,
        presentation: &str,
        order: usize,
        permutations: Vec<Permutation>,
        subgroups: &[&[&'static str]],
    ) -> Self {
        FiniteGroup {
            name,
            presentation: GroupPresentation::parse(presentation)
                .expect("corpus presentation parses"),
            order,
            permutations,
            subgroups: subgroups.iter().map(|s| s.to_vec()).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.permutations.first().map_or(1, |p| p.degree())
    }
}

fn cycles(degree: usize, c: &[&[u32]]) -> Permutation {
    Permutation::from_cycles(degree, c).expect("corpus cycles are valid")
}

fn cyclic(n: u32) -> Permutation {
    Permutation::from_images((0..n).map(|i| (i + 1) % n).collect()).expect("rotation")
}

/// Rotation and reflection of the regular `n`-gon.
fn dihedral(n: u32) -> Vec<Permutation> {
    let r = cyclic(n);
    let s = Permutation::from_images((0..n).map(|i| (n - i) % n).collect()).expect("reflection");
    vec![r, s]
}

/// Right regular representation of `<x, y | x^2n, y^2 = x^n, y^-1 x y = x^-1>`
/// on the elements `x^i y^j`, numbered `i + 2n j`.
fn dicyclic(n: u32) -> Vec<Permutation> {
    let m = 2 * n;
    let index = |i: u32, j: u32| i % m + m * j;
    // x^i y^j * x^k y^l
    let mul = |i: u32, j: u32, k: u32, l: u32| {
        let i2 = if j == 0 { i + k } else { i + m - k % m };
        if j + l == 2 {
            index(i2 + n, 0)
        } else {
            index(i2, j + l)
        }
    };
    let right = |k: u32, l: u32| {
        let images = (0..2 * m).map(|e| mul(e % m, e / m, k, l)).collect();
        Permutation::from_images(images).expect("regular representation")
    };
    vec![right(1, 0), right(0, 1)]
}

/// Finite groups of order at most 48 with subgroups to enumerate.
pub fn finite_groups() -> Vec<FiniteGroup> {
    vec![
        FiniteGroup::new(
            "trivial",
            "a b | a b a^-1 b^-2, b a b^-1 a^-2",
            1,
            vec![cycles(1, &[]), cycles(1, &[])],
            &[&["a"]],
        ),
        FiniteGroup::new("C4", "a | a^4", 4, vec![cyclic(4)], &[&["a^2"], &["a"]]),
        FiniteGroup::new("C5", "a | a^5", 5, vec![cyclic(5)], &[&["a"]]),
        FiniteGroup::new("C6", "a | a^6", 6, vec![cyclic(6)], &[&["a^2"], &["a^3"]]),
        FiniteGroup::new(
            "V4",
            "a b | a^2, b^2, a b a^-1 b^-1",
            4,
            vec![
                cycles(4, &[&[0, 1], &[2, 3]]),
                cycles(4, &[&[0, 2], &[1, 3]]),
            ],
            &[&["a"], &["b"], &["a b"]],
        ),
        FiniteGroup::new(
            "S3",
            "a b | a^2, b^3, a b a b",
            6,
            vec![cycles(3, &[&[0, 1]]), cycles(3, &[&[0, 1, 2]])],
            &[&["a"], &["b"]],
        ),
        FiniteGroup::new(
            "D8",
            "r s | r^4, s^2, r s r s",
            8,
            dihedral(4),
            &[&["s"], &["r^2"], &["r^2", "s"], &["r"], &["r s"]],
        ),
        FiniteGroup::new(
            "Q8",
            "x y | x^4, x^2 y^-2, y^-1 x y x",
            8,
            dicyclic(2),
            &[&["x"], &["y"], &["x^2"]],
        ),
        FiniteGroup::new(
            "D10",
            "r s | r^5, s^2, r s r s",
            10,
            dihedral(5),
            &[&["s"], &["r"]],
        ),
        FiniteGroup::new(
            "Dic3",
            "x y | x^6, x^3 y^-2, y^-1 x y x",
            12,
            dicyclic(3),
            &[&["x^2"], &["y"], &["x^3"]],
        ),
        FiniteGroup::new(
            "A4",
            "a b | a^2, b^3, a b a b a b",
            12,
            vec![cycles(4, &[&[0, 1], &[2, 3]]), cycles(4, &[&[0, 1, 2]])],
            &[&["a"], &["b"], &["a", "b a b^-1"]],
        ),
        FiniteGroup::new(
            "D12",
            "r s | r^6, s^2, r s r s",
            12,
            dihedral(6),
            &[&["r^3", "s"], &["r^3"], &["r^2"], &["s"]],
        ),
        FiniteGroup::new(
            "C3xC3",
            "a b | a^3, b^3, a b a^-1 b^-1",
            9,
            vec![cycles(6, &[&[0, 1, 2]]), cycles(6, &[&[3, 4, 5]])],
            &[&["a"], &["a b"]],
        ),
        FiniteGroup::new(
            "Q16",
            "x y | x^8, x^4 y^-2, y^-1 x y x",
            16,
            dicyclic(4),
            &[&["x^4"], &["y"], &["x^2", "y"]],
        ),
        FiniteGroup::new(
            "S4",
            "a b | a^2, b^3, a b a b a b a b",
            24,
            vec![cycles(4, &[&[0, 1]]), cycles(4, &[&[1, 2, 3]])],
            &[&["a"], &["b"], &["b a"], &["b a", "b^-1 a b"]],
        ),
        FiniteGroup::new(
            "D24",
            "r s | r^12, s^2, r s r s",
            24,
            dihedral(12),
            &[&["r^4", "s"], &["r^6"], &["s"]],
        ),
        FiniteGroup::new(
            "S4xC2",
            "a b c | a^2, b^3, a b a b a b a b, c^2, a c a^-1 c^-1, b c b^-1 c^-1",
            48,
            vec![
                cycles(6, &[&[0, 1]]),
                cycles(6, &[&[1, 2, 3]]),
                cycles(6, &[&[4, 5]]),
            ],
            &[&["c"], &["a", "b"], &["a", "c"]],
        ),
    ]
}

/// The bundled `.skg` files as `(file name, contents)`.
pub const SKG_FILES: &[(&str, &str)] = &[
    ("unknotted.skg", include_str!("../data/unknotted.skg")),
    ("t2-synthetic.skg", include_str!("../data/t2-synthetic.skg")),
    ("s3-synthetic.skg", include_str!("../data/s3-synthetic.skg")),
    ("d8-case3.skg", include_str!("../data/d8-case3.skg")),
    ("d12-case3.skg", include_str!("../data/d12-case3.skg")),
    ("s4-case3.skg", include_str!("../data/s4-case3.skg")),
    (
        "s3-case3-pplus-eq-p.skg",
        include_str!("../data/s3-case3-pplus-eq-p.skg"),
    ),
    (
        "projective-plane.skg",
        include_str!("../data/projective-plane.skg"),
    ),
    ("spun-trefoil.skg", include_str!("../data/spun-trefoil.skg")),
];

/// Looks up a bundled `.skg` file by name.
pub fn skg(name: &str) -> Option<&'static str> {
    SKG_FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}
