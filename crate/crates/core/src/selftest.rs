//! Built-in oracle suite: the classifier and the enumerator checked against
//! brute-force computations in permutation groups, on the bundled corpus.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::classifier::{CaseLabel, ClassifierContext, HandleKind};
use crate::corpus::{finite_groups, FiniteGroup, SKG_FILES};
use crate::double_coset::DoubleCosetSpace;
use crate::enumeration::{enumerate, EnumerationLimits};
use crate::input::parse_input;
use crate::quotient::{
    brute_force_class_count, double_coset, find_homomorphisms, generate_group, quotient_separate,
    Permutation, PermutationAssignment, Separation, SeparationOptions,
};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// A random word of length below `max_len` over `generators` letters.
pub fn random_word<R: Rng>(rng: &mut R, generators: usize, max_len: usize) -> Word {
    let len = rng.random_range(0..max_len.max(1));
    (0..len)
        .map(|_| Letter::new(rng.random_range(0..generators), rng.random_bool(0.5)))
        .collect()
}

/// A random product of the given words and their inverses.
pub fn random_product<R: Rng>(rng: &mut R, gens: &[Word], max_len: usize) -> Word {
    if gens.is_empty() {
        return Word::identity();
    }
    let len = rng.random_range(0..max_len.max(1));
    let mut w = Word::identity();
    for _ in 0..len {
        let g = &gens[rng.random_range(0..gens.len())];
        w = if rng.random_bool(0.5) {
            w.concat(g)
        } else {
            w.concat(&g.invert())
        };
    }
    w
}

/// Every handle kind valid for an input of the given orientability.
pub fn kinds_for(orientable: bool) -> Vec<HandleKind> {
    let cases: &[CaseLabel] = if orientable {
        &[CaseLabel::Case1, CaseLabel::Case2]
    } else {
        &[CaseLabel::Case3]
    };
    cases
        .iter()
        .flat_map(|&c| [HandleKind::new(c, true), HandleKind::new(c, false)])
        .collect()
}

type Outcome = Result<String, String>;

fn group_elements(g: &FiniteGroup) -> Vec<Permutation> {
    generate_group(g.degree(), &g.permutations)
}

fn subgroup_perms(g: &FiniteGroup, words: &[&str]) -> Vec<Permutation> {
    let a = PermutationAssignment::new(g.degree(), g.permutations.clone());
    words
        .iter()
        .map(|w| a.evaluate(&g.presentation.word(w).expect("corpus word")))
        .collect()
}

fn enumeration_orders() -> Outcome {
    for g in finite_groups() {
        let expected = group_elements(&g).len();
        let t = enumerate(&g.presentation, &[], EnumerationLimits::default())
            .map_err(|e| format!("{}: {e}", g.name))?;
        if t.index() != expected || expected != g.order {
            return Err(format!(
                "{}: enumerated {}, brute force {}",
                g.name,
                t.index(),
                expected
            ));
        }
    }
    Ok(format!("{} groups", finite_groups().len()))
}

fn enumeration_indices() -> Outcome {
    let mut count = 0;
    for g in finite_groups() {
        let order = group_elements(&g).len();
        for sub in &g.subgroups {
            let h = generate_group(g.degree(), &subgroup_perms(&g, sub)).len();
            let words: Vec<Word> = sub
                .iter()
                .map(|w| g.presentation.word(w).unwrap())
                .collect();
            let t = enumerate(&g.presentation, &words, EnumerationLimits::default())
                .map_err(|e| e.to_string())?;
            if t.index() * h != order {
                return Err(format!(
                    "{} / <{}>: index {} but |H| = {h}",
                    g.name,
                    sub.join(", "),
                    t.index()
                ));
            }
            count += 1;
        }
    }
    Ok(format!("{count} subgroups"))
}

fn double_coset_partitions() -> Outcome {
    let mut count = 0;
    for g in finite_groups() {
        let a = PermutationAssignment::new(g.degree(), g.permutations.clone());
        let elements = group_elements(&g);
        for sub in &g.subgroups {
            let hp = subgroup_perms(&g, sub);
            let h = generate_group(g.degree(), &hp);
            let mut expected: BTreeSet<Vec<Permutation>> = BTreeSet::new();
            for x in &elements {
                expected.insert(double_coset(&hp, x, &hp));
            }
            let words: Vec<Word> = sub
                .iter()
                .map(|w| g.presentation.word(w).unwrap())
                .collect();
            let t = enumerate(&g.presentation, &words, EnumerationLimits::default())
                .map_err(|e| e.to_string())?;
            let space = DoubleCosetSpace::new(Arc::new(t));
            let mut got: BTreeSet<Vec<Permutation>> = BTreeSet::new();
            for class in space.all() {
                let mut set = BTreeSet::new();
                for &c in class.id.orbit() {
                    let rep = a.evaluate(&space.table().witness(c).map_err(|e| e.to_string())?);
                    set.extend(h.iter().map(|y| y.compose(&rep)));
                }
                got.insert(set.into_iter().collect());
            }
            if got != expected {
                return Err(format!(
                    "{} / <{}>: partitions differ",
                    g.name,
                    sub.join(", ")
                ));
            }
            count += 1;
        }
    }
    Ok(format!("{count} subgroups"))
}

struct Loaded {
    name: &'static str,
    ctx: ClassifierContext,
}

fn contexts() -> Vec<Loaded> {
    SKG_FILES
        .iter()
        .filter_map(|(name, text)| {
            let input = parse_input(text).ok()?;
            let ctx =
                ClassifierContext::build(input, EnumerationLimits::new(50_000, 500_000).ok()?)
                    .ok()?;
            Some(Loaded { name, ctx })
        })
        .collect()
}

fn slide_and_reversal(loaded: &[Loaded], rng: &mut StdRng, trials: usize) -> Outcome {
    let mut count = 0;
    for l in loaded {
        let ctx = &l.ctx;
        let k = ctx.input().presentation.generator_count();
        for kind in kinds_for(ctx.input().surface_orientable) {
            let h = match kind.case {
                CaseLabel::Case3 => ctx.input().p_plus_generators.clone().unwrap_or_default(),
                _ => ctx.input().p_generators.clone(),
            };
            for _ in 0..trials {
                let g = random_word(rng, k, 12);
                let p = random_product(rng, &h, 6);
                let q = random_product(rng, &h, 6);
                let base = ctx.handle_invariant(kind, &g).map_err(|e| e.to_string())?;
                let slid = ctx
                    .handle_invariant(kind, &p.concat(&g).concat(&q))
                    .map_err(|e| e.to_string())?;
                if base != slid {
                    return Err(format!("{}: slide changed the invariant of {g:?}", l.name));
                }
                if !kind.core_oriented
                    && ctx
                        .handle_invariant(kind, &g.invert())
                        .map_err(|e| e.to_string())?
                        != base
                {
                    return Err(format!(
                        "{}: reversal changed the invariant of {g:?}",
                        l.name
                    ));
                }
                if kind.case == CaseLabel::Case3 {
                    let n = ctx.n();
                    let swapped = ctx
                        .handle_invariant(kind, &n.concat(&g).concat(n))
                        .map_err(|e| e.to_string())?;
                    if swapped != base {
                        return Err(format!(
                            "{}: orientation swap changed the invariant of {g:?}",
                            l.name
                        ));
                    }
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} trials"))
}

fn case2_matches_case1(loaded: &[Loaded], rng: &mut StdRng) -> Outcome {
    for l in loaded.iter().filter(|l| l.ctx.input().surface_orientable) {
        let k = l.ctx.input().presentation.generator_count();
        for _ in 0..50 {
            let g = random_word(rng, k, 10);
            for oriented in [true, false] {
                let a = l
                    .ctx
                    .handle_invariant(HandleKind::new(CaseLabel::Case1, oriented), &g);
                let b = l
                    .ctx
                    .handle_invariant(HandleKind::new(CaseLabel::Case2, oriented), &g);
                if a != b {
                    return Err(format!("{}: case 2 differs on {g:?}", l.name));
                }
            }
        }
    }
    Ok("identical".into())
}

fn involutions(loaded: &[Loaded]) -> Outcome {
    let mut count = 0;
    for l in loaded {
        let ctx = &l.ctx;
        let mut spaces = vec![(ctx.p_space(), None)];
        if let Some(pp) = ctx.p_plus_space() {
            spaces.push((pp, Some(ctx.n())));
        }
        for (space, n) in spaces {
            for class in space.all() {
                let d = class.id;
                let inv = space.invert(&d).map_err(|e| e.to_string())?;
                if space.invert(&inv).map_err(|e| e.to_string())? != d {
                    return Err(format!(
                        "{}: inversion is not an involution at {d:?}",
                        l.name
                    ));
                }
                if let Some(n) = n {
                    let t = space
                        .twist(n, &d, ctx.report())
                        .map_err(|e| e.to_string())?;
                    if space
                        .twist(n, &t, ctx.report())
                        .map_err(|e| e.to_string())?
                        != d
                    {
                        return Err(format!("{}: twist is not an involution at {d:?}", l.name));
                    }
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} double cosets"))
}

fn image_accepts_classes(loaded: &[Loaded], rng: &mut StdRng) -> Outcome {
    let mut count = 0;
    for l in loaded {
        let ctx = &l.ctx;
        let k = ctx.input().presentation.generator_count();
        for kind in kinds_for(ctx.input().surface_orientable) {
            for class in ctx.enumerate_classes(kind).map_err(|e| e.to_string())? {
                if !ctx
                    .image_member(kind, &class.invariant)
                    .map_err(|e| e.to_string())?
                {
                    return Err(format!(
                        "{}: class of {:?} rejected",
                        l.name, class.representative
                    ));
                }
                count += 1;
            }
            for _ in 0..50 {
                let inv = ctx
                    .handle_invariant(kind, &random_word(rng, k, 10))
                    .map_err(|e| e.to_string())?;
                if !ctx.image_member(kind, &inv).map_err(|e| e.to_string())? {
                    return Err(format!("{}: computed invariant rejected", l.name));
                }
            }
        }
    }
    Ok(format!("{count} classes"))
}

fn witnesses_rejected(loaded: &[Loaded]) -> Outcome {
    let mut count = 0;
    for l in loaded {
        let ctx = &l.ctx;
        for kind in kinds_for(ctx.input().surface_orientable) {
            if let Some(w) = ctx
                .nonsurjectivity_witness(kind)
                .map_err(|e| e.to_string())?
            {
                if ctx.image_member(kind, &w).map_err(|e| e.to_string())? {
                    return Err(format!("{}: witness {} accepted", l.name, ctx.render(&w)));
                }
                count += 1;
            }
        }
    }
    let required = [("t2-synthetic", false), ("d8-case3", true)];
    for (name, oriented) in required {
        let l = loaded
            .iter()
            .find(|l| l.name.starts_with(name))
            .ok_or_else(|| format!("{name} missing"))?;
        let case = if l.ctx.input().surface_orientable {
            CaseLabel::Case1
        } else {
            CaseLabel::Case3
        };
        if l.ctx
            .nonsurjectivity_witness(HandleKind::new(case, oriented))
            .map_err(|e| e.to_string())?
            .is_none()
        {
            return Err(format!("{name}: no witness produced"));
        }
    }
    Ok(format!("{count} witnesses"))
}

fn equivalence_relation(loaded: &[Loaded], rng: &mut StdRng) -> Outcome {
    for l in loaded {
        let ctx = &l.ctx;
        let k = ctx.input().presentation.generator_count();
        for kind in kinds_for(ctx.input().surface_orientable) {
            let words: Vec<Word> = (0..12).map(|_| random_word(rng, k, 8)).collect();
            let eq = |a: &Word, b: &Word| ctx.equivalent(kind, a, b).map_err(|e| e.to_string());
            for a in &words {
                if !eq(a, a)? {
                    return Err(format!("{}: not reflexive", l.name));
                }
                for b in &words {
                    if eq(a, b)? != eq(b, a)? {
                        return Err(format!("{}: not symmetric", l.name));
                    }
                    for c in &words {
                        if eq(a, b)? && eq(b, c)? && !eq(a, c)? {
                            return Err(format!("{}: not transitive", l.name));
                        }
                    }
                }
            }
        }
    }
    Ok("reflexive, symmetric, transitive".into())
}

fn class_counts(loaded: &[Loaded]) -> Outcome {
    let mut count = 0;
    for l in loaded {
        let ctx = &l.ctx;
        let input = ctx.input();
        // Infinite groups have no regular permutation representation.
        let Ok(regular) = enumerate(
            &input.presentation,
            &[],
            EnumerationLimits::new(10_000, 100_000).expect("limits"),
        ) else {
            continue;
        };
        let a = PermutationAssignment::from_table(&regular);
        for kind in kinds_for(input.surface_orientable) {
            let exact = ctx
                .enumerate_classes(kind)
                .map_err(|e| e.to_string())?
                .len();
            let brute = brute_force_class_count(input, kind, &a).map_err(|e| e.to_string())?;
            if exact != brute {
                return Err(format!("{}: {exact} classes, brute force {brute}", l.name));
            }
            count += 1;
        }
    }
    Ok(format!("{count} class counts"))
}

fn infinite_cyclic_single_class(loaded: &[Loaded]) -> Outcome {
    let l = loaded
        .iter()
        .find(|l| l.name == "unknotted.skg")
        .ok_or("unknotted input missing")?;
    let oriented_cords = l.ctx.p_space().len();
    let cores = l
        .ctx
        .enumerate_classes(HandleKind::new(CaseLabel::Case1, true))
        .map_err(|e| e.to_string())?;
    let handles = l
        .ctx
        .enumerate_classes(HandleKind::new(CaseLabel::Case1, false))
        .map_err(|e| e.to_string())?;
    if (oriented_cords, cores.len(), handles.len()) != (1, 1, 1) {
        return Err(format!(
            "{oriented_cords}, {}, {} classes",
            cores.len(),
            handles.len()
        ));
    }
    Ok("one class each".into())
}

fn quotient_soundness(loaded: &[Loaded], rng: &mut StdRng, pairs: usize) -> Outcome {
    let options = SeparationOptions {
        max_degree: 4,
        max_homs: 16,
        ..SeparationOptions::default()
    };
    let mut equivalent = 0;
    let mut distinct = 0;
    let mut separated = 0;
    for i in 0..pairs {
        let l = &loaded[i % loaded.len()];
        let ctx = &l.ctx;
        let input = ctx.input();
        let k = input.presentation.generator_count();
        let kinds = kinds_for(input.surface_orientable);
        let kind = kinds[rng.random_range(0..kinds.len())];
        let g1 = random_word(rng, k, 8);
        let g2 = if rng.random_bool(0.5) {
            let h = match kind.case {
                CaseLabel::Case3 => input.p_plus_generators.clone().unwrap_or_default(),
                _ => input.p_generators.clone(),
            };
            random_product(rng, &h, 4)
                .concat(&g1)
                .concat(&random_product(rng, &h, 4))
        } else {
            random_word(rng, k, 8)
        };
        let exact = ctx.equivalent(kind, &g1, &g2).map_err(|e| e.to_string())?;
        let verdict =
            quotient_separate(input, kind, &g1, &g2, options).map_err(|e| e.to_string())?;
        match (exact, &verdict) {
            (true, Separation::Distinct { .. }) => {
                return Err(format!(
                    "{}: separated equivalent words {g1:?}, {g2:?}",
                    l.name
                ));
            }
            (true, _) => equivalent += 1,
            (false, Separation::Distinct { .. }) => {
                distinct += 1;
                separated += 1;
            }
            (false, _) => distinct += 1,
        }
    }
    Ok(format!(
        "{pairs} pairs: {equivalent} equivalent, {distinct} inequivalent of which {separated} separated"
    ))
}

fn homomorphisms_satisfy_relators() -> Outcome {
    let mut count = 0;
    for g in finite_groups().iter().take(8) {
        for degree in 1..=4 {
            for a in find_homomorphisms(&g.presentation, degree, 200) {
                if !a.satisfies(&g.presentation) {
                    return Err(format!(
                        "{}: degree {degree} assignment violates a relator",
                        g.name
                    ));
                }
                count += 1;
            }
        }
    }
    // Every homomorphism is determined by its images, so counting against
    // brute force over all image tuples checks completeness.
    let p =
        crate::input::GroupPresentation::parse("a b | a^2, b^3, a b a b").expect("S3 presentation");
    let s3 = generate_group(
        3,
        &[
            Permutation::from_cycles(3, &[&[0, 1]]).expect("cycle"),
            Permutation::from_cycles(3, &[&[0, 1, 2]]).expect("cycle"),
        ],
    );
    let mut brute = 0;
    for x in &s3 {
        for y in &s3 {
            if PermutationAssignment::new(3, vec![x.clone(), y.clone()]).satisfies(&p) {
                brute += 1;
            }
        }
    }
    let found = find_homomorphisms(&p, 3, usize::MAX).len();
    if found != brute {
        return Err(format!("S3 -> S3: found {found}, brute force {brute}"));
    }
    Ok(format!("{count} assignments"))
}

/// Runs every property with a fixed seed.
pub fn run_selftest(seed: u64) -> Vec<PropertyResult> {
    let mut rng = StdRng::seed_from_u64(seed);
    let loaded = contexts();
    let mut results = Vec::new();
    let mut record = |name: &'static str, outcome: Outcome| {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        results.push(PropertyResult {
            name,
            passed,
            detail,
        });
    };
    record("enumeration_orders", enumeration_orders());
    record("enumeration_indices", enumeration_indices());
    record("double_coset_partitions", double_coset_partitions());
    record(
        "slide_reversal_swap_invariance",
        slide_and_reversal(&loaded, &mut rng, 200),
    );
    record(
        "case2_matches_case1",
        case2_matches_case1(&loaded, &mut rng),
    );
    record("involutions", involutions(&loaded));
    record(
        "image_accepts_classes",
        image_accepts_classes(&loaded, &mut rng),
    );
    record(
        "nonsurjectivity_witnesses_rejected",
        witnesses_rejected(&loaded),
    );
    record(
        "equivalence_relation",
        equivalence_relation(&loaded, &mut rng),
    );
    record("class_counts_match_brute_force", class_counts(&loaded));
    record(
        "infinite_cyclic_single_class",
        infinite_cyclic_single_class(&loaded),
    );
    record(
        "quotient_soundness",
        quotient_soundness(&loaded, &mut rng, 200),
    );
    record(
        "homomorphisms_satisfy_relators",
        homomorphisms_satisfy_relators(),
    );
    results
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes() {
        for r in run_selftest(7) {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn loads_every_finite_input() {
        let names: Vec<&str> = contexts().iter().map(|l| l.name).collect();
        assert_eq!(names.len(), SKG_FILES.len() - 1, "{names:?}");
        assert!(!names.contains(&"spun-trefoil.skg"));
    }
}
