//! Randomized properties of the classifier on the bundled inputs.

mod common;

use std::sync::OnceLock;

use proptest::prelude::*;

use skg_core::corpus::SKG_FILES;
use skg_core::selftest::kinds_for;
use skg_core::{
    parse_input, quotient_separate, ClassifierContext, EnumerationLimits, Letter, Separation,
    SeparationOptions, Word,
};

fn contexts() -> &'static Vec<(&'static str, ClassifierContext)> {
    static CELL: OnceLock<Vec<(&'static str, ClassifierContext)>> = OnceLock::new();
    CELL.get_or_init(|| {
        SKG_FILES
            .iter()
            .filter_map(|(name, text)| {
                let limits = EnumerationLimits::new(20_000, 200_000).unwrap();
                ClassifierContext::build(parse_input(text).unwrap(), limits)
                    .ok()
                    .map(|c| (*name, c))
            })
            .collect()
    })
}

fn raw_word(generators: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..generators, any::<bool>()), 0..max_len)
        .prop_map(|v| v.into_iter().map(|(g, i)| Letter::new(g, i)).collect())
}

/// An input index, a handle kind index, and three words.
fn scenario() -> impl Strategy<Value = (usize, usize, Word, Word, Word)> {
    (0..contexts().len(), 0..2usize).prop_flat_map(|(i, k)| {
        let gens = contexts()[i].1.input().presentation.generator_count();
        (
            Just(i),
            Just(k),
            raw_word(gens, 12),
            raw_word(gens, 12),
            raw_word(gens, 12),
        )
    })
}

/// Product of the subgroup generators selected by `picks`.
fn subgroup_word(gens: &[Word], picks: &[(usize, bool)]) -> Word {
    picks.iter().fold(Word::identity(), |acc, &(i, inv)| {
        let g = &gens[i % gens.len()];
        acc.concat(&if inv { g.invert() } else { g.clone() })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn representative_independence(
        (i, k, g, _, _) in scenario(),
        left in prop::collection::vec((0..8usize, any::<bool>()), 0..6),
        right in prop::collection::vec((0..8usize, any::<bool>()), 0..6),
    ) {
        let (_, ctx) = &contexts()[i];
        let kind = kinds_for(ctx.input().surface_orientable)[k];
        let h = if kind.case.requires_orientable() {
            ctx.input().p_generators.clone()
        } else {
            ctx.input().p_plus_generators.clone().unwrap()
        };
        let slid = subgroup_word(&h, &left).concat(&g).concat(&subgroup_word(&h, &right));
        prop_assert_eq!(ctx.handle_invariant(kind, &g).unwrap(), ctx.handle_invariant(kind, &slid).unwrap());
    }

    #[test]
    fn reversal_and_orientation_swap((i, k, g, _, _) in scenario()) {
        let (_, ctx) = &contexts()[i];
        let kind = kinds_for(ctx.input().surface_orientable)[k];
        let base = ctx.handle_invariant(kind, &g).unwrap();
        if !kind.core_oriented {
            prop_assert_eq!(&ctx.handle_invariant(kind, &g.invert()).unwrap(), &base);
        }
        let n = ctx.n();
        prop_assert_eq!(ctx.handle_invariant(kind, &n.concat(&g).concat(n)).unwrap(), base);
    }

    #[test]
    fn inversion_and_twist_relations((i, _, g, _, _) in scenario()) {
        let (_, ctx) = &contexts()[i];
        let p = ctx.p_space();
        let d = p.id(&g).unwrap();
        prop_assert_eq!(p.invert(&d).unwrap(), p.id(&g.invert()).unwrap());
        if let Some(pp) = ctx.p_plus_space() {
            let d = pp.id(&g).unwrap();
            let n = ctx.n();
            let t = pp.twist(n, &d, ctx.report()).unwrap();
            prop_assert_eq!(&t, &pp.id(&n.concat(&g).concat(n)).unwrap());
            prop_assert_eq!(pp.twist(n, &t, ctx.report()).unwrap(), d.clone());
            // Twisting commutes with inversion.
            prop_assert_eq!(
                pp.invert(&t).unwrap(),
                pp.twist(n, &pp.invert(&d).unwrap(), ctx.report()).unwrap()
            );
        }
    }

    #[test]
    fn equivalence_is_an_equivalence_relation((i, k, a, b, c) in scenario()) {
        let (_, ctx) = &contexts()[i];
        let kind = kinds_for(ctx.input().surface_orientable)[k];
        let eq = |x: &Word, y: &Word| ctx.equivalent(kind, x, y).unwrap();
        prop_assert!(eq(&a, &a));
        prop_assert_eq!(eq(&a, &b), eq(&b, &a));
        if eq(&a, &b) && eq(&b, &c) {
            prop_assert!(eq(&a, &c));
        }
    }

    #[test]
    fn computed_invariants_lie_in_the_image((i, k, g, _, _) in scenario()) {
        let (_, ctx) = &contexts()[i];
        let kind = kinds_for(ctx.input().surface_orientable)[k];
        let inv = ctx.handle_invariant(kind, &g).unwrap();
        prop_assert!(ctx.image_member(kind, &inv).unwrap());
        let classes = ctx.enumerate_classes(kind).unwrap();
        prop_assert!(classes.iter().any(|c| c.invariant == inv));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn separation_agrees_with_exact((i, k, a, b, _) in scenario()) {
        let (_, ctx) = &contexts()[i];
        let kind = kinds_for(ctx.input().surface_orientable)[k];
        let options = SeparationOptions { max_degree: 4, max_homs: 16, ..SeparationOptions::default() };
        let verdict = quotient_separate(ctx.input(), kind, &a, &b, options).unwrap();
        if matches!(verdict, Separation::Distinct { .. }) {
            prop_assert!(!ctx.equivalent(kind, &a, &b).unwrap());
        }
        let same = quotient_separate(ctx.input(), kind, &a, &a, options).unwrap();
        prop_assert!(matches!(same, Separation::Unknown { .. }), "separated identical words");
    }
}

#[test]
fn class_counts_match_brute_force() {
    for (name, ctx) in contexts() {
        let Some((gens, order)) = common::faithful(name) else {
            continue;
        };
        assert_eq!(common::closure(gens[0].len(), &gens).len(), order, "{name}");
        for kind in kinds_for(ctx.input().surface_orientable) {
            let case3 = !kind.case.requires_orientable();
            let brute = common::BruteClassifier::new(ctx.input(), gens.clone(), case3);
            assert_eq!(
                ctx.enumerate_classes(kind).unwrap().len(),
                brute.image(case3, kind.core_oriented).len(),
                "{name} {kind:?}"
            );
        }
    }
}
