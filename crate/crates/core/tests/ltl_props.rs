//! Property tests for the formula layer: normalization preserves the
//! semantics, printing round-trips through the parser, and the basic
//! semantic identities hold on random lasso words.

use proptest::prelude::*;

use synth_core::ltl::{
    evaluate, parse_formula, LassoWord, Letter, LtlFormula, SignalKind, SignalSpace,
};

fn signals() -> SignalSpace {
    let mut sig = SignalSpace::new();
    sig.declare("a", SignalKind::Input).unwrap();
    sig.declare("b", SignalKind::Output).unwrap();
    sig.declare("c", SignalKind::Output).unwrap();
    sig
}

fn formula_strategy() -> impl Strategy<Value = LtlFormula> {
    let leaf = prop_oneof![
        Just(LtlFormula::True),
        Just(LtlFormula::False),
        (0usize..3).prop_map(LtlFormula::atom),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(LtlFormula::not),
            inner.clone().prop_map(LtlFormula::next),
            inner.clone().prop_map(LtlFormula::finally),
            inner.clone().prop_map(LtlFormula::globally),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LtlFormula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LtlFormula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LtlFormula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LtlFormula::iff(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LtlFormula::until(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| LtlFormula::release(a, b)),
        ]
    })
}

fn lasso_strategy() -> impl Strategy<Value = LassoWord> {
    let letter = (0u64..8).prop_map(Letter);
    (
        prop::collection::vec(letter.clone(), 0..=4),
        prop::collection::vec(letter, 1..=4),
    )
        .prop_map(|(prefix, cycle)| LassoWord::new(prefix, cycle).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn nnf_preserves_semantics(f in formula_strategy(), w in lasso_strategy(), pos in 0usize..4) {
        let nnf = f.to_nnf();
        prop_assert!(nnf.is_nnf());
        prop_assert_eq!(evaluate(&f, &w, pos), evaluate(&nnf, &w, pos));
    }

    #[test]
    fn negation_and_next_identities(f in formula_strategy(), w in lasso_strategy(), pos in 0usize..4) {
        prop_assert_eq!(
            evaluate(&LtlFormula::not(f.clone()), &w, pos),
            !evaluate(&f, &w, pos)
        );
        prop_assert_eq!(
            evaluate(&LtlFormula::next(f.clone()), &w, pos),
            evaluate(&f, &w, pos + 1)
        );
    }

    #[test]
    fn printing_roundtrips(f in formula_strategy()) {
        let sig = signals();
        let printed = f.display(&sig).to_string();
        let reparsed = parse_formula(&printed, &sig, 1)
            .unwrap_or_else(|e| panic!("`{printed}` failed to parse: {e}"));
        prop_assert_eq!(f, reparsed, "printed as `{}`", printed);
    }
}
