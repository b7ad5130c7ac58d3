mod common;

use abductor::model::{
    evaluate, is_explanation, preprocess, v, AbductionInstance, Formula, Relation, Verdict,
};
use abductor::satenum::Dpll;
use abductor::solvers::{oracle_abd, oracle_pabd, Oracle, OracleCaps};
use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evaluate_matches_membership(f in (1u32..=16).prop_flat_map(|n| arb_formula(n, 3, 6))) {
        for a in all_assignments(f.n()) {
            let naive = f.constraints().iter().all(|c| {
                let row: Vec<bool> = c.scope.iter().map(|&x| a.get(x)).collect();
                c.relation.rows().any(|r| r == row)
            });
            let got = evaluate(&f, &a).unwrap();
            prop_assert_eq!(got, naive);
            prop_assert_eq!(evaluate(&f, &a).unwrap(), got);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn is_explanation_matches_definition(
        (i, e) in arb_instance(12, 3, 6).prop_flat_map(|i| { let c = arb_candidate(&i); (Just(i), c) })
    ) {
        prop_assert_eq!(is_explanation(&i, &e, &Dpll).unwrap(), brute_is_explanation(&i, &e));
    }

    #[test]
    fn preprocess_is_idempotent_and_preserves_answers(i in arb_instance(8, 3, 5)) {
        let p = preprocess(&i);
        prop_assert!(p.instance.is_normalized() || p.verdict == Verdict::TriviallyNo);
        prop_assert!(p.instance.n() <= i.n());
        let q = preprocess(&p.instance);
        prop_assert_eq!(&q.instance, &p.instance);
        prop_assert_eq!(q.verdict, Verdict::Unchanged);
        prop_assert_eq!(oracle_abd(&i).unwrap().answer, oracle_abd(&p.instance).unwrap().answer);
        prop_assert_eq!(oracle_pabd(&i).unwrap().answer, oracle_pabd(&p.instance).unwrap().answer);
    }

    #[test]
    fn restored_witnesses_explain_the_input(i in arb_instance(8, 3, 5)) {
        let p = preprocess(&i);
        if p.verdict == Verdict::TriviallyNo {
            return Ok(());
        }
        let o = Oracle::build(&p.instance, OracleCaps::default()).unwrap();
        for e in o.explanations() {
            let back = p.map.restore(&e, &p.instance.hypotheses);
            prop_assert!(brute_is_explanation(&i, &back), "{:?} -> {:?}", e, back);
        }
    }
}

#[test]
fn preprocess_examples() {
    // m outside KB and outside H.
    let i = inst(3, &[&[1, 2]], &[1, 2], &[3]);
    assert_eq!(preprocess(&i).verdict, Verdict::TriviallyNo);
    // h outside KB is dropped.
    let i = inst(3, &[&[-1, 2]], &[1, 3], &[2]);
    let p = preprocess(&i);
    assert_eq!(p.instance.h(), vec![v(1)]);
    assert_eq!(p.verdict, Verdict::TriviallyReduced);
    // Already normalized: fixed point.
    let i = inst(2, &[&[-1, 2]], &[1], &[2]);
    let p = preprocess(&i);
    assert_eq!(p.instance, i);
    assert_eq!(p.verdict, Verdict::Unchanged);
}

#[test]
fn overlap_inside_the_kb_is_not_simply_dropped() {
    // (h → m2) ∧ (h → ¬m), H = {h, m}, M = {m, m2}: no explanation exists,
    // since m2 needs h and h refutes m.
    let i = inst(3, &[&[-1, 3], &[-1, -2]], &[1, 2], &[2, 3]);
    assert!(!oracle_abd(&i).unwrap().answer);
    let p = preprocess(&i);
    assert!(!oracle_abd(&p.instance).unwrap().answer);
}

#[test]
fn evaluate_rejects_short_assignments() {
    let mut f = Formula::empty(2);
    f.add(Relation::neq(), &[1, 2]).unwrap();
    assert!(evaluate(&f, &abductor::model::Assignment::zeros(1)).is_err());
    assert!(AbductionInstance::new(f, [v(3)], []).is_err());
}
