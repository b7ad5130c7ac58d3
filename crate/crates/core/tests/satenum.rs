mod common;

use std::collections::HashSet;

use abductor::harness::bench::fit_base;
use abductor::harness::generate::{random_xsat, rng, simplesat_adversarial, xsat_chain};
use abductor::langlib::{aff, branching_closure, xsat_family, ConstraintLanguage};
use abductor::model::{evaluate, v, Assignment, Formula, Var};
use abductor::satenum::{
    decide, decide_with_stats, enumerate, enumerate_weight_ordered, solve_simple_sat,
    sparse_enumerate, ModelStream, SatError, SimpleSatInstance,
};
use common::*;
use proptest::prelude::*;
use rand::Rng;

fn brute(f: &Formula) -> HashSet<u64> {
    all_assignments(f.n())
        .filter(|a| evaluate(f, a).unwrap())
        .map(|a| a.to_bits())
        .collect()
}

/// Collects a stream, failing on duplicates.
fn distinct(s: ModelStream) -> HashSet<u64> {
    let mut out = HashSet::new();
    for a in s {
        assert!(out.insert(a.to_bits()), "duplicate model {a:?}");
    }
    out
}

/// Random formula whose relations come from `lang`.
fn arb_lang_formula(
    lang: ConstraintLanguage,
    max_n: u32,
    max_constraints: usize,
) -> impl Strategy<Value = Formula> {
    let rels = lang.relations().to_vec();
    (2..=max_n).prop_flat_map(move |n| {
        let rels = rels.clone();
        let con = (0..rels.len()).prop_flat_map(move |i| {
            let r = rels[i].clone();
            let k = r.arity();
            (Just(r), proptest::collection::vec(1..=n, k))
        });
        proptest::collection::vec(con, 0..=max_constraints).prop_map(move |cs| {
            let mut f = Formula::empty(n);
            for (r, scope) in cs {
                f.add(r, &scope).unwrap();
            }
            f
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dpll_models_are_exact(f in (1u32..=12).prop_flat_map(|n| arb_formula(n, 3, 8))) {
        let want = brute(&f);
        prop_assert_eq!(distinct(enumerate(&f)), want.clone());
        prop_assert_eq!(decide(&f), !want.is_empty());
    }

    #[test]
    fn weight_ordered_models_are_exact_and_sorted(
        (f, h) in (1u32..=10).prop_flat_map(|n| (arb_formula(n, 3, 6), proptest::collection::btree_set(1..=n, 0..=n as usize)))
    ) {
        let h: Vec<Var> = h.into_iter().map(v).collect();
        let models: Vec<Assignment> = enumerate_weight_ordered(&f, &h).collect();
        for w in models.windows(2) {
            prop_assert!(w[0].weight(&h) >= w[1].weight(&h));
        }
        let set: HashSet<u64> = models.iter().map(|a| a.to_bits()).collect();
        prop_assert_eq!(set.len(), models.len());
        prop_assert_eq!(set, brute(&f));
    }

    #[test]
    fn sparse_models_on_xsat_are_exact(f in arb_lang_formula(xsat_family(3), 14, 10)) {
        let cl = branching_closure(&xsat_family(3));
        prop_assert_eq!(distinct(sparse_enumerate(&f, &cl, 1).unwrap()), brute(&f));
    }

    #[test]
    fn sparse_models_on_aff_are_exact(f in arb_lang_formula(aff(3), 14, 10)) {
        let cl = branching_closure(&aff(3));
        prop_assert_eq!(distinct(sparse_enumerate(&f, &cl, 1).unwrap()), brute(&f));
    }

    #[test]
    fn sparse_models_on_any_closure_are_exact(
        (rels, seed) in (proptest::collection::vec(arb_relation(3), 1..3), any::<u64>())
    ) {
        let cl = branching_closure(&ConstraintLanguage::new(rels.clone()));
        let mut r = rng(seed);
        let n = r.gen_range(2..=10u32);
        let mut f = Formula::empty(n);
        for _ in 0..r.gen_range(0..8) {
            let rel = cl.relations()[r.gen_range(0..cl.len())].clone();
            let scope: Vec<u32> = (0..rel.arity()).map(|_| r.gen_range(1..=n)).collect();
            f.add(rel, &scope).unwrap();
        }
        prop_assert_eq!(distinct(sparse_enumerate(&f, &cl, 1).unwrap()), brute(&f));
    }

    #[test]
    fn simplesat_agrees_with_brute_force(
        (n, clauses, dnfs) in (2u32..=10).prop_flat_map(|n| (
            Just(n),
            proptest::collection::vec(proptest::collection::btree_set(1..=n, 1..=2), 0..8),
            proptest::collection::vec(
                proptest::collection::vec(proptest::collection::btree_set(1..=n, 0..=2), 0..3), 0..4),
        ))
    ) {
        let vars = |s: &std::collections::BTreeSet<u32>| s.iter().map(|&x| v(x)).collect::<Vec<_>>();
        let inst = SimpleSatInstance::new(
            n,
            clauses.iter().map(vars).collect(),
            dnfs.iter().map(|d| d.iter().map(vars).collect()).collect(),
            2,
        ).unwrap();
        let any = all_assignments(n as usize).any(|a| inst.satisfied_by(&a));
        let (model, _) = solve_simple_sat(&inst);
        prop_assert_eq!(model.is_some(), any);
        if let Some(a) = model {
            prop_assert!(inst.satisfied_by(&a));
        }
    }
}

#[test]
fn engines_at_fourteen_variables() {
    let cl = branching_closure(&xsat_family(3));
    for seed in 0..5 {
        let f = random_xsat(&mut rng(seed), 14, 3, Some(1));
        let want = brute(&f);
        assert_eq!(distinct(enumerate(&f)), want);
        assert_eq!(distinct(sparse_enumerate(&f, &cl, 1).unwrap()), want);
    }
    let chain = xsat_chain(7).kb;
    assert_eq!(
        distinct(sparse_enumerate(&chain, &cl, 1).unwrap()).len(),
        128
    );
}

#[test]
fn sparse_rejects_relations_outside_the_closure() {
    let mut f = Formula::empty(2);
    f.add(abductor::langlib::imp_relation(), &[1, 2]).unwrap();
    let cl = branching_closure(&xsat_family(3));
    assert!(matches!(
        sparse_enumerate(&f, &cl, 1),
        Err(SatError::OutsideClosure(_))
    ));
}

#[test]
fn single_exactly_one_counts() {
    let mut f = Formula::empty(3);
    f.add(abductor::langlib::one_in(3), &[1, 2, 3]).unwrap();
    let cl = branching_closure(&xsat_family(3));
    let mut s = sparse_enumerate(&f, &cl, 1).unwrap();
    assert_eq!(s.by_ref().count(), 3);
    let st = s.stats();
    assert_eq!((st.branch_nodes, st.leaves, st.models_emitted), (1, 3, 3));
}

#[test]
fn sparse_leaf_bound_on_random_xsat() {
    let cl = branching_closure(&xsat_family(3));
    for n in 4..=24usize {
        for seed in 0..3 {
            let f = random_xsat(&mut rng(seed * 1000 + n as u64), n, 3, None);
            let mut s = sparse_enumerate(&f, &cl, 1).unwrap();
            for _ in s.by_ref() {}
            let bound = (n * n) as f64 * 2f64.sqrt().powi(n as i32);
            assert!(
                (s.stats().leaves as f64) <= bound,
                "n={n} leaves={}",
                s.stats().leaves
            );
        }
    }
}

fn fib(n: u32) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    a
}

#[test]
fn simplesat_adversarial_tree_is_fibonacci() {
    let mut pts = Vec::new();
    for n in 8..=24usize {
        let (model, st) = solve_simple_sat(&simplesat_adversarial(n));
        assert!(model.is_none());
        assert_eq!(st.branch_nodes, fib(n as u32 + 1) - 1, "n={n}");
        pts.push((n as f64, st.branch_nodes as f64));
    }
    // F(n+1) - 1 tends to φ^n; the -1 pulls the fit a hair above φ at small n.
    let (base, _) = fit_base(&pts);
    assert!(base <= 1.65, "base {base}");
    assert!((base - 1.618_034).abs() < 0.002, "base {base}");
}

#[test]
fn decide_examples() {
    let f = cnf(2, &[&[1, 2], &[-1, -2]]).to_formula();
    let (sat, st) = decide_with_stats(&f);
    assert!(sat);
    assert!(st.max_depth <= 2);
    assert!(!decide(&cnf(1, &[&[1], &[-1]]).to_formula()));
}
