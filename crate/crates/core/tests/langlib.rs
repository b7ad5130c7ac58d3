mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use abductor::langlib::{
    aff, branching_closure, check_sparsity, derive_inequality, equations, equations_language,
    has_constant_polymorphism, identification_minors, imp, is_branching_closed,
    is_complement_invariant, is_non_trivial, is_one_valid, k_cnf_pos, minor, nae, nae_language,
    substitute, xsat_family, ConstraintLanguage, LangError,
};
use abductor::model::{evaluate, v, Assignment, Formula, Relation};
use common::arb_relation;
use proptest::prelude::*;

/// Every partial map of `k` coordinates to constants.
fn partial_maps(k: usize) -> Vec<BTreeMap<usize, bool>> {
    let mut out = vec![BTreeMap::new()];
    for i in 0..k {
        let mut next = Vec::new();
        for f in out {
            next.push(f.clone());
            for b in [false, true] {
                let mut g = f.clone();
                g.insert(i, b);
                next.push(g);
            }
        }
        out = next;
    }
    out
}

/// Every surjection [k] → [m] for m ≤ k.
fn surjections(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for m in 1..=k {
        let mut g = vec![0; k];
        loop {
            if (0..m).all(|j| g.contains(&j)) {
                out.push(g.clone());
            }
            let mut i = 0;
            while i < k && g[i] == m - 1 {
                g[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
            g[i] += 1;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn substitutions_compose(r in arb_relation(5)) {
        let k = r.arity();
        for f in partial_maps(k) {
            let free: Vec<usize> = (0..k).filter(|i| !f.contains_key(i)).collect();
            let once = substitute(&r, &f).unwrap();
            for g in partial_maps(free.len()) {
                // g in the coordinates left after f.
                let mut both = f.clone();
                both.extend(g.iter().map(|(&j, &b)| (free[j], b)));
                prop_assert_eq!(substitute(&r, &both).unwrap(), substitute(&once, &g).unwrap());
            }
        }
    }

    #[test]
    fn minors_compose(r in arb_relation(4)) {
        let k = r.arity();
        for g in surjections(k) {
            let m = g.iter().max().unwrap() + 1;
            let rg = minor(&r, &g).unwrap();
            for h in surjections(m) {
                let gh: Vec<usize> = g.iter().map(|&j| h[j]).collect();
                prop_assert_eq!(minor(&rg, &h).unwrap(), minor(&r, &gh).unwrap());
            }
        }
    }

    #[test]
    fn closure_is_closed(rels in proptest::collection::vec(arb_relation(3), 1..3)) {
        let lang = ConstraintLanguage::new(rels);
        let cl = branching_closure(&lang);
        prop_assert!(is_branching_closed(&cl));
        for r in cl.relations() {
            for f in partial_maps(r.arity()) {
                prop_assert!(cl.contains(&substitute(r, &f).unwrap()));
            }
            for s in identification_minors(r) {
                prop_assert!(cl.contains(&s));
            }
        }
        for r in lang.relations() {
            prop_assert!(cl.contains(r));
        }
    }
}

#[test]
fn minor_by_the_definition() {
    // R_{1/3}(y1, y1, y2): 2·y1 + y2 = 1 leaves only (0, 1).
    let r = equations(3, 4, 1).unwrap();
    assert_eq!(minor(&r, &[0, 0, 1]).unwrap().tuples(), &[0b10]);
    assert!(matches!(
        minor(&r, &[0, 2, 2]),
        Err(LangError::NotSurjective { .. })
    ));
    assert!(matches!(
        minor(&r, &[0, 1]),
        Err(LangError::MinorLength { .. })
    ));
}

#[test]
fn closure_of_inequality() {
    let cl = branching_closure(&ConstraintLanguage::new([Relation::neq()]));
    assert!(cl.contains(&Relation::bottom()));
    assert!(cl.contains(&Relation::top()));
    assert_eq!(cl.len(), 6);
}

#[test]
fn equation_minors_are_substitution_closed() {
    for k in 1..=4 {
        let cl = branching_closure(&equations_language(k, k + 1));
        assert!(is_branching_closed(&cl), "k={k}");
        for r in cl.relations() {
            for f in partial_maps(r.arity()) {
                assert!(cl.contains(&substitute(r, &f).unwrap()));
            }
        }
    }
}

#[test]
fn equation_minors_can_be_trivial() {
    // Identifying both coordinates of x1 + x2 ≡ 0 (mod 2) gives 2x ≡ 0, which
    // every x satisfies. So the minor closure of the equations does contain
    // trivial relations and only the closure property is asserted above.
    let r = equations(2, 2, 0).unwrap();
    let m = minor(&r, &[0, 0]).unwrap();
    assert!(!is_non_trivial(&m));
    assert!(branching_closure(&equations_language(2, 2))
        .relations()
        .iter()
        .any(|r| r.arity() > 0 && !is_non_trivial(r)));
}

/// Complement-invariant relations of arity 2..=4, one per union of tuple pairs {t, t̄}.
fn complement_invariant_pool() -> Vec<Arc<Relation>> {
    let mut out = Vec::new();
    for k in 2..=4usize {
        let mask = (1u64 << k) - 1;
        let reps: Vec<u64> = (0..1u64 << (k - 1)).collect();
        for sel in 1..1u64 << reps.len() {
            let ts = reps
                .iter()
                .enumerate()
                .filter(|(i, _)| sel >> i & 1 == 1)
                .flat_map(|(_, &t)| [t, t ^ mask]);
            out.push(Arc::new(Relation::new(k, ts).unwrap()));
        }
    }
    out
}

#[test]
fn inequality_from_every_qualifying_language() {
    let pool = complement_invariant_pool();
    let mut qualifying = 0;
    let mut check = |lang: ConstraintLanguage| {
        assert!(is_complement_invariant(&lang));
        let free = lang
            .relations()
            .iter()
            .any(|r| !r.contains(0) && !r.contains(r.all_ones()));
        match derive_inequality(&lang) {
            Ok(def) => {
                assert!(free);
                assert_eq!(def.relation, *Relation::neq());
                let mut f = Formula::empty(2);
                f.push(def.apply(v(1), v(2))).unwrap();
                for b in 0..4 {
                    let a = Assignment::from_bits(b, 2);
                    assert_eq!(evaluate(&f, &a).unwrap(), a.get(v(1)) != a.get(v(2)));
                }
                qualifying += 1;
            }
            Err(e) => {
                assert!(!free);
                assert_eq!(e, LangError::NoConstantFreeRelation);
            }
        }
    };
    for r in &pool {
        check(ConstraintLanguage::new([r.clone()]));
    }
    for pair in pool.chunks(2) {
        check(ConstraintLanguage::new(pair.iter().cloned()));
    }
    assert!(qualifying > 100);
}

#[test]
fn inequality_needs_complement_invariance() {
    assert_eq!(
        derive_inequality(&k_cnf_pos(2)),
        Err(LangError::NotComplementInvariant)
    );
    let def = derive_inequality(&nae_language(3)).unwrap();
    assert_eq!(def.pattern, vec![false, false, true]);
}

#[test]
fn language_predicates() {
    assert!(is_complement_invariant(&nae_language(3)));
    assert!(is_complement_invariant(&ConstraintLanguage::new([nae(&[
        true, false, true
    ])])));
    assert!(!is_complement_invariant(&xsat_family(3)));
    assert!(is_one_valid(&imp()));
    assert!(has_constant_polymorphism(&imp(), false));
    assert!(!is_one_valid(&xsat_family(2)));
    assert!(has_constant_polymorphism(
        &aff(3)
            .relations()
            .iter()
            .filter(|r| r.contains(0))
            .cloned()
            .collect(),
        false
    ));
}

#[test]
fn sparsity_certificates() {
    let cl = branching_closure(&xsat_family(3));
    let cert = check_sparsity(&cl, 3f64.powf(1.0 / 3.0) + 1e-9, 1).unwrap();
    assert_eq!(cert.verified_up_to, 3);
    // |XOR_k| = 2^{k-1}, so arity 3 needs c ≥ 2^{2/3}. x + x ≡ 0 is the full unary relation.
    let aff3 = branching_closure(&aff(3));
    assert!(check_sparsity(&aff3, 4f64.cbrt() + 1e-9, 2).is_ok());
    assert!(check_sparsity(&aff3, 2f64.sqrt(), 2).is_err());
    assert!(matches!(
        check_sparsity(&k_cnf_pos(3), 1.5, 1),
        Err(LangError::NotSparse(_))
    ));
    assert!(matches!(
        check_sparsity(&cl, 2.0, 1),
        Err(LangError::SparsityConstant(_))
    ));
}
