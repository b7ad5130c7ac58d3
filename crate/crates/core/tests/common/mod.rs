#![allow(dead_code)]

use std::sync::Arc;

use abductor::langlib::{Clause, Cnf};
use abductor::model::{v, AbductionInstance, Assignment, Explanation, Formula, Literal, Relation};
use proptest::prelude::*;

pub fn lits(d: &[i64]) -> Explanation {
    Explanation::new(d.iter().map(|&x| Literal::from_dimacs(x).unwrap()))
}

pub fn cnf(n: u32, clauses: &[&[i64]]) -> Cnf {
    Cnf::new(
        n,
        clauses
            .iter()
            .map(|c| Clause::from_dimacs(c).unwrap())
            .collect(),
    )
}

pub fn inst(n: u32, clauses: &[&[i64]], h: &[u32], m: &[u32]) -> AbductionInstance {
    AbductionInstance::new(
        cnf(n, clauses).to_formula(),
        h.iter().map(|&x| v(x)),
        m.iter().map(|&x| v(x)),
    )
    .unwrap()
}

/// All 2^n assignments, variable 1 in bit 0.
pub fn all_assignments(n: usize) -> impl Iterator<Item = Assignment> {
    (0..1u64 << n).map(move |b| Assignment::from_bits(b, n))
}

pub fn arb_relation(max_arity: usize) -> impl Strategy<Value = Arc<Relation>> {
    (1..=max_arity).prop_flat_map(|k| {
        proptest::collection::btree_set(0..1u64 << k, 0..=(1usize << k))
            .prop_map(move |ts| Arc::new(Relation::new(k, ts).unwrap()))
    })
}

/// Random formula over exactly `n` variables; scopes may repeat variables.
pub fn arb_formula(
    n: u32,
    max_arity: usize,
    max_constraints: usize,
) -> impl Strategy<Value = Formula> {
    let con = arb_relation(max_arity)
        .prop_flat_map(move |r| (Just(r.clone()), proptest::collection::vec(1..=n, r.arity())));
    proptest::collection::vec(con, 0..=max_constraints).prop_map(move |cs| {
        let mut f = Formula::empty(n);
        for (r, scope) in cs {
            f.add(r, &scope).unwrap();
        }
        f
    })
}

/// Random instance with arbitrary (possibly overlapping) H and M.
pub fn arb_instance(
    max_n: u32,
    max_arity: usize,
    max_constraints: usize,
) -> impl Strategy<Value = AbductionInstance> {
    (1..=max_n).prop_flat_map(move |n| {
        (
            arb_formula(n, max_arity, max_constraints),
            proptest::collection::btree_set(1..=n, 0..=n as usize),
            proptest::collection::btree_set(1..=n, 1..=n as usize),
        )
            .prop_map(|(f, h, m)| {
                AbductionInstance::new(f, h.into_iter().map(v), m.into_iter().map(v)).unwrap()
            })
    })
}

/// Random explanation candidate over H: each hypothesis absent, positive or negative.
pub fn arb_candidate(inst: &AbductionInstance) -> impl Strategy<Value = Explanation> {
    let h = inst.h();
    proptest::collection::vec(0u8..3, h.len()).prop_map(move |sel| {
        Explanation::new(
            h.iter()
                .zip(sel)
                .filter(|(_, s)| *s > 0)
                .map(|(&x, s)| Literal::new(x, s == 1)),
        )
    })
}

/// Explanation by the definition, over all assignments.
pub fn brute_is_explanation(inst: &AbductionInstance, e: &Explanation) -> bool {
    let mut consistent = false;
    for a in all_assignments(inst.n()) {
        let kb = inst.kb.constraints().iter().all(|c| {
            let row: Vec<bool> = c.scope.iter().map(|&x| a.get(x)).collect();
            c.relation.rows().any(|r| r == row)
        });
        if !kb || !e.units().all(|(x, b)| a.get(x) == b) {
            continue;
        }
        consistent = true;
        if inst.manifestations.iter().any(|&m| !a.get(m)) {
            return false;
        }
    }
    consistent
}
