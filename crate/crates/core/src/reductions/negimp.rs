use std::collections::{BTreeSet, HashMap};

use super::{Contract, Reduced, ReductionError, ReductionReport, WitnessBack};
use crate::langlib::{Clause, Cnf, CnfKind};
use crate::model::{preprocess, separate_overlap, AbductionInstance, Formula, Var, Verdict};
use crate::satenum::decide;

/// Abduction over k-CNF⁻ ∪ IMP to abduction over k-CNF⁺ with at most two
/// extra variables.
///
/// Over this fragment a positive atom is derived from a set of facts only
/// along implication chains from a single fact, and a conflict needs at most
/// k facts. So E ⊆ H explains M iff every m is reachable from some h ∈ E and
/// no set S ⊆ E with |S| ≤ k makes KB ∧ M ∧ S unsatisfiable. The output has a
/// clause (h ∨ m) for every reachable pair and a clause ⋁S for every minimal
/// such S. Its negative explanations {¬h : h ∈ E} correspond to the positive
/// explanations E of the input, and ABD and P-ABD agree on the input.
pub fn negimp_to_pos(inst: &AbductionInstance) -> Result<Reduced, ReductionError> {
    let cnf = Cnf::from_formula(&inst.kb).map_err(|e| ReductionError::Fragment(e.to_string()))?;
    if !cnf.is_kind(CnfKind::NegativeOrImplication) {
        return Err(ReductionError::Fragment(
            "knowledge base has a clause outside CNF⁻ ∪ IMP".into(),
        ));
    }
    let (sep, sep_map) = separate_overlap(inst);
    let pre = preprocess(&sep);
    let n_out = sep.kb.num_vars();
    if pre.verdict == Verdict::TriviallyNo {
        let mut kb = Formula::empty(n_out);
        kb.push(Clause::empty().to_constraint())?;
        let report = ReductionReport::new(
            "negimp-to-pos",
            inst.n(),
            n_out as usize,
            1,
            Contract::Cv { constant: 2 },
        );
        let instance = AbductionInstance::new(kb, [], [])?;
        return Ok(Reduced {
            instance,
            report,
            back: WitnessBack::Flip(Vec::new()),
        });
    }
    let red = pre.instance;
    let cnf = Cnf::from_formula(&red.kb).expect("still a CNF");
    let k = cnf
        .clauses
        .iter()
        .filter(|c| c.is_negative())
        .map(Clause::len)
        .max()
        .unwrap_or(0);

    let mut succ: HashMap<Var, Vec<Var>> = HashMap::new();
    for c in cnf.clauses.iter().filter(|c| c.is_implication()) {
        let from = c
            .lits()
            .iter()
            .find(|l| !l.positive)
            .expect("implication")
            .var;
        let to = c
            .lits()
            .iter()
            .find(|l| l.positive)
            .expect("implication")
            .var;
        succ.entry(from).or_default().push(to);
    }

    let mut out: Vec<Clause> = Vec::new();
    let h = red.h();
    for &x in &h {
        let mut reach = BTreeSet::from([x]);
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            for &z in succ.get(&y).into_iter().flatten() {
                if reach.insert(z) {
                    stack.push(z);
                }
            }
        }
        for &m in red.manifestations.intersection(&reach) {
            out.push(Clause::new([x.positive(), m.positive()]).expect("h and m differ"));
        }
    }

    let kb_m = red
        .kb
        .with_units(red.manifestations.iter().map(|&m| (m, true)));
    let mut conflicts: Vec<Vec<Var>> = Vec::new();
    for size in 0..=k.min(h.len()) {
        for s in subsets(&h, size) {
            if conflicts.iter().any(|c| c.iter().all(|x| s.contains(x))) {
                continue;
            }
            if !decide(&kb_m.with_units(s.iter().map(|&x| (x, true)))) {
                conflicts.push(s);
            }
        }
    }
    out.extend(
        conflicts
            .iter()
            .map(|s| Clause::new(s.iter().map(|x| x.positive())).expect("distinct vars")),
    );

    let kb = Cnf::new(n_out, out).to_formula();
    let report = ReductionReport::new(
        "negimp-to-pos",
        inst.n(),
        n_out as usize,
        kb.constraints().len(),
        Contract::Cv { constant: 2 },
    );
    let back = WitnessBack::Flip(vec![
        (pre.map, red.hypotheses.clone()),
        (sep_map, sep.hypotheses.clone()),
    ]);
    let instance = AbductionInstance::new(kb, red.hypotheses, red.manifestations)?;
    Ok(Reduced {
        instance,
        report,
        back,
    })
}

/// Subsets of `items` of the given size in lexicographic order.
fn subsets(items: &[Var], size: usize) -> Vec<Vec<Var>> {
    fn go(items: &[Var], size: usize, start: usize, cur: &mut Vec<Var>, out: &mut Vec<Vec<Var>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, size, 0, &mut Vec::new(), &mut out);
    out
}
