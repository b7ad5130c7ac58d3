use super::{Contract, ReductionError, ReductionReport};
use crate::langlib::Cnf;
use crate::model::{AbductionInstance, Var};
use crate::satenum::SimpleSatInstance;

/// k-CNF⁺ abduction to SimpleSAT^k.
///
/// Clauses made of hypotheses only (G) are kept as positive clauses. A clause
/// C with exactly one manifestation m and C ∖ {m} ⊆ H contributes the term
/// ¬h_1 ∧ … ∧ ¬h_j to D_m. Other clauses can always be satisfied by setting
/// their remaining variables to 1 and are dropped. The models of
/// ⋀G ∧ ⋀_m D_m, a formula over H only, are in one-to-one correspondence with
/// the negative explanations {¬h : σ(h) = 0}.
pub fn abd_to_simplesat(
    inst: &AbductionInstance,
) -> Result<(SimpleSatInstance, ReductionReport), ReductionError> {
    let cnf = Cnf::from_formula(&inst.kb).map_err(|e| ReductionError::Fragment(e.to_string()))?;
    if !cnf.clauses.iter().all(|c| c.is_positive()) {
        return Err(ReductionError::Fragment(
            "knowledge base is not positive CNF".into(),
        ));
    }
    let k = cnf.width().max(1);
    let m_list: Vec<Var> = inst.m();
    let mut g: Vec<Vec<Var>> = Vec::new();
    let mut d: Vec<Vec<Vec<Var>>> = vec![Vec::new(); m_list.len()];
    let mut unsat = false;
    let mut dropped = 0;
    for c in &cnf.clauses {
        let ms: Vec<Var> = c
            .vars()
            .filter(|x| inst.manifestations.contains(x))
            .collect();
        let others = c
            .vars()
            .any(|x| !inst.manifestations.contains(&x) && !inst.hypotheses.contains(&x));
        if others || ms.len() >= 2 {
            dropped += 1;
        } else if let [m] = ms[..] {
            let i = m_list.iter().position(|&y| y == m).expect("manifestation");
            d[i].push(c.vars().filter(|&x| x != m).collect());
        } else if c.is_empty() {
            unsat = true;
        } else {
            g.push(c.vars().collect());
        }
    }
    if unsat {
        d.push(Vec::new());
    }
    let si = SimpleSatInstance::new(inst.kb.num_vars(), g, d, k)
        .map_err(|e| ReductionError::Input(e.to_string()))?;
    let out_vars = si.vars().len();
    let mut report = ReductionReport::new(
        "abd-to-simplesat",
        inst.n(),
        out_vars,
        si.positive_clauses.len() + si.negative_dnfs.len(),
        Contract::Shrinking,
    );
    report.dropped = dropped;
    Ok((si, report))
}
