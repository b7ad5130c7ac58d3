use super::{Contract, Reduced, ReductionError, ReductionReport, WitnessBack};
use crate::langlib::{nae, Cnf};
use crate::model::{AbductionInstance, Constraint, Formula, Var};

/// k-CNF abduction to abduction over not-all-equal relations of arity k + 1.
///
/// A clause with literals l_1..l_k becomes NAE^s(x_1, .., x_k, V0) where s
/// is the falsifying assignment of the clause followed by 0; with V0 = 0 the
/// only excluded tuple is the falsifying one. V0 ≠ V1 is added as NAE on two
/// coordinates and V1 joins H and M.
pub fn kcnf_to_nae(inst: &AbductionInstance) -> Result<Reduced, ReductionError> {
    let cnf = Cnf::from_formula(&inst.kb).map_err(|e| ReductionError::Fragment(e.to_string()))?;
    let mut kb = Formula::empty(inst.kb.num_vars());
    let fresh = kb.extend_vars(2);
    let (v0, v1) = (
        Var::from_index(*fresh.start()),
        Var::from_index(*fresh.end()),
    );
    for c in &cnf.clauses {
        let mut s: Vec<bool> = c.lits().iter().map(|l| !l.positive).collect();
        s.push(false);
        let scope: Vec<Var> = c.vars().chain([v0]).collect();
        kb.push(Constraint::new(nae(&s), scope)?)?;
    }
    kb.push(Constraint::new(nae(&[false, false]), vec![v0, v1])?)?;
    let report = ReductionReport::new(
        "kcnf-to-nae",
        inst.n(),
        kb.n(),
        kb.constraints().len(),
        Contract::Cv { constant: 2 },
    );
    let instance = AbductionInstance::new(
        kb,
        inst.hypotheses.iter().copied().chain([v1]),
        inst.manifestations.iter().copied().chain([v1]),
    )?;
    Ok(Reduced {
        instance,
        report,
        back: WitnessBack::Drop(vec![v0, v1]),
    })
}
