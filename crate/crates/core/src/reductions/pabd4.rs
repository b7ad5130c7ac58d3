use super::{Contract, Reduced, ReductionError, ReductionReport, WitnessBack};
use crate::langlib::Clause;
use crate::model::{AbductionInstance, Var};

/// General abduction to positive abduction with one fresh variable per
/// hypothesis: x′ is forced to ¬x by (x ∨ x′) ∧ (¬x ∨ ¬x′) and joins H, so
/// the literal ¬x of an explanation becomes the positive literal x′. Clause
/// widths do not grow beyond max(width, 2).
pub fn abd_to_pabd_4cnf(inst: &AbductionInstance) -> Result<Reduced, ReductionError> {
    let mut kb = inst.kb.clone();
    let h = inst.h();
    let mut pairs: Vec<(Var, Var)> = Vec::new();
    if !h.is_empty() {
        let fresh = kb.extend_vars(h.len() as u32);
        for (&x, i) in h.iter().zip(fresh) {
            let xp = Var::from_index(i);
            kb.push(
                Clause::new([x.positive(), xp.positive()])
                    .expect("distinct")
                    .to_constraint(),
            )?;
            kb.push(
                Clause::new([x.negative(), xp.negative()])
                    .expect("distinct")
                    .to_constraint(),
            )?;
            pairs.push((x, xp));
        }
    }
    let report = ReductionReport::new(
        "abd-to-pabd-4cnf",
        inst.n(),
        kb.n(),
        kb.constraints().len(),
        Contract::Lv {
            factor: 2,
            constant: 0,
        },
    );
    let instance = AbductionInstance::new(
        kb,
        inst.hypotheses
            .iter()
            .copied()
            .chain(pairs.iter().map(|p| p.1)),
        inst.manifestations.iter().copied(),
    )?;
    Ok(Reduced {
        instance,
        report,
        back: WitnessBack::Complement(pairs),
    })
}
