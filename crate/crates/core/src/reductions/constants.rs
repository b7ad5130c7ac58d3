use super::{Contract, Reduced, ReductionError, ReductionReport, WitnessBack};
use crate::langlib::{derive_inequality, ConstraintLanguage};
use crate::model::{AbductionInstance, Constraint, Formula, Relation, Var};

fn is_constant(r: &Relation) -> Option<bool> {
    if r.is_bottom() {
        Some(false)
    } else if r.is_top() {
        Some(true)
    } else {
        None
    }
}

/// Removes the unary constants ⊥ and ⊤ from a knowledge base whose other
/// relations form a complement-invariant language.
pub fn eliminate_constants(inst: &AbductionInstance) -> Result<Reduced, ReductionError> {
    let lang = ConstraintLanguage::new(
        inst.kb
            .relations()
            .into_iter()
            .filter(|r| is_constant(r).is_none()),
    );
    eliminate_constants_with(inst, &lang)
}

/// Same, with R_≠ defined from `lang`. Two fresh variables V0 and V1 are
/// added with V0 ≠ V1; ⊥(x) becomes x ≠ V1 and ⊤(y) becomes y ≠ V0. V1 joins
/// both H and M, so every explanation fixes V1 = 1; complement invariance
/// handles the symmetric case.
pub fn eliminate_constants_with(
    inst: &AbductionInstance,
    lang: &ConstraintLanguage,
) -> Result<Reduced, ReductionError> {
    let def = derive_inequality(lang)?;
    let mut kb = Formula::empty(inst.kb.num_vars());
    let fresh = kb.extend_vars(2);
    let (v0, v1) = (
        Var::from_index(*fresh.start()),
        Var::from_index(*fresh.end()),
    );
    for c in inst.kb.constraints() {
        let out: Constraint = match is_constant(&c.relation) {
            Some(false) => def.apply(c.scope[0], v1),
            Some(true) => def.apply(c.scope[0], v0),
            None => {
                if !lang.contains(&c.relation) {
                    return Err(ReductionError::Fragment(format!(
                        "relation {} outside the language",
                        c.relation.name().unwrap_or("unnamed")
                    )));
                }
                c.clone()
            }
        };
        kb.push(out)?;
    }
    kb.push(def.apply(v0, v1))?;
    let report = ReductionReport::new(
        "eliminate-constants",
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
