use super::baseline::entails_all;
use super::{AbdResult, Algorithm, SolverError};
use crate::langlib::{is_one_valid, ConstraintLanguage};
use crate::model::{AbductionInstance, Explanation, SatDecider};
use crate::satenum::EnumStats;

/// Positive abduction over a 1-valid language: an explanation exists iff H is
/// one, and KB ∧ H is always consistent, so only |M| entailment checks remain.
pub fn pabd_one_valid(
    inst: &AbductionInstance,
    sat: &impl SatDecider,
) -> Result<AbdResult, SolverError> {
    let lang = ConstraintLanguage::new(inst.kb.relations());
    if !is_one_valid(&lang) {
        return Err(SolverError::Fragment(
            "knowledge base is not 1-valid".into(),
        ));
    }
    let kb_h = inst
        .kb
        .with_units(inst.hypotheses.iter().map(|&x| (x, true)));
    let mut stats = EnumStats {
        branch_nodes: 1,
        ..EnumStats::default()
    };
    let answer = entails_all(&kb_h, inst, sat, &mut stats);
    stats.models_emitted = u64::from(answer);
    let witness = answer.then(|| Explanation::positive(inst.hypotheses.iter().copied()));
    Ok(AbdResult {
        answer,
        witness,
        stats,
        algorithm: Algorithm::OneValid,
    })
}
