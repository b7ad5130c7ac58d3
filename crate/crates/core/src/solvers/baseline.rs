use super::{AbdResult, Algorithm, SolverError};
use crate::model::{AbductionInstance, Explanation, Formula, Literal, SatDecider};
use crate::satenum::EnumStats;

/// One satisfiability check of KB ∧ E plus one unsatisfiability check of
/// KB ∧ E ∧ ¬m per manifestation. Each decider call is tallied as a leaf.
pub(crate) fn check_candidate(
    inst: &AbductionInstance,
    e: &Explanation,
    sat: &impl SatDecider,
    stats: &mut EnumStats,
) -> bool {
    let kb_e = inst.kb.with_units(e.units());
    stats.leaves += 1;
    if !sat.decide(&kb_e) {
        return false;
    }
    entails_all(&kb_e, inst, sat, stats)
}

pub(crate) fn entails_all(
    base: &Formula,
    inst: &AbductionInstance,
    sat: &impl SatDecider,
    stats: &mut EnumStats,
) -> bool {
    inst.manifestations.iter().all(|&m| {
        stats.leaves += 1;
        !sat.decide(&base.with_units([(m, false)]))
    })
}

fn run(
    inst: &AbductionInstance,
    sat: &impl SatDecider,
    candidate: impl Fn(u64) -> Explanation,
) -> Result<AbdResult, SolverError> {
    let k = inst.hypotheses.len();
    if k >= 63 {
        return Err(SolverError::TooManyHypotheses(k));
    }
    let mut stats = EnumStats::default();
    for mask in 0..1u64 << k {
        let e = candidate(mask);
        stats.branch_nodes += 1;
        if check_candidate(inst, &e, sat, &mut stats) {
            stats.models_emitted = 1;
            return Ok(AbdResult {
                answer: true,
                witness: Some(e),
                stats,
                algorithm: Algorithm::Baseline,
            });
        }
    }
    Ok(AbdResult {
        answer: false,
        witness: None,
        stats,
        algorithm: Algorithm::Baseline,
    })
}

/// Tries all 2^|H| full candidates.
pub fn baseline_abd(
    inst: &AbductionInstance,
    sat: &impl SatDecider,
) -> Result<AbdResult, SolverError> {
    let h = inst.h();
    run(inst, sat, |mask| {
        Explanation::new(
            h.iter()
                .enumerate()
                .map(|(i, &x)| Literal::new(x, mask >> i & 1 == 1)),
        )
    })
}

/// Tries every positive candidate E ⊆ H.
pub fn baseline_pabd(
    inst: &AbductionInstance,
    sat: &impl SatDecider,
) -> Result<AbdResult, SolverError> {
    let h = inst.h();
    run(inst, sat, |mask| {
        Explanation::positive(
            h.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| x),
        )
    })
}
