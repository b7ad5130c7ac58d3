use super::{AbdResult, Algorithm, SolverError};
use crate::model::{preprocess, AbductionInstance, Explanation, Verdict};
use crate::reductions::{abd_to_simplesat, ReductionReport};
use crate::satenum::{solve_simple_sat, EnumStats};

/// Abduction over k-CNF⁺ through SimpleSAT.
///
/// Over a positive CNF, positive literals of an explanation never help, so an
/// explanation exists iff a negative one does. Those correspond to models σ
/// of the SimpleSAT instance and the witness is {¬h : σ(h) = 0}.
pub fn abd_kcnf_pos(
    inst: &AbductionInstance,
) -> Result<(AbdResult, Option<ReductionReport>), SolverError> {
    let pre = preprocess(inst);
    if pre.verdict == Verdict::TriviallyNo {
        let result = AbdResult {
            answer: false,
            witness: None,
            stats: EnumStats::default(),
            algorithm: Algorithm::SimpleSat,
        };
        return Ok((result, None));
    }
    let red = &pre.instance;
    let (si, report) = abd_to_simplesat(red).map_err(|e| SolverError::Fragment(e.to_string()))?;
    let (model, mut stats) = solve_simple_sat(&si);
    stats.models_emitted = u64::from(model.is_some());
    let witness = model.map(|sigma| {
        let e = Explanation::new(
            red.hypotheses
                .iter()
                .filter(|&&h| !sigma.get(h))
                .map(|h| h.negative()),
        );
        pre.map.restore(&e, &red.hypotheses)
    });
    Ok((
        AbdResult {
            answer: witness.is_some(),
            witness,
            stats,
            algorithm: Algorithm::SimpleSat,
        },
        Some(report),
    ))
}
