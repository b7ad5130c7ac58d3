use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    abd_kcnf_pos, baseline_abd, baseline_pabd, enum_abd, oracle_abd, oracle_pabd, pabd_enum,
    pabd_one_valid, pabd_recursive, AbdResult, Algorithm, ExplanationSet, SolverError,
};
use crate::model::{
    is_explanation, preprocess, AbductionInstance, Explanation, SatDecider, Verdict,
};
use crate::reductions::ReductionReport;
use crate::satenum::{enumerate, enumerate_weight_ordered, Dpll, EnumStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Abd,
    Pabd,
}

impl Mode {
    pub fn tag(self) -> &'static str {
        match self {
            Mode::Abd => "abd",
            Mode::Pabd => "pabd",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "abd" => Ok(Mode::Abd),
            "pabd" => Ok(Mode::Pabd),
            _ => Err(format!("unknown mode {s:?}, expected abd or pabd")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    /// Answer and witness for the original instance.
    pub result: AbdResult,
    pub verdict: Verdict,
    /// Explanations found by the enumeration solvers, mapped back.
    pub explanation_set: Option<ExplanationSet>,
    pub report: Option<ReductionReport>,
}

/// Greedily drops literals while the rest still explains M. The result is
/// ⊆-minimal among the subsets of `e`.
pub fn minimize_explanation(
    inst: &AbductionInstance,
    e: &Explanation,
    sat: &impl SatDecider,
) -> Explanation {
    let mut cur = e.clone();
    for &l in &e.literals {
        let mut next = cur.clone();
        next.literals.remove(&l);
        if is_explanation(inst, &next, sat).unwrap_or(false) {
            cur = next;
        }
    }
    cur
}

fn applicable(algo: Algorithm, mode: Mode) -> bool {
    match algo {
        Algorithm::Oracle | Algorithm::Baseline => true,
        Algorithm::Enum | Algorithm::SimpleSat => mode == Mode::Abd,
        Algorithm::PabdRec | Algorithm::PabdEnum | Algorithm::OneValid => mode == Mode::Pabd,
    }
}

/// Preprocesses, runs `algo`, maps the witness back, optionally minimizes it
/// and checks it against the original instance.
pub fn solve(
    inst: &AbductionInstance,
    algo: Algorithm,
    mode: Mode,
    minimize: bool,
) -> Result<SolveOutcome, SolverError> {
    if !applicable(algo, mode) {
        return Err(SolverError::NotApplicable {
            algo: algo.tag(),
            mode: mode.tag(),
        });
    }
    let pre = preprocess(inst);
    if pre.verdict == Verdict::TriviallyNo {
        let result = AbdResult {
            answer: false,
            witness: None,
            stats: EnumStats::default(),
            algorithm: algo,
        };
        return Ok(SolveOutcome {
            result,
            verdict: pre.verdict,
            explanation_set: None,
            report: None,
        });
    }
    let red = &pre.instance;
    let mut set = None;
    let mut report = None;
    let mut result = match (algo, mode) {
        (Algorithm::Oracle, Mode::Abd) => oracle_abd(red)?,
        (Algorithm::Oracle, Mode::Pabd) => oracle_pabd(red)?,
        (Algorithm::Baseline, Mode::Abd) => baseline_abd(red, &Dpll)?,
        (Algorithm::Baseline, Mode::Pabd) => baseline_pabd(red, &Dpll)?,
        (Algorithm::Enum, _) => {
            let (r, s) = enum_abd(red, enumerate(&red.kb))?;
            set = Some(s);
            r
        }
        (Algorithm::PabdEnum, _) => {
            let (r, s) = pabd_enum(red, enumerate_weight_ordered(&red.kb, &red.h()))?;
            set = Some(s);
            r
        }
        (Algorithm::PabdRec, _) => pabd_recursive(red, &Dpll)?,
        (Algorithm::OneValid, _) => pabd_one_valid(red, &Dpll)?,
        (Algorithm::SimpleSat, _) => {
            let (r, rep) = abd_kcnf_pos(red)?;
            report = rep;
            r
        }
    };
    if let Some(s) = &mut set {
        s.explanations = s
            .explanations
            .iter()
            .map(|e| pre.map.restore(e, &red.hypotheses))
            .collect();
    }
    if let Some(w) = result.witness.take() {
        let mut w = pre.map.restore(&w, &red.hypotheses);
        if minimize {
            w = minimize_explanation(inst, &w, &Dpll);
        }
        if !is_explanation(inst, &w, &Dpll)? {
            return Err(SolverError::WitnessRejected(format!("{w:?}")));
        }
        result.witness = Some(w);
    }
    Ok(SolveOutcome {
        result,
        verdict: pre.verdict,
        explanation_set: set,
        report,
    })
}
