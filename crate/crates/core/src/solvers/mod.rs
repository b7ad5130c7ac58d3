//! Abduction solvers and the brute-force oracles they are checked against.

mod baseline;
mod enumeration;
mod kcnf_pos;
mod one_valid;
mod oracle;
mod recursive;
mod solve;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::langlib::LangError;
use crate::model::{Explanation, ModelError};
use crate::satenum::{EnumStats, SatError};

pub use baseline::{baseline_abd, baseline_pabd};
pub use enumeration::{enum_abd, pabd_enum};
pub use kcnf_pos::abd_kcnf_pos;
pub use one_valid::pabd_one_valid;
pub use oracle::{
    brute_models, brute_sat, oracle_abd, oracle_abd_with, oracle_pabd, oracle_pabd_with, Oracle,
    OracleCaps,
};
pub use recursive::{pabd_recursive, pabd_recursive_audited, VisitAudit};
pub use solve::{minimize_explanation, solve, Mode, SolveOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Oracle,
    Baseline,
    Enum,
    PabdRec,
    PabdEnum,
    #[serde(rename = "simplesat")]
    SimpleSat,
    OneValid,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Oracle,
        Algorithm::Baseline,
        Algorithm::Enum,
        Algorithm::PabdRec,
        Algorithm::PabdEnum,
        Algorithm::SimpleSat,
        Algorithm::OneValid,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Oracle => "oracle",
            Algorithm::Baseline => "baseline",
            Algorithm::Enum => "enum",
            Algorithm::PabdRec => "pabd-rec",
            Algorithm::PabdEnum => "pabd-enum",
            Algorithm::SimpleSat => "simplesat",
            Algorithm::OneValid => "one-valid",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.tag() == s)
    }
}

/// Outcome of one solver run.
///
/// For solvers driven by a SAT decider (baseline, pabd-rec, one-valid) the
/// statistics count candidate explanations as `branch_nodes` and decider calls
/// as `leaves`. Enumeration-based solvers report the statistics of their model
/// stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbdResult {
    pub answer: bool,
    pub witness: Option<Explanation>,
    pub stats: EnumStats,
    pub algorithm: Algorithm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExplanationSetKind {
    AllFull,
    SubsetMaximalPositive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplanationSet {
    pub explanations: BTreeSet<Explanation>,
    pub kind: ExplanationSetKind,
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("instance too large for the oracle: n={n}, |H|={h} (caps {max_vars}, {max_h})")]
    TooLarge {
        n: usize,
        h: usize,
        max_vars: usize,
        max_h: usize,
    },
    #[error("fragment error: {0}")]
    Fragment(String),
    #[error("model stream broke its weight order: {prev} then {next}")]
    OrderViolation { prev: usize, next: usize },
    #[error("algorithm {algo} does not solve mode {mode}")]
    NotApplicable {
        algo: &'static str,
        mode: &'static str,
    },
    #[error("too many hypotheses for bitmask bookkeeping: {0}")]
    TooManyHypotheses(usize),
    #[error("witness {0} failed the final check")]
    WitnessRejected(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error(transparent)]
    Sat(#[from] SatError),
}
