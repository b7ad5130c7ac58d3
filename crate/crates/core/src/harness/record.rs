use serde::{Deserialize, Serialize};

use crate::model::{Explanation, Verdict};
use crate::reductions::ReductionReport;
use crate::satenum::EnumStats;
use crate::solvers::{Mode, SolveOutcome};

pub const RESULT_SCHEMA: &str = "abductor.result/1";

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RecordStats {
    pub branch_nodes: u64,
    pub leaves: u64,
    pub models_emitted: u64,
    pub max_depth: u64,
    pub wall_ms: f64,
}

impl RecordStats {
    pub fn new(s: &EnumStats, wall_ms: f64) -> Self {
        Self {
            branch_nodes: s.branch_nodes,
            leaves: s.leaves,
            models_emitted: s.models_emitted,
            max_depth: s.max_depth,
            wall_ms,
        }
    }
}

/// One solver run as a JSON object. `answer` is absent when the run failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema: String,
    pub algorithm: String,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub answer: Option<bool>,
    /// Signed variable indices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Explanation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub stats: RecordStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explanations: Option<Vec<Explanation>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ResultRecord {
    pub fn from_outcome(algorithm: &str, mode: Mode, out: &SolveOutcome, wall_ms: f64) -> Self {
        Self {
            schema: RESULT_SCHEMA.into(),
            algorithm: algorithm.into(),
            mode,
            answer: Some(out.result.answer),
            witness: out.result.witness.clone(),
            verdict: Some(out.verdict),
            stats: RecordStats::new(&out.result.stats, wall_ms),
            explanations: out
                .explanation_set
                .as_ref()
                .map(|s| s.explanations.iter().cloned().collect()),
            reduction: out.report.clone(),
            error: None,
        }
    }

    pub fn failure(algorithm: &str, mode: Mode, error: String, wall_ms: f64) -> Self {
        Self {
            schema: RESULT_SCHEMA.into(),
            algorithm: algorithm.into(),
            mode,
            answer: None,
            witness: None,
            verdict: None,
            stats: RecordStats {
                wall_ms,
                ..RecordStats::default()
            },
            explanations: None,
            reduction: None,
            error: Some(error),
        }
    }
}
