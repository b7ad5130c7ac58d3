//! Reduction constructions as instance transformers and generators. Every
//! transformer returns a [`ReductionReport`] with its variable accounting.

mod clique;
mod cnfsat;
mod constants;
mod nae;
mod negimp;
mod pabd4;
mod qbf;
mod simplesat;
mod twocnf;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::langlib::LangError;
use crate::model::{AbductionInstance, Explanation, ModelError, Var, WitnessMap};

pub use clique::{clique_to_abd, has_colorful_clique, ColoredGraph};
pub use cnfsat::cnfsat_to_abd_lb;
pub use constants::{eliminate_constants, eliminate_constants_with};
pub use nae::kcnf_to_nae;
pub use negimp::negimp_to_pos;
pub use pabd4::abd_to_pabd_4cnf;
pub use qbf::{qbf_to_abd4cnf, QbfInstance};
pub use simplesat::abd_to_simplesat;
pub use twocnf::abd2cnf_to_cnfsat;

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("input outside the fragment: {0}")]
    Fragment(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Variable-count contract of a reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Contract {
    /// output_vars ≤ input_vars + constant.
    Cv { constant: usize },
    /// output_vars ≤ factor · input_vars + constant.
    Lv { factor: usize, constant: usize },
    /// output_vars ≤ input_vars.
    Shrinking,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub reduction: String,
    pub input_vars: usize,
    pub output_vars: usize,
    /// Output constraints or clauses.
    pub output_constraints: usize,
    pub added_vars: i64,
    pub contract: Contract,
    /// Input clauses or constraints left out of the output.
    pub dropped: usize,
}

impl ReductionReport {
    pub(crate) fn new(
        reduction: &str,
        input_vars: usize,
        output_vars: usize,
        output_constraints: usize,
        contract: Contract,
    ) -> Self {
        Self {
            reduction: reduction.to_string(),
            input_vars,
            output_vars,
            output_constraints,
            added_vars: output_vars as i64 - input_vars as i64,
            contract,
            dropped: 0,
        }
    }

    pub fn contract_holds(&self) -> bool {
        match self.contract {
            Contract::Cv { constant } => self.output_vars <= self.input_vars + constant,
            Contract::Lv { factor, constant } => {
                self.output_vars <= factor * self.input_vars + constant
            }
            Contract::Shrinking => self.output_vars <= self.input_vars,
        }
    }
}

/// Maps an explanation of a reduced instance back to the source instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessBack {
    Identity,
    /// Forget literals over these variables.
    Drop(Vec<Var>),
    /// Positive pairs (x, x′): x′ stands for ¬x.
    Complement(Vec<(Var, Var)>),
    /// Flip every literal, then undo normalization steps, innermost first.
    Flip(Vec<(WitnessMap, BTreeSet<Var>)>),
}

impl WitnessBack {
    pub fn apply(&self, e: &Explanation) -> Explanation {
        match self {
            WitnessBack::Identity => e.clone(),
            WitnessBack::Drop(vars) => Explanation::new(
                e.literals
                    .iter()
                    .copied()
                    .filter(|l| !vars.contains(&l.var)),
            ),
            WitnessBack::Complement(pairs) => Explanation::new(e.literals.iter().filter_map(|l| {
                if let Some((x, _)) = pairs.iter().find(|(_, xp)| *xp == l.var) {
                    l.positive.then(|| x.negative())
                } else {
                    Some(*l)
                }
            })),
            WitnessBack::Flip(maps) => {
                let mut out = Explanation::new(e.literals.iter().map(|l| l.negated()));
                for (map, h) in maps {
                    out = map.restore(&out, h);
                }
                out
            }
        }
    }
}

/// A transformed abduction instance.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub instance: AbductionInstance,
    pub report: ReductionReport,
    pub back: WitnessBack,
}

/// Names accepted by `reduce --reduction`.
pub const REDUCTION_NAMES: [&str; 7] = [
    "negimp-to-pos",
    "abd-to-simplesat",
    "abd-to-pabd-4cnf",
    "eliminate-constants",
    "kcnf-to-nae",
    "abd2cnf-to-cnfsat",
    "cnfsat-to-abd-lb",
];
