//! SAT decision and model enumeration: a DPLL fallback with arc-consistency,
//! the per-tuple sparse enumerator, weight-ordered enumeration and the
//! SimpleSAT branch-and-reduce solver.

mod dpll;
mod ordered;
mod simplesat;
mod sparse;
mod stats;
mod stream;

use std::sync::Arc;

use thiserror::Error;

use crate::model::Relation;

pub use dpll::{decide, decide_with_stats, enumerate};
pub use ordered::{enumerate_weight_ordered, order_by_weight};
pub use simplesat::{solve_simple_sat, SimpleSatInstance};
pub use sparse::sparse_enumerate;
pub use stats::EnumStats;
pub use stream::{ModelSource, ModelStream, StreamOrder};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SatError {
    #[error("relation {0:?} is not in the branching closure of the language")]
    OutsideClosure(Arc<Relation>),
    #[error("positive clause of width {width} exceeds p = {p} (or is empty)")]
    ClauseWidth { width: usize, p: usize },
    #[error("variable {0} out of range")]
    VarOutOfRange(u32),
}

/// The generic decision procedure as a [`crate::model::SatDecider`].
#[derive(Clone, Copy, Debug, Default)]
pub struct Dpll;

impl crate::model::SatDecider for Dpll {
    fn decide(&self, formula: &crate::model::Formula) -> bool {
        decide(formula)
    }
}
