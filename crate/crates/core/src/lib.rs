//! Exact solvers, sparse enumeration and reduction constructions for
//! propositional abduction over Boolean constraint languages.

pub mod examples;
pub mod harness;
pub mod langlib;
pub mod model;
pub mod reductions;
pub mod satenum;
pub mod solvers;

pub use model::{
    evaluate, is_explanation, preprocess, v, AbductionInstance, Assignment, Constraint,
    Explanation, ExplanationKind, Formula, Literal, Relation, Var,
};
