//! Variables, literals, relations, formulas and abduction instances.

mod formula;
mod instance;
mod relation;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use formula::{evaluate, Assignment, Constraint, Formula, PartialAssignment};
pub use instance::{
    is_explanation, preprocess, separate_overlap, AbductionInstance, Explanation, ExplanationKind,
    Preprocessed, SatDecider, Verdict, WitnessMap,
};
pub use relation::{decode, encode, ones, Relation, MAX_ARITY};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("arity {0} exceeds the supported maximum of 32")]
    ArityTooLarge(usize),
    #[error("tuple {tuple:#b} does not fit arity {arity}")]
    TupleOutOfRange { arity: usize, tuple: u64 },
    #[error("tuple of length {found} where arity is {expected}")]
    TupleLength { expected: usize, found: usize },
    #[error("scope of length {scope} for relation of arity {arity}")]
    ScopeMismatch { arity: usize, scope: usize },
    #[error("variable {var} out of range 1..={n}")]
    VarOutOfRange { var: u32, n: u32 },
    #[error("variable index 0 is not allowed, variables are 1-based")]
    ZeroVar,
    #[error("assignment covers {found} variables, formula has {expected}")]
    AssignmentLength { expected: usize, found: usize },
    #[error("explanation mentions variable {0} outside the hypotheses")]
    LiteralOutsideH(u32),
    #[error("explanation is inconsistent on variable {0}")]
    Inconsistent(u32),
}

/// A propositional variable, 1-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(u32);

impl Var {
    pub fn new(index: u32) -> Result<Self, ModelError> {
        if index == 0 {
            Err(ModelError::ZeroVar)
        } else {
            Ok(Var(index))
        }
    }

    /// Panics on 0. For literals in code and tests.
    pub fn from_index(index: u32) -> Self {
        Self::new(index).expect("variables are 1-based")
    }

    pub fn index(self) -> u32 {
        self.0
    }

    /// 0-based position, for bit-vectors.
    pub fn pos(self) -> usize {
        self.0 as usize - 1
    }

    pub fn positive(self) -> Literal {
        Literal {
            var: self,
            positive: true,
        }
    }

    pub fn negative(self) -> Literal {
        Literal {
            var: self,
            positive: false,
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shorthand used throughout tests and constructions.
pub fn v(index: u32) -> Var {
    Var::from_index(index)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: Var,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: Var, positive: bool) -> Self {
        Self { var, positive }
    }

    pub fn negated(self) -> Self {
        Self {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// Signed DIMACS-style integer.
    pub fn to_dimacs(self) -> i64 {
        let i = i64::from(self.var.0);
        if self.positive {
            i
        } else {
            -i
        }
    }

    pub fn from_dimacs(x: i64) -> Result<Self, ModelError> {
        let var = Var::new(u32::try_from(x.unsigned_abs()).map_err(|_| ModelError::ZeroVar)?)?;
        Ok(Self {
            var,
            positive: x > 0,
        })
    }

    pub fn satisfied_by(self, value: bool) -> bool {
        value == self.positive
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var.0)
        } else {
            write!(f, "-{}", self.var.0)
        }
    }
}

impl Serialize for Literal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.to_dimacs())
    }
}

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let x = i64::deserialize(d)?;
        Literal::from_dimacs(x).map_err(serde::de::Error::custom)
    }
}

/// `true` when no variable appears in both polarities.
pub fn is_consistent<'a>(lits: impl IntoIterator<Item = &'a Literal>) -> bool {
    let mut seen = std::collections::HashMap::new();
    for l in lits {
        if let Some(&p) = seen.get(&l.var) {
            if p != l.positive {
                return false;
            }
        } else {
            seen.insert(l.var, l.positive);
        }
    }
    true
}
