//! Constraint languages: the minor/substitution algebra, closure under
//! branching, language predicates and the built-in relation families.

mod algebra;
mod clauses;
mod families;
mod predicates;

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::Relation;

pub use algebra::{
    branching_closure, identification_minors, is_branching_closed, minor, substitute,
};
pub use clauses::{clause_relation, recognize_clause, Clause, ClauseShape, Cnf, CnfKind};
pub use families::{
    aff, aff_relation, bottom_k, dual_horn, equations, equations_language, horn, imp, imp_relation,
    k_cnf, k_cnf_neg, k_cnf_pos, nae, nae_language, one_in, r_s, xsat_family,
};
pub use predicates::{
    check_sparsity, derive_inequality, has_constant_polymorphism, is_complement_invariant,
    is_non_trivial, is_one_valid, InequalityDefinition, SparsityCertificate,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LangError {
    #[error("coordinate {coord} out of range for arity {arity}")]
    Coordinate { coord: usize, arity: usize },
    #[error("minor map of length {len} for relation of arity {arity}")]
    MinorLength { len: usize, arity: usize },
    #[error("minor map is not onto 0..{m}")]
    NotSurjective { m: usize },
    #[error("parameters out of range: {0}")]
    Parameters(String),
    #[error("sparsity constant must lie strictly between 1 and 2, got {0}")]
    SparsityConstant(f64),
    #[error("relation {0:?} violates the sparsity bound")]
    NotSparse(Arc<Relation>),
    #[error("language is not closed under complement")]
    NotComplementInvariant,
    #[error("no relation of the language avoids both constant tuples")]
    NoConstantFreeRelation,
    #[error("relation {0:?} is not a clause")]
    NotAClause(Arc<Relation>),
}

/// Generator tag for unbounded families. Materialization always takes an arity cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schema {
    KCnf,
    KCnfPos,
    KCnfNeg,
    Imp,
    Horn,
    DualHorn,
    Nae,
    Equations,
    Xsat,
    Aff,
}

/// A finite set of relations, deduplicated by tuple set and kept in canonical order.
#[derive(Clone, Default)]
pub struct ConstraintLanguage {
    relations: Vec<Arc<Relation>>,
    index: HashSet<Arc<Relation>>,
    pub schema: Option<(Schema, usize)>,
}

impl ConstraintLanguage {
    pub fn new(relations: impl IntoIterator<Item = Arc<Relation>>) -> Self {
        let mut lang = Self::default();
        for r in relations {
            lang.insert(r);
        }
        lang
    }

    pub fn with_schema(mut self, schema: Schema, cap: usize) -> Self {
        self.schema = Some((schema, cap));
        self
    }

    /// Returns `false` when an equal relation was already present.
    pub fn insert(&mut self, r: Arc<Relation>) -> bool {
        if self.index.contains(&r) {
            return false;
        }
        let pos = self.relations.binary_search(&r).unwrap_or_else(|p| p);
        self.relations.insert(pos, r.clone());
        self.index.insert(r);
        true
    }

    pub fn contains(&self, r: &Relation) -> bool {
        self.index.contains(r)
    }

    /// The stored copy of a relation equal to `r`.
    pub fn get(&self, r: &Relation) -> Option<&Arc<Relation>> {
        self.index.get(r)
    }

    pub fn relations(&self) -> &[Arc<Relation>] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.relations.iter().map(|r| r.arity()).max().unwrap_or(0)
    }

    pub fn union(&self, other: &ConstraintLanguage) -> ConstraintLanguage {
        let mut out = self.clone();
        for r in &other.relations {
            out.insert(r.clone());
        }
        out.schema = None;
        out
    }
}

impl PartialEq for ConstraintLanguage {
    fn eq(&self, other: &Self) -> bool {
        self.relations == other.relations
    }
}

impl fmt::Debug for ConstraintLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.relations.iter()).finish()
    }
}

impl FromIterator<Arc<Relation>> for ConstraintLanguage {
    fn from_iter<T: IntoIterator<Item = Arc<Relation>>>(iter: T) -> Self {
        Self::new(iter)
    }
}
