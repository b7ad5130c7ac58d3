use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::LangError;
use crate::model::{Constraint, Formula, Literal, Relation, Var};

/// The clause relation for a sign pattern, `true` meaning a positive literal:
/// all of {0,1}^k except the single falsifying tuple.
pub fn clause_relation(signs: &[bool]) -> Arc<Relation> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<bool>, Arc<Relation>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().expect("clause cache poisoned");
    cache
        .entry(signs.to_vec())
        .or_insert_with(|| {
            if signs.is_empty() {
                return Relation::falsum();
            }
            let falsifying = signs
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &s)| acc | (u64::from(!s) << i));
            let name: String = signs.iter().map(|&s| if s { 'p' } else { 'n' }).collect();
            let r = Relation::from_predicate(signs.len(), |t| t != falsifying)
                .expect("arity in range")
                .with_name(format!("or_{name}"));
            Arc::new(r)
        })
        .clone()
}

/// A disjunction of literals, sorted by variable with no repeats.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    lits: Vec<Literal>,
}

impl Clause {
    /// Sorts and deduplicates. `None` for a tautology.
    pub fn new(lits: impl IntoIterator<Item = Literal>) -> Option<Self> {
        let mut lits: Vec<Literal> = lits.into_iter().collect();
        lits.sort();
        lits.dedup();
        if lits.windows(2).any(|w| w[0].var == w[1].var) {
            return None;
        }
        Some(Self { lits })
    }

    pub fn from_dimacs(lits: &[i64]) -> Option<Self> {
        Self::new(
            lits.iter()
                .map(|&x| Literal::from_dimacs(x).expect("nonzero literal")),
        )
    }

    pub fn empty() -> Self {
        Self { lits: Vec::new() }
    }

    pub fn lits(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.lits.iter().all(|l| l.positive)
    }

    pub fn is_negative(&self) -> bool {
        self.lits.iter().all(|l| !l.positive)
    }

    /// (¬a ∨ b) with a ≠ b.
    pub fn is_implication(&self) -> bool {
        self.lits.len() == 2 && self.lits[0].positive != self.lits[1].positive
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().map(|l| l.var)
    }

    pub fn contains_var(&self, x: Var) -> bool {
        self.lits.iter().any(|l| l.var == x)
    }

    pub fn satisfied_by(&self, values: &[bool]) -> bool {
        self.lits
            .iter()
            .any(|l| l.satisfied_by(values[l.var.pos()]))
    }

    pub fn to_constraint(&self) -> Constraint {
        let signs: Vec<bool> = self.lits.iter().map(|l| l.positive).collect();
        Constraint::new(clause_relation(&signs), self.vars().collect()).expect("arity matches")
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            write!(f, "{l:?}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClauseShape {
    Clause(Clause),
    Tautology,
}

/// Reads a constraint as a clause when its relation misses exactly one tuple
/// (or none, or is f). Repeated scope variables are collapsed.
pub fn recognize_clause(c: &Constraint) -> Option<ClauseShape> {
    let r = &c.relation;
    let k = r.arity();
    if r.is_full() {
        return Some(ClauseShape::Tautology);
    }
    if k == 0 {
        return Some(ClauseShape::Clause(Clause::empty()));
    }
    if r.len() as u64 != (1u64 << k) - 1 {
        return None;
    }
    let missing = (0..1u64 << k)
        .find(|&t| !r.contains(t))
        .expect("one tuple missing");
    let lits = c
        .scope
        .iter()
        .enumerate()
        .map(|(i, &x)| Literal::new(x, missing >> i & 1 == 0));
    Some(match Clause::new(lits) {
        Some(cl) => ClauseShape::Clause(cl),
        None => ClauseShape::Tautology,
    })
}

/// Kind tags used by fragment checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CnfKind {
    Any,
    Positive,
    Negative,
    NegativeOrImplication,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Clause>,
}

impl Cnf {
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Self {
        Self { num_vars, clauses }
    }

    /// Rejects any constraint that is not a clause. Tautologies are skipped.
    pub fn from_formula(f: &Formula) -> Result<Self, LangError> {
        let mut clauses = Vec::new();
        for c in f.constraints() {
            match recognize_clause(c) {
                Some(ClauseShape::Clause(cl)) => clauses.push(cl),
                Some(ClauseShape::Tautology) => {}
                None => return Err(LangError::NotAClause(c.relation.clone())),
            }
        }
        Ok(Self {
            num_vars: f.num_vars(),
            clauses,
        })
    }

    pub fn to_formula(&self) -> Formula {
        Formula::new(
            self.num_vars,
            self.clauses.iter().map(Clause::to_constraint).collect(),
        )
        .expect("clause variables in range")
    }

    pub fn width(&self) -> usize {
        self.clauses.iter().map(Clause::len).max().unwrap_or(0)
    }

    pub fn is_kind(&self, kind: CnfKind) -> bool {
        self.clauses.iter().all(|c| match kind {
            CnfKind::Any => true,
            CnfKind::Positive => c.is_positive(),
            CnfKind::Negative => c.is_negative(),
            CnfKind::NegativeOrImplication => c.is_negative() || c.is_implication(),
        })
    }

    pub fn satisfied_by(&self, values: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.satisfied_by(values))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::v;

    #[test]
    fn clause_relation_misses_one_tuple() {
        let r = clause_relation(&[true, false]);
        assert_eq!(r.len(), 3);
        assert!(!r.contains(0b10));
        assert_eq!(r.name(), Some("or_pn"));
    }

    #[test]
    fn units_are_clauses() {
        let bot = Constraint::unary(Relation::bottom(), v(3));
        assert_eq!(
            recognize_clause(&bot),
            Some(ClauseShape::Clause(Clause::new([v(3).negative()]).unwrap()))
        );
    }

    #[test]
    fn repeated_variables_collapse() {
        let c = Constraint::new(clause_relation(&[true, false]), vec![v(1), v(1)]).unwrap();
        assert_eq!(recognize_clause(&c), Some(ClauseShape::Tautology));
        let d = Constraint::new(clause_relation(&[true, true]), vec![v(1), v(1)]).unwrap();
        assert_eq!(
            recognize_clause(&d),
            Some(ClauseShape::Clause(Clause::new([v(1).positive()]).unwrap()))
        );
    }

    #[test]
    fn non_clauses_are_rejected() {
        let c = Constraint::new(Relation::neq(), vec![v(1), v(2)]).unwrap();
        assert_eq!(recognize_clause(&c), None);
    }

    #[test]
    fn round_trip_through_formula() {
        let cnf = Cnf::new(
            3,
            vec![
                Clause::from_dimacs(&[1, -2]).unwrap(),
                Clause::from_dimacs(&[3]).unwrap(),
            ],
        );
        assert_eq!(Cnf::from_formula(&cnf.to_formula()).unwrap(), cnf);
    }
}
