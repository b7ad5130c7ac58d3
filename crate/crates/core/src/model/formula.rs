use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::{ModelError, Relation, Var};

/// A relation applied to a scope of variables. Repeats are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub relation: Arc<Relation>,
    pub scope: Vec<Var>,
}

impl Constraint {
    pub fn new(relation: Arc<Relation>, scope: Vec<Var>) -> Result<Self, ModelError> {
        if relation.arity() != scope.len() {
            return Err(ModelError::ScopeMismatch {
                arity: relation.arity(),
                scope: scope.len(),
            });
        }
        Ok(Self { relation, scope })
    }

    pub fn unary(relation: Arc<Relation>, x: Var) -> Self {
        Self::new(relation, vec![x]).expect("unary relation")
    }

    /// The scope tuple under `values`, as a relation tuple encoding.
    pub fn tuple_under(&self, values: &[bool]) -> u64 {
        self.scope
            .iter()
            .enumerate()
            .fold(0, |acc, (i, x)| acc | (u64::from(values[x.pos()]) << i))
    }

    pub fn satisfied_by(&self, values: &[bool]) -> bool {
        self.relation.contains(self.tuple_under(values))
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.relation, self.scope)
    }
}

/// Conjunction of constraints over variables `1..=num_vars`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Formula {
    num_vars: u32,
    constraints: Vec<Constraint>,
}

impl Formula {
    pub fn new(num_vars: u32, constraints: Vec<Constraint>) -> Result<Self, ModelError> {
        for c in &constraints {
            check_scope(c, num_vars)?;
        }
        Ok(Self {
            num_vars,
            constraints,
        })
    }

    pub fn empty(num_vars: u32) -> Self {
        Self {
            num_vars,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn n(&self) -> usize {
        self.num_vars as usize
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn push(&mut self, c: Constraint) -> Result<(), ModelError> {
        check_scope(&c, self.num_vars)?;
        self.constraints.push(c);
        Ok(())
    }

    /// Adds a relation application given by raw indices.
    pub fn add(&mut self, relation: Arc<Relation>, scope: &[u32]) -> Result<(), ModelError> {
        let scope = scope
            .iter()
            .map(|&i| Var::new(i))
            .collect::<Result<Vec<_>, _>>()?;
        self.push(Constraint::new(relation, scope)?)
    }

    /// Grows the variable universe. Existing constraints are untouched.
    pub fn extend_vars(&mut self, extra: u32) -> std::ops::RangeInclusive<u32> {
        let first = self.num_vars + 1;
        self.num_vars += extra;
        first..=self.num_vars
    }

    /// var(φ): variables occurring in some constraint scope.
    pub fn occurring_vars(&self) -> BTreeSet<Var> {
        self.constraints
            .iter()
            .flat_map(|c| c.scope.iter().copied())
            .collect()
    }

    /// Distinct relations in first-occurrence order.
    pub fn relations(&self) -> Vec<Arc<Relation>> {
        let mut out: Vec<Arc<Relation>> = Vec::new();
        for c in &self.constraints {
            if !out.iter().any(|r| **r == *c.relation) {
                out.push(c.relation.clone());
            }
        }
        out
    }

    /// φ ∧ ⊥(x) for x with value 0 and ⊤(x) for value 1.
    pub fn with_units(&self, units: impl IntoIterator<Item = (Var, bool)>) -> Formula {
        let mut f = self.clone();
        for (x, val) in units {
            let r = if val {
                Relation::top()
            } else {
                Relation::bottom()
            };
            f.constraints.push(Constraint::unary(r, x));
        }
        f
    }

    pub fn into_constraints(self) -> Vec<Constraint> {
        self.constraints
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula(n={}, {:?})", self.num_vars, self.constraints)
    }
}

fn check_scope(c: &Constraint, n: u32) -> Result<(), ModelError> {
    if c.relation.arity() != c.scope.len() {
        return Err(ModelError::ScopeMismatch {
            arity: c.relation.arity(),
            scope: c.scope.len(),
        });
    }
    match c.scope.iter().find(|x| x.index() > n) {
        Some(x) => Err(ModelError::VarOutOfRange { var: x.index(), n }),
        None => Ok(()),
    }
}

/// Total assignment over `1..=n`, position `i` holds the value of variable `i+1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Self { values }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![false; n],
        }
    }

    /// Bit `i` of `bits` is variable `i+1`. Requires `n ≤ 64`.
    pub fn from_bits(bits: u64, n: usize) -> Self {
        Self {
            values: (0..n).map(|i| bits >> i & 1 == 1).collect(),
        }
    }

    pub fn to_bits(&self) -> u64 {
        super::encode(&self.values)
    }

    pub fn get(&self, x: Var) -> bool {
        self.values[x.pos()]
    }

    pub fn set(&mut self, x: Var, val: bool) {
        self.values[x.pos()] = val;
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// w_S(σ): number of variables of `set` assigned 1.
    pub fn weight<'a>(&self, set: impl IntoIterator<Item = &'a Var>) -> usize {
        set.into_iter().filter(|x| self.get(**x)).count()
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .values
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        write!(f, "σ({s})")
    }
}

/// Partial map used by branching internals.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PartialAssignment {
    values: Vec<Option<bool>>,
}

impl PartialAssignment {
    pub fn new(n: usize) -> Self {
        Self {
            values: vec![None; n],
        }
    }

    pub fn get(&self, x: Var) -> Option<bool> {
        self.values[x.pos()]
    }

    pub fn set(&mut self, x: Var, val: bool) {
        self.values[x.pos()] = Some(val);
    }

    pub fn unset(&mut self, x: Var) {
        self.values[x.pos()] = None;
    }

    pub fn raw(&self) -> &[Option<bool>] {
        &self.values
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    pub fn unassigned(&self) -> impl Iterator<Item = Var> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_none())
            .map(|(i, _)| Var::from_index(i as u32 + 1))
    }

    /// Completes with `fill` on unassigned positions.
    pub fn complete(&self, fill: bool) -> Assignment {
        Assignment::new(self.values.iter().map(|v| v.unwrap_or(fill)).collect())
    }
}

/// `true` iff every constraint's scope tuple under `sigma` lies in its relation.
pub fn evaluate(formula: &Formula, sigma: &Assignment) -> Result<bool, ModelError> {
    if sigma.len() != formula.n() {
        return Err(ModelError::AssignmentLength {
            expected: formula.n(),
            found: sigma.len(),
        });
    }
    for c in formula.constraints() {
        if let Some(x) = c.scope.iter().find(|x| x.pos() >= sigma.len()) {
            return Err(ModelError::VarOutOfRange {
                var: x.index(),
                n: formula.num_vars(),
            });
        }
        if !c.satisfied_by(sigma.values()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::v;

    fn neq_formula() -> Formula {
        let mut f = Formula::empty(2);
        f.add(Relation::neq(), &[1, 2]).unwrap();
        f
    }

    #[test]
    fn inequality_evaluation() {
        let f = neq_formula();
        assert!(evaluate(&f, &Assignment::new(vec![false, true])).unwrap());
        assert!(!evaluate(&f, &Assignment::new(vec![true, true])).unwrap());
    }

    #[test]
    fn structural_errors() {
        let f = neq_formula();
        assert!(matches!(
            evaluate(&f, &Assignment::zeros(1)),
            Err(ModelError::AssignmentLength { .. })
        ));
        let mut g = Formula::empty(1);
        assert!(matches!(
            g.add(Relation::neq(), &[1, 2]),
            Err(ModelError::VarOutOfRange { var: 2, n: 1 })
        ));
        assert!(matches!(
            Constraint::new(Relation::neq(), vec![v(1)]),
            Err(ModelError::ScopeMismatch { .. })
        ));
    }

    #[test]
    fn weight_counts_true_members() {
        let s = Assignment::new(vec![true, false, true]);
        assert_eq!(s.weight(&[v(1), v(2), v(3)]), 2);
    }
}
