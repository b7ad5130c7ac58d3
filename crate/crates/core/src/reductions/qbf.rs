use serde::{Deserialize, Serialize};

use super::{Contract, ReductionError, ReductionReport};
use crate::langlib::{Clause, Cnf};
use crate::model::{AbductionInstance, Literal, Var};

/// ∃X ∀Y Φ with Φ in DNF. Variables 1..=nx are X, nx+1..=nx+ny are Y; terms
/// are DIMACS-style literal lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QbfInstance {
    pub nx: u32,
    pub ny: u32,
    pub terms: Vec<Vec<i64>>,
}

impl QbfInstance {
    pub fn new(nx: u32, ny: u32, terms: Vec<Vec<i64>>) -> Result<Self, ReductionError> {
        let n = i64::from(nx + ny);
        if let Some(&l) = terms.iter().flatten().find(|&&l| l == 0 || l.abs() > n) {
            return Err(ReductionError::Input(format!(
                "literal {l} outside 1..={n}"
            )));
        }
        Ok(Self { nx, ny, terms })
    }

    fn phi(&self, bits: u64) -> bool {
        self.terms.iter().any(|t| {
            t.iter()
                .all(|&l| (bits >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0))
        })
    }

    /// Brute-force evaluation over all 2^(nx+ny) assignments.
    pub fn evaluate(&self) -> bool {
        assert!(self.nx + self.ny < 63, "too many variables for brute force");
        (0..1u64 << self.nx).any(|x| (0..1u64 << self.ny).all(|y| self.phi(x | y << self.nx)))
    }
}

/// ∃∀ 3-DNF to abduction over 4-CNF. With s = nx + ny + 1, every clause c of
/// ¬Φ gives (c ∨ t) for t ∈ {s} ∪ Y, and (¬s ∨ y) is added for each y.
/// H = X and M = Y ∪ {s}.
pub fn qbf_to_abd4cnf(
    q: &QbfInstance,
) -> Result<(AbductionInstance, ReductionReport), ReductionError> {
    let s = Var::from_index(q.nx + q.ny + 1);
    let ys: Vec<Var> = (q.nx + 1..=q.nx + q.ny).map(Var::from_index).collect();
    let mut clauses: Vec<Clause> = Vec::new();
    for term in &q.terms {
        let neg: Vec<Literal> = term
            .iter()
            .map(|&l| Literal::from_dimacs(l).expect("nonzero").negated())
            .collect();
        for &t in std::iter::once(&s).chain(&ys) {
            if let Some(c) = Clause::new(neg.iter().copied().chain([t.positive()])) {
                clauses.push(c);
            }
        }
    }
    for &y in &ys {
        clauses.push(Clause::new([s.negative(), y.positive()]).expect("distinct"));
    }
    clauses.sort();
    clauses.dedup();
    let kb = Cnf::new(s.index(), clauses).to_formula();
    let report = ReductionReport::new(
        "qbf-to-abd4cnf",
        (q.nx + q.ny) as usize,
        kb.n(),
        kb.constraints().len(),
        Contract::Cv { constant: 1 },
    );
    let inst = AbductionInstance::new(
        kb,
        (1..=q.nx).map(Var::from_index),
        ys.into_iter().chain([s]),
    )?;
    Ok((inst, report))
}
