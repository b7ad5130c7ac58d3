use super::stream::{normalize, Branch, Norm, Search, Strategy, StreamOrder, Trail};
use super::{EnumStats, ModelStream};
use crate::model::{Formula, Var};

/// Variable branching with generalized arc consistency.
pub(crate) struct Gac {
    cons: Vec<Norm>,
    constrained: Vec<bool>,
}

impl Gac {
    fn new(cons: Vec<Norm>, n: usize) -> Self {
        let mut constrained = vec![false; n];
        for c in &cons {
            for x in &c.scope {
                constrained[x.pos()] = true;
            }
        }
        Self { cons, constrained }
    }
}

impl Strategy for Gac {
    fn propagate(&mut self, trail: &mut Trail) -> bool {
        loop {
            let mut changed = false;
            for c in &self.cons {
                let (free, tuples) = c.residual(&trail.pa);
                if tuples.is_empty() {
                    return false;
                }
                if free.is_empty() {
                    continue;
                }
                let (mut some1, mut some0) = (0u64, 0u64);
                for &t in &tuples {
                    some1 |= t;
                    some0 |= !t;
                }
                for (j, &i) in free.iter().enumerate() {
                    let x = c.scope[i];
                    if some1 >> j & 1 == 0 {
                        trail.assign(x, false);
                        changed = true;
                    } else if some0 >> j & 1 == 0 {
                        trail.assign(x, true);
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn branches(&mut self, trail: &Trail) -> Option<Vec<Branch>> {
        let x = (0..self.constrained.len())
            .find(|&i| self.constrained[i] && trail.pa.raw()[i].is_none())
            .map(|i| Var::from_index(i as u32 + 1))?;
        Some(vec![vec![(x, false)], vec![(x, true)]])
    }
}

fn search(formula: &Formula) -> Search<Gac> {
    let norm = normalize(formula);
    Search::new(
        Gac::new(norm.constraints, formula.n()),
        formula.n(),
        norm.infeasible,
    )
}

/// All models of `formula`, lowest variable first, value 0 before 1.
pub fn enumerate(formula: &Formula) -> ModelStream {
    ModelStream::new(search(formula), StreamOrder::Unordered)
}

/// Satisfiability with the search statistics of the run.
pub fn decide_with_stats(formula: &Formula) -> (bool, EnumStats) {
    let mut s = enumerate(formula);
    let sat = s.next().is_some();
    (sat, s.stats())
}

pub fn decide(formula: &Formula) -> bool {
    decide_with_stats(formula).0
}
