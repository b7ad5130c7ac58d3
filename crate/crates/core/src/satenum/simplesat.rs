use std::collections::BTreeSet;

use super::{EnumStats, SatError};
use crate::model::{Assignment, Var};

/// ⋀ positive clauses of width ≤ p ∧ ⋀ disjunctions of fully negative terms.
///
/// A term {a, b} reads ¬a ∧ ¬b; the empty term is true and a disjunction with
/// no terms is false.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleSatInstance {
    pub num_vars: u32,
    pub positive_clauses: Vec<Vec<Var>>,
    pub negative_dnfs: Vec<Vec<Vec<Var>>>,
    pub p: usize,
}

impl SimpleSatInstance {
    pub fn new(
        num_vars: u32,
        positive_clauses: Vec<Vec<Var>>,
        negative_dnfs: Vec<Vec<Vec<Var>>>,
        p: usize,
    ) -> Result<Self, SatError> {
        for c in &positive_clauses {
            if c.is_empty() || c.len() > p {
                return Err(SatError::ClauseWidth { width: c.len(), p });
            }
        }
        let all = positive_clauses
            .iter()
            .flatten()
            .chain(negative_dnfs.iter().flatten().flatten());
        if let Some(x) = all.clone().find(|x| x.index() > num_vars) {
            return Err(SatError::VarOutOfRange(x.index()));
        }
        Ok(Self {
            num_vars,
            positive_clauses,
            negative_dnfs,
            p,
        })
    }

    /// Variables that occur anywhere.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.positive_clauses
            .iter()
            .flatten()
            .chain(self.negative_dnfs.iter().flatten().flatten())
            .copied()
            .collect()
    }

    pub fn satisfied_by(&self, a: &Assignment) -> bool {
        self.positive_clauses
            .iter()
            .all(|c| c.iter().any(|&x| a.get(x)))
            && self
                .negative_dnfs
                .iter()
                .all(|d| d.iter().any(|t| t.iter().all(|&x| !a.get(x))))
    }
}

struct Solver<'a> {
    inst: &'a SimpleSatInstance,
    values: Vec<Option<bool>>,
    stats: EnumStats,
}

impl Solver<'_> {
    fn val(&self, x: Var) -> Option<bool> {
        self.values[x.pos()]
    }

    fn run(&mut self, depth: usize) -> bool {
        self.stats.reach(depth);
        let saved = self.values.clone();

        // Open positive clauses with their unassigned variables.
        let mut open: Vec<Vec<Var>> = Vec::new();
        for c in &self.inst.positive_clauses {
            if c.iter().any(|&x| self.val(x) == Some(true)) {
                continue;
            }
            let rest: Vec<Var> = c
                .iter()
                .copied()
                .filter(|&x| self.val(x).is_none())
                .collect();
            if rest.is_empty() {
                self.stats.leaves += 1;
                return false;
            }
            open.push(rest);
        }
        // Anything outside the open clauses can be set to 0.
        let mut in_open = vec![false; self.values.len()];
        for x in open.iter().flatten() {
            in_open[x.pos()] = true;
        }
        for (v, open) in self.values.iter_mut().zip(&in_open) {
            if v.is_none() && !open {
                *v = Some(false);
            }
        }
        // A disjunction fails once every term contains a variable set to 1.
        let dead = self.inst.negative_dnfs.iter().any(|d| {
            d.iter()
                .all(|t| t.iter().any(|&x| self.val(x) == Some(true)))
        });
        if dead {
            self.stats.leaves += 1;
            self.values = saved;
            return false;
        }
        let Some(clause) = open.iter().min_by_key(|c| c.len()).cloned() else {
            self.stats.leaves += 1;
            return true;
        };
        self.stats.branch_nodes += 1;
        let inner = self.values.clone();
        for i in 0..clause.len() {
            for &x in &clause[..i] {
                self.values[x.pos()] = Some(false);
            }
            self.values[clause[i].pos()] = Some(true);
            if self.run(depth + 1) {
                return true;
            }
            self.values.clone_from(&inner);
        }
        self.values = saved;
        false
    }
}

/// Branch and reduce: variables outside every open positive clause go to 0,
/// then the shortest open clause (v_1..v_q) is split into q branches where
/// branch i sets v_1..v_{i−1} to 0 and v_i to 1.
pub fn solve_simple_sat(inst: &SimpleSatInstance) -> (Option<Assignment>, EnumStats) {
    let mut s = Solver {
        inst,
        values: vec![None; inst.num_vars as usize],
        stats: EnumStats::default(),
    };
    let found = s.run(0);
    let model = found.then(|| {
        s.stats.models_emitted = 1;
        Assignment::new(s.values.iter().map(|v| v.unwrap_or(false)).collect())
    });
    (model, s.stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::v;

    fn inst(clauses: &[&[u32]], dnfs: &[&[&[u32]]], n: u32) -> SimpleSatInstance {
        let cl = clauses
            .iter()
            .map(|c| c.iter().map(|&i| v(i)).collect())
            .collect();
        let dn = dnfs
            .iter()
            .map(|d| {
                d.iter()
                    .map(|t| t.iter().map(|&i| v(i)).collect())
                    .collect()
            })
            .collect();
        SimpleSatInstance::new(n, cl, dn, 2).unwrap()
    }

    #[test]
    fn reduce_to_zero() {
        let (m, _) = solve_simple_sat(&inst(&[], &[&[&[1, 2]]], 2));
        assert_eq!(m.unwrap().values(), &[false, false]);
    }

    #[test]
    fn clause_against_negative_terms() {
        let i = inst(&[&[1, 2]], &[&[&[1], &[2]]], 2);
        let m = solve_simple_sat(&i).0.unwrap();
        assert!(i.satisfied_by(&m));
    }

    #[test]
    fn unit_against_its_negation() {
        let i = SimpleSatInstance::new(1, vec![vec![v(1)]], vec![vec![vec![v(1)]]], 1).unwrap();
        assert!(solve_simple_sat(&i).0.is_none());
    }

    #[test]
    fn empty_disjunction_is_false() {
        assert!(solve_simple_sat(&inst(&[], &[&[]], 1)).0.is_none());
    }

    #[test]
    fn width_is_checked() {
        assert!(SimpleSatInstance::new(3, vec![vec![v(1), v(2), v(3)]], vec![], 2).is_err());
    }
}
