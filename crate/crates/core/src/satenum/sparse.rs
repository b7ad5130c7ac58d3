use super::stream::{collapse, normalize, Branch, Norm, Search, Strategy, StreamOrder, Trail};
use super::{ModelStream, SatError};
use crate::langlib::ConstraintLanguage;
use crate::model::Formula;

/// Per-tuple constraint branching.
///
/// At every node each constraint is reduced by the current partial
/// assignment. An empty residual is a conflict and a full one is satisfied.
/// Among the rest, those with at least `r0` free variables are preferred and
/// the one with the smallest local base |R'|^{1/k'} is branched on, one child
/// per residual tuple, eliminating all of its free variables.
struct PerTuple {
    cons: Vec<Norm>,
    r0: usize,
}

impl Strategy for PerTuple {
    fn propagate(&mut self, trail: &mut Trail) -> bool {
        self.cons
            .iter()
            .all(|c| !c.residual(&trail.pa).1.is_empty())
    }

    fn branches(&mut self, trail: &Trail) -> Option<Vec<Branch>> {
        // (arity ≥ r0, log of local base, constraint, free positions, residual tuples)
        type Pick = (bool, f64, usize, Vec<usize>, Vec<u64>);
        let mut best: Option<Pick> = None;
        for (idx, c) in self.cons.iter().enumerate() {
            let (free, tuples) = c.residual(&trail.pa);
            let k = free.len();
            if k == 0 || tuples.len() as u128 == 1u128 << k {
                continue;
            }
            let wide = k >= self.r0;
            let base = (tuples.len() as f64).ln() / k as f64;
            let better = match &best {
                None => true,
                Some((bw, bb, ..)) => (wide && !bw) || (wide == *bw && base < *bb - 1e-12),
            };
            if better {
                best = Some((wide, base, idx, free, tuples));
            }
        }
        let (_, _, idx, free, tuples) = best?;
        let scope = &self.cons[idx].scope;
        Some(
            tuples
                .iter()
                .map(|&t| {
                    free.iter()
                        .enumerate()
                        .map(|(j, &i)| (scope[i], t >> j & 1 == 1))
                        .collect()
                })
                .collect(),
        )
    }
}

/// Enumerates the models of `formula` by per-tuple branching. Every relation of
/// the formula, after collapsing repeated variables, must belong to `closure`,
/// which is expected to be closed under branching.
pub fn sparse_enumerate(
    formula: &Formula,
    closure: &ConstraintLanguage,
    r0: usize,
) -> Result<ModelStream, SatError> {
    for c in formula.constraints() {
        let n = collapse(c);
        if !closure.contains(&n.rel) {
            return Err(SatError::OutsideClosure(n.rel));
        }
    }
    let norm = normalize(formula);
    let strategy = PerTuple {
        cons: norm.constraints,
        r0: r0.max(1),
    };
    Ok(ModelStream::new(
        Search::new(strategy, formula.n(), norm.infeasible),
        StreamOrder::Unordered,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langlib::{aff, branching_closure, one_in, xsat_family};

    #[test]
    fn single_exactly_one() {
        let mut f = Formula::empty(3);
        f.add(one_in(3), &[1, 2, 3]).unwrap();
        let closure = branching_closure(&xsat_family(3));
        let (models, stats) = sparse_enumerate(&f, &closure, 1).unwrap().collect_all();
        assert_eq!(models.len(), 3);
        assert_eq!(stats.leaves, 3);
        assert_eq!(stats.branch_nodes, 1);
    }

    #[test]
    fn rejects_relations_outside_closure() {
        let mut f = Formula::empty(2);
        f.add(crate::langlib::imp_relation(), &[1, 2]).unwrap();
        let closure = branching_closure(&xsat_family(3));
        assert!(matches!(
            sparse_enumerate(&f, &closure, 1),
            Err(SatError::OutsideClosure(_))
        ));
    }

    #[test]
    fn parity_system() {
        let mut f = Formula::empty(4);
        f.add(crate::langlib::aff_relation(3, false), &[1, 2, 3])
            .unwrap();
        f.add(crate::langlib::aff_relation(2, true), &[3, 4])
            .unwrap();
        let closure = branching_closure(&aff(3));
        assert_eq!(sparse_enumerate(&f, &closure, 1).unwrap().count(), 4);
    }
}
