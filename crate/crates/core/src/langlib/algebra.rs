use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use super::{ConstraintLanguage, LangError};
use crate::model::Relation;

/// R_{|f}: keep tuples agreeing with `f` and project away the fixed coordinates.
/// Coordinates are 0-based.
pub fn substitute(r: &Relation, f: &BTreeMap<usize, bool>) -> Result<Relation, LangError> {
    let k = r.arity();
    let mut mask = 0u64;
    let mut want = 0u64;
    for (&i, &b) in f {
        if i >= k {
            return Err(LangError::Coordinate { coord: i, arity: k });
        }
        mask |= 1 << i;
        want |= u64::from(b) << i;
    }
    let free: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 0).collect();
    let tuples = r.tuples().iter().filter(|&&t| t & mask == want).map(|&t| {
        free.iter()
            .enumerate()
            .fold(0u64, |acc, (j, &i)| acc | ((t >> i & 1) << j))
    });
    Ok(Relation::new(free.len(), tuples).expect("projection keeps arity bounds"))
}

/// R_g(y_1..y_m) = R(y_{g(1)}..y_{g(k)}) for a surjective `g: [k] → [m]`, 0-based.
pub fn minor(r: &Relation, g: &[usize]) -> Result<Relation, LangError> {
    let k = r.arity();
    if g.len() != k {
        return Err(LangError::MinorLength {
            len: g.len(),
            arity: k,
        });
    }
    let m = g.iter().map(|&j| j + 1).max().unwrap_or(0);
    let mut hit = vec![false; m];
    for &j in g {
        hit[j] = true;
    }
    if hit.iter().any(|h| !h) {
        return Err(LangError::NotSurjective { m });
    }
    let tuples = r.tuples().iter().filter_map(|&t| {
        let mut y = 0u64;
        let mut set = 0u64;
        for (i, &j) in g.iter().enumerate() {
            let b = t >> i & 1;
            if set >> j & 1 == 1 {
                if y >> j & 1 != b {
                    return None;
                }
            } else {
                set |= 1 << j;
                y |= b << j;
            }
        }
        Some(y)
    });
    Ok(Relation::new(m, tuples).expect("minor keeps arity bounds"))
}

/// Map merging coordinate `j` into `i` (i < j) and closing the gap.
pub(crate) fn merge_map(k: usize, i: usize, j: usize) -> Vec<usize> {
    (0..k)
        .map(|c| match c.cmp(&j) {
            std::cmp::Ordering::Less => c,
            std::cmp::Ordering::Equal => i,
            std::cmp::Ordering::Greater => c - 1,
        })
        .collect()
}

/// All minors identifying exactly two coordinates.
pub fn identification_minors(r: &Relation) -> Vec<Relation> {
    let k = r.arity();
    let mut out = Vec::new();
    for j in 1..k {
        for i in 0..j {
            out.push(minor(r, &merge_map(k, i, j)).expect("merge map is onto"));
        }
    }
    out
}

fn one_step(r: &Relation) -> Vec<Relation> {
    let k = r.arity();
    let mut out = identification_minors(r);
    for i in 0..k {
        for b in [false, true] {
            out.push(substitute(r, &BTreeMap::from([(i, b)])).expect("coordinate in range"));
        }
    }
    // Adjacent transpositions generate every coordinate permutation.
    for i in 1..k {
        let mut g: Vec<usize> = (0..k).collect();
        g.swap(i - 1, i);
        out.push(minor(r, &g).expect("permutation is onto"));
    }
    out
}

/// Least superset of `lang` closed under substitutions and minors.
pub fn branching_closure(lang: &ConstraintLanguage) -> ConstraintLanguage {
    let mut out = ConstraintLanguage::new(lang.relations().iter().cloned());
    out.schema = lang.schema;
    let mut work: VecDeque<Arc<Relation>> = out.relations().iter().cloned().collect();
    while let Some(r) = work.pop_front() {
        for s in one_step(&r) {
            let s = Arc::new(s);
            if out.insert(s.clone()) {
                work.push_back(s);
            }
        }
    }
    out
}

/// Checks closure under single substitutions, identifications and transpositions,
/// which generate all substitutions and minors.
pub fn is_branching_closed(lang: &ConstraintLanguage) -> bool {
    lang.relations()
        .iter()
        .all(|r| one_step(r).iter().all(|s| lang.contains(s)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn or3() -> Relation {
        Relation::from_predicate(3, |t| t != 0).unwrap()
    }

    #[test]
    fn substitution_examples() {
        let r = or3();
        let zero = substitute(&r, &BTreeMap::from([(2, false)])).unwrap();
        assert_eq!(zero, Relation::from_predicate(2, |t| t != 0).unwrap());
        let one = substitute(&r, &BTreeMap::from([(2, true)])).unwrap();
        assert!(one.is_full() && one.arity() == 2);
        assert_eq!(substitute(&r, &BTreeMap::new()).unwrap(), r);
        assert!(substitute(&r, &BTreeMap::from([(3, true)])).is_err());
    }

    #[test]
    fn minor_examples() {
        assert_eq!(minor(&or3(), &[0, 0, 0]).unwrap(), *Relation::top());
        assert_eq!(minor(&or3(), &[0, 1, 2]).unwrap(), or3());
        let exactly_one = Relation::new(2, [0b01, 0b10]).unwrap();
        let diag = minor(&exactly_one, &[0, 0]).unwrap();
        assert_eq!(diag.arity(), 1);
        assert!(diag.is_empty());
        assert!(matches!(
            minor(&or3(), &[0, 2, 2]),
            Err(LangError::NotSurjective { .. })
        ));
    }

    #[test]
    fn closure_of_inequality() {
        let c = branching_closure(&ConstraintLanguage::new([Relation::neq()]));
        let expected = ConstraintLanguage::new([
            Relation::neq(),
            Relation::bottom(),
            Relation::top(),
            Arc::new(Relation::new(1, []).unwrap()),
            Relation::falsum(),
            Relation::verum(),
        ]);
        assert_eq!(c, expected);
        assert!(is_branching_closed(&c));
        assert_eq!(branching_closure(&c), c);
    }

    #[test]
    fn closure_can_add_trivial_relations() {
        let c = branching_closure(&ConstraintLanguage::new([Arc::new(or3())]));
        assert!(c.contains(&Relation::from_predicate(2, |_| true).unwrap()));
        assert!(c.contains(&Relation::from_predicate(2, |t| t != 0).unwrap()));
        assert!(c.contains(&Relation::top()));
    }
}
