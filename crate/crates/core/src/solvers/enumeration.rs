use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::{AbdResult, Algorithm, ExplanationSet, ExplanationSetKind, SolverError};
use crate::model::{AbductionInstance, Assignment, Explanation, Literal, Var};
use crate::satenum::ModelStream;

fn pattern(m: &Assignment, h: &[Var]) -> u64 {
    h.iter()
        .enumerate()
        .fold(0, |acc, (i, &x)| acc | (u64::from(m.get(x)) << i))
}

fn satisfies_m(m: &Assignment, inst: &AbductionInstance) -> bool {
    inst.manifestations.iter().all(|&x| m.get(x))
}

/// Groups the models of KB by their restriction to H. A class survives when
/// none of its members falsifies a manifestation; the survivors are exactly
/// the full explanations.
pub fn enum_abd(
    inst: &AbductionInstance,
    stream: ModelStream,
) -> Result<(AbdResult, ExplanationSet), SolverError> {
    let h = inst.h();
    if h.len() > 64 {
        return Err(SolverError::TooManyHypotheses(h.len()));
    }
    let mut classes: BTreeMap<u64, bool> = BTreeMap::new();
    let mut stream = stream;
    for m in stream.by_ref() {
        let ok = satisfies_m(&m, inst);
        let entry = classes.entry(pattern(&m, &h)).or_insert(true);
        *entry &= ok;
    }
    let stats = stream.stats();
    let explanations: BTreeSet<Explanation> = classes
        .iter()
        .filter(|(_, &ok)| ok)
        .map(|(&p, _)| {
            Explanation::new(
                h.iter()
                    .enumerate()
                    .map(|(i, &x)| Literal::new(x, p >> i & 1 == 1)),
            )
        })
        .collect();
    let witness = explanations.iter().next().cloned();
    let result = AbdResult {
        answer: witness.is_some(),
        witness,
        stats,
        algorithm: Algorithm::Enum,
    };
    Ok((
        result,
        ExplanationSet {
            explanations,
            kind: ExplanationSetKind::AllFull,
        },
    ))
}

/// Inserts `e` and, transitively, all of its subsets into `discarded`.
/// The set stays downward closed, so a present member ends the descent.
fn discard_down(e: u64, discarded: &mut HashSet<u64>) {
    let mut work = vec![e];
    while let Some(s) = work.pop() {
        if !discarded.insert(s) {
            continue;
        }
        let mut rest = s;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest ^= bit;
            if !discarded.contains(&(s ^ bit)) {
                work.push(s ^ bit);
            }
        }
    }
}

/// Positive abduction from a model stream ordered by non-increasing w_H.
///
/// Each model proposes its set of true hypotheses. A model falsifying a
/// manifestation discards its set together with every subset; the proposals
/// that are never discarded are the positive explanations occurring as exact
/// H-patterns, and their ⊆-maximal members are exactly the subset-maximal
/// positive explanations. A weight increase in the stream is an error.
pub fn pabd_enum(
    inst: &AbductionInstance,
    stream: ModelStream,
) -> Result<(AbdResult, ExplanationSet), SolverError> {
    let h = inst.h();
    if h.len() > 64 {
        return Err(SolverError::TooManyHypotheses(h.len()));
    }
    let mut potential: Vec<u64> = Vec::new();
    let mut seen: HashSet<u64> = HashSet::new();
    let mut discarded: HashSet<u64> = HashSet::new();
    let mut last_weight = usize::MAX;
    let mut stream = stream;
    for m in stream.by_ref() {
        let e = pattern(&m, &h);
        let w = e.count_ones() as usize;
        if w > last_weight {
            return Err(SolverError::OrderViolation {
                prev: last_weight,
                next: w,
            });
        }
        last_weight = w;
        if satisfies_m(&m, inst) {
            if !discarded.contains(&e) && seen.insert(e) {
                potential.push(e);
            }
        } else {
            discard_down(e, &mut discarded);
        }
    }
    let stats = stream.stats();
    let alive: Vec<u64> = potential
        .into_iter()
        .filter(|e| !discarded.contains(e))
        .collect();
    let maximal: Vec<u64> = alive
        .iter()
        .copied()
        .filter(|&e| !alive.iter().any(|&f| f != e && f & e == e))
        .collect();
    let explanations: BTreeSet<Explanation> = maximal
        .iter()
        .map(|&e| Explanation::positive((0..h.len()).filter(|i| e >> i & 1 == 1).map(|i| h[i])))
        .collect();
    let witness = maximal
        .first()
        .map(|&e| Explanation::positive((0..h.len()).filter(|i| e >> i & 1 == 1).map(|i| h[i])));
    let result = AbdResult {
        answer: witness.is_some(),
        witness,
        stats,
        algorithm: Algorithm::PabdEnum,
    };
    Ok((
        result,
        ExplanationSet {
            explanations,
            kind: ExplanationSetKind::SubsetMaximalPositive,
        },
    ))
}
