use std::collections::BTreeSet;

use super::{AbdResult, Algorithm, SolverError};
use crate::model::{AbductionInstance, Assignment, Explanation, Formula, Literal, Var};
use crate::satenum::EnumStats;

/// Size caps for the definitional brute force.
#[derive(Clone, Copy, Debug)]
pub struct OracleCaps {
    pub max_vars: usize,
    pub max_h: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        Self {
            max_vars: 20,
            max_h: 16,
        }
    }
}

fn satisfies(f: &Formula, bits: u64) -> bool {
    f.constraints().iter().all(|c| {
        let t = c
            .scope
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, x)| acc | ((bits >> x.pos() & 1) << i));
        c.relation.contains(t)
    })
}

/// Every model by truth table, in increasing bit order.
pub fn brute_models(f: &Formula) -> Vec<Assignment> {
    assert!(f.n() <= 26, "truth table too large");
    (0..1u64 << f.n())
        .filter(|&b| satisfies(f, b))
        .map(|b| Assignment::from_bits(b, f.n()))
        .collect()
}

pub fn brute_sat(f: &Formula) -> bool {
    assert!(f.n() <= 26, "truth table too large");
    (0..1u64 << f.n()).any(|b| satisfies(f, b))
}

/// Truth-table view of an instance over all partial literal sets on H.
///
/// Index digits are base 3, digit i standing for H[i]: 0 is ¬h, 1 is h and 2
/// leaves h unmentioned. `consistent[E]` holds when some model extends E and
/// `violated[E]` when some model extending E falsifies a manifestation.
pub struct Oracle {
    h: Vec<Var>,
    consistent: Vec<bool>,
    violated: Vec<bool>,
}

impl Oracle {
    pub fn build(inst: &AbductionInstance, caps: OracleCaps) -> Result<Self, SolverError> {
        let n = inst.n();
        let h = inst.h();
        if n > caps.max_vars || h.len() > caps.max_h {
            return Err(SolverError::TooLarge {
                n,
                h: h.len(),
                max_vars: caps.max_vars,
                max_h: caps.max_h,
            });
        }
        let k = h.len();
        let mut model_at = vec![false; 1 << k];
        let mut bad_at = vec![false; 1 << k];
        for bits in 0..1u64 << n {
            if !satisfies(&inst.kb, bits) {
                continue;
            }
            let p = h.iter().enumerate().fold(0usize, |acc, (i, x)| {
                acc | ((bits >> x.pos() & 1) as usize) << i
            });
            model_at[p] = true;
            if inst.manifestations.iter().any(|m| bits >> m.pos() & 1 == 0) {
                bad_at[p] = true;
            }
        }
        let size = 3usize.pow(k as u32);
        let mut consistent = vec![false; size];
        let mut violated = vec![false; size];
        for idx in 0..size {
            let (mut rest, mut pow, mut free) = (idx, 1usize, None);
            let mut bin = 0usize;
            for i in 0..k {
                let d = rest % 3;
                rest /= 3;
                if d == 2 && free.is_none() {
                    free = Some(pow);
                }
                bin |= (d & 1) << i;
                pow *= 3;
            }
            match free {
                None => {
                    consistent[idx] = model_at[bin];
                    violated[idx] = bad_at[bin];
                }
                Some(p) => {
                    let (a, b) = (idx - 2 * p, idx - p);
                    consistent[idx] = consistent[a] || consistent[b];
                    violated[idx] = violated[a] || violated[b];
                }
            }
        }
        Ok(Self {
            h,
            consistent,
            violated,
        })
    }

    fn index_of(&self, e: &Explanation) -> Option<usize> {
        let mut idx = 0;
        let mut pow = 1;
        for x in &self.h {
            let pos = e.literals.contains(&x.positive());
            let neg = e.literals.contains(&x.negative());
            idx += pow
                * match (pos, neg) {
                    (true, true) => return None,
                    (true, false) => 1,
                    (false, true) => 0,
                    (false, false) => 2,
                };
            pow *= 3;
        }
        Some(idx)
    }

    fn explanation_at(&self, mut idx: usize) -> Explanation {
        let mut lits = BTreeSet::new();
        for x in &self.h {
            match idx % 3 {
                0 => {
                    lits.insert(x.negative());
                }
                1 => {
                    lits.insert(x.positive());
                }
                _ => {}
            }
            idx /= 3;
        }
        Explanation { literals: lits }
    }

    fn ok(&self, idx: usize) -> bool {
        self.consistent[idx] && !self.violated[idx]
    }

    /// `false` also for literal sets leaving H or inconsistent ones.
    pub fn is_explanation(&self, e: &Explanation) -> bool {
        if e.literals.iter().any(|l| !self.h.contains(&l.var)) {
            return false;
        }
        self.index_of(e).is_some_and(|i| self.ok(i))
    }

    /// Every explanation, in index order.
    pub fn explanations(&self) -> Vec<Explanation> {
        (0..self.consistent.len())
            .filter(|&i| self.ok(i))
            .map(|i| self.explanation_at(i))
            .collect()
    }

    fn positive_index(&self, mask: usize) -> usize {
        let mut idx = 0;
        let mut pow = 1;
        for i in 0..self.h.len() {
            idx += pow * if mask >> i & 1 == 1 { 1 } else { 2 };
            pow *= 3;
        }
        idx
    }

    fn positive_mask_to_explanation(&self, mask: usize) -> Explanation {
        Explanation::positive(
            (0..self.h.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| self.h[i]),
        )
    }

    pub fn full_explanations(&self) -> BTreeSet<Explanation> {
        (0..1usize << self.h.len())
            .map(|mask| {
                let lits = self
                    .h
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| Literal::new(x, mask >> i & 1 == 1));
                Explanation::new(lits)
            })
            .filter(|e| self.is_explanation(e))
            .collect()
    }

    fn positive_flags(&self) -> Vec<bool> {
        (0..1usize << self.h.len())
            .map(|m| self.ok(self.positive_index(m)))
            .collect()
    }

    pub fn positive_explanations(&self) -> BTreeSet<Explanation> {
        let flags = self.positive_flags();
        (0..flags.len())
            .filter(|&m| flags[m])
            .map(|m| self.positive_mask_to_explanation(m))
            .collect()
    }

    /// Positive explanations with no proper superset among positive explanations.
    pub fn maximal_positive_explanations(&self) -> BTreeSet<Explanation> {
        let k = self.h.len();
        let flags = self.positive_flags();
        // up[s]: some positive explanation contains s.
        let mut up = flags.clone();
        for i in 0..k {
            for s in (0..1usize << k).rev() {
                if s >> i & 1 == 0 && up[s | 1 << i] {
                    up[s] = true;
                }
            }
        }
        (0..flags.len())
            .filter(|&s| flags[s] && (0..k).all(|i| s >> i & 1 == 1 || !up[s | 1 << i]))
            .map(|s| self.positive_mask_to_explanation(s))
            .collect()
    }

    pub fn first_explanation(&self) -> Option<Explanation> {
        (0..self.consistent.len())
            .find(|&i| self.ok(i))
            .map(|i| self.explanation_at(i))
    }

    pub fn first_positive_explanation(&self) -> Option<Explanation> {
        (0..1usize << self.h.len())
            .find(|&m| self.ok(self.positive_index(m)))
            .map(|m| self.positive_mask_to_explanation(m))
    }
}

fn result(witness: Option<Explanation>, algorithm: Algorithm, n: usize) -> AbdResult {
    let stats = EnumStats {
        leaves: 1u64 << n,
        ..EnumStats::default()
    };
    AbdResult {
        answer: witness.is_some(),
        witness,
        stats,
        algorithm,
    }
}

/// Definitional brute force over every consistent E ⊆ Lits(H).
pub fn oracle_abd(inst: &AbductionInstance) -> Result<AbdResult, SolverError> {
    oracle_abd_with(inst, OracleCaps::default())
}

pub fn oracle_abd_with(
    inst: &AbductionInstance,
    caps: OracleCaps,
) -> Result<AbdResult, SolverError> {
    let o = Oracle::build(inst, caps)?;
    Ok(result(o.first_explanation(), Algorithm::Oracle, inst.n()))
}

/// Definitional brute force over every E ⊆ H.
pub fn oracle_pabd(inst: &AbductionInstance) -> Result<AbdResult, SolverError> {
    oracle_pabd_with(inst, OracleCaps::default())
}

pub fn oracle_pabd_with(
    inst: &AbductionInstance,
    caps: OracleCaps,
) -> Result<AbdResult, SolverError> {
    let o = Oracle::build(inst, caps)?;
    Ok(result(
        o.first_positive_explanation(),
        Algorithm::Oracle,
        inst.n(),
    ))
}
