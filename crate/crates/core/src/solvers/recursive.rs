use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::baseline::entails_all;
use super::{AbdResult, Algorithm, SolverError};
use crate::model::{AbductionInstance, Explanation, Literal, SatDecider, Var};
use crate::satenum::EnumStats;

/// Instrumentation of one recursive run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisitAudit {
    /// Candidate sets E as bitmasks over H in ascending variable order.
    pub visited: Vec<u64>,
    pub duplicates: u64,
    /// Root has depth 1.
    pub max_depth: usize,
    /// Largest |D| + |δ| + |G| held by one frame.
    pub max_frame_entries: usize,
}

struct Ctx<'a, S: SatDecider> {
    inst: &'a AbductionInstance,
    sat: &'a S,
    h: Vec<Var>,
    index: HashMap<Var, usize>,
    stats: EnumStats,
    audit: Option<(VisitAudit, std::collections::HashSet<u64>)>,
}

impl<S: SatDecider> Ctx<'_, S> {
    fn rec(&mut self, d: &[Var], delta: &[Var], depth: usize) -> Option<Explanation> {
        self.stats.branch_nodes += 1;
        self.stats.reach(depth);
        let e: Vec<Var> = d.iter().chain(delta).copied().collect();
        let mut in_e = vec![false; self.h.len()];
        for x in &e {
            in_e[self.index[x]] = true;
        }
        let g: Vec<Literal> = self
            .h
            .iter()
            .enumerate()
            .map(|(i, &x)| Literal::new(x, in_e[i]))
            .collect();
        if let Some((audit, seen)) = &mut self.audit {
            let mask = in_e
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i));
            if seen.insert(mask) {
                audit.visited.push(mask);
            } else {
                audit.duplicates += 1;
            }
            audit.max_depth = audit.max_depth.max(depth);
            audit.max_frame_entries = audit.max_frame_entries.max(d.len() + delta.len() + g.len());
        }

        let kb_g = self
            .inst
            .kb
            .with_units(g.iter().map(|l| (l.var, l.positive)));
        // Some model with exactly E true violates M: E and all its subsets fail.
        for &m in &self.inst.manifestations {
            self.stats.leaves += 1;
            if self.sat.decide(&kb_g.with_units([(m, false)])) {
                return None;
            }
        }
        self.stats.leaves += 1;
        if self.sat.decide(&kb_g) {
            // The exact class of E is non-empty and clean. E itself is an
            // explanation iff KB ∧ E entails M; otherwise no subset is one.
            let kb_e = self.inst.kb.with_units(e.iter().map(|&x| (x, true)));
            return entails_all(&kb_e, self.inst, self.sat, &mut self.stats)
                .then(|| Explanation::positive(e.iter().copied()));
        }
        for i in 0..d.len() {
            let delta2: Vec<Var> = delta.iter().chain(&d[..i]).copied().collect();
            if let Some(found) = self.rec(&d[i + 1..], &delta2, depth + 1) {
                return Some(found);
            }
        }
        None
    }
}

fn run<S: SatDecider>(
    inst: &AbductionInstance,
    sat: &S,
    audit: bool,
) -> Result<(AbdResult, Option<VisitAudit>), SolverError> {
    let h = inst.h();
    if audit && h.len() > 64 {
        return Err(SolverError::TooManyHypotheses(h.len()));
    }
    let index = h.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut ctx = Ctx {
        inst,
        sat,
        h: h.clone(),
        index,
        stats: EnumStats::default(),
        audit: audit.then(Default::default),
    };
    let witness = ctx.rec(&h, &[], 1);
    let mut stats = ctx.stats;
    stats.models_emitted = u64::from(witness.is_some());
    let result = AbdResult {
        answer: witness.is_some(),
        witness,
        stats,
        algorithm: Algorithm::PabdRec,
    };
    Ok((result, ctx.audit.map(|(a, _)| a)))
}

/// Top-down traversal of the subsets of H in polynomial space.
///
/// A call holds D (still removable) and δ (kept); the candidate is E = D ∪ δ
/// and G fixes H ∖ E to false. Child i drops the i-th element of D and moves
/// the earlier ones into δ, so every subset is reached at most once. A
/// satisfiable KB ∧ G ∧ ¬m prunes the subtree. A satisfiable KB ∧ G ends the
/// descent: E is accepted when KB ∧ E entails M.
pub fn pabd_recursive(
    inst: &AbductionInstance,
    sat: &impl SatDecider,
) -> Result<AbdResult, SolverError> {
    Ok(run(inst, sat, false)?.0)
}

pub fn pabd_recursive_audited(
    inst: &AbductionInstance,
    sat: &impl SatDecider,
) -> Result<(AbdResult, VisitAudit), SolverError> {
    let (r, a) = run(inst, sat, true)?;
    Ok((r, a.expect("audit requested")))
}
