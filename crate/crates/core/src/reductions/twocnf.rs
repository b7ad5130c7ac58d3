use std::collections::BTreeSet;

use super::{Contract, ReductionError, ReductionReport};
use crate::langlib::{Clause, Cnf};
use crate::model::{AbductionInstance, Literal};

/// Builds a CNF from a 2-CNF abduction instance by merging, for each
/// manifestation m in index order, the not yet consumed clauses (l_j ∨ m) into
/// one clause (l_j ∨ .. ∨ l_k). A manifestation without such clauses and
/// without a unit clause (m) yields the empty clause. Remaining clauses are
/// kept, duplicates are removed, and H plays no part. The result has at most
/// n² clauses.
pub fn abd2cnf_to_cnfsat(
    inst: &AbductionInstance,
) -> Result<(Cnf, ReductionReport), ReductionError> {
    let cnf = Cnf::from_formula(&inst.kb).map_err(|e| ReductionError::Fragment(e.to_string()))?;
    if cnf.width() > 2 {
        return Err(ReductionError::Fragment(format!(
            "clause of width {} in a 2-CNF",
            cnf.width()
        )));
    }
    let mut consumed = vec![false; cnf.clauses.len()];
    let mut merged: Vec<Clause> = Vec::new();
    for &m in &inst.manifestations {
        let mut rest: Vec<Literal> = Vec::new();
        let mut unit = false;
        for (i, c) in cnf.clauses.iter().enumerate() {
            if !c.lits().contains(&m.positive()) {
                continue;
            }
            if c.len() == 1 {
                unit = true;
            } else if !consumed[i] {
                consumed[i] = true;
                rest.extend(c.lits().iter().copied().filter(|l| l.var != m));
            }
        }
        if rest.is_empty() && unit {
            continue;
        }
        if let Some(cl) = Clause::new(rest) {
            merged.push(cl);
        }
    }
    let mut seen = BTreeSet::new();
    let clauses: Vec<Clause> = cnf
        .clauses
        .iter()
        .zip(&consumed)
        .filter(|(_, &used)| !used)
        .map(|(c, _)| c.clone())
        .chain(merged)
        .filter(|c| seen.insert(c.clone()))
        .collect();
    let out = Cnf::new(inst.kb.num_vars(), clauses);
    let report = ReductionReport::new(
        "abd2cnf-to-cnfsat",
        inst.n(),
        out.num_vars as usize,
        out.clauses.len(),
        Contract::Shrinking,
    );
    Ok((out, report))
}
