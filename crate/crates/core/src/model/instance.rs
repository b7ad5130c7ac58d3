use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::{is_consistent, Constraint, Formula, Literal, ModelError, Relation, Var};

/// (KB, H, M).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AbductionInstance {
    pub kb: Formula,
    pub hypotheses: BTreeSet<Var>,
    pub manifestations: BTreeSet<Var>,
}

impl AbductionInstance {
    pub fn new(
        kb: Formula,
        hypotheses: impl IntoIterator<Item = Var>,
        manifestations: impl IntoIterator<Item = Var>,
    ) -> Result<Self, ModelError> {
        let inst = Self {
            kb,
            hypotheses: hypotheses.into_iter().collect(),
            manifestations: manifestations.into_iter().collect(),
        };
        let n = inst.kb.num_vars();
        if let Some(x) = inst
            .hypotheses
            .iter()
            .chain(&inst.manifestations)
            .find(|x| x.index() > n)
        {
            return Err(ModelError::VarOutOfRange { var: x.index(), n });
        }
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.kb.n()
    }

    pub fn h(&self) -> Vec<Var> {
        self.hypotheses.iter().copied().collect()
    }

    pub fn m(&self) -> Vec<Var> {
        self.manifestations.iter().copied().collect()
    }

    /// H ⊆ var(KB), M ⊆ var(KB) and H ∩ M = ∅.
    pub fn is_normalized(&self) -> bool {
        let occ = self.kb.occurring_vars();
        self.hypotheses.is_subset(&occ)
            && self.manifestations.is_subset(&occ)
            && self.hypotheses.is_disjoint(&self.manifestations)
    }
}

impl fmt::Debug for AbductionInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:?}, H={:?}, M={:?})",
            self.kb, self.hypotheses, self.manifestations
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExplanationKind {
    Full,
    Positive,
    General,
}

/// A consistent set of literals over H.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Explanation {
    pub literals: BTreeSet<Literal>,
}

impl Explanation {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Self {
        Self {
            literals: literals.into_iter().collect(),
        }
    }

    pub fn positive(vars: impl IntoIterator<Item = Var>) -> Self {
        Self::new(vars.into_iter().map(Var::positive))
    }

    pub fn empty() -> Self {
        Self {
            literals: BTreeSet::new(),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.literals.iter().map(|l| l.var).collect()
    }

    pub fn is_positive(&self) -> bool {
        self.literals.iter().all(|l| l.positive)
    }

    pub fn is_full(&self, h: &BTreeSet<Var>) -> bool {
        self.vars() == *h && self.literals.len() == h.len()
    }

    pub fn is_consistent(&self) -> bool {
        is_consistent(&self.literals)
    }

    /// Full wins over positive when both hold.
    pub fn kind(&self, h: &BTreeSet<Var>) -> ExplanationKind {
        if self.is_full(h) {
            ExplanationKind::Full
        } else if self.is_positive() {
            ExplanationKind::Positive
        } else {
            ExplanationKind::General
        }
    }

    /// The positive part as a variable set.
    pub fn positive_vars(&self) -> BTreeSet<Var> {
        self.literals
            .iter()
            .filter(|l| l.positive)
            .map(|l| l.var)
            .collect()
    }

    pub fn units(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.literals.iter().map(|l| (l.var, l.positive))
    }

    pub fn to_dimacs(&self) -> Vec<i64> {
        self.literals.iter().map(|l| l.to_dimacs()).collect()
    }
}

impl fmt::Debug for Explanation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.literals)
    }
}

impl Serialize for Explanation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.literals.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Explanation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Self {
            literals: BTreeSet::deserialize(d)?,
        })
    }
}

/// Anything that decides satisfiability of a formula.
pub trait SatDecider {
    fn decide(&self, formula: &Formula) -> bool;
}

impl<F: Fn(&Formula) -> bool> SatDecider for F {
    fn decide(&self, formula: &Formula) -> bool {
        self(formula)
    }
}

/// KB ∧ E satisfiable and KB ∧ E ∧ ¬m unsatisfiable for every m ∈ M.
pub fn is_explanation(
    inst: &AbductionInstance,
    e: &Explanation,
    sat: &impl SatDecider,
) -> Result<bool, ModelError> {
    if let Some(l) = e
        .literals
        .iter()
        .find(|l| !inst.hypotheses.contains(&l.var))
    {
        return Err(ModelError::LiteralOutsideH(l.var.index()));
    }
    if !e.is_consistent() {
        return Ok(false);
    }
    let kb_e = inst.kb.with_units(e.units());
    if !sat.decide(&kb_e) {
        return Ok(false);
    }
    Ok(inst
        .manifestations
        .iter()
        .all(|&m| !sat.decide(&kb_e.with_units([(m, false)]))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    TriviallyNo,
    TriviallyReduced,
    Unchanged,
}

/// Maps explanations of a preprocessed instance back to the original.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WitnessMap {
    /// Variables of H ∩ M removed from both sets; they explain themselves.
    pub self_explained: Vec<Var>,
    /// Variables of H outside var(KB) and outside M.
    pub dropped_h: Vec<Var>,
    /// Fresh hypothesis standing for the in-KB part of H ∩ M, with that part.
    pub fresh_h: Option<(Var, Vec<Var>)>,
    pub fresh_m: Option<Var>,
}

impl WitnessMap {
    /// Rewrites an explanation of the preprocessed instance into one of the original.
    /// A full explanation stays full: dropped hypotheses are filled in with the
    /// polarity that keeps a positive explanation positive.
    pub fn restore(&self, e: &Explanation, reduced_h: &BTreeSet<Var>) -> Explanation {
        let full = e.is_full(reduced_h);
        let positive = e.is_positive();
        let mut lits = e.literals.clone();
        if let Some((h, xs)) = &self.fresh_h {
            // ¬h never entails the fresh manifestation, so only h carries over.
            lits.remove(&h.negative());
            if lits.remove(&h.positive()) {
                lits.extend(xs.iter().map(|x| x.positive()));
            }
        }
        lits.extend(self.self_explained.iter().map(|x| x.positive()));
        if full {
            lits.extend(self.dropped_h.iter().map(|&x| Literal::new(x, positive)));
        }
        Explanation { literals: lits }
    }

    pub fn is_identity(&self) -> bool {
        *self == WitnessMap::default()
    }
}

#[derive(Clone, Debug)]
pub struct Preprocessed {
    pub instance: AbductionInstance,
    pub verdict: Verdict,
    pub map: WitnessMap,
}

fn imp() -> Arc<Relation> {
    static R: OnceLock<Arc<Relation>> = OnceLock::new();
    R.get_or_init(|| {
        Arc::new(
            Relation::new(2, [0b00, 0b10, 0b11])
                .unwrap()
                .with_name("IMP"),
        )
    })
    .clone()
}

/// Normalizes an instance so that H, M ⊆ var(KB) and H ∩ M = ∅.
///
/// A manifestation outside var(KB) that is no hypothesis makes the answer no;
/// the result is then the fixed negative instance (KB ∧ f, ∅, ∅). Members of
/// H ∩ M outside var(KB) are dropped from both sets, hypotheses outside
/// var(KB) are dropped from H. A member x of H ∩ M inside var(KB) is fixed
/// with ⊤(x) and removed from both sets: an explanation may always be assumed
/// to contain x positively. Self-explained variables come back as positive
/// literals through the witness map. No variables are added.
pub fn preprocess(inst: &AbductionInstance) -> Preprocessed {
    let occ = inst.kb.occurring_vars();
    let mut h = inst.hypotheses.clone();
    let mut m = inst.manifestations.clone();
    let mut kb = inst.kb.clone();
    let mut map = WitnessMap::default();

    for &x in &inst.manifestations {
        if occ.contains(&x) {
            continue;
        }
        if !h.contains(&x) {
            kb.push(Constraint::new(Relation::falsum(), vec![]).expect("nullary"))
                .expect("nullary scope");
            return Preprocessed {
                instance: AbductionInstance {
                    kb,
                    hypotheses: BTreeSet::new(),
                    manifestations: BTreeSet::new(),
                },
                verdict: Verdict::TriviallyNo,
                map,
            };
        }
        h.remove(&x);
        m.remove(&x);
        map.self_explained.push(x);
    }
    for &x in &inst.hypotheses {
        if h.contains(&x) && !occ.contains(&x) {
            h.remove(&x);
            map.dropped_h.push(x);
        }
    }
    let overlap: Vec<Var> = h.intersection(&m).copied().collect();
    for x in overlap {
        kb.push(Constraint::unary(Relation::top(), x))
            .expect("in range");
        h.remove(&x);
        m.remove(&x);
        map.self_explained.push(x);
    }

    let verdict = if map.is_identity() {
        Verdict::Unchanged
    } else {
        Verdict::TriviallyReduced
    };
    Preprocessed {
        instance: AbductionInstance {
            kb,
            hypotheses: h,
            manifestations: m,
        },
        verdict,
        map,
    }
}

/// Removes the overlap X = H ∩ M without unary constants: a fresh hypothesis
/// h and manifestation m are added together with (h → m) and (h → x) for every
/// x ∈ X. Keeps a CNF⁻ ∪ IMP knowledge base inside its fragment at the price
/// of two variables.
pub fn separate_overlap(inst: &AbductionInstance) -> (AbductionInstance, WitnessMap) {
    let mut out = inst.clone();
    let mut map = WitnessMap::default();
    let overlap: Vec<Var> = inst
        .hypotheses
        .intersection(&inst.manifestations)
        .copied()
        .collect();
    if overlap.is_empty() {
        return (out, map);
    }
    let fresh = out.kb.extend_vars(2);
    let (fh, fm) = (
        Var::from_index(*fresh.start()),
        Var::from_index(*fresh.end()),
    );
    out.kb
        .push(Constraint::new(imp(), vec![fh, fm]).expect("binary"))
        .expect("fresh vars");
    for &x in &overlap {
        out.kb
            .push(Constraint::new(imp(), vec![fh, x]).expect("binary"))
            .expect("in range");
        out.hypotheses.remove(&x);
        out.manifestations.remove(&x);
    }
    out.hypotheses.insert(fh);
    out.manifestations.insert(fm);
    map.fresh_h = Some((fh, overlap));
    map.fresh_m = Some(fm);
    (out, map)
}
