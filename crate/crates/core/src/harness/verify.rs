//! Solver agreement and reduction answer preservation against the oracles.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{generate, random_cnf, random_graph, random_qbf, rng, Family, GenParams};
use crate::langlib::{
    derive_inequality, imp_relation, is_complement_invariant, is_one_valid, nae, one_in, Cnf,
    CnfKind, ConstraintLanguage,
};
use crate::model::{preprocess, AbductionInstance, Constraint, Formula, Relation, Var, Verdict};
use crate::reductions::{
    abd2cnf_to_cnfsat, abd_to_pabd_4cnf, abd_to_simplesat, clique_to_abd, cnfsat_to_abd_lb,
    eliminate_constants, has_colorful_clique, kcnf_to_nae, negimp_to_pos, qbf_to_abd4cnf,
};
use crate::satenum::enumerate;
use crate::solvers::{
    abd_kcnf_pos, brute_sat, enum_abd, pabd_enum, pabd_recursive_audited, solve, Algorithm, Mode,
    Oracle, OracleCaps,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Exhaustive,
    Random,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(Suite::Exhaustive),
            "random" => Ok(Suite::Random),
            _ => Err(format!(
                "unknown suite {s:?}, expected exhaustive or random"
            )),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub per_family: usize,
    pub max_n: usize,
    pub seed: u64,
    pub caps: OracleCaps,
    /// Flips the baseline answer to check that the harness notices.
    pub inject_bug: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            per_family: 500,
            max_n: 12,
            seed: super::generate::DEFAULT_SEED,
            caps: OracleCaps::default(),
            inject_bug: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub check: String,
    pub detail: String,
    pub instance: AbductionInstance,
}

/// Pass and fail counts per check. Constructions whose answer
/// preservation is not guaranteed are counted under `logged` instead.
#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub instances: usize,
    pub checks: BTreeMap<String, (u64, u64)>,
    pub failures: Vec<Failure>,
    pub logged: BTreeMap<String, (u64, u64)>,
    pub logged_examples: Vec<Failure>,
}

const KEEP: usize = 20;

impl Tally {
    fn record(
        &mut self,
        check: &str,
        ok: bool,
        inst: &AbductionInstance,
        detail: impl FnOnce() -> String,
    ) {
        let e = self.checks.entry(check.to_string()).or_default();
        if ok {
            e.0 += 1;
        } else {
            e.1 += 1;
            if self.failures.len() < KEEP {
                self.failures.push(Failure {
                    check: check.into(),
                    detail: detail(),
                    instance: inst.clone(),
                });
            }
        }
    }

    fn log(
        &mut self,
        check: &str,
        ok: bool,
        inst: &AbductionInstance,
        detail: impl FnOnce() -> String,
    ) {
        let e = self.logged.entry(check.to_string()).or_default();
        if ok {
            e.0 += 1;
        } else {
            e.1 += 1;
            if self.logged_examples.len() < KEEP {
                self.logged_examples.push(Failure {
                    check: check.into(),
                    detail: detail(),
                    instance: inst.clone(),
                });
            }
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.instances += other.instances;
        for (k, (p, f)) in other.checks {
            let e = self.checks.entry(k).or_default();
            e.0 += p;
            e.1 += f;
        }
        for (k, (p, f)) in other.logged {
            let e = self.logged.entry(k).or_default();
            e.0 += p;
            e.1 += f;
        }
        self.failures.extend(other.failures);
        self.failures.truncate(KEEP);
        self.logged_examples.extend(other.logged_examples);
        self.logged_examples.truncate(KEEP);
        self
    }

    pub fn failed(&self) -> u64 {
        self.checks.values().map(|c| c.1).sum()
    }

    pub fn passed(&self) -> u64 {
        self.checks.values().map(|c| c.0).sum()
    }

    /// Pass and fail counts of all checks whose name starts with `prefix`.
    pub fn count(&self, prefix: &str) -> (u64, u64) {
        self.checks
            .iter()
            .filter(|(k, _)| k.starts_with(prefix))
            .fold((0, 0), |acc, (_, c)| (acc.0 + c.0, acc.1 + c.1))
    }
}

fn is_cnf_kind(f: &Formula, kind: CnfKind) -> Option<Cnf> {
    Cnf::from_formula(f).ok().filter(|c| c.is_kind(kind))
}

/// Solvers applicable to an instance in a mode, by fragment.
pub fn applicable(inst: &AbductionInstance, mode: Mode) -> Vec<Algorithm> {
    let mut out = vec![Algorithm::Oracle, Algorithm::Baseline];
    match mode {
        Mode::Abd => {
            out.push(Algorithm::Enum);
            // Preprocessing may add ⊤, which keeps a positive CNF positive.
            if is_cnf_kind(&inst.kb, CnfKind::Positive).is_some() {
                out.push(Algorithm::SimpleSat);
            }
        }
        Mode::Pabd => {
            out.extend([Algorithm::PabdRec, Algorithm::PabdEnum]);
            if is_one_valid(&ConstraintLanguage::new(inst.kb.relations())) {
                out.push(Algorithm::OneValid);
            }
        }
    }
    out
}

/// Solver checks on one instance.
pub fn check_solvers(inst: &AbductionInstance, opts: &VerifyOptions, t: &mut Tally) {
    let Ok(oracle) = Oracle::build(inst, opts.caps) else {
        return;
    };
    let truth = [
        (Mode::Abd, oracle.first_explanation().is_some()),
        (Mode::Pabd, oracle.first_positive_explanation().is_some()),
    ];
    for (mode, expected) in truth {
        for algo in applicable(inst, mode) {
            let name = format!("solver/{}/{}", algo.tag(), mode.tag());
            match solve(inst, algo, mode, false) {
                Ok(out) => {
                    let mut answer = out.result.answer;
                    if opts.inject_bug && algo == Algorithm::Baseline {
                        answer = !answer;
                    }
                    t.record(&name, answer == expected, inst, || {
                        format!("answer {answer}, oracle {expected}")
                    });
                    if let Some(w) = &out.result.witness {
                        let ok = oracle.is_explanation(w) && (mode == Mode::Abd || w.is_positive());
                        t.record("witness", ok, inst, || {
                            format!("{} returned {w:?}", algo.tag())
                        });
                    }
                }
                Err(e) => t.record(&name, false, inst, || e.to_string()),
            }
        }
    }
    t.record(
        "monotone-extension",
        !truth[0].1 || !oracle.full_explanations().is_empty(),
        inst,
        || "explanation without a full one".into(),
    );

    let pre = preprocess(inst);
    if pre.verdict == Verdict::TriviallyNo {
        return;
    }
    let red = &pre.instance;
    let Ok(red_oracle) = Oracle::build(red, opts.caps) else {
        return;
    };
    if let Ok((_, set)) = enum_abd(red, enumerate(&red.kb)) {
        let want = red_oracle.full_explanations();
        t.record("set/enum-full", set.explanations == want, inst, || {
            format!("{:?} vs {want:?}", set.explanations)
        });
    }
    if let Ok((_, set)) = pabd_enum(
        red,
        crate::satenum::enumerate_weight_ordered(&red.kb, &red.h()),
    ) {
        let want = red_oracle.maximal_positive_explanations();
        t.record(
            "set/pabd-enum-maximal",
            set.explanations == want,
            inst,
            || format!("{:?} vs {want:?}", set.explanations),
        );
    }
    let h = red.hypotheses.len();
    if h <= 12 {
        if let Ok((_, audit)) = pabd_recursive_audited(red, &crate::satenum::Dpll) {
            let ok = audit.duplicates == 0
                && audit.max_depth <= h + 1
                && audit.max_frame_entries <= 2 * h;
            t.record("audit/pabd-rec", ok, inst, || format!("{audit:?}"));
        }
    }
}

fn oracle_answers(inst: &AbductionInstance, caps: OracleCaps) -> Option<(bool, bool)> {
    let o = Oracle::build(inst, caps).ok()?;
    Some((
        o.first_explanation().is_some(),
        o.first_positive_explanation().is_some(),
    ))
}

/// Reduction checks on one instance; each transformer runs when the instance
/// lies in its fragment.
pub fn check_reductions(inst: &AbductionInstance, opts: &VerifyOptions, t: &mut Tally) {
    let caps = opts.caps;
    let Some((abd, _)) = oracle_answers(inst, caps) else {
        return;
    };

    // The output doubles H; keep its oracle table at 3^12 entries.
    if let Some(r) = (inst.hypotheses.len() <= 6)
        .then(|| abd_to_pabd_4cnf(inst))
        .and_then(Result::ok)
    {
        t.record(
            "contract/abd-to-pabd-4cnf",
            r.report.added_vars == inst.hypotheses.len() as i64,
            inst,
            || format!("{:?}", r.report),
        );
        if let Ok(o) = Oracle::build(&r.instance, caps) {
            let out = o.first_positive_explanation();
            t.record(
                "preserve/abd-to-pabd-4cnf",
                out.is_some() == abd,
                inst,
                || format!("in {abd}, out {out:?}"),
            );
            if let (Some(w), Ok(src)) = (out, Oracle::build(inst, caps)) {
                let back = r.back.apply(&w);
                t.record(
                    "witness-map/abd-to-pabd-4cnf",
                    src.is_explanation(&back),
                    inst,
                    || format!("{w:?} ↦ {back:?}"),
                );
            }
        }
    }

    if is_cnf_kind(&inst.kb, CnfKind::NegativeOrImplication).is_some() {
        match negimp_to_pos(inst) {
            Ok(r) => {
                t.record(
                    "contract/negimp-to-pos",
                    r.report.added_vars <= 2 && r.report.contract_holds(),
                    inst,
                    || format!("{:?}", r.report),
                );
                let positive_kb = is_cnf_kind(&r.instance.kb, CnfKind::Positive).is_some();
                t.record("fragment/negimp-to-pos", positive_kb, inst, || {
                    "output is not positive CNF".into()
                });
                if let Some((out, _)) = oracle_answers(&r.instance, caps) {
                    let pabd = oracle_answers(inst, caps).map(|a| a.1).unwrap_or(abd);
                    t.record(
                        "preserve/negimp-to-pos",
                        out == abd && pabd == abd,
                        inst,
                        || format!("in abd {abd} pabd {pabd}, out {out}"),
                    );
                }
                if positive_kb {
                    if let Ok((res, _)) = abd_kcnf_pos(&r.instance) {
                        if let (Some(w), Ok(src)) = (&res.witness, Oracle::build(inst, caps)) {
                            let back = r.back.apply(w);
                            t.record(
                                "witness-map/negimp-to-pos",
                                src.is_explanation(&back),
                                inst,
                                || format!("{w:?} ↦ {back:?}"),
                            );
                        }
                    }
                }
            }
            Err(e) => t.record("preserve/negimp-to-pos", false, inst, || e.to_string()),
        }
    }

    let pre = preprocess(inst);
    if pre.verdict != Verdict::TriviallyNo {
        let red = &pre.instance;
        if is_cnf_kind(&red.kb, CnfKind::Positive).is_some() {
            if let Ok((si, report)) = abd_to_simplesat(red) {
                let ok = si.vars().is_subset(&red.hypotheses) && report.contract_holds();
                t.record("contract/abd-to-simplesat", ok, inst, || {
                    format!("{:?} over {:?}", si.vars(), red.hypotheses)
                });
            }
        }
        if is_cnf_kind(&red.kb, CnfKind::Any).is_some_and(|c| c.width() <= 2) {
            if let Ok((out, report)) = abd2cnf_to_cnfsat(red) {
                let n = red.n();
                t.record(
                    "contract/abd2cnf-to-cnfsat",
                    out.clauses.len() <= n * n,
                    inst,
                    || format!("{report:?}"),
                );
                if out.num_vars <= 20 {
                    let sat = brute_sat(&out.to_formula());
                    t.log("preserve/abd2cnf-to-cnfsat", sat == abd, inst, || {
                        format!("abduction {abd}, cnf sat {sat}")
                    });
                }
            }
        }
    }

    let gamma: Vec<Arc<Relation>> = inst
        .kb
        .relations()
        .into_iter()
        .filter(|r| !r.is_bottom() && !r.is_top())
        .collect();
    let lang = ConstraintLanguage::new(gamma);
    if is_complement_invariant(&lang) && derive_inequality(&lang).is_ok() {
        match eliminate_constants(inst) {
            Ok(r) => {
                t.record(
                    "contract/eliminate-constants",
                    r.report.added_vars == 2,
                    inst,
                    || format!("{:?}", r.report),
                );
                let no_constants = r
                    .instance
                    .kb
                    .relations()
                    .iter()
                    .all(|r| !r.is_bottom() && !r.is_top());
                t.record("fragment/eliminate-constants", no_constants, inst, || {
                    "constant left".into()
                });
                if let Some((out, _)) = oracle_answers(&r.instance, caps) {
                    t.record("preserve/eliminate-constants", out == abd, inst, || {
                        format!("in {abd}, out {out}")
                    });
                }
            }
            Err(e) => t.record("preserve/eliminate-constants", false, inst, || {
                e.to_string()
            }),
        }
    }

    if is_cnf_kind(&inst.kb, CnfKind::Any).is_some() {
        match kcnf_to_nae(inst) {
            Ok(r) => {
                t.record(
                    "contract/kcnf-to-nae",
                    r.report.added_vars == 2,
                    inst,
                    || format!("{:?}", r.report),
                );
                if let Some((out, _)) = oracle_answers(&r.instance, caps) {
                    t.record("preserve/kcnf-to-nae", out == abd, inst, || {
                        format!("in {abd}, out {out}")
                    });
                }
            }
            Err(e) => t.record("preserve/kcnf-to-nae", false, inst, || e.to_string()),
        }
    }
}

/// cnfsat_to_abd_lb on a CNF.
pub fn check_cnfsat(phi: &Cnf, caps: OracleCaps, t: &mut Tally) {
    let Ok((inst, report)) = cnfsat_to_abd_lb(phi) else {
        return;
    };
    let n = phi.num_vars as usize;
    let ok = report.output_vars == 3 * n
        && inst.hypotheses.len() == 2 * n
        && inst.manifestations.len() == n;
    t.record("contract/cnfsat-to-abd-lb", ok, &inst, || {
        format!("{report:?}")
    });
    let sat = brute_sat(&phi.to_formula());
    if let Some((abd, pabd)) = oracle_answers(&inst, caps) {
        t.record(
            "preserve/cnfsat-to-abd-lb",
            abd == sat && pabd == sat,
            &inst,
            || format!("sat {sat}, abd {abd}, pabd {pabd}"),
        );
    }
}

pub fn check_clique(g: &crate::reductions::ColoredGraph, caps: OracleCaps, t: &mut Tally) {
    let Ok((inst, report)) = clique_to_abd(g) else {
        return;
    };
    t.record(
        "contract/clique-to-abd",
        report.output_vars == g.n() + g.k,
        &inst,
        || format!("{report:?}"),
    );
    let truth = has_colorful_clique(g);
    if let Some((abd, pabd)) = oracle_answers(&inst, caps) {
        t.record(
            "preserve/clique-to-abd",
            abd == truth && pabd == truth,
            &inst,
            || format!("clique {truth}, abd {abd}, pabd {pabd}"),
        );
    }
}

pub fn check_qbf(q: &crate::reductions::QbfInstance, caps: OracleCaps, t: &mut Tally) {
    let Ok((inst, _)) = qbf_to_abd4cnf(q) else {
        return;
    };
    let truth = q.evaluate();
    if let Some((abd, _)) = oracle_answers(&inst, caps) {
        t.record("preserve/qbf-to-abd4cnf", abd == truth, &inst, || {
            format!("qbf {truth}, abd {abd} for {q:?}")
        });
    }
}

/// The relation pool of the exhaustive suite.
pub fn exhaustive_pool() -> Vec<Arc<Relation>> {
    let or2 = crate::langlib::clause_relation(&[true, true]);
    let nand2 = crate::langlib::clause_relation(&[false, false]);
    vec![
        Relation::neq(),
        imp_relation(),
        or2,
        nand2,
        one_in(3),
        nae(&[false, false, false]),
        Relation::bottom(),
        Relation::top(),
    ]
}

type Key = (Vec<(Vec<u32>, Vec<u64>)>, Vec<u32>, Vec<u32>);

/// A constraint as its relation on the sorted scope, so that symmetric
/// relations compare equal under scope permutations.
fn normal(c: &Constraint, perm: &[u32]) -> (Vec<u32>, Vec<u64>) {
    let mapped: Vec<u32> = c.scope.iter().map(|x| perm[x.pos()]).collect();
    let mut order: Vec<usize> = (0..mapped.len()).collect();
    order.sort_by_key(|&i| mapped[i]);
    let mut tuples: Vec<u64> = c
        .relation
        .tuples()
        .iter()
        .map(|&t| {
            order
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, &i)| acc | ((t >> i & 1) << j))
        })
        .collect();
    tuples.sort_unstable();
    (order.iter().map(|&i| mapped[i]).collect(), tuples)
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n as u32);
            out.push(q);
        }
    }
    out
}

fn canonical(inst: &AbductionInstance, perms: &[Vec<u32>]) -> Key {
    perms
        .iter()
        .map(|p| {
            let mut cons: Vec<_> = inst.kb.constraints().iter().map(|c| normal(c, p)).collect();
            cons.sort();
            let map = |s: &BTreeSet<Var>| {
                let mut v: Vec<u32> = s.iter().map(|x| p[x.pos()]).collect();
                v.sort_unstable();
                v
            };
            (cons, map(&inst.hypotheses), map(&inst.manifestations))
        })
        .min()
        .expect("at least one permutation")
}

/// All instances over three variables with at most three distinct pool
/// constraints on distinct variables and every H, M split, one per orbit of
/// the variable permutations.
pub fn exhaustive_instances() -> Vec<AbductionInstance> {
    let n = 3u32;
    let perms = permutations(n as usize);
    let mut singles: Vec<Constraint> = Vec::new();
    let mut seen_single = HashSet::new();
    let ident: Vec<u32> = (1..=n).collect();
    for r in exhaustive_pool() {
        for scope in permutations(n as usize) {
            let scope: Vec<Var> = scope[..r.arity()]
                .iter()
                .map(|&x| Var::from_index(x))
                .collect();
            let c = Constraint::new(r.clone(), scope).expect("arity");
            if seen_single.insert(normal(&c, &ident)) {
                singles.push(c);
            }
        }
    }
    let mut kbs: Vec<Vec<usize>> = vec![vec![]];
    for i in 0..singles.len() {
        kbs.push(vec![i]);
        for j in i + 1..singles.len() {
            kbs.push(vec![i, j]);
            for k in j + 1..singles.len() {
                kbs.push(vec![i, j, k]);
            }
        }
    }
    let mut seen: HashSet<Key> = HashSet::new();
    let mut out = Vec::new();
    for kb in kbs {
        let f =
            Formula::new(n, kb.iter().map(|&i| singles[i].clone()).collect()).expect("in range");
        for hm in 0..1u32 << (2 * n) {
            let h = (0..n)
                .filter(|i| hm >> i & 1 == 1)
                .map(|i| Var::from_index(i + 1));
            let m = (0..n)
                .filter(|i| hm >> (n + i) & 1 == 1)
                .map(|i| Var::from_index(i + 1));
            let inst = AbductionInstance::new(f.clone(), h, m).expect("in range");
            if seen.insert(canonical(&inst, &perms)) {
                out.push(inst);
            }
        }
    }
    out
}

fn run_instances(insts: &[AbductionInstance], opts: &VerifyOptions) -> Tally {
    insts
        .par_iter()
        .map(|inst| {
            let mut t = Tally {
                instances: 1,
                ..Tally::default()
            };
            check_solvers(inst, opts, &mut t);
            check_reductions(inst, opts, &mut t);
            t
        })
        .reduce(Tally::default, Tally::merge)
}

/// Random families of the solver sweep, with the k used for each.
pub const RANDOM_FAMILIES: [(Family, usize); 7] = [
    (Family::Xsat, 3),
    (Family::Equations, 3),
    (Family::Aff, 3),
    (Family::KcnfPos, 2),
    (Family::KcnfPos, 3),
    (Family::KcnfNegImp, 2),
    (Family::Nae, 3),
];

pub fn random_instances(opts: &VerifyOptions) -> Vec<(String, AbductionInstance)> {
    let mut out = Vec::new();
    for (fi, &(family, k)) in RANDOM_FAMILIES.iter().enumerate() {
        for i in 0..opts.per_family {
            let seed = opts.seed ^ ((fi as u64) << 40) ^ i as u64;
            let n = 2 + (i % (opts.max_n.max(3) - 1));
            let inst = generate(&GenParams {
                family,
                n,
                k,
                m: None,
                seed,
            });
            out.push((format!("{}-k{k}", family.tag()), inst));
        }
    }
    out
}

pub fn verify(suite: Suite, opts: &VerifyOptions) -> Tally {
    match suite {
        Suite::Exhaustive => run_instances(&exhaustive_instances(), opts),
        Suite::Random => {
            let insts: Vec<AbductionInstance> =
                random_instances(opts).into_iter().map(|p| p.1).collect();
            let mut t = run_instances(&insts, opts);
            let mut r = rng(opts.seed ^ 0xc1);
            let mut side = Tally::default();
            for i in 0..opts.per_family {
                let n = 1 + i % 4;
                let phi = random_cnf(&mut r, n, 3, 1 + i % 6, 0.5);
                check_cnfsat(&phi, opts.caps, &mut side);
                let g = random_graph(&mut r, 1 + i % 8, 1 + i % 3);
                check_clique(&g, opts.caps, &mut side);
                let total = 1 + i % 6;
                let nx = i % (total + 1);
                let q = random_qbf(&mut r, nx, total - nx, i % 5);
                check_qbf(&q, opts.caps, &mut side);
            }
            t = t.merge(side);
            t
        }
    }
}

/// Greedily removes constraints and hypotheses while `fails` keeps holding.
pub fn minimize_failure(
    inst: &AbductionInstance,
    fails: impl Fn(&AbductionInstance) -> bool,
) -> AbductionInstance {
    let mut cur = inst.clone();
    let mut i = 0;
    while i < cur.kb.constraints().len() {
        let mut cons = cur.kb.constraints().to_vec();
        cons.remove(i);
        let kb = Formula::new(cur.kb.num_vars(), cons).expect("same range");
        let next = AbductionInstance { kb, ..cur.clone() };
        if fails(&next) {
            cur = next;
        } else {
            i += 1;
        }
    }
    for x in cur.h() {
        let mut next = cur.clone();
        next.hypotheses.remove(&x);
        if fails(&next) {
            cur = next;
        }
    }
    cur
}

/// Whether a single failure reproduces: reruns the checks on `inst` and looks
/// for a failure of the same check.
pub fn reproduces(check: &str, inst: &AbductionInstance, opts: &VerifyOptions) -> bool {
    let mut t = Tally::default();
    check_solvers(inst, opts, &mut t);
    check_reductions(inst, opts, &mut t);
    t.checks.get(check).is_some_and(|c| c.1 > 0)
}
