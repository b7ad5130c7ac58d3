//! Seeded instance generators.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::langlib::{aff_relation, equations, imp_relation, nae, one_in, Clause, Cnf};
use crate::model::{AbductionInstance, Constraint, Formula, Relation, Var};
use crate::reductions::{
    clique_to_abd, cnfsat_to_abd_lb, qbf_to_abd4cnf, ColoredGraph, QbfInstance,
};
use crate::satenum::SimpleSatInstance;

pub const DEFAULT_SEED: u64 = 0x5eed_abd1;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    XsatChain,
    Xsat,
    Equations,
    Aff,
    KcnfPos,
    KcnfNegImp,
    Clique,
    Qbf4cnf,
    CnfsatLb,
    Nae,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::XsatChain,
        Family::Xsat,
        Family::Equations,
        Family::Aff,
        Family::KcnfPos,
        Family::KcnfNegImp,
        Family::Clique,
        Family::Qbf4cnf,
        Family::CnfsatLb,
        Family::Nae,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::XsatChain => "xsat-chain",
            Family::Xsat => "xsat",
            Family::Equations => "equations",
            Family::Aff => "aff",
            Family::KcnfPos => "kcnf-pos",
            Family::KcnfNegImp => "kcnf-neg-imp",
            Family::Clique => "clique",
            Family::Qbf4cnf => "qbf4cnf",
            Family::CnfsatLb => "cnfsat-lb",
            Family::Nae => "nae",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|f| f.tag() == s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|f| f.tag()).collect();
            format!("unknown family {s:?}, expected one of {}", names.join(", "))
        })
    }
}

/// Generator parameters. `n` is the size parameter: the variable count for
/// formula families, the chain length m for xsat-chain (n = 2m variables),
/// the vertex count for clique and the source variable count for qbf4cnf and
/// cnfsat-lb. `k` is the clause width, arity bound or color count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    /// Constraint count; a family default when absent.
    pub m: Option<usize>,
    pub seed: u64,
}

impl GenParams {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        let k = match family {
            Family::KcnfPos | Family::KcnfNegImp => 2,
            _ => 3,
        };
        Self {
            family,
            n,
            k,
            m: None,
            seed,
        }
    }
}

fn pick(rng: &mut impl Rng, n: usize, k: usize) -> Vec<Var> {
    let mut all: Vec<u32> = (1..=n as u32).collect();
    all.shuffle(rng);
    all.truncate(k);
    all.into_iter().map(Var::from_index).collect()
}

/// Random H and M: every variable joins H with probability 1/2, and one or
/// two manifestations are drawn, which may overlap H.
fn random_hm(rng: &mut impl Rng, kb: Formula) -> AbductionInstance {
    let n = kb.n();
    let h: Vec<Var> = (1..=n as u32)
        .map(Var::from_index)
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    let mcount = rng.gen_range(1..=2.min(n));
    let m = pick(rng, n, mcount);
    AbductionInstance::new(kb, h, m).expect("variables in range")
}

fn push(kb: &mut Formula, r: Arc<Relation>, scope: Vec<Var>) {
    kb.push(Constraint::new(r, scope).expect("arity matches"))
        .expect("variables in range");
}

/// R_{1/2}(x_{2i-1}, x_{2i}) for i = 1..=m; exactly 2^m models. H holds the
/// odd variables and M = {x_{2m}}.
pub fn xsat_chain(m: usize) -> AbductionInstance {
    let n = 2 * m as u32;
    let mut kb = Formula::empty(n);
    for i in 0..m as u32 {
        push(
            &mut kb,
            one_in(2),
            vec![Var::from_index(2 * i + 1), Var::from_index(2 * i + 2)],
        );
    }
    let h = (0..m as u32).map(|i| Var::from_index(2 * i + 1));
    AbductionInstance::new(kb, h, (m > 0).then(|| Var::from_index(n))).expect("variables in range")
}

/// Exactly-one constraints of arity 2..=k covering every variable, plus
/// ⌈n/6⌉ more on random triples.
pub fn random_xsat(rng: &mut impl Rng, n: usize, k: usize, extra: Option<usize>) -> Formula {
    let k = k.clamp(2, n.max(2));
    let mut kb = Formula::empty(n as u32);
    let mut order: Vec<u32> = (1..=n as u32).collect();
    order.shuffle(rng);
    let mut i = 0;
    while i < n {
        let a = rng.gen_range(2..=k).min(n);
        let mut scope: Vec<Var> = order[i..(i + a).min(n)]
            .iter()
            .map(|&x| Var::from_index(x))
            .collect();
        while scope.len() < a {
            let x = Var::from_index(rng.gen_range(1..=n as u32));
            if !scope.contains(&x) {
                scope.push(x);
            }
        }
        i += a;
        push(&mut kb, one_in(scope.len()), scope);
    }
    for _ in 0..extra.unwrap_or(n.div_ceil(6)) {
        let a = 3.min(n);
        push(&mut kb, one_in(a), pick(rng, n, a));
    }
    kb
}

/// m clauses of width 1..=k; each literal is positive with probability `p_pos`.
pub fn random_cnf(rng: &mut impl Rng, n: usize, k: usize, m: usize, p_pos: f64) -> Cnf {
    let mut clauses = Vec::new();
    while clauses.len() < m {
        let w = rng.gen_range(1..=k.min(n));
        let lits = pick(rng, n, w)
            .into_iter()
            .map(|x| crate::model::Literal::new(x, rng.gen_bool(p_pos)));
        if let Some(c) = Clause::new(lits) {
            clauses.push(c);
        }
    }
    Cnf::new(n as u32, clauses)
}

/// Negative clauses of width ≤ k and implications, about half each.
pub fn random_neg_imp(rng: &mut impl Rng, n: usize, k: usize, m: usize) -> Cnf {
    let mut clauses = Vec::new();
    for _ in 0..m {
        if n >= 2 && rng.gen_bool(0.5) {
            let xy = pick(rng, n, 2);
            clauses.push(Clause::new([xy[0].negative(), xy[1].positive()]).expect("distinct"));
        } else {
            let w = rng.gen_range(1..=k.min(n));
            clauses.push(
                Clause::new(pick(rng, n, w).into_iter().map(|x| x.negative())).expect("distinct"),
            );
        }
    }
    Cnf::new(n as u32, clauses)
}

pub fn random_graph(rng: &mut impl Rng, n: usize, k: usize) -> ColoredGraph {
    let colors: Vec<usize> = (0..n)
        .map(|v| if v < k { v + 1 } else { rng.gen_range(1..=k) })
        .collect();
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(0.6) {
                edges.push((u, v));
            }
        }
    }
    ColoredGraph::new(k, colors, edges).expect("valid graph")
}

pub fn random_qbf(rng: &mut impl Rng, nx: usize, ny: usize, terms: usize) -> QbfInstance {
    let n = nx + ny;
    let t: Vec<Vec<i64>> = (0..terms)
        .map(|_| {
            let w = rng.gen_range(1..=3.min(n));
            pick(rng, n, w)
                .into_iter()
                .map(|x| {
                    if rng.gen_bool(0.5) {
                        i64::from(x.index())
                    } else {
                        -i64::from(x.index())
                    }
                })
                .collect()
        })
        .collect();
    QbfInstance::new(nx as u32, ny as u32, t).expect("literals in range")
}

/// The SimpleSAT family that forces full (1, 2)-branching: the path
/// (x_1 ∨ x_2) ∧ … ∧ (x_{n-1} ∨ x_n) together with the single negative term
/// ¬x_{n-1} ∧ ¬x_n, which contradicts the last clause only at the bottom.
pub fn simplesat_adversarial(n: usize) -> SimpleSatInstance {
    assert!(n >= 2);
    let x = |i: usize| Var::from_index(i as u32);
    let clauses = (1..n).map(|i| vec![x(i), x(i + 1)]).collect();
    SimpleSatInstance::new(n as u32, clauses, vec![vec![vec![x(n - 1), x(n)]]], 2).expect("valid")
}

/// No explanation exists and H covers every variable but the manifestation,
/// so the baseline tries all 2^(n-1) full candidates.
pub fn full_h_negative(rng: &mut impl Rng, n: usize) -> AbductionInstance {
    assert!(n >= 2);
    let mut kb = Formula::empty(n as u32);
    let m = Var::from_index(n as u32);
    for i in 1..n as u32 {
        if i + 1 < n as u32 && rng.gen_bool(0.5) {
            push(
                &mut kb,
                imp_relation(),
                vec![Var::from_index(i), Var::from_index(i + 1)],
            );
        }
    }
    push(&mut kb, imp_relation(), vec![m, Var::from_index(1)]);
    AbductionInstance::new(kb, (1..n as u32).map(Var::from_index), [m]).expect("variables in range")
}

pub fn generate(p: &GenParams) -> AbductionInstance {
    let mut r = rng(p.seed);
    let n = p.n.max(1);
    let m = p.m.unwrap_or((3 * n).div_ceil(4));
    match p.family {
        Family::XsatChain => xsat_chain(p.n),
        Family::Xsat => {
            let kb = random_xsat(&mut r, n, p.k, p.m);
            random_hm(&mut r, kb)
        }
        Family::Equations => {
            let mut kb = Formula::empty(n as u32);
            for _ in 0..m {
                let a = r.gen_range(1..=p.k.clamp(1, n));
                let modulus = r.gen_range(2..=(a + 1).min(4));
                let q = r.gen_range(0..modulus);
                push(
                    &mut kb,
                    equations(a, modulus, q).expect("parameters in range"),
                    pick(&mut r, n, a),
                );
            }
            random_hm(&mut r, kb)
        }
        Family::Aff => {
            let mut kb = Formula::empty(n as u32);
            for _ in 0..m {
                let a = r.gen_range(1..=p.k.clamp(1, n));
                push(
                    &mut kb,
                    aff_relation(a, r.gen_bool(0.5)),
                    pick(&mut r, n, a),
                );
            }
            random_hm(&mut r, kb)
        }
        Family::KcnfPos => {
            let cnf = random_cnf(&mut r, n, p.k, p.m.unwrap_or(n), 1.0);
            random_hm(&mut r, cnf.to_formula())
        }
        Family::KcnfNegImp => {
            let cnf = random_neg_imp(&mut r, n, p.k, p.m.unwrap_or(n));
            random_hm(&mut r, cnf.to_formula())
        }
        Family::Nae => {
            let mut kb = Formula::empty(n as u32);
            for _ in 0..m {
                let a = 3.min(n);
                let s: Vec<bool> = (0..a).map(|_| r.gen_bool(0.5)).collect();
                push(&mut kb, nae(&s), pick(&mut r, n, a));
            }
            random_hm(&mut r, kb)
        }
        Family::Clique => {
            clique_to_abd(&random_graph(&mut r, n, p.k.clamp(1, n)))
                .expect("valid graph")
                .0
        }
        Family::Qbf4cnf => {
            let nx = n / 2;
            let q = random_qbf(&mut r, nx, n - nx, p.m.unwrap_or(n));
            qbf_to_abd4cnf(&q).expect("valid qbf").0
        }
        Family::CnfsatLb => {
            let cnf = random_cnf(&mut r, n, 3, p.m.unwrap_or(2 * n), 0.5);
            cnfsat_to_abd_lb(&cnf).expect("valid cnf").0
        }
    }
}
