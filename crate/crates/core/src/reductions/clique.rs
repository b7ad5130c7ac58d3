use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Contract, ReductionError, ReductionReport};
use crate::langlib::Clause;
use crate::model::{AbductionInstance, Var};

/// A graph whose vertices 1..=n carry colors 1..=k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredGraph {
    pub k: usize,
    /// `colors[v - 1]` is the color of vertex v.
    pub colors: Vec<usize>,
    /// Edges (u, v) with u < v.
    pub edges: BTreeSet<(usize, usize)>,
}

impl ColoredGraph {
    pub fn new(
        k: usize,
        colors: Vec<usize>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ReductionError> {
        let n = colors.len();
        if let Some(&c) = colors.iter().find(|&&c| c == 0 || c > k) {
            return Err(ReductionError::Input(format!("color {c} outside 1..={k}")));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v || u == 0 || v == 0 || u > n || v > n {
                return Err(ReductionError::Input(format!("bad edge ({u}, {v})")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self {
            k,
            colors,
            edges: set,
        })
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }
}

/// Brute force over one vertex per color.
pub fn has_colorful_clique(g: &ColoredGraph) -> bool {
    let classes: Vec<Vec<usize>> = (1..=g.k)
        .map(|c| (1..=g.n()).filter(|&v| g.colors[v - 1] == c).collect())
        .collect();
    fn go(g: &ColoredGraph, classes: &[Vec<usize>], chosen: &mut Vec<usize>) -> bool {
        let Some((first, rest)) = classes.split_first() else {
            return true;
        };
        for &v in first {
            if chosen.iter().all(|&u| g.adjacent(u, v)) {
                chosen.push(v);
                if go(g, rest, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    go(g, &classes, &mut Vec::new())
}

/// Multicolored clique to abduction over 2-CNF⁻ ∪ IMP. Vertices are the
/// hypotheses, color i has manifestation n + i entailed by each of its
/// vertices, and non-adjacent vertices exclude each other.
pub fn clique_to_abd(
    g: &ColoredGraph,
) -> Result<(AbductionInstance, ReductionReport), ReductionError> {
    let n = g.n();
    let m = |c: usize| Var::from_index((n + c) as u32);
    let mut clauses: Vec<Clause> = Vec::new();
    for v in 1..=n {
        let x = Var::from_index(v as u32);
        clauses.push(Clause::new([x.negative(), m(g.colors[v - 1]).positive()]).expect("distinct"));
    }
    for u in 1..=n {
        for v in u + 1..=n {
            if !g.adjacent(u, v) {
                let (a, b) = (Var::from_index(u as u32), Var::from_index(v as u32));
                clauses.push(Clause::new([a.negative(), b.negative()]).expect("distinct"));
            }
        }
    }
    let kb = crate::langlib::Cnf::new((n + g.k) as u32, clauses).to_formula();
    let report = ReductionReport::new(
        "clique-to-abd",
        n,
        kb.n(),
        kb.constraints().len(),
        Contract::Cv { constant: g.k },
    );
    let inst = AbductionInstance::new(kb, (1..=n as u32).map(Var::from_index), (1..=g.k).map(m))?;
    Ok((inst, report))
}
