use std::sync::Arc;

use super::EnumStats;
use crate::langlib::minor;
use crate::model::{Assignment, Constraint, Formula, PartialAssignment, Relation, Var};

/// Declared emission order of a stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StreamOrder {
    Unordered,
    /// Non-increasing number of true variables among the given set.
    WeightDescending(Vec<Var>),
}

pub trait ModelSource: Send {
    fn next_model(&mut self) -> Option<Assignment>;
    fn stats(&self) -> EnumStats;
}

/// Pull-based model generator with live statistics.
pub struct ModelStream {
    source: Box<dyn ModelSource>,
    order: StreamOrder,
}

impl ModelStream {
    pub fn new(source: impl ModelSource + 'static, order: StreamOrder) -> Self {
        Self {
            source: Box::new(source),
            order,
        }
    }

    pub fn from_models(models: Vec<Assignment>, stats: EnumStats, order: StreamOrder) -> Self {
        Self::new(
            VecSource {
                models: models.into_iter(),
                stats,
            },
            order,
        )
    }

    pub fn stats(&self) -> EnumStats {
        self.source.stats()
    }

    pub fn order(&self) -> &StreamOrder {
        &self.order
    }

    /// Drains the stream, returning the models and the final statistics.
    pub fn collect_all(mut self) -> (Vec<Assignment>, EnumStats) {
        let mut out = Vec::new();
        while let Some(m) = self.source.next_model() {
            out.push(m);
        }
        let stats = self.source.stats();
        (out, stats)
    }
}

impl Iterator for ModelStream {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        self.source.next_model()
    }
}

struct VecSource {
    models: std::vec::IntoIter<Assignment>,
    stats: EnumStats,
}

impl ModelSource for VecSource {
    fn next_model(&mut self) -> Option<Assignment> {
        self.models.next()
    }

    fn stats(&self) -> EnumStats {
        self.stats
    }
}

/// A constraint over pairwise distinct variables.
#[derive(Clone, Debug)]
pub(crate) struct Norm {
    pub rel: Arc<Relation>,
    pub scope: Vec<Var>,
}

impl Norm {
    /// Substitutes the assigned scope variables. Returns the unassigned scope
    /// positions and the projected tuples over them.
    pub fn residual(&self, pa: &PartialAssignment) -> (Vec<usize>, Vec<u64>) {
        let mut mask = 0u64;
        let mut want = 0u64;
        let mut free = Vec::new();
        for (i, x) in self.scope.iter().enumerate() {
            match pa.get(*x) {
                Some(b) => {
                    mask |= 1 << i;
                    want |= u64::from(b) << i;
                }
                None => free.push(i),
            }
        }
        let tuples = self
            .rel
            .tuples()
            .iter()
            .filter(|&&t| t & mask == want)
            .map(|&t| {
                free.iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, &i)| acc | ((t >> i & 1) << j))
            })
            .collect();
        (free, tuples)
    }
}

/// Normalized constraint list. `infeasible` is set when some constraint has
/// an empty relation.
pub(crate) struct Normalized {
    pub constraints: Vec<Norm>,
    pub infeasible: bool,
}

/// Rewrites a constraint over pairwise distinct variables through its
/// identification minor.
pub(crate) fn collapse(c: &Constraint) -> Norm {
    let mut distinct: Vec<Var> = Vec::new();
    let g: Vec<usize> = c
        .scope
        .iter()
        .map(|x| match distinct.iter().position(|y| y == x) {
            Some(p) => p,
            None => {
                distinct.push(*x);
                distinct.len() - 1
            }
        })
        .collect();
    let rel = if distinct.len() == c.scope.len() {
        c.relation.clone()
    } else {
        Arc::new(minor(&c.relation, &g).expect("first-occurrence map is onto"))
    };
    Norm {
        rel,
        scope: distinct,
    }
}

/// Collapses every constraint, drops full relations and records empty ones.
pub(crate) fn normalize(formula: &Formula) -> Normalized {
    let mut constraints = Vec::new();
    let mut infeasible = false;
    for c in formula.constraints() {
        let n = collapse(c);
        if n.rel.is_empty() {
            infeasible = true;
        }
        if !n.rel.is_full() {
            constraints.push(n);
        }
    }
    Normalized {
        constraints,
        infeasible,
    }
}

pub(crate) struct Trail {
    pub pa: PartialAssignment,
    order: Vec<Var>,
}

impl Trail {
    pub fn new(n: usize) -> Self {
        Self {
            pa: PartialAssignment::new(n),
            order: Vec::new(),
        }
    }

    /// `false` if `x` already holds the other value.
    pub fn assign(&mut self, x: Var, b: bool) -> bool {
        match self.pa.get(x) {
            Some(v) => v == b,
            None => {
                self.pa.set(x, b);
                self.order.push(x);
                true
            }
        }
    }

    pub fn mark(&self) -> usize {
        self.order.len()
    }

    pub fn undo_to(&mut self, mark: usize) {
        while self.order.len() > mark {
            let x = self.order.pop().expect("non-empty trail");
            self.pa.unset(x);
        }
    }
}

pub(crate) type Branch = Vec<(Var, bool)>;

pub(crate) trait Strategy: Send {
    /// Simplifies at the current node. `false` signals a conflict.
    fn propagate(&mut self, trail: &mut Trail) -> bool;
    /// Branches to open at the current node, or `None` at a leaf. An empty
    /// list is a dead end.
    fn branches(&mut self, trail: &Trail) -> Option<Vec<Branch>>;
}

struct Frame {
    mark: usize,
    branches: Vec<Branch>,
    next: usize,
}

struct Expansion {
    base: Assignment,
    free: Vec<Var>,
    next: u64,
    total: u64,
}

/// Explicit-stack depth-first search shared by the engines.
pub(crate) struct Search<S: Strategy> {
    strategy: S,
    trail: Trail,
    stack: Vec<Frame>,
    pending: Option<Expansion>,
    started: bool,
    done: bool,
    stats: EnumStats,
}

impl<S: Strategy> Search<S> {
    pub fn new(strategy: S, n: usize, infeasible: bool) -> Self {
        let mut s = Self {
            strategy,
            trail: Trail::new(n),
            stack: Vec::new(),
            pending: None,
            started: false,
            done: false,
            stats: EnumStats::default(),
        };
        if infeasible {
            s.started = true;
            s.done = true;
            s.stats.leaves = 1;
        }
        s
    }

    fn enter(&mut self) {
        self.stats.reach(self.stack.len());
        if !self.strategy.propagate(&mut self.trail) {
            self.stats.leaves += 1;
            return;
        }
        match self.strategy.branches(&self.trail) {
            None => {
                self.stats.leaves += 1;
                let free: Vec<Var> = self.trail.pa.unassigned().collect();
                assert!(
                    free.len() < 64,
                    "too many unconstrained variables to expand"
                );
                self.pending = Some(Expansion {
                    base: self.trail.pa.complete(false),
                    total: 1u64 << free.len(),
                    free,
                    next: 0,
                });
            }
            Some(b) if b.is_empty() => self.stats.leaves += 1,
            Some(b) => {
                self.stats.branch_nodes += 1;
                self.stack.push(Frame {
                    mark: self.trail.mark(),
                    branches: b,
                    next: 0,
                });
            }
        }
    }
}

impl<S: Strategy> ModelSource for Search<S> {
    fn next_model(&mut self) -> Option<Assignment> {
        loop {
            if let Some(e) = &mut self.pending {
                if e.next < e.total {
                    let mut a = e.base.clone();
                    for (i, x) in e.free.iter().enumerate() {
                        a.set(*x, e.next >> i & 1 == 1);
                    }
                    e.next += 1;
                    self.stats.models_emitted += 1;
                    return Some(a);
                }
                self.pending = None;
            }
            if self.done {
                return None;
            }
            if !self.started {
                self.started = true;
                self.enter();
                continue;
            }
            let Some(top) = self.stack.last_mut() else {
                self.done = true;
                continue;
            };
            if top.next == top.branches.len() {
                self.stack.pop();
                continue;
            }
            let branch = std::mem::take(&mut top.branches[top.next]);
            top.next += 1;
            let mark = top.mark;
            self.trail.undo_to(mark);
            if branch.iter().all(|&(x, b)| self.trail.assign(x, b)) {
                self.enter();
            } else {
                self.stats.reach(self.stack.len());
                self.stats.leaves += 1;
            }
        }
    }

    fn stats(&self) -> EnumStats {
        self.stats
    }
}
