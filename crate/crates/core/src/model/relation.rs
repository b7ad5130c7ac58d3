use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use super::ModelError;

/// Largest arity a materialized relation may have. Tuples are packed into a `u64`.
pub const MAX_ARITY: usize = 32;

/// A Boolean relation given by the explicit list of its tuples.
///
/// Tuples are bit-encoded: coordinate `i` (0-based) of a tuple is bit `i` of
/// the encoding. The tuple list is kept sorted and duplicate-free, so two
/// relations are equal exactly when arity and tuple sets agree. The optional
/// name is a label only and takes no part in equality or hashing.
#[derive(Clone)]
pub struct Relation {
    arity: usize,
    tuples: Vec<u64>,
    name: Option<String>,
}

impl Relation {
    pub fn new(arity: usize, tuples: impl IntoIterator<Item = u64>) -> Result<Self, ModelError> {
        if arity > MAX_ARITY {
            return Err(ModelError::ArityTooLarge(arity));
        }
        let limit = 1u64 << arity;
        let mut tuples: Vec<u64> = tuples.into_iter().collect();
        if let Some(&bad) = tuples.iter().find(|&&t| t >= limit) {
            return Err(ModelError::TupleOutOfRange { arity, tuple: bad });
        }
        tuples.sort_unstable();
        tuples.dedup();
        Ok(Self {
            arity,
            tuples,
            name: None,
        })
    }

    /// Builds a relation from bit-vectors, one `Vec<bool>` per tuple.
    pub fn from_rows(arity: usize, rows: &[Vec<bool>]) -> Result<Self, ModelError> {
        let mut tuples = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != arity {
                return Err(ModelError::TupleLength {
                    expected: arity,
                    found: row.len(),
                });
            }
            tuples.push(encode(row));
        }
        Self::new(arity, tuples)
    }

    /// Relation containing every tuple accepted by `pred`.
    pub fn from_predicate(arity: usize, pred: impl Fn(u64) -> bool) -> Result<Self, ModelError> {
        if arity > MAX_ARITY {
            return Err(ModelError::ArityTooLarge(arity));
        }
        Ok(Self {
            arity,
            tuples: (0..1u64 << arity).filter(|&t| pred(t)).collect(),
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn without_name(mut self) -> Self {
        self.name = None;
        self
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuples(&self) -> &[u64] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn contains(&self, tuple: u64) -> bool {
        self.tuples.binary_search(&tuple).is_ok()
    }

    pub fn contains_row(&self, row: &[bool]) -> bool {
        row.len() == self.arity && self.contains(encode(row))
    }

    /// `true` when the relation is all of `{0,1}^k`.
    pub fn is_full(&self) -> bool {
        self.tuples.len() as u128 == 1u128 << self.arity
    }

    pub fn all_ones(&self) -> u64 {
        ones(self.arity)
    }

    /// Relation of the same arity holding the complement of every tuple.
    pub fn complemented_tuples(&self) -> Vec<u64> {
        let mask = self.all_ones();
        self.tuples.iter().map(|t| t ^ mask).collect()
    }

    /// Rows as bit-vectors in canonical order.
    pub fn rows(&self) -> impl Iterator<Item = Vec<bool>> + '_ {
        self.tuples.iter().map(move |&t| decode(t, self.arity))
    }

    /// f, the empty nullary relation.
    pub fn falsum() -> Arc<Relation> {
        static R: OnceLock<Arc<Relation>> = OnceLock::new();
        R.get_or_init(|| {
            Arc::new(Relation {
                arity: 0,
                tuples: vec![],
                name: Some("F".into()),
            })
        })
        .clone()
    }

    /// t = {()}.
    pub fn verum() -> Arc<Relation> {
        static R: OnceLock<Arc<Relation>> = OnceLock::new();
        R.get_or_init(|| {
            Arc::new(Relation {
                arity: 0,
                tuples: vec![0],
                name: Some("T".into()),
            })
        })
        .clone()
    }

    /// ⊥ = {(0)}.
    pub fn bottom() -> Arc<Relation> {
        static R: OnceLock<Arc<Relation>> = OnceLock::new();
        R.get_or_init(|| {
            Arc::new(Relation {
                arity: 1,
                tuples: vec![0],
                name: Some("BOT".into()),
            })
        })
        .clone()
    }

    /// ⊤ = {(1)}.
    pub fn top() -> Arc<Relation> {
        static R: OnceLock<Arc<Relation>> = OnceLock::new();
        R.get_or_init(|| {
            Arc::new(Relation {
                arity: 1,
                tuples: vec![1],
                name: Some("TOP".into()),
            })
        })
        .clone()
    }

    /// R_≠ = {(0,1),(1,0)}.
    pub fn neq() -> Arc<Relation> {
        static R: OnceLock<Arc<Relation>> = OnceLock::new();
        R.get_or_init(|| {
            Arc::new(Relation {
                arity: 2,
                tuples: vec![0b01, 0b10],
                name: Some("NEQ".into()),
            })
        })
        .clone()
    }

    pub fn is_bottom(&self) -> bool {
        self.arity == 1 && self.tuples == [0]
    }

    pub fn is_top(&self) -> bool {
        self.arity == 1 && self.tuples == [1]
    }

    /// Tuple rendered as a bit string, coordinate 1 first.
    pub fn tuple_string(tuple: u64, arity: usize) -> String {
        (0..arity)
            .map(|i| if tuple >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.tuples == other.tuples
    }
}

impl Eq for Relation {}

impl Hash for Relation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.arity.hash(state);
        self.tuples.hash(state);
    }
}

impl PartialOrd for Relation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Relation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.arity, &self.tuples).cmp(&(other.arity, &other.tuples))
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .tuples
            .iter()
            .map(|&t| Relation::tuple_string(t, self.arity))
            .collect();
        match &self.name {
            Some(n) => write!(f, "{n}/{}{{{}}}", self.arity, rows.join(",")),
            None => write!(f, "R/{}{{{}}}", self.arity, rows.join(",")),
        }
    }
}

pub fn encode(row: &[bool]) -> u64 {
    row.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
}

pub fn decode(tuple: u64, arity: usize) -> Vec<bool> {
    (0..arity).map(|i| tuple >> i & 1 == 1).collect()
}

pub fn ones(arity: usize) -> u64 {
    if arity >= 64 {
        u64::MAX
    } else {
        (1u64 << arity) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_dedup() {
        let r = Relation::new(2, [2, 1, 2]).unwrap();
        assert_eq!(r.tuples(), &[1, 2]);
        assert_eq!(r, *Relation::neq());
    }

    #[test]
    fn names_do_not_affect_equality() {
        let a = Relation::new(1, [0]).unwrap().with_name("x");
        assert_eq!(a, *Relation::bottom());
    }

    #[test]
    fn rejects_out_of_range_tuples() {
        assert!(matches!(
            Relation::new(2, [4]),
            Err(ModelError::TupleOutOfRange { .. })
        ));
        assert!(matches!(
            Relation::from_rows(2, &[vec![true]]),
            Err(ModelError::TupleLength {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn nullary_constants() {
        assert!(Relation::falsum().is_empty());
        assert!(Relation::verum().is_full());
        assert_eq!(Relation::falsum().arity(), 0);
    }

    #[test]
    fn tuple_strings_put_first_coordinate_first() {
        assert_eq!(Relation::tuple_string(0b01, 2), "10");
        assert_eq!(encode(&[true, false]), 0b01);
    }
}
