use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{minor, ConstraintLanguage, LangError};
use crate::model::{ones, Constraint, Relation, Var};

/// Proper subset of {0,1}^k.
pub fn is_non_trivial(r: &Relation) -> bool {
    !r.is_full()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparsityCertificate {
    pub c: f64,
    pub r0: usize,
    pub verified_up_to: usize,
}

/// Certifies |R| ≤ c^{ar(R)} for every member of arity ≥ r0, or returns the
/// first violating relation.
pub fn check_sparsity(
    lang: &ConstraintLanguage,
    c: f64,
    r0: usize,
) -> Result<SparsityCertificate, LangError> {
    if !(c > 1.0 && c < 2.0) {
        return Err(LangError::SparsityConstant(c));
    }
    for r in lang.relations() {
        if r.arity() >= r0 && r.len() as f64 > c.powi(r.arity() as i32) {
            return Err(LangError::NotSparse(r.clone()));
        }
    }
    Ok(SparsityCertificate {
        c,
        r0,
        verified_up_to: lang.max_arity(),
    })
}

pub fn is_one_valid(lang: &ConstraintLanguage) -> bool {
    has_constant_polymorphism(lang, true)
}

/// The constant tuple c^k lies in every k-ary member.
pub fn has_constant_polymorphism(lang: &ConstraintLanguage, c: bool) -> bool {
    lang.relations()
        .iter()
        .all(|r| r.contains(if c { r.all_ones() } else { 0 }))
}

pub fn is_complement_invariant(lang: &ConstraintLanguage) -> bool {
    lang.relations().iter().all(|r| {
        let mask = r.all_ones();
        r.tuples().iter().all(|&t| r.contains(t ^ mask))
    })
}

/// R_≠ expressed as an identification of a language relation:
/// R_≠(a, b) ≡ source(z_1..z_k) with z_i = b where pattern_i holds, else a.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityDefinition {
    pub source: Arc<Relation>,
    pub pattern: Vec<bool>,
    pub relation: Relation,
}

impl InequalityDefinition {
    pub fn apply(&self, a: Var, b: Var) -> Constraint {
        let scope = self
            .pattern
            .iter()
            .map(|&p| if p { b } else { a })
            .collect();
        Constraint::new(self.source.clone(), scope).expect("pattern has source arity")
    }
}

/// Finds a relation containing neither constant tuple and identifies its
/// coordinates along one of its tuples, which yields R_≠ when the language is
/// closed under complement.
pub fn derive_inequality(lang: &ConstraintLanguage) -> Result<InequalityDefinition, LangError> {
    if !is_complement_invariant(lang) {
        return Err(LangError::NotComplementInvariant);
    }
    let source = lang
        .relations()
        .iter()
        .find(|r| r.arity() >= 2 && !r.is_empty() && !r.contains(0) && !r.contains(ones(r.arity())))
        .ok_or(LangError::NoConstantFreeRelation)?;
    // Lexicographically least tuple, coordinate 1 most significant.
    let t = *source
        .tuples()
        .iter()
        .min_by_key(|t| t.reverse_bits())
        .expect("non-empty");
    let pattern = crate::model::decode(t, source.arity());
    let g: Vec<usize> = pattern.iter().map(|&p| usize::from(p)).collect();
    let relation = minor(source, &g).expect("tuple is non-constant so both classes are used");
    debug_assert_eq!(relation, *Relation::neq());
    Ok(InequalityDefinition {
        source: source.clone(),
        pattern,
        relation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langlib::{aff, aff_relation, k_cnf_pos, nae, xsat_family};

    #[test]
    fn triviality() {
        assert!(!is_non_trivial(
            &Relation::from_predicate(2, |_| true).unwrap()
        ));
        assert!(is_non_trivial(&Relation::neq()));
        assert!(is_non_trivial(&crate::langlib::one_in(3)));
    }

    #[test]
    fn xsat_sparsity() {
        let l = xsat_family(8);
        assert!(
            matches!(check_sparsity(&l, 1.415, 2), Err(LangError::NotSparse(r)) if r.arity() == 3)
        );
        let cert = check_sparsity(&l, 1.5, 4).unwrap();
        assert_eq!(cert.verified_up_to, 8);
    }

    #[test]
    fn small_sparsity_cases() {
        let bot = ConstraintLanguage::new([Relation::bottom()]);
        assert!(check_sparsity(&bot, 1.01, 1).is_ok());
        assert!(check_sparsity(&aff(4), 1.9, 1).is_ok());
        assert!(matches!(
            check_sparsity(&bot, 2.0, 1),
            Err(LangError::SparsityConstant(_))
        ));
    }

    #[test]
    fn validity_predicates() {
        assert!(is_one_valid(&k_cnf_pos(3)));
        assert!(!is_one_valid(&ConstraintLanguage::new(
            [Relation::bottom()]
        )));
        assert!(is_complement_invariant(&ConstraintLanguage::new([nae(&[
            false, true, false
        ])])));
        assert!(has_constant_polymorphism(
            &ConstraintLanguage::new([Relation::bottom()]),
            false
        ));
    }

    #[test]
    fn inequality_from_nae3() {
        let d = derive_inequality(&ConstraintLanguage::new([nae(&[false, false, false])])).unwrap();
        assert_eq!(d.relation, *Relation::neq());
        assert_eq!(d.pattern, vec![false, false, true]);
    }

    #[test]
    fn inequality_from_itself_and_failure() {
        let d = derive_inequality(&ConstraintLanguage::new([Relation::neq()])).unwrap();
        assert_eq!(d.relation, *Relation::neq());
        let even = ConstraintLanguage::new([aff_relation(2, false)]);
        assert_eq!(
            derive_inequality(&even),
            Err(LangError::NoConstantFreeRelation)
        );
    }
}
