use std::sync::{Arc, OnceLock};

use super::{clause_relation, ConstraintLanguage, LangError, Schema};
use crate::model::Relation;

/// R_S = {t : |t| ∈ S}, where |t| counts ones.
pub fn r_s(k: usize, s: &[usize]) -> Relation {
    Relation::from_predicate(k, |t| s.contains(&(t.count_ones() as usize))).expect("arity in range")
}

/// R_{1/k}: exactly one coordinate is 1.
pub fn one_in(k: usize) -> Arc<Relation> {
    Arc::new(r_s(k, &[1]).with_name(format!("X{k}")))
}

/// ⊥^k = {(0,…,0)}.
pub fn bottom_k(k: usize) -> Arc<Relation> {
    Arc::new(
        Relation::new(k, [0])
            .expect("arity in range")
            .with_name(format!("Z{k}")),
    )
}

/// x_1 + … + x_k ≡ q (mod p). Requires 2 ≤ p ≤ k+1 and q ≤ k+1.
pub fn equations(k: usize, p: usize, q: usize) -> Result<Arc<Relation>, LangError> {
    if k == 0 || p < 2 || p > k + 1 || q > k + 1 {
        return Err(LangError::Parameters(format!(
            "equations(k={k}, p={p}, q={q})"
        )));
    }
    let s: Vec<usize> = (0..=k).filter(|i| i % p == q % p).collect();
    Ok(Arc::new(
        r_s(k, &s).with_name(format!("EQ{k}_{p}_{}", q % p)),
    ))
}

/// Every equation relation of arity ≤ k with modulus ≤ `p_max`.
pub fn equations_language(k: usize, p_max: usize) -> ConstraintLanguage {
    let mut rels = Vec::new();
    for a in 1..=k {
        for p in 2..=p_max.min(a + 1) {
            for q in 0..p {
                rels.push(equations(a, p, q).expect("parameters in range"));
            }
        }
    }
    ConstraintLanguage::new(rels).with_schema(Schema::Equations, k)
}

/// x_1 + … + x_k ≡ b (mod 2).
pub fn aff_relation(k: usize, b: bool) -> Arc<Relation> {
    let r = Relation::from_predicate(k, |t| t.count_ones() % 2 == u32::from(b))
        .expect("arity in range");
    Arc::new(r.with_name(format!("XOR{k}_{}", u8::from(b))))
}

/// AFF^{≤k}: parity constraints of arity 1..=k.
pub fn aff(k: usize) -> ConstraintLanguage {
    let rels = (1..=k).flat_map(|a| [aff_relation(a, false), aff_relation(a, true)]);
    ConstraintLanguage::new(rels).with_schema(Schema::Aff, k)
}

/// XSAT up to arity k: R_{1/j} and ⊥^j for j ≤ k.
pub fn xsat_family(k: usize) -> ConstraintLanguage {
    let rels = (1..=k).flat_map(|j| [one_in(j), bottom_k(j)]);
    ConstraintLanguage::new(rels).with_schema(Schema::Xsat, k)
}

/// R^s_NAE = {0,1}^k ∖ {s, s̄}.
pub fn nae(s: &[bool]) -> Arc<Relation> {
    let k = s.len();
    let zero_s = crate::model::encode(s);
    let one_s = zero_s ^ crate::model::ones(k);
    let name: String = s.iter().map(|&b| if b { '1' } else { '0' }).collect();
    let r = Relation::from_predicate(k, |t| t != zero_s && t != one_s).expect("arity in range");
    Arc::new(r.with_name(format!("NAE_{name}")))
}

/// All NAE relations of arity `k` over every sign pattern.
pub fn nae_language(k: usize) -> ConstraintLanguage {
    let rels = (0..1u64 << k).map(|s| nae(&crate::model::decode(s, k)));
    ConstraintLanguage::new(rels).with_schema(Schema::Nae, k)
}

/// {(0,0),(0,1),(1,1)}: x → y.
pub fn imp_relation() -> Arc<Relation> {
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

pub fn imp() -> ConstraintLanguage {
    ConstraintLanguage::new([imp_relation()]).with_schema(Schema::Imp, 2)
}

fn clauses_where(k: usize, keep: impl Fn(&[bool]) -> bool) -> Vec<Arc<Relation>> {
    let mut out = Vec::new();
    for a in 1..=k {
        for s in 0..1u64 << a {
            let signs = crate::model::decode(s, a);
            if keep(&signs) {
                out.push(clause_relation(&signs));
            }
        }
    }
    out
}

/// Clauses of width 1..=k with any signs.
pub fn k_cnf(k: usize) -> ConstraintLanguage {
    ConstraintLanguage::new(clauses_where(k, |_| true)).with_schema(Schema::KCnf, k)
}

pub fn k_cnf_pos(k: usize) -> ConstraintLanguage {
    ConstraintLanguage::new(clauses_where(k, |s| s.iter().all(|&b| b)))
        .with_schema(Schema::KCnfPos, k)
}

pub fn k_cnf_neg(k: usize) -> ConstraintLanguage {
    ConstraintLanguage::new(clauses_where(k, |s| s.iter().all(|&b| !b)))
        .with_schema(Schema::KCnfNeg, k)
}

/// At most one positive literal per clause.
pub fn horn(k: usize) -> ConstraintLanguage {
    ConstraintLanguage::new(clauses_where(k, |s| s.iter().filter(|&&b| b).count() <= 1))
        .with_schema(Schema::Horn, k)
}

/// At most one negative literal per clause.
pub fn dual_horn(k: usize) -> ConstraintLanguage {
    ConstraintLanguage::new(clauses_where(k, |s| s.iter().filter(|&&b| !b).count() <= 1))
        .with_schema(Schema::DualHorn, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactly_one_of_three() {
        let r = equations(3, 4, 1).unwrap();
        assert_eq!(r.tuples(), &[0b001, 0b010, 0b100]);
        assert_eq!(*r, *one_in(3));
    }

    #[test]
    fn even_parity_pair() {
        assert_eq!(aff_relation(2, false).tuples(), &[0b00, 0b11]);
    }

    #[test]
    fn nae_all_zero_pattern() {
        let r = nae(&[false, false, false]);
        assert_eq!(r.len(), 6);
        assert!(!r.contains(0) && !r.contains(0b111));
    }

    #[test]
    fn equation_parameters_checked() {
        assert!(equations(3, 1, 0).is_err());
        assert!(equations(3, 5, 0).is_err());
        assert!(equations(2, 3, 0).is_ok());
    }

    #[test]
    fn family_sizes() {
        assert_eq!(k_cnf(2).len(), 2 + 4);
        assert_eq!(k_cnf_pos(3).len(), 3);
        assert_eq!(horn(2).len(), 2 + 3);
        assert_eq!(aff(3).len(), 6);
    }
}
