use super::{Contract, ReductionError, ReductionReport};
use crate::langlib::{Clause, Cnf};
use crate::model::{AbductionInstance, Var};

/// CNF satisfiability to positive abduction over CNF⁻ ∪ IMP.
///
/// Variable x gets a complement x′ and a manifestation m_x, numbered n + x
/// and 2n + x. Positive literals x are rewritten as ¬x′, and (¬x ∨ ¬x′),
/// (x → m_x), (x′ → m_x) force an explanation to pick exactly one of x, x′.
pub fn cnfsat_to_abd_lb(phi: &Cnf) -> Result<(AbductionInstance, ReductionReport), ReductionError> {
    let n = phi.num_vars;
    let xp = |x: Var| Var::from_index(x.index() + n);
    let mx = |x: Var| Var::from_index(x.index() + 2 * n);
    let mut clauses: Vec<Clause> = Vec::new();
    for c in &phi.clauses {
        let lits = c
            .lits()
            .iter()
            .map(|l| if l.positive { xp(l.var).negative() } else { *l });
        // x and ¬x together turn into ¬x′ ∨ ¬x, which is no tautology.
        clauses.push(Clause::new(lits).expect("all literals negative"));
    }
    for i in 1..=n {
        let x = Var::from_index(i);
        clauses.push(Clause::new([x.negative(), xp(x).negative()]).expect("distinct"));
        clauses.push(Clause::new([x.negative(), mx(x).positive()]).expect("distinct"));
        clauses.push(Clause::new([xp(x).negative(), mx(x).positive()]).expect("distinct"));
    }
    let out = Cnf::new(3 * n, clauses);
    let kb = out.to_formula();
    let report = ReductionReport::new(
        "cnfsat-to-abd-lb",
        n as usize,
        kb.n(),
        kb.constraints().len(),
        Contract::Lv {
            factor: 3,
            constant: 0,
        },
    );
    let vars = (1..=n).map(Var::from_index);
    let inst = AbductionInstance::new(kb, vars.clone().flat_map(|x| [x, xp(x)]), vars.map(mx))?;
    Ok((inst, report))
}
