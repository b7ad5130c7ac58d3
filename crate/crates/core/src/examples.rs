//! Small hand-written instances used by tests, docs and the CLI.

use crate::langlib::{Clause, Cnf};
use crate::model::{v, AbductionInstance};

/// Variable names of [`worked_example`], index 1 first.
pub const WORKED_EXAMPLE_NAMES: [&str; 5] = ["A", "B", "C", "D", "E"];

/// KB = {A ∧ B → C, D → B, ¬E → C ∧ ¬D}, H = {A, D, E}, M = {C}.
///
/// Variables: A=1, B=2, C=3, D=4, E=5. The clauses are (¬A ∨ ¬B ∨ C),
/// (¬D ∨ B), (E ∨ C) and (E ∨ ¬D).
pub fn worked_example() -> AbductionInstance {
    let clauses = [&[-1i64, -2, 3][..], &[-4, 2], &[5, 3], &[5, -4]]
        .iter()
        .map(|c| Clause::from_dimacs(c).expect("no tautologies"))
        .collect();
    let kb = Cnf::new(5, clauses).to_formula();
    AbductionInstance::new(kb, [v(1), v(4), v(5)], [v(3)]).expect("variables in range")
}
