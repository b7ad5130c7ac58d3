use super::stream::StreamOrder;
use super::{enumerate, ModelStream};
use crate::model::{Formula, Var};

/// Materializes `stream` and re-emits it by non-increasing w_H. Ties keep the
/// order of the input stream.
pub fn order_by_weight(stream: ModelStream, h: &[Var]) -> ModelStream {
    let (mut models, stats) = stream.collect_all();
    models.sort_by_key(|m| std::cmp::Reverse(m.weight(h)));
    ModelStream::from_models(models, stats, StreamOrder::WeightDescending(h.to_vec()))
}

/// All models of `formula` sorted by the number of true hypotheses, largest first.
pub fn enumerate_weight_ordered(formula: &Formula, h: &[Var]) -> ModelStream {
    order_by_weight(enumerate(formula), h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langlib::clause_relation;
    use crate::model::v;

    #[test]
    fn weights_never_increase() {
        // x1 ∨ ¬x2 has models 00, 10, 11.
        let mut f = Formula::empty(2);
        f.add(clause_relation(&[true, false]), &[1, 2]).unwrap();
        let h = [v(1), v(2)];
        let w: Vec<usize> = enumerate_weight_ordered(&f, &h)
            .map(|m| m.weight(&h))
            .collect();
        assert_eq!(w, vec![2, 1, 0]);
    }

    #[test]
    fn empty_model_set() {
        let mut f = Formula::empty(1);
        f.add(crate::model::Relation::falsum(), &[]).unwrap();
        assert_eq!(enumerate_weight_ordered(&f, &[v(1)]).count(), 0);
    }
}
