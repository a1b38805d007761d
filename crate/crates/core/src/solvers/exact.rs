use alloc::format;

use crate::constraints::{IndependenceOracle, IndependenceSystem};
use crate::error::{invalid, Result};
use crate::model::{SetFunction, ValueOracle};
use crate::set::ElementSet;

use super::check_universe;

/// Largest ground set [`exact_max`] accepts.
pub const EXACT_LIMIT: usize = 20;

/// An optimal independent set.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub set: ElementSet,
    pub value: f64,
    pub value_queries: u64,
}

/// Brute-force maximum of `f` over the independent sets.
///
/// Depth-first enumeration in lexicographic order, extending only by larger
/// ids and pruning a branch as soon as it becomes dependent (sound because
/// independence systems are hereditary). A later set replaces the incumbent
/// only when strictly better, so the result is the lexicographically
/// smallest optimum.
pub fn exact_max<F: SetFunction, C: IndependenceSystem>(
    f: &ValueOracle<F>,
    ind: &IndependenceOracle<C>,
) -> Result<Solution> {
    let n = check_universe(f, ind)?;
    if n > EXACT_LIMIT {
        return Err(invalid(
            "n",
            format!("exhaustive search supports at most {EXACT_LIMIT} elements, got {n}"),
        ));
    }
    let queries = f.query_count();
    let mut current = ElementSet::empty(n);
    let mut best = Solution {
        value: f.evaluate(&current),
        set: current.clone(),
        value_queries: 0,
    };
    descend(f, ind, &mut current, 0, &mut best)?;
    best.value_queries = f.query_count() - queries;
    Ok(best)
}

fn descend<F: SetFunction, C: IndependenceSystem>(
    f: &ValueOracle<F>,
    ind: &IndependenceOracle<C>,
    current: &mut ElementSet,
    from: usize,
    best: &mut Solution,
) -> Result<()> {
    for e in from..current.universe() {
        current.insert(e);
        if ind.is_independent(current)? {
            let value = f.evaluate(current);
            if value > best.value {
                best.value = value;
                best.set = current.clone();
            }
            descend(f, ind, current, e + 1, best)?;
        }
        current.remove(e);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::UniformMatroid;
    use crate::objectives::ModularObjective;
    use alloc::vec;

    #[test]
    fn modular_top_two() {
        let f = ValueOracle::new(ModularObjective::new(vec![3.0, 2.0, 1.0]));
        let ind = IndependenceOracle::new(UniformMatroid::new(3, 2));
        let s = exact_max(&f, &ind).unwrap();
        assert_eq!(s.set.to_vec(), vec![0, 1]);
        assert_eq!(s.value, 5.0);
        // ∅ plus the 6 nonempty sets of size <= 2.
        assert_eq!(s.value_queries, 7);
    }

    #[test]
    fn empty_when_everything_hurts() {
        let f = ValueOracle::new(ModularObjective::new(vec![-3.0, -2.0]));
        let ind = IndependenceOracle::new(UniformMatroid::new(2, 2));
        let s = exact_max(&f, &ind).unwrap();
        assert!(s.set.is_empty());
        assert_eq!(s.value, 0.0);
    }

    #[test]
    fn smallest_optimum_on_ties() {
        let f = ValueOracle::new(ModularObjective::new(vec![1.0, 1.0, 1.0]));
        let ind = IndependenceOracle::new(UniformMatroid::new(3, 2));
        assert_eq!(exact_max(&f, &ind).unwrap().set.to_vec(), vec![0, 1]);
    }

    #[test]
    fn rejects_large_ground_sets() {
        let f = ValueOracle::new(ModularObjective::new(vec![1.0; 21]));
        let ind = IndependenceOracle::new(UniformMatroid::new(21, 2));
        assert!(exact_max(&f, &ind).is_err());
    }
}
