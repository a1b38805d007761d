use rand::Rng;

use crate::constraints::{IndependenceOracle, IndependenceSystem};
use crate::error::Result;
use crate::generators::{seeded_rng, RNG_ALGORITHM};
use crate::model::{InsertionLog, RunReport, SetFunction, Side, ValueOracle};
use crate::set::ElementSet;

use super::{check_sample_prob, check_universe, Algorithm, TIE_BREAK};

/// Single-set greedy restricted to `candidates`: repeatedly add the feasible
/// candidate of largest positive gain (lowest id on ties).
fn greedy_over<F: SetFunction, C: IndependenceSystem>(
    f: &ValueOracle<F>,
    ind: &IndependenceOracle<C>,
    candidates: &ElementSet,
    f_empty: f64,
) -> Result<(ElementSet, f64, InsertionLog)> {
    let n = candidates.universe();
    let mut set = ElementSet::empty(n);
    let mut value = f_empty;
    let mut tracker = ind.tracker();
    let mut log = InsertionLog::new();
    let mut remaining = candidates.clone();
    loop {
        let mut best: Option<(usize, f64)> = None;
        let mut blocked = alloc::vec::Vec::new();
        for e in remaining.iter() {
            if !tracker.can_add(e) {
                // Infeasible now means infeasible for every superset.
                blocked.push(e);
                continue;
            }
            let g = f.marginal_gain(value, &set, e)?;
            if best.is_none_or(|(_, b)| g > b) {
                best = Some((e, g));
            }
        }
        for e in blocked {
            remaining.remove(e);
        }
        match best {
            Some((e, g)) if g > 0.0 => {
                set.insert(e);
                tracker.insert(e);
                remaining.remove(e);
                value = f.evaluate(&set);
                log.push(e, Side::First, g, None);
            }
            _ => break,
        }
    }
    Ok((set, value, log))
}

fn single_set_report(
    algo: Algorithm,
    set: ElementSet,
    value: f64,
    f_empty: f64,
    log: InsertionLog,
    value_queries: u64,
    independence_checks: u64,
) -> RunReport {
    let n = set.universe();
    RunReport::from_twins(
        algo.name(),
        set,
        value,
        ElementSet::empty(n),
        f_empty,
        log,
        value_queries,
        independence_checks,
    )
    .with_param("tie_break", TIE_BREAK)
}

/// Standard greedy with positive-gain stopping. The solution is `s1`; `s2 = ∅`.
pub fn classic_greedy<F: SetFunction, C: IndependenceSystem>(
    f: &ValueOracle<F>,
    ind: &IndependenceOracle<C>,
) -> Result<RunReport> {
    let n = check_universe(f, ind)?;
    let queries = f.query_count();
    let checks = ind.check_count();
    let f_empty = f.evaluate(&ElementSet::empty(n));
    let (set, value, log) = greedy_over(f, ind, &ElementSet::full(n), f_empty)?;
    Ok(single_set_report(
        Algorithm::Greedy,
        set,
        value,
        f_empty,
        log,
        f.query_count() - queries,
        ind.check_count() - checks,
    ))
}

/// Keeps each element independently with probability `q`, then runs
/// [`classic_greedy`] on the kept elements.
pub fn sample_greedy<F: SetFunction, C: IndependenceSystem>(
    f: &ValueOracle<F>,
    ind: &IndependenceOracle<C>,
    q: f64,
    seed: u64,
) -> Result<RunReport> {
    check_sample_prob(q)?;
    let n = check_universe(f, ind)?;
    let queries = f.query_count();
    let checks = ind.check_count();
    let mut rng = seeded_rng(seed);
    let sample = ElementSet::from_members(n, (0..n).filter(|_| rng.random::<f64>() < q));
    let f_empty = f.evaluate(&ElementSet::empty(n));
    let (set, value, log) = greedy_over(f, ind, &sample, f_empty)?;
    Ok(single_set_report(
        Algorithm::SampleGreedy,
        set,
        value,
        f_empty,
        log,
        f.query_count() - queries,
        ind.check_count() - checks,
    )
    .with_param("q", q)
    .with_param("seed", seed)
    .with_param("rng", RNG_ALGORITHM)
    .with_param("sample_size", sample.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::UniformMatroid;
    use crate::objectives::ModularObjective;
    use alloc::vec;

    #[test]
    fn greedy_modular_is_exact() {
        let f = ValueOracle::new(ModularObjective::new(vec![1.0, 5.0, 3.0, 4.0]));
        let ind = IndependenceOracle::new(UniformMatroid::new(4, 2));
        let r = classic_greedy(&f, &ind).unwrap();
        assert_eq!(r.s1.to_vec(), vec![1, 3]);
        assert_eq!(r.f_star, 9.0);
        assert!(r.s2.is_empty());
    }

    #[test]
    fn greedy_all_negative() {
        let f = ValueOracle::new(ModularObjective::new(vec![-1.0, -0.5]));
        let ind = IndependenceOracle::new(UniformMatroid::new(2, 2));
        assert!(classic_greedy(&f, &ind).unwrap().s_star.is_empty());
    }

    #[test]
    fn sample_all_equals_greedy() {
        let f = ValueOracle::new(ModularObjective::new(vec![2.0, 7.0, 1.0, 4.0, 3.0]));
        let ind = IndependenceOracle::new(UniformMatroid::new(5, 3));
        let g = classic_greedy(&f, &ind).unwrap();
        for seed in 0..5 {
            let s = sample_greedy(&f, &ind, 1.0, seed).unwrap();
            assert_eq!(s.s1, g.s1);
            assert_eq!(s.f_star, g.f_star);
        }
    }

    #[test]
    fn sample_can_be_empty() {
        let f = ValueOracle::new(ModularObjective::new(vec![1.0; 3]));
        let ind = IndependenceOracle::new(UniformMatroid::new(3, 3));
        let empty_seed = (0..1000)
            .find(|&seed| {
                sample_greedy(&f, &ind, 1e-3, seed)
                    .unwrap()
                    .s_star
                    .is_empty()
            })
            .unwrap();
        let r = sample_greedy(&f, &ind, 1e-3, empty_seed).unwrap();
        assert_eq!(r.f_star, 0.0);
        assert!(sample_greedy(&f, &ind, 0.0, 0).is_err());
    }
}
