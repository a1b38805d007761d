use crate::constraints::{IndependenceOracle, IndependenceSystem};
use crate::error::Result;
use crate::model::{RunReport, SetFunction, Side, ThresholdTrace, ValueOracle};

use super::twin::Twins;
use super::{check_epsilon, check_universe, Algorithm};

/// Threshold-decreasing variant of [`super::twin_greedy`].
///
/// Starts at `τ_max = max f({e})` over feasible singletons and divides `τ` by
/// `1 + ε` after every pass while `τ > ε·τ_max / (r(1+ε))`, where `r` is the
/// constraint's [`rank_bound`](IndependenceSystem::rank_bound). A pass scans
/// unselected elements in ascending id order and inserts `e` into the side
/// with the larger feasible gain when that gain is at least `τ`.
pub fn twin_greedy_fast<F: SetFunction, C: IndependenceSystem>(
    f: &ValueOracle<F>,
    ind: &IndependenceOracle<C>,
    epsilon: f64,
) -> Result<RunReport> {
    check_epsilon(epsilon)?;
    let n = check_universe(f, ind)?;
    let queries = f.query_count();
    let checks = ind.check_count();
    let mut twins = Twins::new(f, ind, n);

    // Both sides are still empty, so side 1 answers the singleton queries.
    let mut tau_max = f64::NEG_INFINITY;
    for e in 0..n {
        let single = twins.feasible_gain(Side::First, e)?;
        tau_max = tau_max.max(twins.value(Side::First) + single);
    }

    let rank_bound = ind.rank_bound().max(1);
    let mut trace = ThresholdTrace {
        epsilon,
        tau_max,
        tau_min: tau_max,
        rank_bound,
        passes: 0,
    };
    if tau_max > 0.0 {
        let tau_stop = epsilon * tau_max / (rank_bound as f64 * (1.0 + epsilon));
        let mut tau = tau_max;
        while tau > tau_stop {
            trace.passes += 1;
            trace.tau_min = tau;
            for e in 0..n {
                if twins.selected.contains(e) {
                    continue;
                }
                let first = twins.feasible_gain(Side::First, e)?;
                let second = twins.feasible_gain(Side::Second, e)?;
                let (side, gain) = if first >= second {
                    (Side::First, first)
                } else {
                    (Side::Second, second)
                };
                if gain >= tau {
                    twins.insert(side, e, gain, Some(tau));
                }
            }
            tau /= 1.0 + epsilon;
        }
    }
    let report = twins
        .finish(
            Algorithm::TwinGreedyFast,
            f.query_count() - queries,
            ind.check_count() - checks,
        )
        .with_param("epsilon", epsilon)
        .with_param("rank_bound", rank_bound);
    Ok(RunReport {
        thresholds: Some(trace),
        ..report
    })
}
