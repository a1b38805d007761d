//! TwinGreedy, TwinGreedyFast and the baselines they are compared against,
//! behind a uniform [`solve`] entry point.
//!
//! Every solver takes a [`ValueOracle`] and an [`IndependenceOracle`] and
//! reports the number of value queries and independence checks it issued
//! (the difference of the oracles' counters across the call).

mod baselines;
mod exact;
mod fast;
mod twin;

use core::fmt;
use core::str::FromStr;

pub use baselines::{classic_greedy, sample_greedy};
pub use exact::{exact_max, Solution, EXACT_LIMIT};
pub use fast::twin_greedy_fast;
pub use twin::twin_greedy;

use crate::constraints::{IndependenceOracle, IndependenceSystem};
use crate::error::{invalid, Error, Result};
use crate::model::{InsertionLog, RunReport, SetFunction, Side, ValueOracle};
use crate::set::ElementSet;

/// The only tie-breaking policy: side 1 before side 2, then the lower id.
pub const TIE_BREAK: &str = "side1-then-lowest-id";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    TwinGreedy,
    TwinGreedyFast,
    SampleGreedy,
    Greedy,
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::TwinGreedy,
        Algorithm::TwinGreedyFast,
        Algorithm::SampleGreedy,
        Algorithm::Greedy,
        Algorithm::Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::TwinGreedy => "twin",
            Algorithm::TwinGreedyFast => "twinfast",
            Algorithm::SampleGreedy => "samplegreedy",
            Algorithm::Greedy => "greedy",
            Algorithm::Exact => "exact",
        }
    }

    pub fn is_randomized(self) -> bool {
        self == Algorithm::SampleGreedy
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                invalid(
                    "algo",
                    alloc::format!(
                        "unknown algorithm {s:?} (twin|twinfast|samplegreedy|greedy|exact)"
                    ),
                )
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverParams {
    /// Threshold decay for TwinGreedyFast, in `(0, 1)`.
    pub epsilon: f64,
    /// SampleGreedy keep probability, in `(0, 1]`.
    pub sample_prob: f64,
    /// SampleGreedy seed.
    pub seed: u64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            epsilon: 0.1,
            sample_prob: 0.5,
            seed: 0,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        check_sample_prob(self.sample_prob)
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(invalid(
            "epsilon",
            alloc::format!("{epsilon} is not in (0, 1)"),
        ))
    }
}

pub(crate) fn check_sample_prob(q: f64) -> Result<()> {
    if q > 0.0 && q <= 1.0 {
        Ok(())
    } else {
        Err(invalid("q", alloc::format!("{q} is not in (0, 1]")))
    }
}

pub(crate) fn check_universe<F: SetFunction, C: IndependenceSystem>(
    f: &ValueOracle<F>,
    ind: &IndependenceOracle<C>,
) -> Result<usize> {
    let n = f.ground_size();
    if ind.ground_size() != n {
        return Err(Error::UniverseMismatch {
            expected: n,
            found: ind.ground_size(),
        });
    }
    Ok(n)
}

/// Runs `algo` with the parameters it uses from `params`.
pub fn solve<F: SetFunction, C: IndependenceSystem>(
    algo: Algorithm,
    f: &ValueOracle<F>,
    ind: &IndependenceOracle<C>,
    params: &SolverParams,
) -> Result<RunReport> {
    match algo {
        Algorithm::TwinGreedy => twin_greedy(f, ind),
        Algorithm::TwinGreedyFast => twin_greedy_fast(f, ind, params.epsilon),
        Algorithm::SampleGreedy => sample_greedy(f, ind, params.sample_prob, params.seed),
        Algorithm::Greedy => classic_greedy(f, ind),
        Algorithm::Exact => {
            let n = check_universe(f, ind)?;
            let queries = f.query_count();
            let checks = ind.check_count();
            let sol = exact_max(f, ind)?;
            let empty = ElementSet::empty(n);
            let f_empty = f.evaluate(&empty);
            let mut log = InsertionLog::new();
            let mut base = ElementSet::empty(n);
            let mut base_value = f_empty;
            for e in sol.set.iter() {
                let g = f.marginal_gain(base_value, &base, e)?;
                log.push(e, Side::First, g, None);
                base.insert(e);
                base_value += g;
            }
            Ok(RunReport::from_twins(
                Algorithm::Exact.name(),
                sol.set,
                sol.value,
                empty,
                f_empty,
                log,
                f.query_count() - queries,
                ind.check_count() - checks,
            )
            .with_param("tie_break", "lexicographically-smallest"))
        }
    }
}
