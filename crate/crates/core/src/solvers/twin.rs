use crate::constraints::{CountedTracker, IndependenceOracle, IndependenceSystem};
use crate::error::Result;
use crate::model::{InsertionLog, RunReport, SetFunction, Side, ValueOracle};
use crate::set::ElementSet;

use super::{check_universe, Algorithm, TIE_BREAK};

/// The two disjoint growing solutions with cached values and feasibility state.
pub(super) struct Twins<'a, F> {
    f: &'a ValueOracle<F>,
    sets: [ElementSet; 2],
    values: [f64; 2],
    trackers: [CountedTracker<'a>; 2],
    pub(super) selected: ElementSet,
    pub(super) log: InsertionLog,
}

fn index(side: Side) -> usize {
    match side {
        Side::First => 0,
        Side::Second => 1,
    }
}

impl<'a, F: SetFunction> Twins<'a, F> {
    /// Both sides start at `∅`; `f(∅)` is evaluated once and shared.
    pub(super) fn new<C: IndependenceSystem>(
        f: &'a ValueOracle<F>,
        ind: &'a IndependenceOracle<C>,
        n: usize,
    ) -> Self {
        let empty = ElementSet::empty(n);
        let f_empty = f.evaluate(&empty);
        Twins {
            f,
            sets: [empty.clone(), empty.clone()],
            values: [f_empty, f_empty],
            trackers: [ind.tracker(), ind.tracker()],
            selected: empty,
            log: InsertionLog::new(),
        }
    }

    pub(super) fn value(&self, side: Side) -> f64 {
        self.values[index(side)]
    }

    pub(super) fn can_add(&self, side: Side, e: usize) -> bool {
        self.trackers[index(side)].can_add(e)
    }

    /// `f(e | S_side)` (one query).
    pub(super) fn gain(&self, side: Side, e: usize) -> Result<f64> {
        let i = index(side);
        self.f.marginal_gain(self.values[i], &self.sets[i], e)
    }

    /// `f(e | S_side)` when `S_side ∪ {e}` is independent, `-∞` otherwise
    /// (no value query in that case).
    pub(super) fn feasible_gain(&self, side: Side, e: usize) -> Result<f64> {
        if self.can_add(side, e) {
            self.gain(side, e)
        } else {
            Ok(f64::NEG_INFINITY)
        }
    }

    /// Adds `e` to `S_side` and re-evaluates `f(S_side)`.
    pub(super) fn insert(&mut self, side: Side, e: usize, gain: f64, threshold: Option<f64>) {
        let i = index(side);
        self.sets[i].insert(e);
        self.trackers[i].insert(e);
        self.selected.insert(e);
        self.values[i] = self.f.evaluate(&self.sets[i]);
        self.log.push(e, side, gain, threshold);
    }

    pub(super) fn finish(
        self,
        algo: Algorithm,
        value_queries: u64,
        independence_checks: u64,
    ) -> RunReport {
        let [s1, s2] = self.sets;
        RunReport::from_twins(
            algo.name(),
            s1,
            self.values[0],
            s2,
            self.values[1],
            self.log,
            value_queries,
            independence_checks,
        )
        .with_param("tie_break", TIE_BREAK)
    }
}

/// Simultaneous greedy: each round adds the feasible (side, element) pair of
/// largest marginal gain, stopping when no pair is feasible or the best gain
/// is not positive. Returns the better of the two sets.
pub fn twin_greedy<F: SetFunction, C: IndependenceSystem>(
    f: &ValueOracle<F>,
    ind: &IndependenceOracle<C>,
) -> Result<RunReport> {
    let n = check_universe(f, ind)?;
    let queries = f.query_count();
    let checks = ind.check_count();
    let mut twins = Twins::new(f, ind, n);
    loop {
        let mut best: Option<(Side, usize, f64)> = None;
        for side in [Side::First, Side::Second] {
            for e in 0..n {
                if twins.selected.contains(e) || !twins.can_add(side, e) {
                    continue;
                }
                let g = twins.gain(side, e)?;
                if best.is_none_or(|(_, _, b)| g > b) {
                    best = Some((side, e, g));
                }
            }
        }
        match best {
            Some((side, e, g)) if g > 0.0 => twins.insert(side, e, g, None),
            _ => break,
        }
    }
    Ok(twins.finish(
        Algorithm::TwinGreedy,
        f.query_count() - queries,
        ind.check_count() - checks,
    ))
}
