//! Ground sets, query-counted value oracles, insertion logs and run reports.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::Cell;

use rand::Rng;
use serde::ser::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::generators::seeded_rng;
use crate::set::ElementSet;

/// Default absolute tolerance for floating-point comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// The ground set `0..n`, optionally with display labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    n: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(n: usize) -> Self {
        GroundSet { n, labels: None }
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        GroundSet {
            n: labels.len(),
            labels: Some(labels),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn label(&self, e: usize) -> Option<&str> {
        self.labels.as_ref()?.get(e).map(String::as_str)
    }

    pub fn elements(&self) -> core::ops::Range<usize> {
        0..self.n
    }

    pub fn empty_set(&self) -> ElementSet {
        ElementSet::empty(self.n)
    }
}

/// A real-valued set function over `0..ground_size()`.
///
/// Implementations are pure: no caching and no interior state. Query
/// accounting lives in [`ValueOracle`].
pub trait SetFunction {
    fn ground_size(&self) -> usize;

    fn value(&self, s: &ElementSet) -> f64;

    /// `f(base ∪ {e}) - base_value` where `base_value == f(base)` and `e ∉ base`.
    ///
    /// Objectives with a cheap incremental form override this; the result
    /// must agree with the two-evaluation difference up to rounding.
    fn gain(&self, base: &ElementSet, base_value: f64, e: usize) -> f64 {
        self.value(&base.with(e)) - base_value
    }
}

impl<T: SetFunction + ?Sized> SetFunction for &T {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, s: &ElementSet) -> f64 {
        (**self).value(s)
    }
    fn gain(&self, base: &ElementSet, base_value: f64, e: usize) -> f64 {
        (**self).gain(base, base_value, e)
    }
}

impl<T: SetFunction + ?Sized> SetFunction for Box<T> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, s: &ElementSet) -> f64 {
        (**self).value(s)
    }
    fn gain(&self, base: &ElementSet, base_value: f64, e: usize) -> f64 {
        (**self).gain(base, base_value, e)
    }
}

/// Query-counting evaluator around a [`SetFunction`].
///
/// Every `evaluate` and every `marginal_gain` adds exactly one to the
/// counter. A run owns its oracle; the counter is not shared across threads.
pub struct ValueOracle<F> {
    f: F,
    queries: Cell<u64>,
}

impl<F: SetFunction> ValueOracle<F> {
    pub fn new(f: F) -> Self {
        ValueOracle {
            f,
            queries: Cell::new(0),
        }
    }

    pub fn function(&self) -> &F {
        &self.f
    }

    pub fn ground_size(&self) -> usize {
        self.f.ground_size()
    }

    pub fn query_count(&self) -> u64 {
        self.queries.get()
    }

    pub fn reset_count(&self) {
        self.queries.set(0);
    }

    #[inline]
    fn bump(&self) {
        self.queries.set(self.queries.get() + 1);
    }

    /// Panics if `s` is over a different universe than the oracle.
    pub fn evaluate(&self, s: &ElementSet) -> f64 {
        assert_eq!(
            s.universe(),
            self.f.ground_size(),
            "set universe does not match the oracle ground set"
        );
        self.bump();
        self.f.value(s)
    }

    pub fn try_evaluate(&self, s: &ElementSet) -> Result<f64> {
        if s.universe() != self.f.ground_size() {
            return Err(Error::UniverseMismatch {
                expected: self.f.ground_size(),
                found: s.universe(),
            });
        }
        Ok(self.evaluate(s))
    }

    /// `f(base ∪ {e}) - base_value`, charging one query. `base_value` is the
    /// caller's cached `f(base)`.
    pub fn marginal_gain(&self, base_value: f64, base: &ElementSet, e: usize) -> Result<f64> {
        let n = self.f.ground_size();
        if base.universe() != n {
            return Err(Error::UniverseMismatch {
                expected: n,
                found: base.universe(),
            });
        }
        if e >= n {
            return Err(Error::OutOfRange { element: e, n });
        }
        if base.contains(e) {
            return Err(Error::AlreadyInBase { element: e });
        }
        self.bump();
        Ok(self.f.gain(base, base_value, e))
    }
}

/// Which kind of submodularity inequality a witness violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// `f(Y | X) > Σ_j f(Z_j | X)` for a partition `Z_1..Z_t` of `Y \ X`.
    Partition,
    /// `f(X) + f(Y) < f(X ∪ Y) + f(X ∩ Y)`.
    Lattice,
}

#[derive(Clone, Debug)]
pub struct SubmodularityWitness {
    pub kind: ViolationKind,
    pub x: ElementSet,
    pub y: ElementSet,
    /// Partition of `Y \ X` (empty for lattice witnesses).
    pub parts: Vec<ElementSet>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug)]
pub struct SubmodularityReport {
    pub trials: usize,
    pub witness: Option<SubmodularityWitness>,
}

impl SubmodularityReport {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// Randomized test of submodularity.
///
/// Each trial samples `X ⊆ Y` and a random partition of `Y \ X` and checks
/// `f(Y|X) <= Σ_j f(Z_j|X)`, then samples an unrelated pair `A, B` and checks
/// `f(A) + f(B) >= f(A ∪ B) + f(A ∩ B)`. Every fourth trial forces `X = ∅`
/// and every third forces `A ∩ B = ∅`, so objectives with a special value at
/// the empty set are exercised there. Stops at the first violation.
pub fn submodularity_check<F: SetFunction>(
    oracle: &ValueOracle<F>,
    ground: &GroundSet,
    trials: usize,
    seed: u64,
    tol: f64,
) -> SubmodularityReport {
    let n = ground.len();
    let mut rng = seeded_rng(seed);
    let random_subset = |rng: &mut rand_chacha::ChaCha8Rng, within: &ElementSet| {
        ElementSet::from_members(n, within.iter().filter(|_| rng.random::<bool>()))
    };
    let everything = ElementSet::full(n);
    for trial in 0..trials {
        let y = random_subset(&mut rng, &everything);
        let x = if trial % 4 == 0 {
            ElementSet::empty(n)
        } else {
            random_subset(&mut rng, &y)
        };
        let rest = y.difference(&x);
        let t = if rest.is_empty() {
            1
        } else {
            rng.random_range(1..=rest.len())
        };
        let mut parts: Vec<ElementSet> = (0..t).map(|_| ElementSet::empty(n)).collect();
        for e in rest.iter() {
            parts[rng.random_range(0..t)].insert(e);
        }
        parts.retain(|p| !p.is_empty());
        let fx = oracle.evaluate(&x);
        let lhs = oracle.evaluate(&y) - fx;
        let rhs: f64 = parts
            .iter()
            .map(|z| oracle.evaluate(&z.union(&x)) - fx)
            .sum();
        if lhs > rhs + tol {
            return SubmodularityReport {
                trials: trial + 1,
                witness: Some(SubmodularityWitness {
                    kind: ViolationKind::Partition,
                    x,
                    y,
                    parts,
                    lhs,
                    rhs,
                }),
            };
        }

        let a = random_subset(&mut rng, &everything);
        let b = if trial % 3 == 0 {
            random_subset(&mut rng, &everything.difference(&a))
        } else {
            random_subset(&mut rng, &everything)
        };
        let lhs = oracle.evaluate(&a) + oracle.evaluate(&b);
        let rhs = oracle.evaluate(&a.union(&b)) + oracle.evaluate(&a.intersection(&b));
        if lhs + tol < rhs {
            return SubmodularityReport {
                trials: trial + 1,
                witness: Some(SubmodularityWitness {
                    kind: ViolationKind::Lattice,
                    x: a,
                    y: b,
                    parts: Vec::new(),
                    lhs,
                    rhs,
                }),
            };
        }
    }
    SubmodularityReport {
        trials,
        witness: None,
    }
}

/// One of the two twin solution sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::First => Side::Second,
            Side::Second => Side::First,
        }
    }

    /// 1 or 2.
    pub fn number(self) -> u8 {
        match self {
            Side::First => 1,
            Side::Second => 2,
        }
    }
}

impl Serialize for Side {
    fn serialize<S: Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.number())
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct LogEntry {
    pub element: usize,
    pub side: Side,
    /// 0-based insertion index over `S1 ∪ S2`.
    pub position: usize,
    /// `δ(e)`: the marginal gain w.r.t. the elements of its side inserted before it.
    pub gain: f64,
    /// Threshold active at insertion (threshold-based solvers only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

/// Ordered record of insertions into the twin sets.
#[derive(Clone, Debug, Default, PartialEq, serde::Serialize)]
#[serde(transparent)]
pub struct InsertionLog {
    entries: Vec<LogEntry>,
}

impl InsertionLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, element: usize, side: Side, gain: f64, threshold: Option<f64>) {
        let position = self.entries.len();
        self.entries.push(LogEntry {
            element,
            side,
            position,
            gain,
            threshold,
        });
    }

    pub fn entries(&self) -> &[LogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry_of(&self, e: usize) -> Option<&LogEntry> {
        self.entries.iter().find(|x| x.element == e)
    }

    /// Rebuilds `(S1, S2)` over a universe of `n` elements.
    pub fn replay(&self, n: usize) -> (ElementSet, ElementSet) {
        let mut s1 = ElementSet::empty(n);
        let mut s2 = ElementSet::empty(n);
        for x in &self.entries {
            match x.side {
                Side::First => s1.insert(x.element),
                Side::Second => s2.insert(x.element),
            };
        }
        (s1, s2)
    }

    /// Elements of `side` in insertion order (`u_1, …, u_s`).
    pub fn sequence(&self, side: Side) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|x| x.side == side)
            .map(|x| x.element)
            .collect()
    }

    /// Elements of `side` inserted strictly before position `position`.
    pub fn before(&self, position: usize, side: Side, n: usize) -> ElementSet {
        ElementSet::from_members(
            n,
            self.entries[..position.min(self.entries.len())]
                .iter()
                .filter(|x| x.side == side)
                .map(|x| x.element),
        )
    }

    /// `pre(e, S_side)` for a logged element `e`.
    pub fn pre(&self, e: usize, side: Side, n: usize) -> Option<ElementSet> {
        self.entry_of(e).map(|x| self.before(x.position, side, n))
    }

    /// Checks distinct elements and consecutive positions.
    pub fn is_well_formed(&self) -> bool {
        let mut seen = alloc::collections::BTreeSet::new();
        self.entries
            .iter()
            .enumerate()
            .all(|(i, x)| x.position == i && seen.insert(x.element))
    }
}

/// A parameter value recorded in a report.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(u64),
    Float(f64),
    Text(String),
}

impl From<u64> for ParamValue {
    fn from(v: u64) -> Self {
        ParamValue::Int(v)
    }
}

impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        ParamValue::Int(v as u64)
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Float(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.into())
    }
}

impl From<String> for ParamValue {
    fn from(v: String) -> Self {
        ParamValue::Text(v)
    }
}

/// Threshold schedule actually executed by a threshold-greedy run.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ThresholdTrace {
    pub epsilon: f64,
    pub tau_max: f64,
    /// Smallest threshold a pass was run with.
    pub tau_min: f64,
    /// Upper bound on independent-set size used in the stopping rule.
    pub rank_bound: usize,
    pub passes: usize,
}

/// Everything a solver run produces.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RunReport {
    pub algorithm: String,
    pub ground_size: usize,
    pub parameters: BTreeMap<String, ParamValue>,
    pub s1: ElementSet,
    pub s2: ElementSet,
    pub s_star: ElementSet,
    pub f_s1: f64,
    pub f_s2: f64,
    pub f_star: f64,
    pub log: InsertionLog,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<ThresholdTrace>,
    pub value_queries: u64,
    pub independence_checks: u64,
    pub wall_time_s: f64,
}

impl RunReport {
    /// Assembles a report, picking `S*` as the better twin (ties go to `S1`).
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_twins(
        algorithm: &str,
        s1: ElementSet,
        f_s1: f64,
        s2: ElementSet,
        f_s2: f64,
        log: InsertionLog,
        value_queries: u64,
        independence_checks: u64,
    ) -> Self {
        let (s_star, f_star) = if f_s1 >= f_s2 {
            (s1.clone(), f_s1)
        } else {
            (s2.clone(), f_s2)
        };
        RunReport {
            algorithm: algorithm.into(),
            ground_size: s1.universe(),
            parameters: BTreeMap::new(),
            s1,
            s2,
            s_star,
            f_s1,
            f_s2,
            f_star,
            log,
            thresholds: None,
            value_queries,
            independence_checks,
            wall_time_s: 0.0,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<ParamValue>) -> Self {
        self.parameters.insert(key.into(), value.into());
        self
    }

    pub fn star_side(&self) -> Side {
        if self.s_star == self.s1 {
            Side::First
        } else {
            Side::Second
        }
    }
}
