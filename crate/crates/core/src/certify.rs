//! Run certification: partitions an optimal solution against a run's
//! insertion log, builds the charging maps `π1`, `π2`, and checks every
//! inequality the approximation analysis relies on.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use serde::Serialize;

use crate::constraints::{IndependenceOracle, IndependenceSystem};
use crate::error::{Error, Result};
use crate::model::{InsertionLog, RunReport, SetFunction, Side, ValueOracle, DEFAULT_TOL};
use crate::set::ElementSet;

/// Which family of bounds a run is held to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Variant {
    /// TwinGreedy: every greedy choice is exact.
    Exact,
    /// TwinGreedyFast: choices are exact up to a factor `1 + ε`.
    Threshold { epsilon: f64 },
}

impl Variant {
    /// Variant matching the algorithm that produced `report`.
    pub fn of(report: &RunReport) -> Result<Variant> {
        match (report.algorithm.as_str(), &report.thresholds) {
            ("twin", _) => Ok(Variant::Exact),
            ("twinfast", Some(t)) => Ok(Variant::Threshold { epsilon: t.epsilon }),
            (other, _) => Err(Error::Certification(format!(
                "no certificate is defined for algorithm {other:?}"
            ))),
        }
    }

    pub fn epsilon(self) -> f64 {
        match self {
            Variant::Exact => 0.0,
            Variant::Threshold { epsilon } => epsilon,
        }
    }

    /// Factor on the right-hand sides that are only approximately greedy.
    pub fn slack_factor(self) -> f64 {
        1.0 + self.epsilon()
    }
}

/// The classes of an optimal solution `O` relative to a finished run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifiedOptimal {
    /// `e ∈ O ∩ S1` that could still join `S2` when inserted.
    pub o1_plus: ElementSet,
    pub o1_minus: ElementSet,
    /// `e ∈ O ∩ S2` that could still join `S1` when inserted.
    pub o2_plus: ElementSet,
    pub o2_minus: ElementSet,
    /// `e ∈ O \ (S1 ∪ S2)` with `S1 ∪ {e}` dependent.
    pub o3: ElementSet,
    /// `e ∈ O \ (S1 ∪ S2)` with `S2 ∪ {e}` dependent.
    pub o4: ElementSet,
    /// `O \ (S1 ∪ S2 ∪ O3)`.
    pub o5: ElementSet,
    /// `O \ (S1 ∪ S2 ∪ O4)`.
    pub o6: ElementSet,
}

/// Assigns each element of `optimum` to its classes, using the log for
/// `pre(e, S_i)` and the final sets for the outside classes.
pub fn classify<C: IndependenceSystem>(
    log: &InsertionLog,
    optimum: &ElementSet,
    ind: &IndependenceOracle<C>,
) -> Result<ClassifiedOptimal> {
    let n = ind.ground_size();
    if optimum.universe() != n {
        return Err(Error::UniverseMismatch {
            expected: n,
            found: optimum.universe(),
        });
    }
    let (s1, s2) = log.replay(n);
    let empty = ElementSet::empty(n);
    let mut c = ClassifiedOptimal {
        o1_plus: empty.clone(),
        o1_minus: empty.clone(),
        o2_plus: empty.clone(),
        o2_minus: empty.clone(),
        o3: empty.clone(),
        o4: empty.clone(),
        o5: empty.clone(),
        o6: empty,
    };
    for e in optimum.iter() {
        if let Some(entry) = log.entry_of(e) {
            let other = entry.side.other();
            let pre = log.before(entry.position, other, n);
            let crosses = ind.is_independent(&pre.with(e))?;
            let class = match (entry.side, crosses) {
                (Side::First, true) => &mut c.o1_plus,
                (Side::First, false) => &mut c.o1_minus,
                (Side::Second, true) => &mut c.o2_plus,
                (Side::Second, false) => &mut c.o2_minus,
            };
            class.insert(e);
        } else {
            if ind.is_independent(&s1.with(e))? {
                c.o5.insert(e);
            } else {
                c.o3.insert(e);
            }
            if ind.is_independent(&s2.with(e))? {
                c.o6.insert(e);
            } else {
                c.o4.insert(e);
            }
        }
    }
    Ok(c)
}

/// Charging maps from classes of `O` into `S1` (`pi1`) and `S2` (`pi2`).
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PiMapping {
    pub p: usize,
    pub pi1: BTreeMap<usize, usize>,
    pub pi2: BTreeMap<usize, usize>,
}

impl PiMapping {
    pub fn map(&self, side: Side) -> &BTreeMap<usize, usize> {
        match side {
            Side::First => &self.pi1,
            Side::Second => &self.pi2,
        }
    }

    /// `target -> |preimage|` for one map.
    pub fn preimage_counts(&self, side: Side) -> BTreeMap<usize, usize> {
        let mut counts = BTreeMap::new();
        for &y in self.map(side).values() {
            *counts.entry(y).or_insert(0) += 1;
        }
        counts
    }

    /// `preimage size -> number of targets`, over both maps.
    pub fn preimage_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for side in [Side::First, Side::Second] {
            for size in self.preimage_counts(side).into_values() {
                *hist.entry(size).or_insert(0) += 1;
            }
        }
        hist
    }
}

/// Domain of `pi_side` and the part of it that must map to itself.
fn pi_domain(classes: &ClassifiedOptimal, side: Side) -> (ElementSet, ElementSet) {
    let (own_plus, own_minus, cross_minus, outside) = match side {
        Side::First => (
            &classes.o1_plus,
            &classes.o1_minus,
            &classes.o2_minus,
            &classes.o3,
        ),
        Side::Second => (
            &classes.o2_plus,
            &classes.o2_minus,
            &classes.o1_minus,
            &classes.o4,
        ),
    };
    let identity = own_plus.union(own_minus);
    let domain = identity.union(cross_minus).union(outside);
    (domain, identity)
}

/// Backward sweep over the insertions of one side.
///
/// At step `j = s, …, 1`, `A_j` collects the still-unmapped domain elements
/// `x ∉ {u_1..u_{j-1}}` with `{u_1..u_{j-1}, x}` independent. Up to `p`
/// of them (all when `|A_j| <= p`, else the smallest ids with `u_j` forced in
/// when it belongs to the identity part) are mapped to `u_j`.
fn sweep<C: IndependenceSystem>(
    log: &InsertionLog,
    classes: &ClassifiedOptimal,
    ind: &IndependenceOracle<C>,
    p: usize,
    side: Side,
) -> Result<BTreeMap<usize, usize>> {
    let n = ind.ground_size();
    let (mut remaining, identity) = pi_domain(classes, side);
    let seq = log.sequence(side);
    let mut map = BTreeMap::new();
    for j in (1..=seq.len()).rev() {
        let u = seq[j - 1];
        let prefix = ElementSet::from_members(n, seq[..j - 1].iter().copied());
        let mut candidates = Vec::new();
        for x in remaining.iter() {
            if !prefix.contains(x) && ind.is_independent(&prefix.with(x))? {
                candidates.push(x);
            }
        }
        let chosen: Vec<usize> = if candidates.len() <= p {
            candidates
        } else {
            let forced = identity.contains(u) && candidates.contains(&u);
            let mut chosen: Vec<usize> = if forced { alloc::vec![u] } else { Vec::new() };
            chosen.extend(
                candidates
                    .iter()
                    .copied()
                    .filter(|&x| !(forced && x == u))
                    .take(p - chosen.len()),
            );
            chosen
        };
        for x in chosen {
            map.insert(x, u);
            remaining.remove(x);
        }
    }
    if !remaining.is_empty() {
        return Err(Error::Certification(format!(
            "pi{} construction left {:?} unmapped",
            side.number(),
            remaining
        )));
    }
    Ok(map)
}

/// Builds `π1` and `π2`. Fails when a sweep ends with unmapped elements,
/// which cannot happen for a correct run on a `p`-set system.
pub fn build_pi<C: IndependenceSystem>(
    log: &InsertionLog,
    classes: &ClassifiedOptimal,
    ind: &IndependenceOracle<C>,
    p: usize,
) -> Result<PiMapping> {
    if p == 0 {
        return Err(crate::error::invalid("p", "must be at least 1"));
    }
    Ok(PiMapping {
        p,
        pi1: sweep(log, classes, ind, p, Side::First)?,
        pi2: sweep(log, classes, ind, p, Side::Second)?,
    })
}

/// Structural properties of a [`PiMapping`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PiProperties {
    /// Every domain element is mapped, into the right side.
    pub total: bool,
    /// Injective for `p = 1`, otherwise every preimage has at most `p` elements.
    pub preimage_bounded: bool,
    pub max_preimage: usize,
    /// `π1` fixes `O1±` and `π2` fixes `O2±`.
    pub identity: bool,
    /// `pre(π(e), S_i) ∪ {e}` is independent for every mapped `e`.
    pub prefix_feasible: bool,
}

impl PiProperties {
    pub fn holds(&self) -> bool {
        self.total && self.preimage_bounded && self.identity && self.prefix_feasible
    }
}

pub fn pi_properties<C: IndependenceSystem>(
    log: &InsertionLog,
    classes: &ClassifiedOptimal,
    pi: &PiMapping,
    ind: &IndependenceOracle<C>,
) -> Result<PiProperties> {
    let n = ind.ground_size();
    let mut props = PiProperties {
        total: true,
        preimage_bounded: true,
        max_preimage: 0,
        identity: true,
        prefix_feasible: true,
    };
    for side in [Side::First, Side::Second] {
        let (domain, identity) = pi_domain(classes, side);
        let map = pi.map(side);
        props.total &= map.len() == domain.len() && map.keys().all(|&e| domain.contains(e));
        for (&e, &y) in map {
            match log.entry_of(y) {
                Some(entry) if entry.side == side => {
                    let pre = log.before(entry.position, side, n);
                    props.prefix_feasible &= ind.is_independent(&pre.with(e))?;
                }
                _ => props.total = false,
            }
        }
        props.identity &= identity.iter().all(|e| map.get(&e) == Some(&e));
        let largest = pi.preimage_counts(side).into_values().max().unwrap_or(0);
        props.max_preimage = props.max_preimage.max(largest);
    }
    props.preimage_bounded = props.max_preimage <= pi.p.max(1);
    Ok(props)
}

/// One checked inequality `lhs <= rhs` (within tolerance).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Inequality {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
    pub holds: bool,
}

impl Inequality {
    pub fn new(name: &'static str, lhs: f64, rhs: f64, tol: f64) -> Self {
        Inequality {
            name,
            lhs,
            rhs,
            slack: rhs - lhs + 0.0,
            holds: lhs <= rhs + tol,
        }
    }
}

fn delta_sum(log: &InsertionLog, map: &BTreeMap<usize, usize>, domain: &ElementSet) -> f64 {
    domain
        .iter()
        .map(|e| {
            map.get(&e)
                .and_then(|y| log.entry_of(*y))
                .map_or(f64::NAN, |entry| entry.gain)
        })
        .fold(0.0, |acc, g| acc + g)
}

/// `f(A | S) = f(A ∪ S) - f(S)` with `f(S)` supplied; free when `A = ∅`.
fn set_gain<F: SetFunction>(
    f: &ValueOracle<F>,
    a: &ElementSet,
    base: &ElementSet,
    base_value: f64,
) -> f64 {
    if a.is_empty() {
        0.0
    } else {
        f.evaluate(&a.union(base)) - base_value
    }
}

/// The six per-class gain inequalities, in the order
/// `O1+|S2, O2+|S1, O1-|S2, O2-|S1, O3|S1, O4|S2`.
pub fn check_gain_bounds<F: SetFunction>(
    report: &RunReport,
    classes: &ClassifiedOptimal,
    pi: &PiMapping,
    f: &ValueOracle<F>,
    variant: Variant,
) -> Vec<Inequality> {
    let c = variant.slack_factor();
    let log = &report.log;
    let (s1, s2, f1, f2) = (&report.s1, &report.s2, report.f_s1, report.f_s2);
    let tol = DEFAULT_TOL;
    alloc::vec![
        Inequality::new(
            "O1+|S2",
            set_gain(f, &classes.o1_plus, s2, f2),
            delta_sum(log, &pi.pi1, &classes.o1_plus),
            tol,
        ),
        Inequality::new(
            "O2+|S1",
            set_gain(f, &classes.o2_plus, s1, f1),
            delta_sum(log, &pi.pi2, &classes.o2_plus),
            tol,
        ),
        Inequality::new(
            "O1-|S2",
            set_gain(f, &classes.o1_minus, s2, f2),
            c * delta_sum(log, &pi.pi2, &classes.o1_minus),
            tol,
        ),
        Inequality::new(
            "O2-|S1",
            set_gain(f, &classes.o2_minus, s1, f1),
            c * delta_sum(log, &pi.pi1, &classes.o2_minus),
            tol,
        ),
        Inequality::new(
            "O3|S1",
            set_gain(f, &classes.o3, s1, f1),
            c * delta_sum(log, &pi.pi1, &classes.o3),
            tol,
        ),
        Inequality::new(
            "O4|S2",
            set_gain(f, &classes.o4, s2, f2),
            c * delta_sum(log, &pi.pi2, &classes.o4),
            tol,
        ),
    ]
}

/// Marginal gains of the never-selected, still-addable optimal elements.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residuals {
    /// `max_{e ∈ O5} f(e | S1)`, if `O5` is nonempty.
    pub worst_o5: Option<f64>,
    /// `max_{e ∈ O6} f(e | S2)`, if `O6` is nonempty.
    pub worst_o6: Option<f64>,
    /// `0` (inclusive) for exact runs, the last threshold (exclusive) for
    /// threshold runs that executed at least one pass.
    pub bound: f64,
    pub strict: bool,
    pub holds: bool,
}

pub fn check_residuals<F: SetFunction>(
    report: &RunReport,
    classes: &ClassifiedOptimal,
    f: &ValueOracle<F>,
    variant: Variant,
) -> Result<Residuals> {
    let (bound, strict) = match (variant, &report.thresholds) {
        (Variant::Threshold { .. }, Some(t)) if t.passes > 0 => (t.tau_min, true),
        _ => (0.0, false),
    };
    let worst = |set: &ElementSet, base: &ElementSet, base_value: f64| -> Result<Option<f64>> {
        let mut worst: Option<f64> = None;
        for e in set.iter() {
            let g = f.marginal_gain(base_value, base, e)?;
            worst = Some(worst.map_or(g, |w| w.max(g)));
        }
        Ok(worst)
    };
    let worst_o5 = worst(&classes.o5, &report.s1, report.f_s1)?;
    let worst_o6 = worst(&classes.o6, &report.s2, report.f_s2)?;
    let ok = |w: Option<f64>| match w {
        None => true,
        Some(g) if strict => g < bound + DEFAULT_TOL,
        Some(g) => g <= bound + DEFAULT_TOL,
    };
    Ok(Residuals {
        worst_o5,
        worst_o6,
        bound,
        strict,
        holds: ok(worst_o5) && ok(worst_o6),
    })
}

/// End-to-end bound relating a run to the optimum value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GlobalBound {
    /// `f(O) <= [1 + c·p](f(S1) + f(S2)) + 2ε·f(O)`, with `c = 1 + ε` (`ε = 0` for exact runs).
    pub sum_bound: Inequality,
    /// `f(S*) / f(O)` (1 when `f(O) <= 0`).
    pub ratio: f64,
    /// `1/(2p+2) - ε`.
    pub ratio_bound: f64,
    /// `(1/(2p+2) - ε)·f(O) <= f(S*)`.
    pub ratio_check: Inequality,
    /// When `S2 = ∅`: `(1 - ε)·f(O) <= f(S1)`.
    pub degenerate: Option<Inequality>,
}

impl GlobalBound {
    pub fn holds(&self) -> bool {
        self.sum_bound.holds
            && self.ratio_check.holds
            && self.degenerate.as_ref().is_none_or(|d| d.holds)
    }
}

pub fn check_global_bound(
    report: &RunReport,
    optimum_value: f64,
    variant: Variant,
    p: usize,
) -> GlobalBound {
    let eps = variant.epsilon();
    let p = p as f64;
    let c = variant.slack_factor();
    let tol = DEFAULT_TOL;
    let sum_bound = Inequality::new(
        "f(O) <= [1+c*p](f1+f2) + 2*eps*f(O)",
        optimum_value,
        (1.0 + c * p) * (report.f_s1 + report.f_s2) + 2.0 * eps * optimum_value,
        tol,
    );
    let ratio_bound = 1.0 / (2.0 * p + 2.0) - eps;
    let ratio = if optimum_value > 0.0 {
        report.f_star / optimum_value
    } else {
        1.0
    };
    let ratio_check = Inequality::new(
        "ratio_bound*f(O) <= f(S*)",
        ratio_bound * optimum_value,
        report.f_star,
        tol,
    );
    let degenerate = report.s2.is_empty().then(|| {
        Inequality::new(
            "(1-eps)*f(O) <= f(S1)",
            (1.0 - eps) * optimum_value,
            report.f_s1,
            tol,
        )
    });
    GlobalBound {
        sum_bound,
        ratio,
        ratio_bound,
        ratio_check,
        degenerate,
    }
}

/// Recorded `δ(e)` against `f(pre(e, S_i) ∪ {e}) - f(pre(e, S_i))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogConsistency {
    pub max_abs_error: f64,
    /// Every `δ(e)` matches and the log replays to the reported sets.
    pub holds: bool,
}

pub fn check_log<F: SetFunction>(report: &RunReport, f: &ValueOracle<F>) -> LogConsistency {
    let n = report.ground_size;
    let (s1, s2) = report.log.replay(n);
    let mut holds = report.log.is_well_formed() && s1 == report.s1 && s2 == report.s2;
    let f_empty = f.evaluate(&ElementSet::empty(n));
    let mut max_abs_error: f64 = 0.0;
    for side in [Side::First, Side::Second] {
        let mut prefix = ElementSet::empty(n);
        let mut prev = f_empty;
        for e in report.log.sequence(side) {
            prefix.insert(e);
            let next = f.evaluate(&prefix);
            let recorded = report.log.entry_of(e).map_or(f64::NAN, |x| x.gain);
            let err = (recorded - (next - prev)).abs();
            max_abs_error = max_abs_error.max(err);
            holds &= err <= DEFAULT_TOL * (1.0 + next.abs());
            prev = next;
        }
    }
    LogConsistency {
        max_abs_error,
        holds,
    }
}

/// Every check applied to one run against one optimum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub algorithm: alloc::string::String,
    pub variant: Variant,
    pub p: usize,
    pub optimum: ElementSet,
    pub optimum_value: f64,
    pub classes: ClassifiedOptimal,
    pub pi: PiMapping,
    pub pi_properties: PiProperties,
    pub log: LogConsistency,
    pub gain_bounds: Vec<Inequality>,
    pub residuals: Residuals,
    pub global: GlobalBound,
    /// Value queries issued by the certification itself.
    pub value_queries: u64,
    /// `4(|O| + |S1| + |S2|) + 6`.
    pub query_budget: u64,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.pi_properties.holds()
            && self.log.holds
            && self.gain_bounds.iter().all(|i| i.holds)
            && self.residuals.holds
            && self.global.holds()
            && self.value_queries <= self.query_budget
    }

    /// Names of the failed checks.
    pub fn violations(&self) -> Vec<alloc::string::String> {
        let mut out = Vec::new();
        if !self.pi_properties.holds() {
            out.push(format!("pi properties {:?}", self.pi_properties));
        }
        if !self.log.holds {
            out.push(format!(
                "log inconsistent (max error {})",
                self.log.max_abs_error
            ));
        }
        for i in self.gain_bounds.iter().filter(|i| !i.holds) {
            out.push(format!("{}: {} > {}", i.name, i.lhs, i.rhs));
        }
        if !self.residuals.holds {
            out.push(format!("residuals {:?}", self.residuals));
        }
        let g = &self.global;
        for i in [
            Some(&g.sum_bound),
            Some(&g.ratio_check),
            g.degenerate.as_ref(),
        ]
        .into_iter()
        .flatten()
        .filter(|i| !i.holds)
        {
            out.push(format!("{}: {} > {}", i.name, i.lhs, i.rhs));
        }
        if self.value_queries > self.query_budget {
            out.push(format!(
                "certification used {} value queries, budget {}",
                self.value_queries, self.query_budget
            ));
        }
        out
    }
}

/// Runs the whole pipeline on a TwinGreedy or TwinGreedyFast report.
///
/// `optimum` must be an optimal independent set with value `optimum_value`
/// and `p` the system's parameter (1 for matroids).
pub fn certify_run<F: SetFunction, C: IndependenceSystem>(
    report: &RunReport,
    f: &ValueOracle<F>,
    ind: &IndependenceOracle<C>,
    optimum: &ElementSet,
    optimum_value: f64,
    p: usize,
) -> Result<Certificate> {
    let variant = Variant::of(report)?;
    let queries = f.query_count();
    let log = check_log(report, f);
    let classes = classify(&report.log, optimum, ind)?;
    let pi = build_pi(&report.log, &classes, ind, p)?;
    let pi_properties = pi_properties(&report.log, &classes, &pi, ind)?;
    let gain_bounds = check_gain_bounds(report, &classes, &pi, f, variant);
    let residuals = check_residuals(report, &classes, f, variant)?;
    let global = check_global_bound(report, optimum_value, variant, p);
    let size = (optimum.len() + report.s1.len() + report.s2.len()) as u64;
    Ok(Certificate {
        algorithm: report.algorithm.clone(),
        variant,
        p,
        optimum: optimum.clone(),
        optimum_value,
        classes,
        pi,
        pi_properties,
        log,
        gain_bounds,
        residuals,
        global,
        value_queries: f.query_count() - queries,
        query_budget: 4 * size + 6,
    })
}
