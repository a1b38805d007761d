//! Independence systems: uniform, partition and seed-selection matroids,
//! intersections of matroids (p-set systems), and structural validators.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::generators::seeded_rng;
use crate::set::ElementSet;

/// Incremental feasibility state for one growing solution set.
pub trait Tracker {
    /// Whether `current ∪ {e}` is independent. `e` must not be in `current`.
    fn can_add(&self, e: usize) -> bool;
    /// Records `e` as a member of the current set.
    fn insert(&mut self, e: usize);
}

/// A hereditary family of independent sets over `0..ground_size()`.
pub trait IndependenceSystem {
    fn ground_size(&self) -> usize;

    fn is_independent(&self, s: &ElementSet) -> bool;

    /// Fresh tracker for the empty set.
    fn tracker(&self) -> Box<dyn Tracker + '_>;

    /// An upper bound on the size of every independent set.
    ///
    /// Matroids return their rank; systems that can do better than the
    /// greedy base (whose size may undershoot the maximum by a factor of `p`)
    /// override this.
    fn rank_bound(&self) -> usize {
        rank(self)
    }
}

impl<T: IndependenceSystem + ?Sized> IndependenceSystem for &T {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn is_independent(&self, s: &ElementSet) -> bool {
        (**self).is_independent(s)
    }
    fn tracker(&self) -> Box<dyn Tracker + '_> {
        (**self).tracker()
    }
    fn rank_bound(&self) -> usize {
        (**self).rank_bound()
    }
}

impl<T: IndependenceSystem + ?Sized> IndependenceSystem for Box<T> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn is_independent(&self, s: &ElementSet) -> bool {
        (**self).is_independent(s)
    }
    fn tracker(&self) -> Box<dyn Tracker + '_> {
        (**self).tracker()
    }
    fn rank_bound(&self) -> usize {
        (**self).rank_bound()
    }
}

/// Tracker that re-tests `current ∪ {e}` from scratch. Fallback for systems
/// without cheaper incremental state.
pub struct GenericTracker<'a, S: ?Sized> {
    system: &'a S,
    current: ElementSet,
}

impl<'a, S: IndependenceSystem + ?Sized> GenericTracker<'a, S> {
    pub fn new(system: &'a S) -> Self {
        GenericTracker {
            current: ElementSet::empty(system.ground_size()),
            system,
        }
    }
}

impl<S: IndependenceSystem + ?Sized> Tracker for GenericTracker<'_, S> {
    fn can_add(&self, e: usize) -> bool {
        self.system.is_independent(&self.current.with(e))
    }
    fn insert(&mut self, e: usize) {
        self.current.insert(e);
    }
}

/// Size of the base obtained by one greedy pass in ascending id order.
///
/// Equals the rank for matroids; for a p-set system it is within a factor
/// `p` of every other base.
pub fn rank<S: IndependenceSystem + ?Sized>(system: &S) -> usize {
    let mut t = system.tracker();
    let mut size = 0;
    for e in 0..system.ground_size() {
        if t.can_add(e) {
            t.insert(e);
            size += 1;
        }
    }
    size
}

/// Check-counting wrapper around an [`IndependenceSystem`].
pub struct IndependenceOracle<C> {
    system: C,
    checks: Cell<u64>,
}

impl<C: IndependenceSystem> IndependenceOracle<C> {
    pub fn new(system: C) -> Self {
        IndependenceOracle {
            system,
            checks: Cell::new(0),
        }
    }

    pub fn system(&self) -> &C {
        &self.system
    }

    pub fn ground_size(&self) -> usize {
        self.system.ground_size()
    }

    pub fn check_count(&self) -> u64 {
        self.checks.get()
    }

    pub fn reset_count(&self) {
        self.checks.set(0);
    }

    fn bump(&self) {
        self.checks.set(self.checks.get() + 1);
    }

    /// Exact membership test; errors when `s` is over another universe.
    pub fn is_independent(&self, s: &ElementSet) -> Result<bool> {
        let n = self.system.ground_size();
        if s.universe() != n {
            return Err(Error::UniverseMismatch {
                expected: n,
                found: s.universe(),
            });
        }
        self.bump();
        Ok(self.system.is_independent(s))
    }

    /// Counting tracker for one growing set.
    pub fn tracker(&self) -> CountedTracker<'_> {
        CountedTracker {
            inner: self.system.tracker(),
            checks: &self.checks,
        }
    }

    /// Not counted: structural precomputation.
    pub fn rank_bound(&self) -> usize {
        self.system.rank_bound()
    }
}

pub struct CountedTracker<'a> {
    inner: Box<dyn Tracker + 'a>,
    checks: &'a Cell<u64>,
}

impl CountedTracker<'_> {
    pub fn can_add(&self, e: usize) -> bool {
        self.checks.set(self.checks.get() + 1);
        self.inner.can_add(e)
    }

    pub fn insert(&mut self, e: usize) {
        self.inner.insert(e);
    }
}

/// `S` is independent iff `|S| <= k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformMatroid {
    n: usize,
    k: usize,
}

impl UniformMatroid {
    pub fn new(n: usize, k: usize) -> Self {
        UniformMatroid { n, k }
    }

    pub fn cap(&self) -> usize {
        self.k
    }
}

struct CountTracker {
    count: usize,
    cap: usize,
}

impl Tracker for CountTracker {
    fn can_add(&self, _e: usize) -> bool {
        self.count < self.cap
    }
    fn insert(&mut self, _e: usize) {
        self.count += 1;
    }
}

impl IndependenceSystem for UniformMatroid {
    fn ground_size(&self) -> usize {
        self.n
    }
    fn is_independent(&self, s: &ElementSet) -> bool {
        s.len() <= self.k
    }
    fn tracker(&self) -> Box<dyn Tracker + '_> {
        Box::new(CountTracker {
            count: 0,
            cap: self.k,
        })
    }
    fn rank_bound(&self) -> usize {
        self.k.min(self.n)
    }
}

/// `S` is independent iff every part holds at most `cap` members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionMatroid {
    part_of: Vec<usize>,
    parts: usize,
    cap: usize,
}

impl PartitionMatroid {
    /// `part_of[e]` must be in `0..parts`.
    pub fn new(part_of: Vec<usize>, parts: usize, cap: usize) -> Result<Self> {
        if let Some((e, &p)) = part_of.iter().enumerate().find(|(_, &p)| p >= parts) {
            return Err(invalid(
                "part_of",
                format!("element {e} assigned to part {p}, only {parts} parts"),
            ));
        }
        Ok(PartitionMatroid {
            part_of,
            parts,
            cap,
        })
    }

    pub fn parts(&self) -> usize {
        self.parts
    }

    pub fn part_of(&self, e: usize) -> usize {
        self.part_of[e]
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn with_cap(&self, cap: usize) -> Self {
        PartitionMatroid {
            cap,
            ..self.clone()
        }
    }
}

struct PartTracker<'a> {
    part_of: &'a [usize],
    counts: Vec<usize>,
    cap: usize,
}

impl Tracker for PartTracker<'_> {
    fn can_add(&self, e: usize) -> bool {
        self.counts[self.part_of[e]] < self.cap
    }
    fn insert(&mut self, e: usize) {
        self.counts[self.part_of[e]] += 1;
    }
}

impl IndependenceSystem for PartitionMatroid {
    fn ground_size(&self) -> usize {
        self.part_of.len()
    }
    fn is_independent(&self, s: &ElementSet) -> bool {
        let mut counts = vec![0usize; self.parts];
        for e in s.iter() {
            counts[self.part_of[e]] += 1;
            if counts[self.part_of[e]] > self.cap {
                return false;
            }
        }
        true
    }
    fn tracker(&self) -> Box<dyn Tracker + '_> {
        Box::new(PartTracker {
            part_of: &self.part_of,
            counts: vec![0; self.parts],
            cap: self.cap,
        })
    }
    fn rank_bound(&self) -> usize {
        let mut sizes = vec![0usize; self.parts];
        for &p in &self.part_of {
            sizes[p] += 1;
        }
        sizes.iter().map(|&s| s.min(self.cap)).sum()
    }
}

/// Seed selection over `V × [m]`: at most `k` seeds overall and at most one
/// product per node. Element `(u, i)` has id `u * m + i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedMatroid {
    nodes: usize,
    products: usize,
    cap: usize,
}

impl SeedMatroid {
    pub fn new(nodes: usize, products: usize, cap: usize) -> Result<Self> {
        if products == 0 {
            return Err(invalid("m", "at least one product required"));
        }
        Ok(SeedMatroid {
            nodes,
            products,
            cap,
        })
    }

    pub fn element(&self, node: usize, product: usize) -> usize {
        node * self.products + product
    }

    pub fn node_of(&self, e: usize) -> usize {
        e / self.products
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn products(&self) -> usize {
        self.products
    }

    pub fn cap(&self) -> usize {
        self.cap
    }
}

struct SeedTracker {
    products: usize,
    used: ElementSet,
    cap: usize,
}

impl Tracker for SeedTracker {
    fn can_add(&self, e: usize) -> bool {
        self.used.len() < self.cap && !self.used.contains(e / self.products)
    }
    fn insert(&mut self, e: usize) {
        self.used.insert(e / self.products);
    }
}

impl IndependenceSystem for SeedMatroid {
    fn ground_size(&self) -> usize {
        self.nodes * self.products
    }
    fn is_independent(&self, s: &ElementSet) -> bool {
        if s.len() > self.cap {
            return false;
        }
        let mut used = ElementSet::empty(self.nodes);
        s.iter().all(|e| used.insert(e / self.products))
    }
    fn tracker(&self) -> Box<dyn Tracker + '_> {
        Box::new(SeedTracker {
            products: self.products,
            used: ElementSet::empty(self.nodes),
            cap: self.cap,
        })
    }
    fn rank_bound(&self) -> usize {
        self.cap.min(self.nodes)
    }
}

/// Intersection of `p >= 1` independence systems over one ground set.
/// With matroid constituents this is a p-set system.
#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionSystem<C> {
    constituents: Vec<C>,
}

impl<C: IndependenceSystem> IntersectionSystem<C> {
    pub fn new(constituents: Vec<C>) -> Result<Self> {
        let Some(first) = constituents.first() else {
            return Err(invalid("constituents", "need at least one"));
        };
        let n = first.ground_size();
        if constituents.iter().any(|c| c.ground_size() != n) {
            return Err(invalid("constituents", "ground sets differ"));
        }
        Ok(IntersectionSystem { constituents })
    }

    pub fn p(&self) -> usize {
        self.constituents.len()
    }

    pub fn constituents(&self) -> &[C] {
        &self.constituents
    }
}

struct AllTracker<'a> {
    inner: Vec<Box<dyn Tracker + 'a>>,
}

impl Tracker for AllTracker<'_> {
    fn can_add(&self, e: usize) -> bool {
        self.inner.iter().all(|t| t.can_add(e))
    }
    fn insert(&mut self, e: usize) {
        self.inner.iter_mut().for_each(|t| t.insert(e));
    }
}

impl<C: IndependenceSystem> IndependenceSystem for IntersectionSystem<C> {
    fn ground_size(&self) -> usize {
        self.constituents[0].ground_size()
    }
    fn is_independent(&self, s: &ElementSet) -> bool {
        self.constituents.iter().all(|c| c.is_independent(s))
    }
    fn tracker(&self) -> Box<dyn Tracker + '_> {
        Box::new(AllTracker {
            inner: self.constituents.iter().map(|c| c.tracker()).collect(),
        })
    }
    /// Every independent set is independent in each constituent, so the
    /// smallest constituent bound covers the largest independent set.
    fn rank_bound(&self) -> usize {
        self.constituents
            .iter()
            .map(|c| c.rank_bound())
            .min()
            .unwrap_or(0)
    }
}

/// Closed set of the constraint families shipped with the harness.
#[derive(Clone, Debug, PartialEq)]
pub enum Constraint {
    Uniform(UniformMatroid),
    Partition(PartitionMatroid),
    Seed(SeedMatroid),
    Intersection(IntersectionSystem<Constraint>),
}

impl Constraint {
    /// Number of intersected matroids (1 for a single matroid).
    pub fn p(&self) -> usize {
        match self {
            Constraint::Intersection(i) => i.constituents().iter().map(Constraint::p).sum(),
            _ => 1,
        }
    }

    /// Replaces the cardinality cap(s): `k` for uniform and seed matroids,
    /// the per-part cap for partition matroids, recursively for intersections.
    pub fn with_cap(&self, cap: usize) -> Constraint {
        match self {
            Constraint::Uniform(u) => Constraint::Uniform(UniformMatroid::new(u.n, cap)),
            Constraint::Partition(p) => Constraint::Partition(p.with_cap(cap)),
            Constraint::Seed(s) => Constraint::Seed(SeedMatroid { cap, ..s.clone() }),
            Constraint::Intersection(i) => Constraint::Intersection(IntersectionSystem {
                constituents: i.constituents.iter().map(|c| c.with_cap(cap)).collect(),
            }),
        }
    }

    fn as_dyn(&self) -> &dyn IndependenceSystem {
        match self {
            Constraint::Uniform(c) => c,
            Constraint::Partition(c) => c,
            Constraint::Seed(c) => c,
            Constraint::Intersection(c) => c,
        }
    }
}

impl IndependenceSystem for Constraint {
    fn ground_size(&self) -> usize {
        self.as_dyn().ground_size()
    }
    fn is_independent(&self, s: &ElementSet) -> bool {
        self.as_dyn().is_independent(s)
    }
    fn tracker(&self) -> Box<dyn Tracker + '_> {
        self.as_dyn().tracker()
    }
    fn rank_bound(&self) -> usize {
        self.as_dyn().rank_bound()
    }
}

/// Why a system failed [`verify_matroid`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatroidWitness {
    EmptySetDependent,
    /// `set` is independent but `subset ⊂ set` is not.
    NotHereditary {
        set: ElementSet,
        subset: ElementSet,
    },
    /// `a`, `b` independent, `|a| < |b|`, and no `x ∈ b \ a` extends `a`.
    Exchange {
        a: ElementSet,
        b: ElementSet,
    },
}

/// Largest ground set accepted by exhaustive verification.
pub const EXHAUSTIVE_LIMIT: usize = 16;

/// Checks the hereditary and exchange properties.
///
/// Exhaustive mode covers every pair of sets (n <= 16). It uses the
/// equivalent form "every maximal independent subset of any `Y` has the same
/// size": for each independent `A`, the largest `Y` of which `A` is a base is
/// `A` plus everything that cannot extend it, so comparing `|A|` with the
/// rank of that `Y` finds any exchange failure, and a maximum independent
/// subset of `Y` is the counterexample `B`. Sampled mode draws `samples`
/// random pairs of independent sets instead.
pub fn verify_matroid<S: IndependenceSystem + ?Sized>(
    system: &S,
    exhaustive: bool,
    samples: usize,
    seed: u64,
) -> Result<Option<MatroidWitness>> {
    let n = system.ground_size();
    if exhaustive {
        if n > EXHAUSTIVE_LIMIT {
            return Err(invalid(
                "exhaustive",
                format!("ground set of {n} exceeds {EXHAUSTIVE_LIMIT}"),
            ));
        }
        Ok(verify_exhaustive(system, n))
    } else {
        Ok(verify_sampled(system, n, samples, seed))
    }
}

fn verify_exhaustive<S: IndependenceSystem + ?Sized>(
    system: &S,
    n: usize,
) -> Option<MatroidWitness> {
    let total = 1usize << n;
    let set = |m: usize| ElementSet::from_mask(n, m as u64);
    let indep: Vec<bool> = (0..total).map(|m| system.is_independent(&set(m))).collect();
    if !indep[0] {
        return Some(MatroidWitness::EmptySetDependent);
    }
    for m in 0..total {
        if !indep[m] {
            continue;
        }
        for e in 0..n {
            let sub = m & !(1 << e);
            if sub != m && !indep[sub] {
                return Some(MatroidWitness::NotHereditary {
                    set: set(m),
                    subset: set(sub),
                });
            }
        }
    }
    // best[y] = a maximum-size independent subset of y
    let mut best = vec![0usize; total];
    for y in 1..total {
        if indep[y] {
            best[y] = y;
            continue;
        }
        let mut pick = 0usize;
        for e in 0..n {
            if y & (1 << e) != 0 {
                let cand = best[y & !(1 << e)];
                if cand.count_ones() > pick.count_ones() {
                    pick = cand;
                }
            }
        }
        best[y] = pick;
    }
    for a in 0..total {
        if !indep[a] {
            continue;
        }
        let mut closure = a;
        for e in 0..n {
            if a & (1 << e) == 0 && !indep[a | (1 << e)] {
                closure |= 1 << e;
            }
        }
        let b = best[closure];
        if b.count_ones() > a.count_ones() {
            return Some(MatroidWitness::Exchange {
                a: set(a),
                b: set(b),
            });
        }
    }
    None
}

fn random_independent<S: IndependenceSystem + ?Sized>(
    system: &S,
    n: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> ElementSet {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let target = rng.random_range(0..=n);
    let mut s = ElementSet::empty(n);
    for e in order {
        if s.len() >= target {
            break;
        }
        if system.is_independent(&s.with(e)) {
            s.insert(e);
        }
    }
    s
}

fn verify_sampled<S: IndependenceSystem + ?Sized>(
    system: &S,
    n: usize,
    samples: usize,
    seed: u64,
) -> Option<MatroidWitness> {
    if !system.is_independent(&ElementSet::empty(n)) {
        return Some(MatroidWitness::EmptySetDependent);
    }
    let mut rng = seeded_rng(seed);
    for _ in 0..samples {
        let probe = ElementSet::from_members(n, (0..n).filter(|_| rng.random::<bool>()));
        if system.is_independent(&probe) {
            for e in probe.iter() {
                let mut sub = probe.clone();
                sub.remove(e);
                if !system.is_independent(&sub) {
                    return Some(MatroidWitness::NotHereditary {
                        set: probe,
                        subset: sub,
                    });
                }
            }
        }
        let a = random_independent(system, n, &mut rng);
        let b = random_independent(system, n, &mut rng);
        if let Some(e) = b.iter().nth(rng.random_range(0..b.len().max(1))) {
            let mut sub = b.clone();
            sub.remove(e);
            if !system.is_independent(&sub) {
                return Some(MatroidWitness::NotHereditary {
                    set: b,
                    subset: sub,
                });
            }
        }
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        if small.len() < large.len()
            && !large
                .difference(&small)
                .iter()
                .any(|x| system.is_independent(&small.with(x)))
        {
            return Some(MatroidWitness::Exchange { a: small, b: large });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(n: usize, m: &[usize]) -> ElementSet {
        ElementSet::from_members(n, m.iter().copied())
    }

    #[test]
    fn uniform_membership() {
        let u = UniformMatroid::new(5, 2);
        assert!(u.is_independent(&set(5, &[0, 1])));
        assert!(!u.is_independent(&set(5, &[0, 1, 2])));
    }

    #[test]
    fn seed_matroid_one_product_per_node() {
        let s = SeedMatroid::new(4, 3, 2).unwrap();
        let u = 2;
        assert!(!s.is_independent(&set(12, &[s.element(u, 0), s.element(u, 1)])));
        assert!(s.is_independent(&set(12, &[s.element(u, 0), s.element(1, 2)])));
        assert!(!s.is_independent(&set(12, &[0, 4, 8])));
    }

    #[test]
    fn partition_per_part_cap() {
        let p = PartitionMatroid::new(vec![0, 0, 1, 1], 2, 1).unwrap();
        assert!(!p.is_independent(&set(4, &[0, 1])));
        assert!(p.is_independent(&set(4, &[0, 3])));
        assert!(PartitionMatroid::new(vec![0, 3], 2, 1).is_err());
    }

    #[test]
    fn counted_oracle_counts_and_checks_universe() {
        let o = IndependenceOracle::new(UniformMatroid::new(3, 1));
        assert!(o.is_independent(&set(3, &[1])).unwrap());
        let mut t = o.tracker();
        assert!(t.can_add(0));
        t.insert(0);
        assert!(!t.can_add(1));
        assert_eq!(o.check_count(), 3);
        assert!(matches!(
            o.is_independent(&set(9, &[8])),
            Err(Error::UniverseMismatch { .. })
        ));
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&UniformMatroid::new(10, 3)), 3);
        assert_eq!(rank(&SeedMatroid::new(5, 2, 4).unwrap()), 4);
    }

    #[test]
    fn verify_known_matroids() {
        let seed = SeedMatroid::new(4, 2, 3).unwrap();
        assert_eq!(verify_matroid(&seed, true, 0, 0).unwrap(), None);
        assert_eq!(
            verify_matroid(&UniformMatroid::new(6, 2), true, 0, 0).unwrap(),
            None
        );
        assert!(verify_matroid(&UniformMatroid::new(17, 2), true, 0, 0).is_err());
    }

    #[test]
    fn intersection_that_is_not_a_matroid() {
        // Bipartite matching on the path a-b-c-d: edges {ab, bc, cd} = 0,1,2.
        // Matroid 1 partitions by left endpoint side, matroid 2 by the other.
        let left = PartitionMatroid::new(vec![0, 1, 1], 2, 1).unwrap();
        let right = PartitionMatroid::new(vec![0, 0, 1], 2, 1).unwrap();
        let both = IntersectionSystem::new(vec![left, right]).unwrap();
        match verify_matroid(&both, true, 0, 0).unwrap() {
            Some(MatroidWitness::Exchange { a, b }) => {
                assert!(a.len() < b.len());
                assert!(both.is_independent(&a) && both.is_independent(&b));
                for x in b.difference(&a).iter() {
                    assert!(!both.is_independent(&a.with(x)));
                }
            }
            other => panic!("expected exchange failure, got {other:?}"),
        }
    }

    #[test]
    fn non_hereditary_system_is_caught() {
        struct ExactlyTwo;
        impl IndependenceSystem for ExactlyTwo {
            fn ground_size(&self) -> usize {
                3
            }
            fn is_independent(&self, s: &ElementSet) -> bool {
                s.is_empty() || s.len() == 2
            }
            fn tracker(&self) -> Box<dyn Tracker + '_> {
                Box::new(GenericTracker::new(self))
            }
        }
        assert!(matches!(
            verify_matroid(&ExactlyTwo, true, 0, 0).unwrap(),
            Some(MatroidWitness::NotHereditary { .. })
        ));
        assert!(verify_matroid(&ExactlyTwo, false, 200, 3)
            .unwrap()
            .is_some());
    }

    #[test]
    fn sampled_mode_accepts_partition_matroid() {
        let p = PartitionMatroid::new((0..30).map(|e| e % 4).collect(), 4, 3).unwrap();
        assert_eq!(verify_matroid(&p, false, 500, 11).unwrap(), None);
    }

    #[test]
    fn intersection_rank_bound_covers_every_independent_set() {
        let a = PartitionMatroid::new(vec![0, 0, 1, 1, 2, 2], 3, 1).unwrap();
        let b = PartitionMatroid::new(vec![0, 1, 0, 1, 0, 1], 2, 1).unwrap();
        let both = IntersectionSystem::new(vec![a, b]).unwrap();
        let max = (0u64..64)
            .map(|m| ElementSet::from_mask(6, m))
            .filter(|s| both.is_independent(s))
            .map(|s| s.len())
            .max()
            .unwrap();
        assert!(both.rank_bound() >= max);
        assert_eq!(both.p(), 2);
    }

    #[test]
    fn constraint_with_cap() {
        let c = Constraint::Partition(PartitionMatroid::new(vec![0, 1, 0, 1], 2, 1).unwrap());
        assert_eq!(c.with_cap(2).rank_bound(), 4);
        assert_eq!(c.p(), 1);
    }

    fn all_orders(n: usize) -> Vec<Vec<usize>> {
        fn rec(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rest.is_empty() {
                out.push(cur.clone());
                return;
            }
            for i in 0..rest.len() {
                let x = rest.remove(i);
                cur.push(x);
                rec(rest, cur, out);
                cur.pop();
                rest.insert(i, x);
            }
        }
        let mut out = Vec::new();
        rec(&mut (0..n).collect(), &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn matroid_greedy_base_size_is_order_invariant() {
        let systems: Vec<Constraint> = vec![
            Constraint::Uniform(UniformMatroid::new(8, 3)),
            Constraint::Partition(
                PartitionMatroid::new(vec![0, 1, 2, 0, 1, 2, 0, 0], 3, 2).unwrap(),
            ),
            Constraint::Seed(SeedMatroid::new(4, 2, 3).unwrap()),
        ];
        for sys in &systems {
            let r = rank(sys);
            for order in all_orders(8) {
                let mut t = sys.tracker();
                let mut size = 0;
                for e in order {
                    if t.can_add(e) {
                        t.insert(e);
                        size += 1;
                    }
                }
                assert_eq!(size, r);
            }
        }
    }

    fn arb_partition(n: usize) -> impl Strategy<Value = PartitionMatroid> {
        (1usize..4, 0usize..3).prop_flat_map(move |(h, cap)| {
            proptest::collection::vec(0..h, n)
                .prop_map(move |parts| PartitionMatroid::new(parts, h, cap).unwrap())
        })
    }

    proptest! {
        #[test]
        fn hereditary_on_random_subsets(
            p in arb_partition(12),
            masks in proptest::collection::vec(any::<u64>(), 50),
        ) {
            let q = PartitionMatroid::new((0..12).map(|e| e % 3).collect(), 3, 2).unwrap();
            let seed = SeedMatroid::new(4, 3, 2).unwrap();
            let both = IntersectionSystem::new(vec![p.clone(), q]).unwrap();
            let systems: [&dyn IndependenceSystem; 3] = [&p, &seed, &both];
            for sys in systems {
                prop_assert!(sys.is_independent(&ElementSet::empty(12)));
                for &m in &masks {
                    let b = ElementSet::from_mask(12, m);
                    if sys.is_independent(&b) {
                        let a = ElementSet::from_mask(12, m & m.rotate_left(7));
                        prop_assert!(sys.is_independent(&a));
                    }
                }
            }
        }

        #[test]
        fn single_constituent_intersection_is_identity(p in arb_partition(10)) {
            let one = IntersectionSystem::new(vec![p.clone()]).unwrap();
            for m in 0u64..1024 {
                let s = ElementSet::from_mask(10, m);
                prop_assert_eq!(one.is_independent(&s), p.is_independent(&s));
            }
        }
    }
}
