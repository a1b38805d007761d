#![allow(dead_code)]

use std::cell::Cell;

use twinopt_core::constraints::{IntersectionSystem, PartitionMatroid};
use twinopt_core::generators::{assign_groups, assign_weights_uniform, gen_er, seeded_rng};
use twinopt_core::objectives::{CoverageObjective, CutObjective};
use twinopt_core::{ElementSet, IndependenceSystem, SetFunction};

use rand::Rng;

/// Cut objective on ER(n, 0.5) with U[0,1] weights.
pub fn random_cut(n: usize, seed: u64) -> CutObjective {
    let g = gen_er(n, 0.5, seed).unwrap();
    let g = assign_weights_uniform(&g, 0.0, 1.0, seed ^ 0x5eed).unwrap();
    CutObjective::new(&g)
}

pub fn random_partition(n: usize, h: usize, cap: usize, seed: u64) -> PartitionMatroid {
    PartitionMatroid::new(assign_groups(n, h, seed).unwrap(), h, cap).unwrap()
}

pub fn random_intersection(n: usize, seed: u64) -> IntersectionSystem<PartitionMatroid> {
    IntersectionSystem::new(vec![
        random_partition(n, 2, 2, seed),
        random_partition(n, 3, 2, seed.wrapping_add(7_777)),
    ])
    .unwrap()
}

/// Random weighted coverage: every element covers a random subset of `items`.
pub fn random_coverage(n: usize, items: usize, seed: u64) -> CoverageObjective {
    let mut rng = seeded_rng(seed);
    let weights = (0..items).map(|_| rng.random::<f64>()).collect();
    let covers = (0..n)
        .map(|_| (0..items).filter(|_| rng.random::<f64>() < 0.3).collect())
        .collect();
    CoverageObjective::new(weights, covers).unwrap()
}

/// Brute force over all 2^n subsets, independent of the solver's DFS.
/// Returns the lexicographically smallest maximizer.
pub fn brute_force_opt<F: SetFunction, C: IndependenceSystem>(f: &F, ind: &C) -> (ElementSet, f64) {
    let n = f.ground_size();
    let mut best: Option<(ElementSet, f64)> = None;
    for mask in 0u64..(1 << n) {
        let s = ElementSet::from_mask(n, mask);
        if !ind.is_independent(&s) {
            continue;
        }
        let v = f.value(&s);
        let better = match &best {
            None => true,
            Some((b, bv)) => v > *bv || (v == *bv && s.lex_cmp(b).is_lt()),
        };
        if better {
            best = Some((s, v));
        }
    }
    best.unwrap()
}

/// Counts every call into the wrapped function, independently of the oracle.
pub struct Counting<F> {
    pub inner: F,
    pub calls: Cell<u64>,
}

impl<F> Counting<F> {
    pub fn new(inner: F) -> Self {
        Counting {
            inner,
            calls: Cell::new(0),
        }
    }
}

impl<F: SetFunction> SetFunction for Counting<F> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }
    fn value(&self, s: &ElementSet) -> f64 {
        self.calls.set(self.calls.get() + 1);
        self.inner.value(s)
    }
    fn gain(&self, base: &ElementSet, base_value: f64, e: usize) -> f64 {
        self.calls.set(self.calls.get() + 1);
        self.inner.gain(base, base_value, e)
    }
}

/// `⌈log_{1+ε}((1+ε)·r/ε)⌉`.
pub fn pass_bound(epsilon: f64, r: usize) -> u64 {
    (((1.0 + epsilon) * r as f64 / epsilon).ln() / (1.0 + epsilon).ln()).ceil() as u64
}
