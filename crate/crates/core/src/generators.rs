//! Seeded instance generators: Erdős–Rényi and Barabási–Albert graphs,
//! uniform weights, random groupings, and RR-set sampling under the
//! independent cascade model, plus an exact small-graph spread oracle.
//!
//! Every generator is a deterministic function of its parameters and seed.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::objectives::{Edge, RRSetCollection, WeightedGraph};
use crate::set::ElementSet;

/// Identifier of the generator behind [`seeded_rng`], recorded in reports.
pub const RNG_ALGORITHM: &str = "chacha8";

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent child seed `index` of `master` (SplitMix64 finalizer).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(index.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(name, format!("{p} is not in [0, 1]")))
    }
}

/// G(n, p): each unordered pair `{u, v}` is an edge with probability `p`.
/// Edges carry unit weight.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<WeightedGraph> {
    check_probability("p", p)?;
    let mut rng = seeded_rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push(Edge { u, v, w: 1.0 });
            }
        }
    }
    WeightedGraph::new(n, false, edges)
}

/// Preferential attachment: an `m0`-clique, then each new node links to `m`
/// distinct existing nodes chosen with probability proportional to degree.
/// Duplicate targets are resampled.
pub fn gen_ba(n: usize, m0: usize, m: usize, seed: u64) -> Result<WeightedGraph> {
    if m > m0 || m0 > n {
        return Err(invalid(
            "m0",
            format!("need m <= m0 <= n, got m = {m}, m0 = {m0}, n = {n}"),
        ));
    }
    let mut rng = seeded_rng(seed);
    let mut edges = Vec::new();
    let mut endpoints: Vec<usize> = Vec::new();
    for u in 0..m0 {
        for v in u + 1..m0 {
            edges.push(Edge { u, v, w: 1.0 });
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    let mut chosen = Vec::with_capacity(m);
    for v in m0..n {
        chosen.clear();
        while chosen.len() < m {
            let t = if endpoints.is_empty() {
                rng.random_range(0..v)
            } else {
                endpoints[rng.random_range(0..endpoints.len())]
            };
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.push(Edge { u: t, v, w: 1.0 });
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    WeightedGraph::new(n, false, edges)
}

/// Replaces every edge weight by an i.i.d. draw from `U[lo, hi)` (`lo` when `lo == hi`).
pub fn assign_weights_uniform(
    g: &WeightedGraph,
    lo: f64,
    hi: f64,
    seed: u64,
) -> Result<WeightedGraph> {
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
        return Err(invalid(
            "weights",
            format!("need 0 <= lo <= hi, got [{lo}, {hi}]"),
        ));
    }
    let mut rng = seeded_rng(seed);
    let mut out = g.clone();
    for e in out.edges_mut() {
        e.w = lo + (hi - lo) * rng.random::<f64>();
    }
    Ok(out)
}

/// Assigns each of `n` nodes uniformly to one of `h` groups.
pub fn assign_groups(n: usize, h: usize, seed: u64) -> Result<Vec<usize>> {
    if h == 0 {
        return Err(invalid("h", "need at least one group"));
    }
    let mut rng = seeded_rng(seed);
    Ok((0..n).map(|_| rng.random_range(0..h)).collect())
}

/// Sets `p_uv = 1 / |N_in(v)|` on every arc of a directed graph.
pub fn set_indegree_probabilities(g: &WeightedGraph) -> Result<WeightedGraph> {
    if !g.is_directed() {
        return Err(invalid(
            "graph",
            "in-degree probabilities need a directed graph",
        ));
    }
    let mut indeg = vec![0usize; g.n_nodes()];
    for e in g.edges() {
        indeg[e.v] += 1;
    }
    let mut out = g.clone();
    for e in out.edges_mut() {
        e.w = 1.0 / indeg[e.v] as f64;
    }
    Ok(out)
}

/// Samples `count` RR-sets under the independent cascade model.
///
/// Each sample picks a uniform root and walks in-arcs backwards, flipping
/// each arc's coin (live with probability `w`) the first time its head is
/// expanded. This draws exactly the reverse-reachable set of the root in a
/// live-edge realization without materializing the realization. Undirected
/// graphs are treated as symmetric arc pairs.
pub fn gen_rr_sets(g: &WeightedGraph, count: usize, seed: u64) -> Result<RRSetCollection> {
    g.validate_probabilities()?;
    if count == 0 {
        return Err(invalid("count", "need at least one RR-set"));
    }
    let n = g.n_nodes();
    if n == 0 {
        return Err(invalid("graph", "graph has no nodes"));
    }
    let directed = g.to_directed();
    let mut in_adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in directed.edges() {
        in_adj[e.v].push((e.u, e.w));
    }
    let mut rng = seeded_rng(seed);
    let mut stamp = vec![0u32; n];
    let mut queue = VecDeque::new();
    let mut sets = Vec::with_capacity(count);
    for sample in 0..count {
        let mark = sample as u32 + 1;
        let root = rng.random_range(0..n);
        let mut members = vec![root];
        stamp[root] = mark;
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            for &(u, p) in &in_adj[x] {
                if rng.random::<f64>() < p && stamp[u] != mark {
                    stamp[u] = mark;
                    members.push(u);
                    queue.push_back(u);
                }
            }
        }
        sets.push(members);
    }
    RRSetCollection::new(n, sets, Some(seed))
}

/// Largest edge count accepted by [`ic_exact_spread`].
pub const EXACT_SPREAD_EDGE_LIMIT: usize = 20;

/// Exact expected number of nodes reachable from `a` when each edge is live
/// independently with probability `w`, by enumerating all live-edge patterns.
pub fn ic_exact_spread(g: &WeightedGraph, a: &ElementSet) -> Result<f64> {
    g.validate_probabilities()?;
    let m = g.edge_count();
    if m > EXACT_SPREAD_EDGE_LIMIT {
        return Err(invalid(
            "graph",
            format!("{m} edges exceeds the enumeration limit of {EXACT_SPREAD_EDGE_LIMIT}"),
        ));
    }
    let n = g.n_nodes();
    let edges = g.edges();
    let mut total = 0.0;
    for live in 0u32..(1u32 << m) {
        let mut prob = 1.0;
        for (i, e) in edges.iter().enumerate() {
            prob *= if live & (1 << i) != 0 { e.w } else { 1.0 - e.w };
        }
        if prob == 0.0 {
            continue;
        }
        let mut reached = a.clone();
        let mut frontier: Vec<usize> = a.iter().collect();
        while let Some(x) = frontier.pop() {
            for (i, e) in edges.iter().enumerate() {
                if live & (1 << i) == 0 {
                    continue;
                }
                let next = if e.u == x {
                    Some(e.v)
                } else if !g.is_directed() && e.v == x {
                    Some(e.u)
                } else {
                    None
                };
                if let Some(y) = next {
                    if reached.insert(y) {
                        frontier.push(y);
                    }
                }
            }
        }
        debug_assert!(reached.universe() == n);
        total += prob * reached.len() as f64;
    }
    Ok(total)
}
