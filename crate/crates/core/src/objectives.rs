//! Objective functions: weighted cut (network monitoring), RR-set based
//! multi-product marketing revenue, and modular/coverage fixtures.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::model::SetFunction;
use crate::set::ElementSet;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    /// Edge weight, or the activation probability `p_uv` for influence graphs.
    pub w: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n_nodes: usize,
    directed: bool,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Validates endpoints and weights (finite, non-negative).
    pub fn new(n_nodes: usize, directed: bool, edges: Vec<Edge>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.u >= n_nodes || e.v >= n_nodes {
                return Err(invalid(
                    "edges",
                    format!("edge {i} ({}, {}) has an endpoint >= {n_nodes}", e.u, e.v),
                ));
            }
            if !e.w.is_finite() || e.w < 0.0 {
                return Err(invalid("edges", format!("edge {i} has weight {}", e.w)));
            }
        }
        Ok(WeightedGraph {
            n_nodes,
            directed,
            edges,
        })
    }

    pub fn undirected(n_nodes: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        Self::new(n_nodes, false, triples(edges))
    }

    pub fn directed(n_nodes: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        Self::new(n_nodes, true, triples(edges))
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub(crate) fn edges_mut(&mut self) -> &mut [Edge] {
        &mut self.edges
    }

    /// Errors unless every weight is a probability.
    pub fn validate_probabilities(&self) -> Result<()> {
        match self.edges.iter().position(|e| e.w > 1.0) {
            Some(i) => Err(invalid(
                "probabilities",
                format!("edge {i} has p = {} > 1", self.edges[i].w),
            )),
            None => Ok(()),
        }
    }

    /// Same edges as a directed graph; undirected edges become two arcs.
    pub fn to_directed(&self) -> WeightedGraph {
        if self.directed {
            return self.clone();
        }
        let edges = self
            .edges
            .iter()
            .flat_map(|e| {
                [
                    *e,
                    Edge {
                        u: e.v,
                        v: e.u,
                        w: e.w,
                    },
                ]
            })
            .collect();
        WeightedGraph {
            n_nodes: self.n_nodes,
            directed: true,
            edges,
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_nodes];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }
}

fn triples(edges: Vec<(usize, usize, f64)>) -> Vec<Edge> {
    edges
        .into_iter()
        .map(|(u, v, w)| Edge { u, v, w })
        .collect()
}

/// Weighted cut `f(S) = Σ_{(u,v) ∈ E, u ∈ S, v ∉ S} w(u,v)`.
///
/// Undirected edges count once whenever exactly one endpoint is in `S`;
/// directed edges count only in their own orientation.
#[derive(Clone, Debug)]
pub struct CutObjective {
    out_adj: Vec<Vec<(usize, f64)>>,
    in_adj: Vec<Vec<(usize, f64)>>,
}

impl CutObjective {
    pub fn new(graph: &WeightedGraph) -> Self {
        let n = graph.n_nodes();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for e in graph.edges() {
            out_adj[e.u].push((e.v, e.w));
            in_adj[e.v].push((e.u, e.w));
            if !graph.is_directed() {
                out_adj[e.v].push((e.u, e.w));
                in_adj[e.u].push((e.v, e.w));
            }
        }
        CutObjective { out_adj, in_adj }
    }
}

impl SetFunction for CutObjective {
    fn ground_size(&self) -> usize {
        self.out_adj.len()
    }

    fn value(&self, s: &ElementSet) -> f64 {
        s.iter()
            .flat_map(|u| self.out_adj[u].iter())
            .filter(|(v, _)| !s.contains(*v))
            .map(|(_, w)| w)
            .fold(0.0, |acc, w| acc + w)
    }

    fn gain(&self, base: &ElementSet, _base_value: f64, e: usize) -> f64 {
        let leaving: f64 = self.out_adj[e]
            .iter()
            .filter(|&&(v, _)| v != e && !base.contains(v))
            .map(|(_, w)| w)
            .fold(0.0, |acc, w| acc + w);
        let absorbed: f64 = self.in_adj[e]
            .iter()
            .filter(|&&(u, _)| base.contains(u))
            .map(|(_, w)| w)
            .fold(0.0, |acc, w| acc + w);
        leaving - absorbed
    }
}

/// A collection `Z` of reverse-reachable sets over nodes `0..n_nodes`.
#[derive(Clone, Debug, PartialEq)]
pub struct RRSetCollection {
    n_nodes: usize,
    sets: Vec<Vec<usize>>,
    seed: Option<u64>,
}

impl RRSetCollection {
    /// Members are deduplicated and sorted.
    pub fn new(n_nodes: usize, sets: Vec<Vec<usize>>, seed: Option<u64>) -> Result<Self> {
        let mut sets = sets;
        for (i, r) in sets.iter_mut().enumerate() {
            if let Some(&bad) = r.iter().find(|&&v| v >= n_nodes) {
                return Err(invalid(
                    "rr_sets",
                    format!("set {i} contains node {bad} >= {n_nodes}"),
                ));
            }
            r.sort_unstable();
            r.dedup();
        }
        Ok(RRSetCollection {
            n_nodes,
            sets,
            seed,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// `f̂(A) = Σ_{R ∈ Z} |V| · min{1, |A ∩ R|} / |Z|`; 0 for an empty collection.
    pub fn estimate(&self, a: &ElementSet) -> f64 {
        if self.sets.is_empty() {
            return 0.0;
        }
        let hit = self
            .sets
            .iter()
            .filter(|r| r.iter().any(|&v| a.contains(v)))
            .count();
        self.n_nodes as f64 * hit as f64 / self.sets.len() as f64
    }
}

/// Free-function form of [`RRSetCollection::estimate`].
pub fn rr_estimate(z: &RRSetCollection, a: &ElementSet) -> f64 {
    z.estimate(a)
}

/// Multi-product viral-marketing revenue over `V × [m]`, element `(u, i)` at
/// id `u * m + i`:
///
/// `f(S) = Σ_i f̂_i(S_i) + (B − Σ_i Σ_{v ∈ S_i} c(v))` for `S ≠ ∅`, and
/// `f(∅) = 0` exactly.
#[derive(Clone, Debug)]
pub struct MarketingObjective {
    nodes: usize,
    collections: Vec<RRSetCollection>,
    costs: Vec<f64>,
    budget: f64,
    // product -> node -> ids of RR-sets containing the node
    index: Vec<Vec<Vec<u32>>>,
}

impl MarketingObjective {
    /// One RR-set collection per product. `budget = None` selects the
    /// default `B = m · Σ_u c(u)`.
    pub fn new(
        collections: Vec<RRSetCollection>,
        costs: Vec<f64>,
        budget: Option<f64>,
    ) -> Result<Self> {
        let nodes = costs.len();
        if collections.is_empty() {
            return Err(invalid(
                "collections",
                "need one RR-set collection per product",
            ));
        }
        for (i, z) in collections.iter().enumerate() {
            if z.n_nodes() != nodes {
                return Err(invalid(
                    "collections",
                    format!(
                        "product {i} collection is over {} nodes, costs cover {nodes}",
                        z.n_nodes()
                    ),
                ));
            }
            if z.is_empty() {
                return Err(invalid(
                    "collections",
                    format!("product {i} has no RR-sets"),
                ));
            }
        }
        if let Some(c) = costs.iter().find(|c| !c.is_finite() || **c < 0.0) {
            return Err(invalid(
                "costs",
                format!("cost {c} is not a finite non-negative number"),
            ));
        }
        let m = collections.len();
        let budget = budget.unwrap_or_else(|| m as f64 * costs.iter().sum::<f64>());
        let index = collections
            .iter()
            .map(|z| {
                let mut idx = vec![Vec::new(); nodes];
                for (rid, r) in z.sets().iter().enumerate() {
                    for &v in r {
                        idx[v].push(rid as u32);
                    }
                }
                idx
            })
            .collect();
        Ok(MarketingObjective {
            nodes,
            collections,
            costs,
            budget,
            index,
        })
    }

    pub fn products(&self) -> usize {
        self.collections.len()
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn element(&self, node: usize, product: usize) -> usize {
        node * self.products() + product
    }

    fn split(&self, e: usize) -> (usize, usize) {
        (e / self.products(), e % self.products())
    }

    fn scale(&self, product: usize) -> f64 {
        self.nodes as f64 / self.collections[product].len() as f64
    }
}

impl SetFunction for MarketingObjective {
    fn ground_size(&self) -> usize {
        self.nodes * self.products()
    }

    fn value(&self, s: &ElementSet) -> f64 {
        if s.is_empty() {
            return 0.0;
        }
        let m = self.products();
        let mut covered: Vec<Vec<bool>> = self
            .collections
            .iter()
            .map(|z| vec![false; z.len()])
            .collect();
        let mut hits = vec![0usize; m];
        let mut spent = 0.0;
        for e in s.iter() {
            let (u, i) = self.split(e);
            spent += self.costs[u];
            for &rid in &self.index[i][u] {
                let slot = &mut covered[i][rid as usize];
                if !*slot {
                    *slot = true;
                    hits[i] += 1;
                }
            }
        }
        let spread: f64 = (0..m)
            .map(|i| self.scale(i) * hits[i] as f64)
            .fold(0.0, |acc, x| acc + x);
        spread + (self.budget - spent)
    }

    fn gain(&self, base: &ElementSet, base_value: f64, e: usize) -> f64 {
        if base.is_empty() {
            return self.value(&base.with(e)) - base_value;
        }
        let m = self.products();
        let (u, i) = self.split(e);
        let sets = self.collections[i].sets();
        let fresh = self.index[i][u]
            .iter()
            .filter(|&&rid| !sets[rid as usize].iter().any(|&v| base.contains(v * m + i)))
            .count();
        self.scale(i) * fresh as f64 - self.costs[u]
    }
}

/// `f(S) = Σ_{e ∈ S} w(e)`; weights may be negative.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularObjective {
    weights: Vec<f64>,
}

impl ModularObjective {
    pub fn new(weights: Vec<f64>) -> Self {
        ModularObjective { weights }
    }
}

impl SetFunction for ModularObjective {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }
    fn value(&self, s: &ElementSet) -> f64 {
        s.iter()
            .map(|e| self.weights[e])
            .fold(0.0, |acc, w| acc + w)
    }
    fn gain(&self, _base: &ElementSet, _base_value: f64, e: usize) -> f64 {
        self.weights[e]
    }
}

/// Weighted coverage: element `e` covers `covers[e]`; `f(S)` is the total
/// weight of covered items. Monotone and submodular.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageObjective {
    item_weights: Vec<f64>,
    covers: Vec<Vec<usize>>,
}

impl CoverageObjective {
    pub fn new(item_weights: Vec<f64>, covers: Vec<Vec<usize>>) -> Result<Self> {
        let items = item_weights.len();
        if covers.iter().flatten().any(|&x| x >= items) {
            return Err(invalid("covers", "item id out of range"));
        }
        if item_weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(invalid("item_weights", "weights must be finite and >= 0"));
        }
        Ok(CoverageObjective {
            item_weights,
            covers,
        })
    }
}

impl SetFunction for CoverageObjective {
    fn ground_size(&self) -> usize {
        self.covers.len()
    }
    fn value(&self, s: &ElementSet) -> f64 {
        let mut hit = vec![false; self.item_weights.len()];
        for e in s.iter() {
            for &x in &self.covers[e] {
                hit[x] = true;
            }
        }
        hit.iter()
            .zip(&self.item_weights)
            .filter(|(h, _)| **h)
            .map(|(_, w)| w)
            .fold(0.0, |acc, w| acc + w)
    }
}
