//! Vertex- and edge-weighted graphs, vertex subsets and the `(F, G)` pair.
//!
//! Edge weights are kept in a dense symmetric `n × n` matrix with zeros off
//! the edge set, so `ρ_G(u, v) = 1_G(u, v)·ρ(u, v)` is a single lookup and
//! subset sums are plain row scans. This is sized for desk-scale instances
//! (a few thousand vertices).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for threshold comparisons (mass floors, identities).
pub const TOL: f64 = 1e-9;

/// Number of unordered vertex pairs, `n(n-1)/2`, as a float.
pub fn pair_count(n: usize) -> f64 {
    (n as f64) * (n as f64 - 1.0) / 2.0
}

/// A sorted, duplicate-free set of vertex indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSubset(Vec<usize>);

impl VertexSubset {
    /// Builds a subset of `{0..n-1}`; duplicates are merged.
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if let Some(&last) = v.last() {
            if last >= n {
                return Err(Error::Input(format!(
                    "vertex index {last} out of range for n = {n}"
                )));
            }
        }
        Ok(Self(v))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn range(r: std::ops::Range<usize>) -> Self {
        Self(r.collect())
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        Self(
            mask.iter()
                .enumerate()
                .filter_map(|(i, &m)| m.then_some(i))
                .collect(),
        )
    }

    /// Caller guarantees `v` is sorted and duplicate-free.
    pub(crate) fn from_sorted(v: Vec<usize>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Self(v)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v: Vec<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.0 {
            m[v] = true;
        }
        m
    }

    pub fn check_bounds(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&last) if last >= n => Err(Error::Input(format!(
                "vertex index {last} out of range for n = {n}"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for VertexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub rho: f64,
}

/// Factors applied by [`WeightedGraph::normalize`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizationScales {
    pub mu_scale: f64,
    pub rho_scale: f64,
}

impl NormalizationScales {
    pub fn is_identity(&self) -> bool {
        (self.mu_scale - 1.0).abs() <= 1e-12 && (self.rho_scale - 1.0).abs() <= 1e-12
    }
}

/// Read-only view of one edge set (either `G` or a subgraph `F`) together
/// with the shared vertex weights.
#[derive(Clone, Copy)]
pub struct EdgeView<'a> {
    n: usize,
    mu: &'a [f64],
    w: &'a [f64],
}

impl<'a> EdgeView<'a> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu(&self) -> &'a [f64] {
        self.mu
    }

    /// Dense row-major weight matrix (zero off the edge set).
    pub fn matrix(&self) -> &'a [f64] {
        self.w
    }

    pub fn row(&self, u: usize) -> &'a [f64] {
        &self.w[u * self.n..(u + 1) * self.n]
    }

    pub fn rho(&self, u: usize, v: usize) -> f64 {
        self.w[u * self.n + v]
    }

    pub fn mu_sum(&self, s: &VertexSubset) -> Result<f64> {
        s.check_bounds(self.n)?;
        Ok(s.iter().fold(0.0, |m, v| m + self.mu[v]))
    }

    /// `Σ_{u∈A, v∈B} ρ_H(u, v)` over ordered pairs. For disjoint `A`, `B`
    /// every edge between them is counted once; `rho_sum(V, V)` counts every
    /// edge twice.
    pub fn rho_sum(&self, a: &VertexSubset, b: &VertexSubset) -> Result<f64> {
        a.check_bounds(self.n)?;
        b.check_bounds(self.n)?;
        Ok(self.rho_sum_unchecked(a.members(), b.members()))
    }

    pub(crate) fn rho_sum_unchecked(&self, a: &[usize], b: &[usize]) -> f64 {
        let mut total = 0.0;
        for &u in a {
            let row = self.row(u);
            total += b.iter().map(|&v| row[v]).sum::<f64>();
        }
        total
    }

    /// `ρ_H(A, B) / (μ(A)·μ(B))` for nonempty disjoint `A`, `B`.
    pub fn weighted_density(&self, a: &VertexSubset, b: &VertexSubset) -> Result<f64> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::Precondition(
                "weighted density needs nonempty sets".into(),
            ));
        }
        if !a.is_disjoint(b) {
            return Err(Error::Precondition(
                "weighted density needs disjoint sets".into(),
            ));
        }
        let r = self.rho_sum(a, b)?;
        Ok(r / (self.mu_sum(a)? * self.mu_sum(b)?))
    }
}

/// Undirected graph with positive vertex weights `μ` and positive edge
/// weights `ρ` on its edge set. Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    mu: Vec<f64>,
    edges: Vec<Edge>,
    rho: Vec<f64>,
}

impl WeightedGraph {
    /// Validates and builds a graph with `n = mu.len()` vertices. Edges may
    /// be given in either orientation but must be distinct non-loops.
    pub fn new(mu: Vec<f64>, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let n = mu.len();
        if n == 0 {
            return Err(Error::Input("graph must have at least one vertex".into()));
        }
        for (v, &m) in mu.iter().enumerate() {
            if !(m.is_finite() && m > 0.0) {
                return Err(Error::Input(format!(
                    "vertex weight mu[{v}] = {m} must be positive and finite"
                )));
            }
        }
        let mut rho = vec![0.0; n * n];
        let mut list = Vec::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::Input(format!(
                    "edge ({u}, {v}) has an endpoint out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::Input(format!("self-loop at vertex {u}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::Input(format!(
                    "edge ({u}, {v}) weight {w} must be positive and finite"
                )));
            }
            let (u, v) = (u.min(v), u.max(v));
            if rho[u * n + v] != 0.0 {
                return Err(Error::Input(format!("duplicate edge ({u}, {v})")));
            }
            rho[u * n + v] = w;
            rho[v * n + u] = w;
            list.push(Edge { u, v, rho: w });
        }
        list.sort_by_key(|e| (e.u, e.v));
        let g = Self {
            mu,
            edges: list,
            rho,
        };
        let heavy = g.heavy_vertices();
        if !heavy.is_empty() {
            log::warn!(
                "{} vertices carry more than a tenth of the total vertex weight (first: {})",
                heavy.len(),
                heavy[0]
            );
        }
        Ok(g)
    }

    /// Unit vertex and edge weights.
    pub fn unweighted(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(vec![1.0; n], edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    /// `K_n` with unit weights.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::unweighted(n, edges).expect("complete graph is valid")
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Edges sorted by `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn rho(&self, u: usize, v: usize) -> f64 {
        self.rho[u * self.n() + v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rho(u, v) > 0.0
    }

    pub fn view(&self) -> EdgeView<'_> {
        EdgeView {
            n: self.n(),
            mu: &self.mu,
            w: &self.rho,
        }
    }

    pub fn total_mu(&self) -> f64 {
        self.mu.iter().sum()
    }

    pub fn max_mu(&self) -> f64 {
        self.mu.iter().copied().fold(0.0, f64::max)
    }

    /// `Σ ρ` over unordered edges (half of `ρ_G(V, V)`).
    pub fn rho_total(&self) -> f64 {
        self.edges.iter().map(|e| e.rho).sum()
    }

    /// Vertices with `μ(v) > μ(V)/10`.
    pub fn heavy_vertices(&self) -> Vec<usize> {
        let cap = self.total_mu() / 10.0;
        (0..self.n()).filter(|&v| self.mu[v] > cap).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n()];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    pub fn mu_sum(&self, s: &VertexSubset) -> Result<f64> {
        self.view().mu_sum(s)
    }

    pub fn rho_sum(&self, a: &VertexSubset, b: &VertexSubset) -> Result<f64> {
        self.view().rho_sum(a, b)
    }

    pub fn weighted_density(&self, a: &VertexSubset, b: &VertexSubset) -> Result<f64> {
        self.view().weighted_density(a, b)
    }

    /// Same edge set with `μ ← mu_scale·μ` and `ρ ← rho_scale·ρ`.
    pub fn scaled(&self, mu_scale: f64, rho_scale: f64) -> Result<Self> {
        Self::new(
            self.mu.iter().map(|m| m * mu_scale).collect(),
            self.edges.iter().map(|e| (e.u, e.v, e.rho * rho_scale)),
        )
    }

    /// Replaces the edge weights, keeping vertices, `μ` and the edge set.
    pub fn reweighted(&self, mut rho: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        Self::new(
            self.mu.clone(),
            self.edges.iter().map(|e| (e.u, e.v, rho(e.u, e.v))),
        )
    }

    /// Rescales so that `μ(V) = n` and `Σ_{unordered} ρ = n(n-1)/2`, i.e.
    /// `⟨1, 1⟩ = 1` in the `ρ`-weighted inner product.
    pub fn normalize(&self) -> Result<(Self, NormalizationScales)> {
        if self.edges.is_empty() {
            return Err(Error::Precondition(
                "cannot normalize edge weights of an edgeless graph".into(),
            ));
        }
        let n = self.n();
        let scales = NormalizationScales {
            mu_scale: n as f64 / self.total_mu(),
            rho_scale: pair_count(n) / self.rho_total(),
        };
        Ok((self.scaled(scales.mu_scale, scales.rho_scale)?, scales))
    }

    pub fn is_normalized(&self) -> bool {
        let n = self.n();
        !self.edges.is_empty()
            && (self.total_mu() - n as f64).abs() <= 1e-9 * n as f64
            && (self.rho_total() - pair_count(n)).abs() <= 1e-9 * pair_count(n).max(1.0)
    }
}

/// A host graph `G` with an edge subset `F ⊆ E(G)`. `F` inherits `μ` and
/// `ρ`, so `ρ_F(u, v) = 1_F(u, v)·ρ(u, v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgraphPair {
    host: WeightedGraph,
    f_edges: Vec<(usize, usize)>,
    f_rho: Vec<f64>,
}

impl SubgraphPair {
    pub fn new(host: WeightedGraph, f_edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = host.n();
        let mut f_rho = vec![0.0; n * n];
        let mut list = Vec::new();
        for (u, v) in f_edges {
            if u >= n || v >= n || u == v {
                return Err(Error::Input(format!("F edge ({u}, {v}) is not a valid pair")));
            }
            let (u, v) = (u.min(v), u.max(v));
            let w = host.rho(u, v);
            if w == 0.0 {
                return Err(Error::Input(format!("F edge ({u}, {v}) is not an edge of G")));
            }
            if f_rho[u * n + v] != 0.0 {
                return Err(Error::Input(format!("duplicate F edge ({u}, {v})")));
            }
            f_rho[u * n + v] = w;
            f_rho[v * n + u] = w;
            list.push((u, v));
        }
        list.sort_unstable();
        Ok(Self {
            host,
            f_edges: list,
            f_rho,
        })
    }

    /// `F = G`.
    pub fn full(host: WeightedGraph) -> Self {
        let edges: Vec<_> = host.edges().iter().map(|e| (e.u, e.v)).collect();
        Self::new(host, edges).expect("host edges form a valid subgraph")
    }

    pub fn host(&self) -> &WeightedGraph {
        &self.host
    }

    pub fn n(&self) -> usize {
        self.host.n()
    }

    pub fn f_edges(&self) -> &[(usize, usize)] {
        &self.f_edges
    }

    pub fn in_f(&self, u: usize, v: usize) -> bool {
        self.f_rho[u * self.n() + v] > 0.0
    }

    pub fn f_view(&self) -> EdgeView<'_> {
        EdgeView {
            n: self.n(),
            mu: self.host.mu(),
            w: &self.f_rho,
        }
    }

    pub fn g_view(&self) -> EdgeView<'_> {
        self.host.view()
    }

    /// Same pair over the normalized host.
    pub fn normalize(&self) -> Result<(Self, NormalizationScales)> {
        let (host, scales) = self.host.normalize()?;
        Ok((Self::new(host, self.f_edges.iter().copied())?, scales))
    }
}
