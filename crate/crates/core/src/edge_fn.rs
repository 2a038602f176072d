//! Real functions on unordered vertex pairs and the `ρ`-weighted inner
//! product `⟨g, h⟩ = C(n,2)⁻¹ Σ_{u<v} g(u,v) h(u,v) ρ_G(u,v)`.

use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::graph::{pair_count, SubgraphPair, VertexSubset, WeightedGraph};

/// Dense function on the `C(n,2)` unordered pairs of an `n`-vertex graph.
/// Symmetric by construction; unset pairs are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeFunction {
    n: usize,
    values: Vec<f64>,
}

#[inline]
fn pair_index(n: usize, u: usize, v: usize) -> usize {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    debug_assert!(u != v && v < n);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

impl EdgeFunction {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            values: vec![0.0; n * n.saturating_sub(1) / 2],
        }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        let mut f = Self::zeros(n);
        f.values.fill(c);
        f
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                values.push(f(u, v));
            }
        }
        Self { n, values }
    }

    /// Indicator of the given unordered pairs.
    pub fn indicator(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut f = Self::zeros(n);
        for (u, v) in pairs {
            f.set(u, v, 1.0);
        }
        f
    }

    /// `1_F` for the subgraph of a pair.
    pub fn indicator_of(pair: &SubgraphPair) -> Self {
        Self::indicator(pair.n(), pair.f_edges().iter().copied())
    }

    /// `γ_{A,B}`: one on pairs with an endpoint in each of the disjoint sets.
    pub fn bipartite_indicator(n: usize, a: &VertexSubset, b: &VertexSubset) -> Self {
        let mut f = Self::zeros(n);
        f.add_block(a, b, 1.0);
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        if u == v {
            0.0
        } else {
            self.values[pair_index(self.n, u, v)]
        }
    }

    pub fn set(&mut self, u: usize, v: usize, x: f64) {
        assert!(u != v, "edge functions are not defined on the diagonal");
        let i = pair_index(self.n, u, v);
        self.values[i] = x;
    }

    /// Adds `c` on every pair `{a, b}` with `a ∈ A`, `b ∈ B` (sets disjoint).
    pub fn add_block(&mut self, a: &VertexSubset, b: &VertexSubset, c: f64) {
        for u in a.iter() {
            for v in b.iter() {
                let i = pair_index(self.n, u, v);
                self.values[i] += c;
            }
        }
    }

    /// `self += alpha·other`.
    pub fn axpy(&mut self, alpha: f64, other: &Self) {
        assert_eq!(self.n, other.n);
        for (x, y) in self.values.iter_mut().zip(&other.values) {
            *x += alpha * y;
        }
    }

    pub fn scale(&mut self, c: f64) {
        self.values.iter_mut().for_each(|x| *x *= c);
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0.0)
    }

    /// Dense symmetric `n × n` matrix of `g(u,v)·ρ_G(u,v)`.
    pub(crate) fn weighted_matrix(&self, g: &WeightedGraph) -> Vec<f64> {
        let n = self.n;
        let mut w = vec![0.0; n * n];
        for e in g.edges() {
            let x = self.get(e.u, e.v) * e.rho;
            w[e.u * n + e.v] = x;
            w[e.v * n + e.u] = x;
        }
        w
    }
}

impl Add for &EdgeFunction {
    type Output = EdgeFunction;

    fn add(self, rhs: &EdgeFunction) -> EdgeFunction {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub for &EdgeFunction {
    type Output = EdgeFunction;

    fn sub(self, rhs: &EdgeFunction) -> EdgeFunction {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

/// `⟨g, h⟩` in the `ρ_G`-weighted inner product. Off-edge pairs contribute 0.
pub fn inner_product(g: &WeightedGraph, x: &EdgeFunction, y: &EdgeFunction) -> Result<f64> {
    if x.n != g.n() || y.n != g.n() {
        return Err(Error::Input(format!(
            "edge function dimension mismatch: graph has {} vertices, functions have {} and {}",
            g.n(),
            x.n,
            y.n
        )));
    }
    if g.n() < 2 {
        return Ok(0.0);
    }
    let s: f64 = g
        .edges()
        .iter()
        .map(|e| x.get(e.u, e.v) * y.get(e.u, e.v) * e.rho)
        .sum();
    Ok(s / pair_count(g.n()))
}

pub fn norm(g: &WeightedGraph, x: &EdgeFunction) -> Result<f64> {
    Ok(inner_product(g, x, x)?.max(0.0).sqrt())
}
