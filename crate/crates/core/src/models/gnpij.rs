//! `G(n, p_ij)`: independent edges with pair-specific probabilities,
//! weighted by `ρ = 1/p_ij` and `μ ≡ 1`.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{pair_count, WeightedGraph};
use crate::rng::stream_rng;

/// Default `K` in the probability floor `p_min = K/n`.
pub const DEFAULT_FLOOR_K: f64 = 1.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProbKind {
    Constant { p: f64 },
    /// Each `p_ij` drawn uniformly from `[lo, hi]` with its own seed.
    UniformRange { lo: f64, hi: f64, seed: u64 },
    /// Full symmetric matrix; the diagonal is ignored.
    Explicit { p: Vec<Vec<f64>> },
    /// `p_ij = u_i·u_j`.
    RankOne { u: Vec<f64> },
}

/// Edge probability model plus an optional floor. Without an explicit
/// floor, `p_min = K/n` with `K = DEFAULT_FLOOR_K`; set `floor: 0` to
/// disable it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbMatrixSpec {
    #[serde(flatten)]
    pub kind: ProbKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floor: Option<f64>,
}

impl ProbMatrixSpec {
    pub fn constant(p: f64) -> Self {
        Self {
            kind: ProbKind::Constant { p },
            floor: None,
        }
    }

    pub fn uniform_range(lo: f64, hi: f64, seed: u64) -> Self {
        Self {
            kind: ProbKind::UniformRange { lo, hi, seed },
            floor: None,
        }
    }

    pub fn with_floor(mut self, floor: f64) -> Self {
        self.floor = Some(floor);
        self
    }

    pub fn p_min(&self, n: usize) -> f64 {
        self.floor.unwrap_or(DEFAULT_FLOOR_K / n as f64)
    }

    /// Dense symmetric `n × n` probability matrix with the floor applied.
    pub fn matrix(&self, n: usize) -> Result<Vec<f64>> {
        let bad = |msg: String| Err(Error::Input(format!("probability spec: {msg}")));
        let in_range = |p: f64| p > 0.0 && p <= 1.0;
        let mut m = vec![0.0; n * n];
        match &self.kind {
            ProbKind::Constant { p } => {
                if !in_range(*p) {
                    return bad(format!("p = {p} must lie in (0, 1]"));
                }
                m.fill(*p);
            }
            ProbKind::UniformRange { lo, hi, seed } => {
                if !(in_range(*lo) && in_range(*hi) && lo <= hi) {
                    return bad(format!("range [{lo}, {hi}] must satisfy 0 < lo <= hi <= 1"));
                }
                let mut rng = stream_rng(*seed, 1);
                for u in 0..n {
                    for v in u + 1..n {
                        let p = if lo == hi { *lo } else { rng.gen_range(*lo..=*hi) };
                        m[u * n + v] = p;
                        m[v * n + u] = p;
                    }
                }
            }
            ProbKind::Explicit { p } => {
                if p.len() != n || p.iter().any(|row| row.len() != n) {
                    return bad(format!("explicit matrix must be {n} x {n}"));
                }
                for u in 0..n {
                    for v in u + 1..n {
                        let x = p[u][v];
                        if x != p[v][u] {
                            return bad(format!("matrix is not symmetric at ({u}, {v})"));
                        }
                        if !in_range(x) {
                            return bad(format!("p[{u}][{v}] = {x} must lie in (0, 1]"));
                        }
                        m[u * n + v] = x;
                        m[v * n + u] = x;
                    }
                }
            }
            ProbKind::RankOne { u } => {
                if u.len() != n {
                    return bad(format!("rank-one vector has length {}, expected {n}", u.len()));
                }
                for a in 0..n {
                    for b in a + 1..n {
                        let x = u[a] * u[b];
                        if !in_range(x) {
                            return bad(format!("u[{a}]·u[{b}] = {x} must lie in (0, 1]"));
                        }
                        m[a * n + b] = x;
                        m[b * n + a] = x;
                    }
                }
            }
        }
        let floor = self.p_min(n);
        if !(0.0..=1.0).contains(&floor) {
            return bad(format!("floor {floor} must lie in [0, 1]"));
        }
        for u in 0..n {
            m[u * n + u] = 0.0;
            for v in 0..n {
                if u != v {
                    m[u * n + v] = m[u * n + v].max(floor);
                }
            }
        }
        Ok(m)
    }
}

/// Samples `G(n, p_ij)`: edge `{u, v}` present with probability `p_uv`,
/// weight `1/p_uv`, `μ ≡ 1`. Deterministic in `seed`.
pub fn gen_gnpij(n: usize, spec: &ProbMatrixSpec, seed: u64) -> Result<WeightedGraph> {
    let p = spec.matrix(n)?;
    let mut rng = stream_rng(seed, 0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let puv = p[u * n + v];
            if rng.gen::<f64>() < puv {
                edges.push((u, v, 1.0 / puv));
            }
        }
    }
    WeightedGraph::new(vec![1.0; n], edges)
}

/// `4800/β⁶`.
pub fn chernoff_k(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Parameter(format!("beta must lie in (0, 1], got {beta}")));
    }
    Ok(4800.0 / beta.powi(6))
}

/// Scales every `ρ` by `C(n,2)/Σρ` so that `ρ_G(V,V) = 2·C(n,2)`.
/// Returns the scaled graph and the factor.
pub fn rescale_to_remark(g: &WeightedGraph) -> Result<(WeightedGraph, f64)> {
    let total = g.rho_total();
    if total == 0.0 {
        return Err(Error::Precondition("cannot rescale an edgeless graph".into()));
    }
    let factor = pair_count(g.n()) / total;
    Ok((g.scaled(1.0, factor)?, factor))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub beta: f64,
    pub pairs_tested: usize,
    pub max_deviation: f64,
    pub mean_deviation: f64,
    /// Sizes `(|A|, |B|)` of the pair attaining the maximum.
    pub worst_sizes: (usize, usize),
    pub passed: bool,
}

/// Samples disjoint `A, B` with `⌈βn⌉ ≤ |A|, |B| ≤ n/2` and reports the
/// largest `|Σ_{A×B} X_uv/(p_uv|A||B|) − 1|`. Pair `i` uses substream `i`.
pub fn concentration_test(
    g: &WeightedGraph,
    spec: &ProbMatrixSpec,
    beta: f64,
    num_pairs: usize,
    seed: u64,
) -> Result<ConcentrationReport> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Parameter(format!("beta must lie in (0, 1), got {beta}")));
    }
    let n = g.n();
    if beta * (n as f64) < 1.0 {
        return Err(Error::Precondition(format!(
            "beta·n = {} < 1: no qualifying sets to sample",
            beta * n as f64
        )));
    }
    let k_min = (beta * n as f64 - 1e-9).ceil() as usize;
    let k_max = n / 2;
    if k_min > k_max {
        return Err(Error::Precondition(format!(
            "two disjoint sets of size {k_min} do not fit in {n} vertices"
        )));
    }
    if num_pairs == 0 {
        return Err(Error::Parameter("num_pairs must be at least 1".into()));
    }
    let p = spec.matrix(n)?;
    let deviations: Vec<(f64, usize, usize)> = (0..num_pairs as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let a = rng.gen_range(k_min..=k_max);
            let b = rng.gen_range(k_min..=k_max);
            let mut perm: Vec<usize> = (0..n).collect();
            let (chosen, _) = perm.partial_shuffle(&mut rng, a + b);
            let (sa, sb) = chosen.split_at(a);
            let mut s = 0.0;
            for &u in sa {
                for &v in sb {
                    if g.has_edge(u, v) {
                        s += 1.0 / p[u * n + v];
                    }
                }
            }
            ((s / (a * b) as f64 - 1.0).abs(), a, b)
        })
        .collect();
    let (max_deviation, wa, wb) = deviations
        .iter()
        .copied()
        .fold((f64::NEG_INFINITY, 0, 0), |m, d| if d.0 > m.0 { d } else { m });
    let mean_deviation = deviations.iter().map(|d| d.0).sum::<f64>() / num_pairs as f64;
    Ok(ConcentrationReport {
        beta,
        pairs_tested: num_pairs,
        max_deviation,
        mean_deviation,
        worst_sizes: (wa, wb),
        passed: max_deviation < beta / 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_one_gives_the_complete_graph() {
        let g = gen_gnpij(9, &ProbMatrixSpec::constant(1.0), 5).unwrap();
        assert_eq!(g.edge_count(), 36);
        assert!(g.edges().iter().all(|e| e.rho == 1.0));
        let r = concentration_test(&g, &ProbMatrixSpec::constant(1.0), 0.3, 20, 1).unwrap();
        assert_eq!(r.max_deviation, 0.0);
        assert!(r.passed);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(gen_gnpij(5, &ProbMatrixSpec::constant(0.0), 1).is_err());
        assert!(gen_gnpij(5, &ProbMatrixSpec::constant(1.2), 1).is_err());
        assert!(gen_gnpij(5, &ProbMatrixSpec::uniform_range(0.5, 0.2, 1), 1).is_err());
        let asym = ProbMatrixSpec {
            kind: ProbKind::Explicit {
                p: vec![vec![0.0, 0.5], vec![0.4, 0.0]],
            },
            floor: None,
        };
        assert!(asym.matrix(2).is_err());
    }

    #[test]
    fn floor_defaults_to_one_over_n() {
        let spec = ProbMatrixSpec::constant(0.01);
        let m = spec.matrix(20).unwrap();
        assert_eq!(m[1], 0.05);
        let m = spec.clone().with_floor(0.0).matrix(20).unwrap();
        assert_eq!(m[1], 0.01);
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = ProbMatrixSpec::uniform_range(0.1, 0.9, 3).with_floor(0.05);
        let s = serde_json::to_string(&spec).unwrap();
        assert_eq!(s, r#"{"kind":"uniform-range","lo":0.1,"hi":0.9,"seed":3,"floor":0.05}"#);
        assert_eq!(serde_json::from_str::<ProbMatrixSpec>(&s).unwrap(), spec);
        let r1: ProbMatrixSpec = serde_json::from_str(r#"{"kind":"rank-one","u":[0.5,1.0,0.8]}"#).unwrap();
        let m = r1.matrix(3).unwrap();
        assert!((m[2] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn chernoff_constant() {
        assert_eq!(chernoff_k(1.0).unwrap(), 4800.0);
        assert_eq!(chernoff_k(0.5).unwrap(), 307200.0);
        assert!((chernoff_k(0.1).unwrap() - 4.8e9).abs() < 1e-3);
        assert!(chernoff_k(0.0).is_err());
        assert!(chernoff_k(1.5).is_err());
    }

    /// Frozen from a single generation run.
    #[test]
    fn golden_edge_count() {
        let g = gen_gnpij(100, &ProbMatrixSpec::constant(0.5), 7).unwrap();
        let naive = (0..100)
            .flat_map(|u| (u + 1..100).map(move |v| (u, v)))
            .filter(|&(u, v)| g.has_edge(u, v))
            .count();
        assert_eq!(naive, g.edge_count());
        assert_eq!(g.edge_count(), GOLDEN_EDGES_N100_P05_SEED7);
    }

    const GOLDEN_EDGES_N100_P05_SEED7: usize = 2478;

    #[test]
    fn expected_weight_total_is_pair_count() {
        // Σρ has mean C(n,2); check the average of 100 seeds within 3 standard errors.
        let n = 30;
        let spec = ProbMatrixSpec::uniform_range(0.2, 0.8, 11);
        let p = spec.matrix(n).unwrap();
        let var: f64 = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .map(|(u, v)| {
                let q = p[u * n + v];
                (1.0 - q) / q
            })
            .sum();
        let runs = 100;
        let mean = (0..runs)
            .map(|s| gen_gnpij(n, &spec, s).unwrap().rho_total())
            .sum::<f64>()
            / runs as f64;
        let se = (var / runs as f64).sqrt();
        assert!((mean - pair_count(n)).abs() < 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn edge_frequency_matches_probability_buckets() {
        let n = 40;
        let spec = ProbMatrixSpec::uniform_range(0.1, 0.9, 5);
        let p = spec.matrix(n).unwrap();
        let runs = 100;
        let mut hits = [0.0f64; 4];
        let mut expect = [0.0f64; 4];
        let mut var = [0.0f64; 4];
        for s in 0..runs {
            let g = gen_gnpij(n, &spec, 1000 + s).unwrap();
            for u in 0..n {
                for v in u + 1..n {
                    let q = p[u * n + v];
                    let k = (((q - 0.1) / 0.2) as usize).min(3);
                    hits[k] += g.has_edge(u, v) as u8 as f64;
                    expect[k] += q;
                    var[k] += q * (1.0 - q);
                }
            }
        }
        for k in 0..4 {
            assert!((hits[k] - expect[k]).abs() < 3.0 * var[k].sqrt(), "bucket {k}");
        }
    }

    #[test]
    fn rescale_examples() {
        let k = WeightedGraph::complete(6);
        let (same, f) = rescale_to_remark(&k).unwrap();
        assert_eq!(f, 1.0);
        assert_eq!(same, k);
        let g = gen_gnpij(50, &ProbMatrixSpec::constant(0.3), 2).unwrap();
        let (r, f) = rescale_to_remark(&g).unwrap();
        assert!((f - pair_count(50) / g.rho_total()).abs() < 1e-15);
        assert!((r.rho_total() - pair_count(50)).abs() < 1e-9);
        assert!(rescale_to_remark(&WeightedGraph::unweighted(3, []).unwrap()).is_err());
    }

    #[test]
    fn rescale_factor_tends_to_one() {
        let spec = ProbMatrixSpec::uniform_range(0.1, 0.9, 4);
        let mean_gap = |n: usize| {
            (0..5)
                .map(|s| (rescale_to_remark(&gen_gnpij(n, &spec, s).unwrap()).unwrap().1 - 1.0).abs())
                .sum::<f64>()
                / 5.0
        };
        let (a, b, c) = (mean_gap(100), mean_gap(400), mean_gap(1600));
        assert!(c < a && b < a, "{a} {b} {c}");
    }

    #[test]
    fn concentration_rejects_tiny_inputs() {
        let g = gen_gnpij(8, &ProbMatrixSpec::constant(0.5), 1).unwrap();
        let spec = ProbMatrixSpec::constant(0.5);
        assert!(concentration_test(&g, &spec, 0.1, 10, 1).is_err());
        assert!(concentration_test(&g, &spec, 0.7, 10, 1).is_err());
    }

    #[test]
    fn adversarial_small_instance_reports_honestly() {
        let spec = ProbMatrixSpec::constant(0.1);
        let g = gen_gnpij(20, &spec, 7).unwrap();
        let r = concentration_test(&g, &spec, 0.3, 50, 7).unwrap();
        assert_eq!(r.passed, r.max_deviation < 0.15);
        assert!(r.worst_sizes.0 >= 6 && r.worst_sizes.1 >= 6);
    }
}
