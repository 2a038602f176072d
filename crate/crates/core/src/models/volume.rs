//! Volume regularity and the degree-based weights that embed it into
//! weighted regularity: `μ(v) = n·deg(v)/vol(V)`, `ρ ≡ n²/vol(V)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{VertexSubset, WeightedGraph};
use crate::regularity::PAIR_EXHAUSTIVE_CAP;
use crate::report::{Mode, SearchBudget};
use crate::rng::stream_rng;
use crate::search::{Domain, PairProblem, PairStats};

/// Reweights the edge set of `g` (weights ignored) with volume weights.
/// Every vertex needs positive degree.
pub fn volume_weights(g: &WeightedGraph) -> Result<WeightedGraph> {
    let n = g.n() as f64;
    let deg = g.degrees();
    let vol: usize = deg.iter().sum();
    if vol == 0 {
        return Err(Error::Input("volume weights need at least one edge".into()));
    }
    if let Some(v) = deg.iter().position(|&d| d == 0) {
        return Err(Error::Input(format!(
            "vertex {v} is isolated: its volume weight would be 0, but vertex weights must be positive"
        )));
    }
    let vol = vol as f64;
    let mu = deg.iter().map(|&d| n * d as f64 / vol).collect();
    let rho = n * n / vol;
    WeightedGraph::new(mu, g.edges().iter().map(|e| (e.u, e.v, rho)))
}

/// Deviation of one sub-pair `(X, Y)` in the volume-regularity inequality.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeDeviation {
    pub e_xy: f64,
    /// `e(A,B)·vol(X)vol(Y)/(vol(A)vol(B))`.
    pub expected: f64,
    /// `|e(X,Y) − expected|`.
    pub raw: f64,
    /// `vol(A)vol(B)/vol(V)`; the pair violates at `ε` when `raw ≥ ε·unit`.
    pub unit: f64,
    /// `raw/unit`, compared directly against `ε`.
    pub normalized: f64,
}

struct Volumes {
    deg: Vec<f64>,
    total: f64,
}

impl Volumes {
    fn of(g: &WeightedGraph) -> Self {
        let deg: Vec<f64> = g.degrees().into_iter().map(|d| d as f64).collect();
        let total = deg.iter().sum();
        Self { deg, total }
    }

    fn vol(&self, s: &[usize]) -> f64 {
        s.iter().map(|&v| self.deg[v]).sum()
    }
}

fn edge_count_between(g: &WeightedGraph, a: &[usize], b: &[usize]) -> f64 {
    let mut c = 0usize;
    for &u in a {
        c += b.iter().filter(|&&v| g.has_edge(u, v)).count();
    }
    c as f64
}

fn validate(g: &WeightedGraph, a: &VertexSubset, b: &VertexSubset) -> Result<()> {
    a.check_bounds(g.n())?;
    b.check_bounds(g.n())?;
    if a.is_empty() || b.is_empty() || !a.is_disjoint(b) {
        return Err(Error::Precondition("A and B must be nonempty and disjoint".into()));
    }
    Ok(())
}

pub fn volume_deviation(
    g: &WeightedGraph,
    a: &VertexSubset,
    b: &VertexSubset,
    x: &VertexSubset,
    y: &VertexSubset,
) -> Result<VolumeDeviation> {
    validate(g, a, b)?;
    if !x.is_subset(a) || !y.is_subset(b) {
        return Err(Error::Precondition("X and Y must be subsets of A and B".into()));
    }
    let vols = Volumes::of(g);
    let (va, vb) = (vols.vol(a.members()), vols.vol(b.members()));
    if va == 0.0 || vb == 0.0 {
        return Err(Error::Precondition("A and B must have positive volume".into()));
    }
    let e_ab = edge_count_between(g, a.members(), b.members());
    let e_xy = edge_count_between(g, x.members(), y.members());
    let expected = e_ab * vols.vol(x.members()) * vols.vol(y.members()) / (va * vb);
    let raw = (e_xy - expected).abs();
    let unit = va * vb / vols.total;
    Ok(VolumeDeviation {
        e_xy,
        expected,
        raw,
        unit,
        normalized: raw / unit,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VolumeVerdict {
    pub epsilon: f64,
    pub passed: bool,
    /// Largest `raw/unit` found; violation iff `≥ ε`.
    pub worst_deviation: f64,
    pub worst_witness: Option<(VertexSubset, VertexSubset)>,
    pub mode: Mode,
    pub certified: bool,
    pub vacuous: bool,
}

/// Checks `|e(X,Y) − e(A,B)·vol(X)vol(Y)/(vol(A)vol(B))| < ε·vol(A)vol(B)/vol(V)`
/// for all `X ⊆ A`, `Y ⊆ B` with `vol(X) ≥ ε·vol(A)`, `vol(Y) ≥ ε·vol(B)`.
/// Edge weights of `g` are ignored.
pub fn check_volume_regular(
    g: &WeightedGraph,
    a: &VertexSubset,
    b: &VertexSubset,
    epsilon: f64,
    mode: Mode,
    budget: SearchBudget,
) -> Result<VolumeVerdict> {
    validate(g, a, b)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Parameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let size = a.len() + b.len();
    let mode = match mode {
        Mode::Auto if size <= PAIR_EXHAUSTIVE_CAP => Mode::Exhaustive,
        Mode::Auto => Mode::Search,
        m => m,
    };
    if mode == Mode::Exhaustive && size > PAIR_EXHAUSTIVE_CAP {
        return Err(Error::TooLarge {
            size,
            cap: PAIR_EXHAUSTIVE_CAP,
        });
    }
    let n = g.n();
    let vols = Volumes::of(g);
    let (va, vb) = (vols.vol(a.members()), vols.vol(b.members()));
    if va == 0.0 || vb == 0.0 {
        return Err(Error::Precondition("A and B must have positive volume".into()));
    }
    let e_ab = edge_count_between(g, a.members(), b.members());
    let unit = va * vb / vols.total;
    let mut adj = vec![0.0; n * n];
    for e in g.edges() {
        adj[e.u * n + e.v] = 1.0;
        adj[e.v * n + e.u] = 1.0;
    }
    let problem = PairProblem {
        n,
        w: &adj,
        mass: &vols.deg,
        domain: Domain::Bipartite {
            left: a.members(),
            right: b.members(),
        },
        floor_x: epsilon * va,
        floor_y: epsilon * vb,
        score: |s: &PairStats| (s.cross - e_ab * s.mass_x * s.mass_y / (va * vb)).abs() / unit,
    };
    let best = match mode {
        Mode::Exhaustive => problem.exhaustive(),
        _ => problem.local_search(budget.restarts.max(1), budget.seed),
    };
    Ok(match best {
        None => VolumeVerdict {
            epsilon,
            passed: true,
            worst_deviation: 0.0,
            worst_witness: None,
            mode,
            certified: mode == Mode::Exhaustive,
            vacuous: true,
        },
        Some(w) => {
            let passed = w.score < epsilon;
            VolumeVerdict {
                epsilon,
                passed,
                worst_deviation: w.score,
                worst_witness: Some((VertexSubset::from_sorted(w.x), VertexSubset::from_sorted(w.y))),
                mode,
                certified: mode == Mode::Exhaustive || !passed,
                vacuous: false,
            }
        }
    })
}

/// Bipartite graph on `A = A₁ ∪ A₂`, `B = B₁ ∪ B₂` (quarters of `n`, in
/// that vertex order): `A₁ × B` and `A × B₁` complete, `A₂ × B₂` random
/// with edge probability `1/√n`.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub graph: WeightedGraph,
    pub a1: VertexSubset,
    pub a2: VertexSubset,
    pub b1: VertexSubset,
    pub b2: VertexSubset,
    pub p_sparse: f64,
}

impl Counterexample {
    pub fn a(&self) -> VertexSubset {
        self.a1.union(&self.a2)
    }

    pub fn b(&self) -> VertexSubset {
        self.b1.union(&self.b2)
    }

    /// `G(n, p_ij)` weights of the construction: `μ ≡ 1`, `ρ = 1` on the
    /// complete blocks and `ρ = √n` inside `A₂ × B₂`.
    pub fn reciprocal_weights(&self) -> Result<WeightedGraph> {
        let n = self.graph.n();
        let edges = self.graph.edges().iter().map(|e| {
            let sparse = self.a2.contains(e.u) && self.b2.contains(e.v);
            (e.u, e.v, if sparse { 1.0 / self.p_sparse } else { 1.0 })
        });
        WeightedGraph::new(vec![1.0; n], edges.collect::<Vec<_>>())
    }
}

pub fn make_counterexample(n: usize, seed: u64) -> Result<Counterexample> {
    if n < 16 || n % 4 != 0 {
        return Err(Error::Parameter(format!(
            "counterexample needs n >= 16 divisible by 4, got {n}"
        )));
    }
    let q = n / 4;
    let (a1, a2, b1, b2) = (0..q, q..2 * q, 2 * q..3 * q, 3 * q..n);
    let p = 1.0 / (n as f64).sqrt();
    let mut rng = stream_rng(seed, 0);
    let mut edges = Vec::new();
    for u in 0..2 * q {
        for v in 2 * q..n {
            let present = a1.contains(&u) || b1.contains(&v) || rng.gen::<f64>() < p;
            if present {
                edges.push((u, v));
            }
        }
    }
    Ok(Counterexample {
        graph: WeightedGraph::unweighted(n, edges)?,
        a1: VertexSubset::range(a1),
        a2: VertexSubset::range(a2),
        b1: VertexSubset::range(b1),
        b2: VertexSubset::range(b2),
        p_sparse: p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SubgraphPair;
    use crate::regularity::check_pair_exhaustive;

    #[test]
    fn volume_weight_examples() {
        let k4 = volume_weights(&WeightedGraph::complete(4)).unwrap();
        assert!(k4.mu().iter().all(|&m| (m - 1.0).abs() < 1e-15));
        assert!(k4.edges().iter().all(|e| (e.rho - 4.0 / 3.0).abs() < 1e-15));

        let cycle = WeightedGraph::unweighted(7, (0..7).map(|v| (v, (v + 1) % 7))).unwrap();
        let w = volume_weights(&cycle).unwrap();
        assert!(w.mu().iter().all(|&m| (m - 1.0).abs() < 1e-15));

        let path = WeightedGraph::unweighted(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert!((volume_weights(&path).unwrap().total_mu() - 5.0).abs() < 1e-12);

        let isolated = WeightedGraph::unweighted(4, [(0, 1), (1, 2)]).unwrap();
        assert!(volume_weights(&isolated).is_err());
    }

    #[test]
    fn complete_bipartite_is_volume_regular() {
        let n = 10;
        let edges: Vec<_> = (0..5).flat_map(|u| (5..10).map(move |v| (u, v))).collect();
        let g = WeightedGraph::unweighted(n, edges).unwrap();
        let (a, b) = (VertexSubset::range(0..5), VertexSubset::range(5..10));
        let v = check_volume_regular(&g, &a, &b, 0.2, Mode::Exhaustive, SearchBudget::default()).unwrap();
        assert!(v.passed && v.certified);
        assert!(v.worst_deviation < 1e-12);
        let full = volume_deviation(&g, &a, &b, &a, &b).unwrap();
        assert!(full.raw < 1e-12);
    }

    #[test]
    fn counterexample_structure() {
        let c = make_counterexample(64, 3).unwrap();
        let deg = c.graph.degrees();
        assert!(c.a1.iter().all(|v| deg[v] == 32));
        assert!(c.b1.iter().all(|v| deg[v] == 32));
        assert!(make_counterexample(18, 1).is_err());
        assert!(make_counterexample(12, 1).is_err());
    }

    #[test]
    fn sparse_block_edge_count_within_three_standard_errors() {
        let n = 400;
        let runs = 30;
        let q = n as f64 / 4.0;
        let p = 1.0 / (n as f64).sqrt();
        let mean = (0..runs)
            .map(|s| {
                let c = make_counterexample(n, s).unwrap();
                c.graph.view().rho_sum_unchecked(c.a2.members(), c.b2.members())
            })
            .sum::<f64>()
            / runs as f64;
        let se = (q * q * p * (1.0 - p) / runs as f64).sqrt();
        assert!((mean - q * q * p).abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn weighted_regular_implies_volume_regular_on_small_instances() {
        for seed in 0..10u64 {
            let mut rng = stream_rng(seed, 5);
            let n = 12;
            let mut edges = vec![];
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
                edges.push((u, (u + 1) % n));
            }
            edges.sort_unstable_by_key(|&(u, v)| (u.min(v), u.max(v)));
            edges.dedup_by_key(|e| (e.0.min(e.1), e.0.max(e.1)));
            let g = WeightedGraph::unweighted(n, edges).unwrap();
            let (a, b) = (VertexSubset::range(0..5), VertexSubset::range(5..10));
            let pair = SubgraphPair::full(volume_weights(&g).unwrap());
            for eps in [0.15, 0.3, 0.45] {
                let w = check_pair_exhaustive(&pair, &a, &b, eps).unwrap();
                let v = check_volume_regular(&g, &a, &b, eps, Mode::Exhaustive, SearchBudget::default()).unwrap();
                assert!(!w.passed || v.passed, "seed {seed} eps {eps}");
            }
        }
    }
}
