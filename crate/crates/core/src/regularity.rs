//! Weighted ε-regularity of a pair in `F` relative to `G`, partition checks,
//! and the classical and relative unweighted forms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeView, SubgraphPair, VertexSubset, TOL};
use crate::report::{Mode, SearchBudget};
use crate::rng::derive_seed;
use crate::search::{Domain, PairProblem, PairStats};

/// Largest `|A| + |B|` enumerated exhaustively (`2^|A|·2^|B|` sub-pairs).
pub const PAIR_EXHAUSTIVE_CAP: usize = 26;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubPairWitness {
    pub a: VertexSubset,
    pub b: VertexSubset,
    pub density: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub epsilon: f64,
    pub passed: bool,
    pub base_density: f64,
    pub worst_deviation: f64,
    pub worst_witness: Option<SubPairWitness>,
    pub mode: Mode,
    /// Exhaustive verdicts are exact; search verdicts certify only failures.
    pub certified: bool,
    /// No sub-pair meets the mass floors.
    pub vacuous: bool,
}

fn validate_pair(n: usize, a: &VertexSubset, b: &VertexSubset) -> Result<()> {
    a.check_bounds(n)?;
    b.check_bounds(n)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("A and B must be nonempty".into()));
    }
    if !a.is_disjoint(b) {
        return Err(Error::Precondition("A and B must be disjoint".into()));
    }
    Ok(())
}

fn validate_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Parameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok(())
}

fn resolve_mode(mode: Mode, size: usize) -> Result<Mode> {
    match mode {
        Mode::Auto if size <= PAIR_EXHAUSTIVE_CAP => Ok(Mode::Exhaustive),
        Mode::Auto => Ok(Mode::Search),
        Mode::Exhaustive if size > PAIR_EXHAUSTIVE_CAP => Err(Error::TooLarge {
            size,
            cap: PAIR_EXHAUSTIVE_CAP,
        }),
        m => Ok(m),
    }
}

/// Weighted ε-regularity on an edge view `F` with the view's vertex weights.
pub(crate) fn check_view(
    f: EdgeView<'_>,
    a: &VertexSubset,
    b: &VertexSubset,
    epsilon: f64,
    mode: Mode,
    budget: SearchBudget,
) -> Result<PairVerdict> {
    validate_pair(f.n(), a, b)?;
    validate_epsilon(epsilon)?;
    let mode = resolve_mode(mode, a.len() + b.len())?;
    if mode == Mode::Search && budget.restarts == 0 {
        return Err(Error::Parameter("restarts must be at least 1".into()));
    }
    let base = f.weighted_density(a, b)?;
    let (ma, mb) = (f.mu_sum(a)?, f.mu_sum(b)?);
    let problem = PairProblem {
        n: f.n(),
        w: f.matrix(),
        mass: f.mu(),
        domain: Domain::Bipartite {
            left: a.members(),
            right: b.members(),
        },
        floor_x: epsilon * ma,
        floor_y: epsilon * mb,
        score: |s: &PairStats| (s.cross / (s.mass_x * s.mass_y) - base).abs(),
    };
    let best = match mode {
        Mode::Exhaustive => problem.exhaustive(),
        _ => problem.local_search(budget.restarts, budget.seed),
    };
    Ok(match best {
        None => PairVerdict {
            epsilon,
            passed: true,
            base_density: base,
            worst_deviation: 0.0,
            worst_witness: None,
            mode,
            certified: mode == Mode::Exhaustive,
            vacuous: true,
        },
        Some(w) => {
            let passed = w.score < epsilon;
            PairVerdict {
                epsilon,
                passed,
                base_density: base,
                worst_deviation: w.score,
                worst_witness: Some(SubPairWitness {
                    density: w.stats.cross / (w.stats.mass_x * w.stats.mass_y),
                    deviation: w.score,
                    a: VertexSubset::from_sorted(w.x),
                    b: VertexSubset::from_sorted(w.y),
                }),
                mode,
                certified: mode == Mode::Exhaustive || !passed,
                vacuous: false,
            }
        }
    })
}

/// Exact weighted ε-regularity verdict over all qualifying `A' ⊆ A`, `B' ⊆ B`.
pub fn check_pair_exhaustive(
    p: &SubgraphPair,
    a: &VertexSubset,
    b: &VertexSubset,
    epsilon: f64,
) -> Result<PairVerdict> {
    check_view(p.f_view(), a, b, epsilon, Mode::Exhaustive, SearchBudget::default())
}

/// Weighted ε-regularity by hill climbing; a pass means no witness was found.
pub fn check_pair_search(
    p: &SubgraphPair,
    a: &VertexSubset,
    b: &VertexSubset,
    epsilon: f64,
    restarts: usize,
    seed: u64,
) -> Result<PairVerdict> {
    check_view(p.f_view(), a, b, epsilon, Mode::Search, SearchBudget { restarts, seed })
}

pub fn check_pair(
    p: &SubgraphPair,
    a: &VertexSubset,
    b: &VertexSubset,
    epsilon: f64,
    mode: Mode,
    budget: SearchBudget,
) -> Result<PairVerdict> {
    check_view(p.f_view(), a, b, epsilon, mode, budget)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterPairVerdict {
    /// 1-based cluster indices, `i < j`.
    pub i: usize,
    pub j: usize,
    pub verdict: PairVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub epsilon: f64,
    pub clusters: Vec<VertexSubset>,
    pub ell: usize,
    pub cluster_masses: Vec<f64>,
    pub total_mass: f64,
    pub max_vertex_weight: f64,
    pub w0_mass_ok: bool,
    /// `max − min` of `μ(W_i)` over `i ≥ 1`.
    pub balance_spread: f64,
    pub balance_ok: bool,
    pub pairs_checked: usize,
    pub irregular_pairs: Vec<ClusterPairVerdict>,
    /// Irregular count over `ℓ²`, compared against `ε`.
    pub irregular_fraction: f64,
    /// Irregular count over the `ℓ(ℓ−1)/2` pairs actually tested.
    pub irregular_pair_ratio: f64,
    pub irregular_ok: bool,
    pub regular: bool,
    /// Every pair verdict is exhaustive or a found violation, so the
    /// irregular count is exact rather than a lower bound.
    pub certified: bool,
}

/// Checks that `clusters` partitions `{0..n-1}` with `ℓ ≥ 1`.
pub fn validate_partition(n: usize, clusters: &[VertexSubset]) -> Result<()> {
    if clusters.len() < 2 {
        return Err(Error::Input(
            "a partition needs W0 plus at least one cluster".into(),
        ));
    }
    let mut seen = vec![false; n];
    for (i, c) in clusters.iter().enumerate() {
        c.check_bounds(n)?;
        if i > 0 && c.is_empty() {
            return Err(Error::Input(format!("cluster W{i} is empty")));
        }
        for v in c.iter() {
            if seen[v] {
                return Err(Error::Input(format!("vertex {v} appears in more than one cluster")));
            }
            seen[v] = true;
        }
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(Error::Input(format!("vertex {v} is not covered by the partition")));
    }
    Ok(())
}

/// Weighted ε-regular partition check. `clusters[0]` is `W₀` (possibly empty). Pair `(i, j)`
/// searches with a seed derived from the base seed and the pair index.
pub fn check_partition(
    p: &SubgraphPair,
    clusters: &[VertexSubset],
    epsilon: f64,
    mode: Mode,
    budget: SearchBudget,
) -> Result<PartitionReport> {
    validate_epsilon(epsilon)?;
    validate_partition(p.n(), clusters)?;
    let f = p.f_view();
    let ell = clusters.len() - 1;
    let masses: Vec<f64> = clusters.iter().map(|c| f.mu_sum(c)).collect::<Result<_>>()?;
    let total = p.host().total_mu();
    let max_mu = p.host().max_mu();
    let w0_mass_ok = masses[0] <= epsilon * total + TOL;
    let (lo, hi) = masses[1..]
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &m| (l.min(m), h.max(m)));
    let spread = hi - lo;
    let balance_ok = spread <= max_mu + TOL;

    let pairs: Vec<(usize, usize)> = (1..=ell)
        .flat_map(|i| (i + 1..=ell).map(move |j| (i, j)))
        .collect();
    let verdicts: Vec<ClusterPairVerdict> = pairs
        .par_iter()
        .enumerate()
        .map(|(k, &(i, j))| {
            let b = SearchBudget {
                restarts: budget.restarts,
                seed: derive_seed(budget.seed, k as u64),
            };
            check_view(f, &clusters[i], &clusters[j], epsilon, mode, b)
                .map(|verdict| ClusterPairVerdict { i, j, verdict })
        })
        .collect::<Result<_>>()?;
    let certified = verdicts
        .iter()
        .all(|v| v.verdict.mode == Mode::Exhaustive || !v.verdict.passed);
    let irregular: Vec<ClusterPairVerdict> =
        verdicts.into_iter().filter(|v| !v.verdict.passed).collect();
    let count = irregular.len() as f64;
    let ell_f = ell as f64;
    let irregular_ok = count <= epsilon * ell_f * ell_f + TOL;
    Ok(PartitionReport {
        epsilon,
        clusters: clusters.to_vec(),
        ell,
        cluster_masses: masses,
        total_mass: total,
        max_vertex_weight: max_mu,
        w0_mass_ok,
        balance_spread: spread,
        balance_ok,
        pairs_checked: pairs.len(),
        irregular_fraction: count / (ell_f * ell_f),
        irregular_pair_ratio: if pairs.is_empty() { 0.0 } else { count / pairs.len() as f64 },
        irregular_pairs: irregular,
        irregular_ok,
        regular: w0_mass_ok && balance_ok && irregular_ok,
        certified,
    })
}

/// Dense 0/1 adjacency rows over `B` for each vertex of `A` (bit `k` is
/// `B[k]`).
fn bit_rows(n: usize, edges: &[(usize, usize)], a: &[usize], b: &[usize]) -> Result<Vec<u32>> {
    let mut rows = vec![0u32; a.len()];
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(Error::Input(format!("edge ({u}, {v}) out of range")));
        }
        for (x, y) in [(u, v), (v, u)] {
            if let (Ok(i), Ok(k)) = (a.binary_search(&x), b.binary_search(&y)) {
                rows[i] |= 1 << k;
            }
        }
    }
    Ok(rows)
}

fn pop_edges(rows: &[u32], amask: u32, bmask: u32) -> u32 {
    rows.iter()
        .enumerate()
        .filter(|(i, _)| amask >> i & 1 == 1)
        .map(|(_, r)| (r & bmask).count_ones())
        .sum()
}

fn mask_members(list: &[usize], mask: u32) -> VertexSubset {
    VertexSubset::from_sorted(
        list.iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect(),
    )
}

/// Sub-pair masks `(A', B')` with `|A'| > ε|A|`, `|B'| > ε|B|`, in
/// lexicographic membership order.
fn classical_subpairs(la: usize, lb: usize, epsilon: f64) -> impl Iterator<Item = (u32, u32)> {
    let ok_a = move |m: u32| m.count_ones() as f64 > epsilon * la as f64;
    let ok_b = move |m: u32| m.count_ones() as f64 > epsilon * lb as f64;
    let rev = |m: u32, len: usize| m.reverse_bits() >> (32 - len);
    (0u32..1 << la)
        .map(move |x| rev(x, la))
        .filter(move |&am| ok_a(am))
        .flat_map(move |am| {
            (0u32..1 << lb)
                .map(move |y| rev(y, lb))
                .filter(move |&bm| ok_b(bm))
                .map(move |bm| (am, bm))
        })
}

/// Classical ε-regularity of `(A, B)` in the graph with edge list `edges`:
/// `|e(A',B')/(|A'||B'|) − e(A,B)/(|A||B|)| < ε` for all `A' ⊆ A`,
/// `B' ⊆ B` with `|A'| > ε|A|`, `|B'| > ε|B|`.
///
/// Exhaustive mode counts edges directly with bitmasks. Search mode runs
/// the weighted engine with `μ ≡ 1`, `ρ ≡ 1`, whose floor is the non-strict
/// `|A'| ≥ ε|A|`.
pub fn classical_epsilon_regular(
    n: usize,
    edges: &[(usize, usize)],
    a: &VertexSubset,
    b: &VertexSubset,
    epsilon: f64,
    mode: Mode,
    budget: SearchBudget,
) -> Result<PairVerdict> {
    validate_pair(n, a, b)?;
    validate_epsilon(epsilon)?;
    let mode = resolve_mode(mode, a.len() + b.len())?;
    if mode == Mode::Search {
        let g = crate::graph::WeightedGraph::unweighted(n, edges.iter().copied())?;
        let pair = SubgraphPair::full(g);
        return check_view(pair.f_view(), a, b, epsilon, Mode::Search, budget);
    }
    if a.len() > 31 || b.len() > 31 {
        return Err(Error::TooLarge {
            size: a.len().max(b.len()),
            cap: 31,
        });
    }
    let (la, lb) = (a.len(), b.len());
    let rows = bit_rows(n, edges, a.members(), b.members())?;
    let full = |l: usize| ((1u64 << l) - 1) as u32;
    let base = pop_edges(&rows, full(la), full(lb)) as f64 / (la * lb) as f64;
    let mut best: Option<(f64, u32, u32, f64)> = None;
    for (am, bm) in classical_subpairs(la, lb, epsilon) {
        let e = pop_edges(&rows, am, bm) as f64;
        let d = e / (am.count_ones() * bm.count_ones()) as f64;
        let dev = (d - base).abs();
        if best.map_or(true, |(b, ..)| dev > b + 1e-12 * b.max(1.0)) {
            best = Some((dev, am, bm, d));
        }
    }
    Ok(match best {
        None => PairVerdict {
            epsilon,
            passed: true,
            base_density: base,
            worst_deviation: 0.0,
            worst_witness: None,
            mode,
            certified: true,
            vacuous: true,
        },
        Some((dev, am, bm, d)) => PairVerdict {
            epsilon,
            passed: dev < epsilon,
            base_density: base,
            worst_deviation: dev,
            worst_witness: Some(SubPairWitness {
                a: mask_members(a.members(), am),
                b: mask_members(b.members(), bm),
                density: d,
                deviation: dev,
            }),
            mode,
            certified: true,
            vacuous: false,
        },
    })
}

/// Relative ε-regularity of `(A, B)` in `F` relative to `G ⊇ F`:
/// `|e_F(A',B')/e_G(A',B') − e_F(A,B)/e_G(A,B)| < ε` for all `A' ⊆ A`,
/// `B' ⊆ B` with `|A'| > ε|A|`, `|B'| > ε|B|` and `e_G(A',B') > 0`.
/// Exhaustive only.
pub fn relative_epsilon_regular(
    n: usize,
    g_edges: &[(usize, usize)],
    f_edges: &[(usize, usize)],
    a: &VertexSubset,
    b: &VertexSubset,
    epsilon: f64,
) -> Result<PairVerdict> {
    validate_pair(n, a, b)?;
    validate_epsilon(epsilon)?;
    if a.len() + b.len() > PAIR_EXHAUSTIVE_CAP {
        return Err(Error::TooLarge {
            size: a.len() + b.len(),
            cap: PAIR_EXHAUSTIVE_CAP,
        });
    }
    let norm = |e: &(usize, usize)| (e.0.min(e.1), e.0.max(e.1));
    let g_set: std::collections::HashSet<_> = g_edges.iter().map(norm).collect();
    if let Some(e) = f_edges.iter().map(norm).find(|e| !g_set.contains(e)) {
        return Err(Error::Input(format!("F edge {e:?} is not an edge of G")));
    }
    let (la, lb) = (a.len(), b.len());
    let rg = bit_rows(n, g_edges, a.members(), b.members())?;
    let rf = bit_rows(n, f_edges, a.members(), b.members())?;
    let full = |l: usize| ((1u64 << l) - 1) as u32;
    let eg = pop_edges(&rg, full(la), full(lb));
    if eg == 0 {
        return Err(Error::Degenerate("e_G(A, B) = 0: relative density undefined".into()));
    }
    let base = pop_edges(&rf, full(la), full(lb)) as f64 / eg as f64;
    let mut best: Option<(f64, u32, u32, f64)> = None;
    for (am, bm) in classical_subpairs(la, lb, epsilon) {
        let g = pop_edges(&rg, am, bm);
        if g == 0 {
            continue;
        }
        let d = pop_edges(&rf, am, bm) as f64 / g as f64;
        let dev = (d - base).abs();
        if best.map_or(true, |(b, ..)| dev > b + 1e-12 * b.max(1.0)) {
            best = Some((dev, am, bm, d));
        }
    }
    Ok(match best {
        None => PairVerdict {
            epsilon,
            passed: true,
            base_density: base,
            worst_deviation: 0.0,
            worst_witness: None,
            mode: Mode::Exhaustive,
            certified: true,
            vacuous: true,
        },
        Some((dev, am, bm, d)) => PairVerdict {
            epsilon,
            passed: dev < epsilon,
            base_density: base,
            worst_deviation: dev,
            worst_witness: Some(SubPairWitness {
                a: mask_members(a.members(), am),
                b: mask_members(b.members(), bm),
                density: d,
                deviation: dev,
            }),
            mode: Mode::Exhaustive,
            certified: true,
            vacuous: false,
        },
    })
}
