//! Constructive weighted regular partition: decompose `1_F`, cut `V` into
//! atoms by the structured part, pack atoms into `μ`-balanced clusters and
//! classify every cluster pair.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposition::{
    atom_count, strong_decompose, BasicFunction, DecomposeOptions, DecompositionSummary,
    IncrementSchedule, StructuredDecomposition,
};
use crate::edge_fn::{norm, EdgeFunction};
use crate::error::{Error, Result};
use crate::graph::{pair_count, NormalizationScales, SubgraphPair, VertexSubset, TOL};
use crate::quasirandom::{check_d_quasirandom, check_quasirandom, QrOptions, EXHAUSTIVE_CAP};
use crate::regularity::{check_view, validate_partition, SubPairWitness};
use crate::report::{Mode, SearchBudget};
use crate::rng::derive_seed;

/// Vertices grouped by their membership codes across all terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomPartition {
    /// Ordered by smallest member.
    pub atoms: Vec<VertexSubset>,
    /// Per vertex, per term: 0 neither, 1 in `A_k`, 2 in `B_k`.
    pub signatures: Vec<Vec<u8>>,
}

impl AtomPartition {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Index of the atom containing each vertex.
    pub fn atom_of(&self) -> Vec<usize> {
        let n = self.signatures.len();
        let mut out = vec![0; n];
        for (k, atom) in self.atoms.iter().enumerate() {
            for v in atom.iter() {
                out[v] = k;
            }
        }
        out
    }
}

pub fn atoms_from_structure(n: usize, terms: &[BasicFunction]) -> Result<AtomPartition> {
    for t in terms {
        t.a.check_bounds(n)?;
        t.b.check_bounds(n)?;
    }
    let signatures: Vec<Vec<u8>> = (0..n).map(|v| terms.iter().map(|t| t.code(v)).collect()).collect();
    let mut groups: BTreeMap<&[u8], Vec<usize>> = BTreeMap::new();
    for (v, s) in signatures.iter().enumerate() {
        groups.entry(s).or_default().push(v);
    }
    let mut atoms: Vec<VertexSubset> = groups.into_values().map(VertexSubset::from_sorted).collect();
    atoms.sort_by_key(|a| a.members()[0]);
    Ok(AtomPartition { atoms, signatures })
}

/// Output of [`split_atoms`]: `clusters[0]` is `W₀`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub clusters: Vec<VertexSubset>,
    /// Chunk target `w* = εμ(V)/(L + a)`.
    pub w_star: f64,
    /// Atom index of each `W_i`, `i ≥ 1`.
    pub cluster_atoms: Vec<usize>,
    /// Vertices heavier than `w*`, routed to `W₀`.
    pub oversized: Vec<usize>,
    pub warnings: Vec<String>,
}

impl Split {
    pub fn ell(&self) -> usize {
        self.clusters.len() - 1
    }
}

fn validate_eps_l(eps: f64, l: usize) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Parameter(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    if l == 0 {
        return Err(Error::Parameter("L must be at least 1".into()));
    }
    Ok(())
}

/// Packs each atom (vertices by descending `μ`, then index) into chunks of
/// mass in `(w* − μ_max, w*]`. Each atom's last chunk joins `W₀` unless it
/// also lands in that window.
pub fn split_atoms(atoms: &AtomPartition, mu: &[f64], eps: f64, l: usize) -> Result<Split> {
    validate_eps_l(eps, l)?;
    if atoms.signatures.len() != mu.len() {
        return Err(Error::Input("atom partition and μ disagree on n".into()));
    }
    let total: f64 = mu.iter().sum();
    let mu_max = mu.iter().copied().fold(0.0, f64::max);
    let a = atoms.len();
    let w_star = eps * total / (l + a) as f64;
    let fits = |m: f64| m <= w_star * (1.0 + 1e-12);
    let full = |m: f64| m > w_star - mu_max;
    let mut w0 = Vec::new();
    let mut clusters = Vec::new();
    let mut cluster_atoms = Vec::new();
    let mut oversized = Vec::new();
    for (k, atom) in atoms.atoms.iter().enumerate() {
        let mut order: Vec<usize> = atom.members().to_vec();
        order.sort_by(|&x, &y| mu[y].total_cmp(&mu[x]).then(x.cmp(&y)));
        let mut chunk: Vec<usize> = Vec::new();
        let mut mass = 0.0;
        for v in order {
            if !fits(mu[v]) {
                oversized.push(v);
                w0.push(v);
                continue;
            }
            if !fits(mass + mu[v]) {
                clusters.push(std::mem::take(&mut chunk));
                cluster_atoms.push(k);
                mass = 0.0;
            }
            chunk.push(v);
            mass += mu[v];
        }
        if !chunk.is_empty() {
            if full(mass) && fits(mass) {
                clusters.push(chunk);
                cluster_atoms.push(k);
            } else {
                w0.extend(chunk);
            }
        }
    }
    let mut warnings = Vec::new();
    if !oversized.is_empty() {
        let msg = format!(
            "{} vertices have μ above the chunk target w* = {w_star:.6} and were routed to W0; the construction assumes every μ(v) is negligible against μ(V)",
            oversized.len()
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }
    w0.sort_unstable();
    let mut all = vec![VertexSubset::from_sorted(w0)];
    all.extend(clusters.into_iter().map(|mut c| {
        c.sort_unstable();
        VertexSubset::from_sorted(c)
    }));
    Ok(Split {
        clusters: all,
        w_star,
        cluster_atoms,
        oversized,
        warnings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairClass {
    /// Normalized error energy at most `η` and no violation found.
    GoodByErrorEnergy,
    /// Error energy above `η` but no violation found.
    RegularBySearch,
    /// A sub-pair with deviation `≥ ε` was found.
    Irregular,
    /// `ρ_G(W_i, W_j) = 0`; the error energy cannot be normalized.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairClassification {
    /// 1-based cluster indices, `i < j`.
    pub i: usize,
    pub j: usize,
    pub class: PairClass,
    /// `Σ_{W_i×W_j} f_err²ρ_G / ρ_G(W_i, W_j)`; `None` when degenerate.
    pub error_energy: Option<f64>,
    pub worst_deviation: f64,
    pub exhaustive: bool,
    /// Present for irregular pairs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SubPairWitness>,
}

impl PairClassification {
    /// Irregular or degenerate: not covered by the good-pair argument.
    pub fn is_unresolved(&self) -> bool {
        matches!(self.class, PairClass::Irregular | PairClass::Degenerate)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingChecks {
    pub eta: f64,
    /// Pairs whose normalized error energy exceeds `η`.
    pub bad_pairs: usize,
    pub energy_sum: f64,
    /// `bad_pairs·η ≤ energy_sum`.
    pub markov_holds: bool,
    pub mean_energy: f64,
    /// `C(n,2)·‖f_err‖² / (#pairs · min ρ_G(W_i, W_j))`.
    pub mean_energy_bound: f64,
    pub mean_bound_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub pairs: Vec<PairClassification>,
    pub counting: CountingChecks,
}

/// Per-pair error energies plus a direct regularity verdict for every pair
/// `(i, j)`, `1 ≤ i < j ≤ ℓ`. Pair `k` in that order searches with seed
/// `derive_seed(budget.seed, k)`.
pub fn classify_pairs(
    p: &SubgraphPair,
    clusters: &[VertexSubset],
    f_err: &EdgeFunction,
    eps: f64,
    eta: f64,
    mode: Mode,
    budget: SearchBudget,
) -> Result<Classification> {
    validate_partition(p.n(), clusters)?;
    if f_err.n() != p.n() {
        return Err(Error::Input("f_err dimension mismatch".into()));
    }
    let g = p.g_view();
    let f = p.f_view();
    let ell = clusters.len() - 1;
    let index: Vec<(usize, usize)> = (1..=ell).flat_map(|i| (i + 1..=ell).map(move |j| (i, j))).collect();
    let pairs: Vec<PairClassification> = index
        .par_iter()
        .enumerate()
        .map(|(k, &(i, j))| {
            let (mut mass, mut energy) = (0.0, 0.0);
            for u in clusters[i].iter() {
                let row = g.row(u);
                for v in clusters[j].iter() {
                    if row[v] != 0.0 {
                        mass += row[v];
                        energy += f_err.get(u, v).powi(2) * row[v];
                    }
                }
            }
            let b = SearchBudget {
                restarts: budget.restarts,
                seed: derive_seed(budget.seed, k as u64),
            };
            let verdict = check_view(f, &clusters[i], &clusters[j], eps, mode, b)?;
            let error_energy = (mass > 0.0).then(|| energy / mass);
            let class = match error_energy {
                None => PairClass::Degenerate,
                Some(_) if !verdict.passed => PairClass::Irregular,
                Some(e) if e <= eta => PairClass::GoodByErrorEnergy,
                Some(_) => PairClass::RegularBySearch,
            };
            Ok(PairClassification {
                i,
                j,
                class,
                error_energy,
                worst_deviation: verdict.worst_deviation,
                exhaustive: verdict.mode == Mode::Exhaustive,
                witness: if verdict.passed { None } else { verdict.worst_witness },
            })
        })
        .collect::<Result<_>>()?;

    let energies: Vec<f64> = pairs.iter().filter_map(|c| c.error_energy).collect();
    let min_mass = index
        .iter()
        .filter_map(|&(i, j)| {
            let m = g.rho_sum_unchecked(clusters[i].members(), clusters[j].members());
            (m > 0.0).then_some(m)
        })
        .fold(f64::INFINITY, f64::min);
    let bad_pairs = energies.iter().filter(|&&e| e > eta).count();
    let energy_sum: f64 = energies.iter().sum();
    let mean_energy = if energies.is_empty() { 0.0 } else { energy_sum / energies.len() as f64 };
    let err_sq = norm(p.host(), f_err)?.powi(2);
    let mean_energy_bound = if energies.is_empty() {
        0.0
    } else {
        pair_count(p.n()) * err_sq / (energies.len() as f64 * min_mass)
    };
    let counting = CountingChecks {
        eta,
        bad_pairs,
        energy_sum,
        markov_holds: bad_pairs as f64 * eta <= energy_sum * (1.0 + 1e-12) + TOL,
        mean_energy,
        mean_energy_bound,
        mean_bound_holds: mean_energy <= mean_energy_bound * (1.0 + 1e-9) + TOL,
    };
    Ok(Classification { pairs, counting })
}

/// Tunable constants and budgets for [`build_regular_partition`].
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BuildOptions {
    pub l: usize,
    pub mode: Mode,
    pub budget: SearchBudget,
    pub m_max: usize,
    /// `η = ε⁶ / eta_factor`.
    pub eta_factor: f64,
    /// `J(m) = j_factor·ℓ(m)²/ε³`.
    pub j_factor: f64,
    /// Atom cap; `None` uses `⌊εμ(V)/μ_max⌋ − L`, the largest count with
    /// `w* ≥ μ_max`.
    pub max_atoms: Option<usize>,
    /// Restarts for measuring the host's quasi-randomness.
    pub qr_restarts: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            l: 4,
            mode: Mode::Auto,
            budget: SearchBudget::default(),
            m_max: 64,
            eta_factor: 100.0,
            j_factor: 100.0,
            max_atoms: None,
            qr_restarts: 8,
        }
    }
}

/// `J(m) = c·ℓ(m)²/ε³`, `ℓ(m) = (L + a(m))/ε`, refusing terms that would
/// push the atom count past `max_atoms`.
#[derive(Clone, Copy, Debug)]
pub struct ClusterSchedule {
    pub c: f64,
    pub eps: f64,
    pub l: usize,
    pub max_atoms: usize,
}

impl IncrementSchedule for ClusterSchedule {
    fn j(&self, n: usize, terms: &[BasicFunction], _m: usize) -> f64 {
        let ell = (self.l + atom_count(n, terms)) as f64 / self.eps;
        self.c * ell * ell / self.eps.powi(3)
    }

    fn admits(&self, n: usize, terms: &[BasicFunction], candidate: &BasicFunction) -> bool {
        let mut next = terms.to_vec();
        next.push(candidate.clone());
        atom_count(n, &next) <= self.max_atoms
    }
}

/// Measured host quasi-randomness and the resulting bound on the
/// structured term, `D·M²·β` against `ε/3`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructuredBound {
    /// Size floor used for the probe (`β·μ(V)`).
    pub beta_probe: f64,
    /// Largest `|d(A,B) − g|` found.
    pub beta_hat: f64,
    /// Largest `max(d/g, g/d)` found.
    #[serde(with = "crate::report::lenient_f64")]
    pub d_hat: f64,
    pub exhaustive: bool,
    #[serde(with = "crate::report::lenient_f64")]
    pub bound: f64,
    pub target: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildConstants {
    pub eta: f64,
    pub eta_factor: f64,
    pub j_factor: f64,
    pub good_pair_threshold: f64,
    /// `1/J` at termination.
    pub final_threshold: f64,
    pub max_atoms: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildReport {
    pub epsilon: f64,
    #[serde(rename = "L")]
    pub l: usize,
    pub n: usize,
    /// Scales applied when the input was not normalized.
    pub normalization: Option<NormalizationScales>,
    pub decomposition: DecompositionSummary,
    pub atom_count: usize,
    pub w_star: f64,
    pub ell: usize,
    pub clusters: Vec<VertexSubset>,
    pub cluster_masses: Vec<f64>,
    pub total_mass: f64,
    pub max_vertex_weight: f64,
    pub w0_mass_ok: bool,
    pub balance_spread: f64,
    pub balance_ok: bool,
    /// Every `W_i`, `i ≥ 1`, lies inside one atom.
    pub refines_atoms: bool,
    pub pairs: Vec<PairClassification>,
    pub good_by_error_energy: usize,
    pub regular_by_search: usize,
    /// Pairs with a found ε-regularity violation.
    pub irregular: usize,
    /// Pairs with `ρ_G(W_i, W_j) = 0`; regular by definition, but outside
    /// the error-energy argument.
    pub degenerate: usize,
    /// `(irregular + degenerate)` over the `ℓ(ℓ−1)/2` pairs.
    pub unresolved_pair_ratio: f64,
    /// Irregular count over `ℓ²`.
    pub irregular_fraction: f64,
    /// Irregular count over the `ℓ(ℓ−1)/2` pairs.
    pub irregular_pair_ratio: f64,
    /// Irregular count `≤ εℓ²`.
    pub irregular_ok: bool,
    pub regular: bool,
    /// Every pair verdict was exhaustive or a found violation.
    pub certified: bool,
    pub counting: CountingChecks,
    pub structured_bound: StructuredBound,
    pub constants: BuildConstants,
    pub warnings: Vec<String>,
}

/// Default atom cap `⌊εμ(V)/μ_max⌋ − L` (at least 1).
pub fn default_max_atoms(total_mu: f64, max_mu: f64, eps: f64, l: usize) -> usize {
    ((eps * total_mu / max_mu).floor() as usize).saturating_sub(l).max(1)
}

fn measure_structure(p: &SubgraphPair, eps: f64, m: usize, opts: &BuildOptions) -> Result<StructuredBound> {
    let g = p.host();
    let beta_probe = eps / 3.0;
    let qr = QrOptions {
        mode: opts.mode,
        budget: SearchBudget {
            restarts: opts.qr_restarts.max(1),
            seed: derive_seed(opts.budget.seed, u64::MAX),
        },
        exhaustive_cap: EXHAUSTIVE_CAP,
    };
    let beta = check_quasirandom(g, beta_probe, &qr)?;
    let d = check_d_quasirandom(g, 2.0, beta_probe, &qr)?;
    let bound = d.worst_deviation.max(1.0) * (m * m) as f64 * beta.worst_deviation;
    let target = eps / 3.0;
    Ok(StructuredBound {
        beta_probe,
        beta_hat: beta.worst_deviation,
        d_hat: d.worst_deviation,
        exhaustive: beta.mode == Mode::Exhaustive,
        bound,
        target,
        holds: bound < target,
    })
}

/// Full pipeline: decomposition of `1_F`, atoms, clusters, pair
/// classification and the three partition conditions.
pub fn build_regular_partition(p: &SubgraphPair, eps: f64, opts: &BuildOptions) -> Result<BuildReport> {
    validate_eps_l(eps, opts.l)?;
    let mut warnings = Vec::new();
    let (p, normalization) = if p.host().is_normalized() {
        (p.clone(), None)
    } else {
        let (q, s) = p.normalize()?;
        let msg = format!(
            "input rescaled to μ(V) = n, Σρ = C(n,2) (μ×{:.6}, ρ×{:.6})",
            s.mu_scale, s.rho_scale
        );
        log::info!("{msg}");
        warnings.push(msg);
        (q, Some(s))
    };
    let g = p.host();
    let n = g.n();
    let total = g.total_mu();
    let max_mu = g.max_mu();
    let max_atoms = opts
        .max_atoms
        .unwrap_or_else(|| default_max_atoms(total, max_mu, eps, opts.l));
    let eta = eps.powi(6) / opts.eta_factor;
    let schedule = ClusterSchedule {
        c: opts.j_factor,
        eps,
        l: opts.l,
        max_atoms,
    };
    let one_f = EdgeFunction::indicator_of(&p);
    let dec: StructuredDecomposition = strong_decompose(
        g,
        &one_f,
        eta,
        &schedule,
        &DecomposeOptions {
            m_max: opts.m_max,
            mode: opts.mode,
            budget: opts.budget,
        },
    )?;
    if !dec.certified {
        let msg = format!(
            "decomposition stopped ({:?}) with ‖f_err‖ = {:.6e} above η = {eta:.3e}",
            dec.stop_reason, dec.err_norm
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let atoms = atoms_from_structure(n, &dec.basis)?;
    let split = split_atoms(&atoms, g.mu(), eps, opts.l)?;
    warnings.extend(split.warnings.iter().cloned());
    if split.ell() == 0 {
        return Err(Error::Degenerate(format!(
            "no cluster reaches the chunk target w* = {:.6}; every vertex landed in W0",
            split.w_star
        )));
    }
    let pair_mode = match opts.mode {
        Mode::Exhaustive => Mode::Auto,
        m => m,
    };
    let cls = classify_pairs(&p, &split.clusters, &dec.f_err, eps, eta, pair_mode, opts.budget)?;

    let masses: Vec<f64> = split.clusters.iter().map(|c| g.mu_sum(c)).collect::<Result<_>>()?;
    let (lo, hi) = masses[1..]
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &m| (l.min(m), h.max(m)));
    let balance_spread = hi - lo;
    let atom_of = atoms.atom_of();
    let refines_atoms = split.clusters[1..]
        .iter()
        .all(|c| c.iter().all(|v| atom_of[v] == atom_of[c.members()[0]]));
    let count = |k: PairClass| cls.pairs.iter().filter(|c| c.class == k).count();
    let irregular = count(PairClass::Irregular);
    let degenerate = count(PairClass::Degenerate);
    let n_pairs = cls.pairs.len().max(1) as f64;
    let ell = split.ell();
    let ell_sq = (ell * ell) as f64;
    let w0_mass_ok = masses[0] <= eps * total + TOL;
    let balance_ok = balance_spread <= max_mu + TOL;
    let irregular_ok = irregular as f64 <= eps * ell_sq + TOL;
    let structured_bound = measure_structure(&p, eps, dec.m, opts)?;
    Ok(BuildReport {
        epsilon: eps,
        l: opts.l,
        n,
        normalization,
        decomposition: dec.summary(g),
        atom_count: atoms.len(),
        w_star: split.w_star,
        ell,
        cluster_masses: masses,
        total_mass: total,
        max_vertex_weight: max_mu,
        w0_mass_ok,
        balance_spread,
        balance_ok,
        refines_atoms,
        good_by_error_energy: count(PairClass::GoodByErrorEnergy),
        regular_by_search: count(PairClass::RegularBySearch),
        irregular,
        degenerate,
        unresolved_pair_ratio: (irregular + degenerate) as f64 / n_pairs,
        irregular_fraction: irregular as f64 / ell_sq,
        irregular_pair_ratio: irregular as f64 / n_pairs,
        irregular_ok,
        regular: w0_mass_ok && balance_ok && irregular_ok,
        certified: cls.pairs.iter().all(|c| c.exhaustive || c.class == PairClass::Irregular),
        clusters: split.clusters,
        pairs: cls.pairs,
        counting: cls.counting,
        structured_bound,
        constants: BuildConstants {
            eta,
            eta_factor: opts.eta_factor,
            j_factor: opts.j_factor,
            good_pair_threshold: eta,
            final_threshold: dec.final_threshold,
            max_atoms,
        },
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;
    use crate::models::gnpij::{gen_gnpij, ProbMatrixSpec};
    use crate::regularity::check_partition;
    use proptest::prelude::*;

    fn basic(n: usize, a: &[usize], b: &[usize]) -> BasicFunction {
        BasicFunction::new(VertexSubset::new(n, a.iter().copied()).unwrap(), VertexSubset::new(n, b.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn atom_examples() {
        let p = atoms_from_structure(6, &[]).unwrap();
        assert_eq!(p.atoms, vec![VertexSubset::full(6)]);
        let p = atoms_from_structure(6, &[basic(6, &[0, 1, 2], &[3, 4, 5])]).unwrap();
        assert_eq!(p.len(), 2);
        let p = atoms_from_structure(6, &[basic(6, &[0, 1], &[3, 4])]).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.atoms[1].members(), &[2, 5]);
    }

    #[test]
    fn split_arithmetic() {
        let atoms = atoms_from_structure(100, &[]).unwrap();
        let s = split_atoms(&atoms, &vec![1.0; 100], 0.5, 2).unwrap();
        assert!((s.w_star - 50.0 / 3.0).abs() < 1e-12);
        assert_eq!(s.ell(), 6);
        assert!(s.clusters[1..].iter().all(|c| c.len() == 16));
        assert_eq!(s.clusters[0].len(), 4);

        let atoms = atoms_from_structure(12, &[]).unwrap();
        let s = split_atoms(&atoms, &vec![1.0; 12], 0.5, 2).unwrap();
        assert!((s.w_star - 2.0).abs() < 1e-12);
        assert!(s.clusters[0].is_empty());
        assert_eq!(s.ell(), 6);
    }

    #[test]
    fn heavy_vertices_go_to_w0_with_warning() {
        let atoms = atoms_from_structure(5, &[]).unwrap();
        let s = split_atoms(&atoms, &[10.0, 1.0, 1.0, 1.0, 1.0], 0.3, 1).unwrap();
        assert_eq!(s.oversized, vec![0]);
        assert!(s.clusters[0].contains(0));
        assert_eq!(s.warnings.len(), 1);
    }

    #[test]
    fn zero_error_means_all_pairs_good() {
        let g = WeightedGraph::complete(12);
        let p = SubgraphPair::full(g);
        let clusters: Vec<VertexSubset> =
            std::iter::once(VertexSubset::empty()).chain((0..4).map(|k| VertexSubset::range(3 * k..3 * k + 3))).collect();
        let c = classify_pairs(&p, &clusters, &EdgeFunction::zeros(12), 0.3, 1e-6, Mode::Auto, SearchBudget::default()).unwrap();
        assert_eq!(c.pairs.len(), 6);
        assert!(c.pairs.iter().all(|x| x.class == PairClass::GoodByErrorEnergy));
        assert!(c.counting.markov_holds && c.counting.mean_bound_holds);
    }

    #[test]
    fn degenerate_pairs_count_as_irregular() {
        let g = WeightedGraph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        let p = SubgraphPair::full(g);
        let clusters = vec![VertexSubset::empty(), VertexSubset::range(0..2), VertexSubset::range(2..4)];
        let c = classify_pairs(&p, &clusters, &EdgeFunction::zeros(4), 0.3, 1e-6, Mode::Auto, SearchBudget::default()).unwrap();
        assert_eq!(c.pairs[0].class, PairClass::Degenerate);
        assert!(c.pairs[0].is_unresolved());
    }

    #[test]
    fn empty_f_builds_trivially() {
        let g = gen_gnpij(40, &ProbMatrixSpec::constant(0.5), 3).unwrap();
        let p = SubgraphPair::new(g, std::iter::empty()).unwrap();
        let r = build_regular_partition(&p, 0.4, &BuildOptions::default()).unwrap();
        assert_eq!(r.decomposition.m, 0);
        assert_eq!(r.irregular, 0);
        assert!(r.ell >= r.l);
        assert!(r.regular && r.refines_atoms);
        assert!(r.normalization.is_some());
    }

    /// End-to-end golden on a seeded quasi-random host with `F = G`.
    #[test]
    fn golden_gnp64_full() {
        let g = gen_gnpij(64, &ProbMatrixSpec::constant(0.5), 11).unwrap();
        let p = SubgraphPair::full(g);
        let r = build_regular_partition(&p, 0.4, &BuildOptions::default()).unwrap();
        assert!(r.w0_mass_ok && r.balance_ok && r.irregular_ok && r.refines_atoms);
        let check = check_partition(
            &p.normalize().unwrap().0,
            &r.clusters,
            0.4,
            Mode::Auto,
            SearchBudget::default(),
        )
        .unwrap();
        assert_eq!(check.irregular_pairs.len(), r.irregular);
        assert_eq!((r.decomposition.m, r.atom_count, r.ell, r.irregular), GOLDEN_GNP64);
    }

    const GOLDEN_GNP64: (usize, usize, usize, usize) = (4, 16, 64, 0);

    /// End-to-end golden with a planted dense block removed from `G`.
    #[test]
    fn golden_gnp128_planted() {
        let g = gen_gnpij(128, &ProbMatrixSpec::constant(0.5), 5).unwrap();
        let f: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .filter(|e| !(e.u < 32 && (32..64).contains(&e.v)))
            .map(|e| (e.u, e.v))
            .collect();
        let p = SubgraphPair::new(g, f).unwrap();
        let r = build_regular_partition(&p, 0.3, &BuildOptions::default()).unwrap();
        assert!(r.w0_mass_ok && r.balance_ok && r.refines_atoms);
        assert!(r.counting.markov_holds && r.counting.mean_bound_holds);
        let classes = (r.good_by_error_energy, r.regular_by_search, r.irregular, r.degenerate);
        assert_eq!((r.decomposition.m, r.atom_count, r.ell, classes), GOLDEN_GNP128);
    }

    const GOLDEN_GNP128: (usize, usize, usize, (usize, usize, usize, usize)) = (4, 16, 128, (64, 4029, 0, 4035));

    fn partition_instance() -> impl Strategy<Value = (Vec<f64>, Vec<BasicFunction>, f64, usize)> {
        (8usize..40, any::<u64>(), 0.05f64..0.95, 1usize..5, 0usize..4).prop_map(|(n, seed, eps, l, m)| {
            use rand::Rng;
            let mut rng = crate::rng::stream_rng(seed, 0);
            let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
            let terms = (0..m)
                .filter_map(|_| {
                    let lab: Vec<u8> = (0..n).map(|_| rng.gen_range(0..3)).collect();
                    let pick = |c| VertexSubset::from_mask(&lab.iter().map(|&x| x == c).collect::<Vec<_>>());
                    BasicFunction::new(pick(1), pick(2)).ok()
                })
                .collect();
            (mu, terms, eps, l)
        })
    }

    proptest! {
        #[test]
        fn split_invariants((mu, terms, eps, l) in partition_instance()) {
            let n = mu.len();
            let atoms = atoms_from_structure(n, &terms).unwrap();
            prop_assert!(atoms.len() <= 3usize.pow(terms.len() as u32));
            let s = split_atoms(&atoms, &mu, eps, l).unwrap();
            let mut seen = vec![0; n];
            for c in &s.clusters {
                for v in c.iter() {
                    seen[v] += 1;
                }
            }
            prop_assert!(seen.iter().all(|&k| k == 1));
            let total: f64 = mu.iter().sum();
            let mu_max = mu.iter().copied().fold(0.0, f64::max);
            let mass = |c: &VertexSubset| c.iter().map(|v| mu[v]).sum::<f64>();
            if s.oversized.is_empty() {
                prop_assert!(mass(&s.clusters[0]) <= eps * total + 1e-9);
            }
            let masses: Vec<f64> = s.clusters[1..].iter().map(mass).collect();
            if let (Some(lo), Some(hi)) = (masses.iter().copied().reduce(f64::min), masses.iter().copied().reduce(f64::max)) {
                prop_assert!(hi - lo <= mu_max + 1e-9);
            }
            let atom_of = atoms.atom_of();
            for (c, &k) in s.clusters[1..].iter().zip(&s.cluster_atoms) {
                prop_assert!(c.iter().all(|v| atom_of[v] == k));
            }
        }
    }
}
