//! Energy-increment decomposition `f = f_str + f_psd + f_err` over the
//! dictionary of bipartite indicators `γ_{A,B}`.
//!
//! The loop keeps a basis of selected `γ`'s, projects `f` onto their span in
//! the `ρ`-weighted inner product, and adds the `γ` most correlated with the
//! residual while that correlation reaches `1/J(M+1)`. Coefficients are
//! clipped to `[−M, M]`; the clipping residual goes to `f_err`.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::edge_fn::{inner_product, norm, EdgeFunction};
use crate::error::{Error, Result};
use crate::graph::{pair_count, VertexSubset, WeightedGraph, TOL};
use crate::report::{Mode, SearchBudget};
use crate::rng::{derive_seed, stream_rng};
use crate::search::{Domain, PairProblem, PairStats};

/// Largest `n` for the exhaustive correlation oracle (3ⁿ assignments).
pub const BASIC_EXHAUSTIVE_CAP: usize = 12;
/// Gram condition number above which a ridge term is added.
pub const RIDGE_CONDITION: f64 = 1e12;

/// `γ_{A,B}`: one on unordered pairs with an endpoint in each of the
/// disjoint sets. Stored with the smallest vertex in `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasicFunction {
    pub a: VertexSubset,
    pub b: VertexSubset,
}

impl BasicFunction {
    pub fn new(a: VertexSubset, b: VertexSubset) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::Precondition("basic function sets must be nonempty".into()));
        }
        if !a.is_disjoint(&b) {
            return Err(Error::Precondition("basic function sets must be disjoint".into()));
        }
        Ok(if b.members()[0] < a.members()[0] {
            Self { a: b, b: a }
        } else {
            Self { a, b }
        })
    }

    pub fn to_edge_function(&self, n: usize) -> EdgeFunction {
        EdgeFunction::bipartite_indicator(n, &self.a, &self.b)
    }

    /// Membership code per vertex: 0 neither, 1 in `a`, 2 in `b`.
    pub fn code(&self, v: usize) -> u8 {
        if self.a.contains(v) {
            1
        } else if self.b.contains(v) {
            2
        } else {
            0
        }
    }

    fn key(&self, n: usize) -> Vec<u8> {
        (0..n).map(|v| self.code(v)).collect()
    }
}

/// `⟨r, γ_{A,B}⟩ = C(n,2)⁻¹ Σ_{u∈A, v∈B} r(u,v)ρ_G(u,v)`.
pub fn correlation(g: &WeightedGraph, r: &EdgeFunction, a: &VertexSubset, b: &VertexSubset) -> Result<f64> {
    if r.n() != g.n() {
        return Err(Error::Input("edge function dimension mismatch".into()));
    }
    a.check_bounds(g.n())?;
    b.check_bounds(g.n())?;
    if !a.is_disjoint(b) {
        return Err(Error::Precondition("A and B must be disjoint".into()));
    }
    let mut s = 0.0;
    for u in a.iter() {
        let row = g.view().row(u);
        for v in b.iter() {
            if row[v] != 0.0 {
                s += r.get(u, v) * row[v];
            }
        }
    }
    Ok(s / pair_count(g.n()))
}

fn check_dims(g: &WeightedGraph, r: &EdgeFunction) -> Result<()> {
    if r.n() != g.n() {
        return Err(Error::Input(format!(
            "edge function has {} vertices, graph has {}",
            r.n(),
            g.n()
        )));
    }
    if g.n() < 2 {
        return Err(Error::Precondition("need at least two vertices".into()));
    }
    Ok(())
}

/// Exact argmax of `|⟨r, γ_{A,B}⟩|` over disjoint nonempty `(A, B)`.
/// Returns the signed correlation.
pub fn best_basic_exhaustive(g: &WeightedGraph, r: &EdgeFunction) -> Result<(BasicFunction, f64)> {
    check_dims(g, r)?;
    let n = g.n();
    if n > BASIC_EXHAUSTIVE_CAP {
        return Err(Error::TooLarge {
            size: n,
            cap: BASIC_EXHAUSTIVE_CAP,
        });
    }
    let w = r.weighted_matrix(g);
    let mass = vec![0.0; n];
    let c = pair_count(n);
    let problem = PairProblem {
        n,
        w: &w,
        mass: &mass,
        domain: Domain::Disjoint,
        floor_x: 0.0,
        floor_y: 0.0,
        score: |s: &PairStats| s.cross.abs(),
    };
    let best = problem.exhaustive().expect("n >= 2 admits a disjoint pair");
    let basic = BasicFunction::new(
        VertexSubset::from_sorted(best.x),
        VertexSubset::from_sorted(best.y),
    )?;
    Ok((basic, best.stats.cross / c))
}

/// One run of alternating best responses.
#[derive(Clone, Debug)]
pub struct AlternationTrace {
    pub basic: BasicFunction,
    pub correlation: f64,
    /// `sign·⟨r, γ⟩` after every half-step; non-decreasing.
    pub values: Vec<f64>,
}

/// Given `fixed`, the best response among vertices outside it: all `u`
/// with `sign·d(u) > 0`, or the single best `u` if none is positive.
fn best_response(w: &[f64], n: usize, fixed: &[bool], sign: f64) -> Option<(Vec<bool>, f64)> {
    let mut d = vec![0.0; n];
    for v in (0..n).filter(|&v| fixed[v]) {
        let row = &w[v * n..(v + 1) * n];
        for (du, &x) in d.iter_mut().zip(row) {
            *du += x;
        }
    }
    let mut chosen = vec![false; n];
    let mut value = 0.0;
    let mut any = false;
    let mut single: Option<(usize, f64)> = None;
    for u in (0..n).filter(|&u| !fixed[u]) {
        let s = sign * d[u];
        if s > 0.0 {
            chosen[u] = true;
            value += s;
            any = true;
        }
        if single.map_or(true, |(_, b)| s > b) {
            single = Some((u, s));
        }
    }
    if !any {
        let (u, s) = single?;
        chosen[u] = true;
        value = s;
    }
    Some((chosen, value))
}

fn to_subset(mask: &[bool]) -> VertexSubset {
    VertexSubset::from_mask(mask)
}

/// Alternating maximization of `sign·⟨r, γ_{A,B}⟩` from an initial `B`.
pub fn alternating_maximization(
    g: &WeightedGraph,
    r: &EdgeFunction,
    initial_b: &VertexSubset,
    sign: f64,
) -> Result<AlternationTrace> {
    check_dims(g, r)?;
    initial_b.check_bounds(g.n())?;
    if initial_b.is_empty() || initial_b.len() == g.n() {
        return Err(Error::Precondition("initial B must be a nonempty proper subset".into()));
    }
    let w = r.weighted_matrix(g);
    Ok(alternate(&w, g.n(), initial_b.mask(g.n()), sign))
}

fn alternate(w: &[f64], n: usize, mut b: Vec<bool>, sign: f64) -> AlternationTrace {
    let c = pair_count(n);
    let (mut a, mut value) = best_response(w, n, &b, sign).expect("B is a proper subset");
    let mut values = vec![value / c];
    for _ in 0..4 * n + 8 {
        let (nb, vb) = best_response(w, n, &a, sign).expect("A is a proper subset");
        if !(vb > value + 1e-12 * value.abs().max(1.0)) {
            break;
        }
        b = nb;
        value = vb;
        values.push(value / c);
        let (na, va) = best_response(w, n, &b, sign).expect("B is a proper subset");
        if !(va > value + 1e-12 * value.abs().max(1.0)) {
            break;
        }
        a = na;
        value = va;
        values.push(value / c);
    }
    let basic = BasicFunction::new(to_subset(&a), to_subset(&b)).expect("alternation keeps A, B disjoint and nonempty");
    AlternationTrace {
        basic,
        correlation: sign * value / c,
        values,
    }
}

/// Multi-start alternating maximization over random initial `B` and both
/// signs. Deterministic in `seed`.
pub fn best_basic_search(
    g: &WeightedGraph,
    r: &EdgeFunction,
    restarts: usize,
    seed: u64,
) -> Result<(BasicFunction, f64)> {
    check_dims(g, r)?;
    if restarts == 0 {
        return Err(Error::Parameter("restarts must be at least 1".into()));
    }
    let n = g.n();
    let w = r.weighted_matrix(g);
    let runs: Vec<AlternationTrace> = (0..restarts as u64)
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut rng = stream_rng(seed, k);
            let q: f64 = rng.gen_range(0.1..0.6);
            let mut b: Vec<bool> = (0..n).map(|_| rng.gen_bool(q)).collect();
            let members = b.iter().filter(|&&x| x).count();
            if members == 0 {
                b[rng.gen_range(0..n)] = true;
            } else if members == n {
                b[rng.gen_range(0..n)] = false;
            }
            let w = &w;
            [1.0, -1.0].map(move |s| alternate(w, n, b.clone(), s))
        })
        .collect();
    let best = runs
        .into_iter()
        .reduce(|x, y| {
            let (ax, ay) = (x.correlation.abs(), y.correlation.abs());
            let better = ay > ax + 1e-12 * ax.max(1.0);
            let tie = !better && ax <= ay + 1e-12 * ay.max(1.0);
            if better || (tie && y.basic.key(n) < x.basic.key(n)) {
                y
            } else {
                x
            }
        })
        .expect("at least one restart");
    Ok((best.basic, best.correlation))
}

/// Result of a least-squares projection onto a span of `γ`'s.
#[derive(Clone, Debug)]
pub struct Projection {
    pub coefficients: Vec<f64>,
    pub unclipped: Vec<f64>,
    pub f_proj: EdgeFunction,
    pub f_proj_unclipped: EdgeFunction,
    pub condition: f64,
    /// Ridge added to the Gram diagonal, if the condition number was too large.
    pub ridge: Option<f64>,
    pub clipped: bool,
}

/// `⟨γ_k, γ_l⟩ = [ρ(A_k∩A_l, B_k∩B_l) + ρ(A_k∩B_l, B_k∩A_l)]/C(n,2)`.
fn gram_entry(g: &WeightedGraph, x: &BasicFunction, y: &BasicFunction) -> f64 {
    let inter = |s: &VertexSubset, t: &VertexSubset| -> Vec<usize> {
        s.iter().filter(|&v| t.contains(v)).collect()
    };
    let view = g.view();
    let s1 = view.rho_sum_unchecked(&inter(&x.a, &y.a), &inter(&x.b, &y.b));
    let s2 = view.rho_sum_unchecked(&inter(&x.a, &y.b), &inter(&x.b, &y.a));
    (s1 + s2) / pair_count(g.n())
}

fn combine(n: usize, basis: &[BasicFunction], coef: &[f64]) -> EdgeFunction {
    let mut f = EdgeFunction::zeros(n);
    for (t, &c) in basis.iter().zip(coef) {
        if c != 0.0 {
            f.add_block(&t.a, &t.b, c);
        }
    }
    f
}

fn solve(gram: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<(Vec<f64>, f64, Option<f64>)> {
    let m = gram.nrows();
    let eig = SymmetricEigen::new(gram.clone()).eigenvalues;
    let (lo, hi) = eig.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &x| (l.min(x), h.max(x.abs())));
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    let mut mat = gram.clone();
    let mut ridge = None;
    if condition > RIDGE_CONDITION {
        let lambda = 1e-10 * gram.trace() / m as f64;
        if !(lambda > 0.0) {
            return Err(Error::Degenerate("Gram matrix is zero: no basis function touches an edge".into()));
        }
        for i in 0..m {
            mat[(i, i)] += lambda;
        }
        ridge = Some(lambda);
        log::debug!("Gram condition {condition:.3e} > {RIDGE_CONDITION:.0e}; ridge {lambda:.3e} added");
    }
    let chol = Cholesky::new(mat).ok_or_else(|| {
        Error::Degenerate(format!("Gram matrix not positive definite (condition {condition:.3e})"))
    })?;
    Ok((chol.solve(rhs).iter().copied().collect(), condition, ridge))
}

/// Least-squares coefficients of `f` on `basis`, then clipped to
/// `[−k_bound, k_bound]`.
pub fn project_structured(
    g: &WeightedGraph,
    f: &EdgeFunction,
    basis: &[BasicFunction],
    k_bound: f64,
) -> Result<Projection> {
    if basis.is_empty() {
        return Err(Error::Precondition("projection basis is empty".into()));
    }
    check_dims(g, f)?;
    let mut p = Projector::new(g, f)?;
    for t in basis {
        p.push(t.clone())?;
    }
    p.project(k_bound)
}

/// Incremental Gram matrix for a growing basis.
struct Projector<'g> {
    g: &'g WeightedGraph,
    f: &'g EdgeFunction,
    basis: Vec<BasicFunction>,
    gram: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl<'g> Projector<'g> {
    fn new(g: &'g WeightedGraph, f: &'g EdgeFunction) -> Result<Self> {
        check_dims(g, f)?;
        Ok(Self {
            g,
            f,
            basis: Vec::new(),
            gram: Vec::new(),
            rhs: Vec::new(),
        })
    }

    fn push(&mut self, t: BasicFunction) -> Result<()> {
        t.a.check_bounds(self.g.n())?;
        t.b.check_bounds(self.g.n())?;
        let row: Vec<f64> = self
            .basis
            .iter()
            .chain(std::iter::once(&t))
            .map(|s| gram_entry(self.g, &t, s))
            .collect();
        for (r, &x) in self.gram.iter_mut().zip(&row) {
            r.push(x);
        }
        self.gram.push(row);
        self.rhs.push(correlation(self.g, self.f, &t.a, &t.b)?);
        self.basis.push(t);
        Ok(())
    }

    fn project(&self, k_bound: f64) -> Result<Projection> {
        let m = self.basis.len();
        let gram = DMatrix::from_fn(m, m, |i, j| self.gram[i][j]);
        let rhs = DVector::from_column_slice(&self.rhs);
        let (unclipped, condition, ridge) = solve(&gram, &rhs)?;
        let coefficients: Vec<f64> = unclipped.iter().map(|c| c.clamp(-k_bound, k_bound)).collect();
        let clipped = coefficients != unclipped;
        let n = self.g.n();
        let f_proj_unclipped = combine(n, &self.basis, &unclipped);
        let f_proj = if clipped {
            combine(n, &self.basis, &coefficients)
        } else {
            f_proj_unclipped.clone()
        };
        Ok(Projection {
            coefficients,
            unclipped,
            f_proj,
            f_proj_unclipped,
            condition,
            ridge,
            clipped,
        })
    }
}

/// Schedule for the increment threshold `1/J(m)` and an optional veto on
/// candidate terms.
pub trait IncrementSchedule: Sync {
    /// `J(m)` for the `m`-th term on `n` vertices, given the terms accepted
    /// so far.
    fn j(&self, n: usize, terms: &[BasicFunction], m: usize) -> f64;

    /// Whether `candidate` may join `terms`; a refusal stops the loop with
    /// [`StopReason::StructureBudget`].
    fn admits(&self, _n: usize, _terms: &[BasicFunction], _candidate: &BasicFunction) -> bool {
        true
    }
}

/// Number of atoms (distinct signature vectors) of a term list.
pub fn atom_count(n: usize, terms: &[BasicFunction]) -> usize {
    let mut sigs: Vec<Vec<u8>> = (0..n).map(|v| terms.iter().map(|t| t.code(v)).collect()).collect();
    sigs.sort_unstable();
    sigs.dedup();
    sigs.len()
}

/// Named families for `J`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum JFunction {
    /// `J(m) = c`.
    Constant { c: f64 },
    /// `J(m) = c·(m+1)²`.
    Quadratic { c: f64 },
    /// `J(m) = c·ℓ²/ε³` with `ℓ = (L + a)/ε` and `a` the atom count of the
    /// terms accepted so far (1 with no terms).
    Cluster { c: f64, epsilon: f64, l: usize },
}

impl JFunction {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            JFunction::Constant { c } | JFunction::Quadratic { c } => *c > 0.0,
            JFunction::Cluster { c, epsilon, l } => *c > 0.0 && *epsilon > 0.0 && *epsilon < 1.0 && *l >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!("invalid J parameters: {self:?}")))
        }
    }
}

impl IncrementSchedule for JFunction {
    fn j(&self, n: usize, terms: &[BasicFunction], m: usize) -> f64 {
        match self {
            JFunction::Constant { c } => *c,
            JFunction::Quadratic { c } => c * ((m + 1) as f64).powi(2),
            JFunction::Cluster { c, epsilon, l } => {
                let ell = (*l + atom_count(n, terms)) as f64 / epsilon;
                c * ell * ell / epsilon.powi(3)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    /// No basic function reaches the threshold.
    Pseudorandom,
    /// `M_max` terms reached while a candidate still reached the threshold.
    TermCap,
    /// The schedule refused the next candidate.
    StructureBudget,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: f64,
    pub a: VertexSubset,
    pub b: VertexSubset,
}

#[derive(Clone, Copy, Debug)]
pub struct DecomposeOptions {
    pub m_max: usize,
    pub mode: Mode,
    pub budget: SearchBudget,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self {
            m_max: 64,
            mode: Mode::Auto,
            budget: SearchBudget::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StructuredDecomposition {
    pub terms: Vec<Term>,
    pub basis: Vec<BasicFunction>,
    pub m: usize,
    /// Coefficient bound `K = M`.
    pub k_bound: f64,
    pub f_str: EdgeFunction,
    pub f_psd: EdgeFunction,
    pub f_err: EdgeFunction,
    /// Largest `|⟨f_psd, γ⟩|` found at termination (0 when `f_psd = 0`).
    pub psd_certificate: f64,
    /// Largest `|⟨residual, γ⟩|` found at termination.
    pub residual_correlation: f64,
    /// `1/J` threshold in force at termination.
    pub final_threshold: f64,
    pub err_norm: f64,
    pub stop_reason: StopReason,
    /// `‖P_k f‖²` of the unclipped projection after each accepted term.
    pub energy_trace: Vec<f64>,
    pub clipped: bool,
    pub ridge_used: bool,
    pub mode: Mode,
    /// `‖f_err‖ ≤ eps`.
    pub certified: bool,
}

/// JSON-friendly view of a decomposition without the dense parts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionSummary {
    pub terms: Vec<Term>,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "K")]
    pub k_bound: f64,
    pub psd_certificate: f64,
    pub residual_correlation: f64,
    pub final_threshold: f64,
    pub err_norm: f64,
    pub str_norm: f64,
    pub psd_norm: f64,
    pub stop_reason: StopReason,
    pub energy_trace: Vec<f64>,
    pub clipped: bool,
    pub ridge_used: bool,
    pub mode: Mode,
    pub certified: bool,
}

impl StructuredDecomposition {
    pub fn summary(&self, g: &WeightedGraph) -> DecompositionSummary {
        DecompositionSummary {
            terms: self.terms.clone(),
            m: self.m,
            k_bound: self.k_bound,
            psd_certificate: self.psd_certificate,
            residual_correlation: self.residual_correlation,
            final_threshold: self.final_threshold,
            err_norm: self.err_norm,
            str_norm: norm(g, &self.f_str).unwrap_or(f64::NAN),
            psd_norm: norm(g, &self.f_psd).unwrap_or(f64::NAN),
            stop_reason: self.stop_reason,
            energy_trace: self.energy_trace.clone(),
            clipped: self.clipped,
            ridge_used: self.ridge_used,
            mode: self.mode,
            certified: self.certified,
        }
    }
}

fn best_basic(
    g: &WeightedGraph,
    r: &EdgeFunction,
    mode: Mode,
    budget: SearchBudget,
) -> Result<(BasicFunction, f64)> {
    match mode {
        Mode::Exhaustive => best_basic_exhaustive(g, r),
        _ => best_basic_search(g, r, budget.restarts, budget.seed),
    }
}

/// Greedy energy-increment decomposition of `f` (`‖f‖ ≤ 1`).
pub fn strong_decompose(
    g: &WeightedGraph,
    f: &EdgeFunction,
    eps: f64,
    schedule: &dyn IncrementSchedule,
    opts: &DecomposeOptions,
) -> Result<StructuredDecomposition> {
    check_dims(g, f)?;
    if !(eps > 0.0) {
        return Err(Error::Parameter(format!("eps must be positive, got {eps}")));
    }
    let f_norm = norm(g, f)?;
    if f_norm > 1.0 + TOL {
        return Err(Error::Precondition(format!("‖f‖ = {f_norm} exceeds 1")));
    }
    let n = g.n();
    let mode = match opts.mode {
        Mode::Auto if n <= BASIC_EXHAUSTIVE_CAP => Mode::Exhaustive,
        Mode::Auto => Mode::Search,
        Mode::Exhaustive if n > BASIC_EXHAUSTIVE_CAP => {
            return Err(Error::TooLarge {
                size: n,
                cap: BASIC_EXHAUSTIVE_CAP,
            })
        }
        m => m,
    };
    let mut projector = Projector::new(g, f)?;
    let mut residual = f.clone();
    let mut f_str = EdgeFunction::zeros(n);
    let mut f_unclipped = EdgeFunction::zeros(n);
    let mut coefficients: Vec<f64> = Vec::new();
    let mut energy_trace = Vec::new();
    let mut ridge_used = false;
    let mut clipped = false;
    let (stop_reason, residual_correlation, final_threshold) = loop {
        let m = projector.basis.len();
        let threshold = 1.0 / schedule.j(n, &projector.basis, m + 1);
        let budget = SearchBudget {
            restarts: opts.budget.restarts,
            seed: derive_seed(opts.budget.seed, m as u64),
        };
        let (candidate, corr) = best_basic(g, &residual, mode, budget)?;
        log::debug!("term {}: best correlation {corr:.6e}, threshold {threshold:.6e}", m + 1);
        if corr.abs() < threshold {
            break (StopReason::Pseudorandom, corr.abs(), threshold);
        }
        if m >= opts.m_max {
            break (StopReason::TermCap, corr.abs(), threshold);
        }
        if !schedule.admits(n, &projector.basis, &candidate) {
            break (StopReason::StructureBudget, corr.abs(), threshold);
        }
        projector.push(candidate)?;
        let proj = projector.project((m + 1) as f64)?;
        ridge_used |= proj.ridge.is_some();
        clipped = proj.clipped;
        residual = f - &proj.f_proj_unclipped;
        energy_trace.push(inner_product(g, &proj.f_proj_unclipped, &proj.f_proj_unclipped)?);
        f_str = proj.f_proj;
        f_unclipped = proj.f_proj_unclipped;
        coefficients = proj.coefficients;
    };
    let m = projector.basis.len();
    let (f_psd, f_err, psd_certificate) = match stop_reason {
        StopReason::Pseudorandom => (residual, &f_unclipped - &f_str, residual_correlation),
        _ => (EdgeFunction::zeros(n), f - &f_str, 0.0),
    };
    let err_norm = norm(g, &f_err)?;
    let terms = projector
        .basis
        .iter()
        .zip(&coefficients)
        .map(|(t, &c)| Term {
            coefficient: c,
            a: t.a.clone(),
            b: t.b.clone(),
        })
        .collect();
    Ok(StructuredDecomposition {
        terms,
        basis: projector.basis,
        m,
        k_bound: m as f64,
        f_str,
        f_psd,
        f_err,
        psd_certificate,
        residual_correlation,
        final_threshold,
        err_norm,
        stop_reason,
        energy_trace,
        clipped,
        ridge_used,
        mode,
        certified: err_norm <= eps,
    })
}
