//! Weighted β-quasi-randomness and its (D, β) sandwich variant.
//!
//! A graph is weighted β-quasi-random when every pair of disjoint sets with
//! `μ(A), μ(B) ≥ β·μ(V)` has weighted density within `β` of the global
//! density `ρ_G(V,V)/μ(V)²`. The (D, β) variant only asks for
//! `global/D ≤ d(A,B) ≤ D·global`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{VertexSubset, WeightedGraph, TOL};
use crate::report::{lenient_f64, Mode, SearchBudget};
use crate::search::{Domain, PairProblem, PairStats, Witness};

/// Default vertex cap for exhaustive enumeration (3ⁿ assignments).
pub const EXHAUSTIVE_CAP: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuasirandomKind {
    #[serde(rename = "beta")]
    Beta,
    #[serde(rename = "D-beta")]
    DBeta,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuasirandomVerdict {
    pub kind: QuasirandomKind,
    pub beta: f64,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none", default)]
    pub d: Option<f64>,
    pub passed: bool,
    /// `|d(A,B) − global|` for the β kind; the factor `max(d/global,
    /// global/d)` for the (D, β) kind (infinite when `d = 0`).
    #[serde(with = "lenient_f64")]
    pub worst_deviation: f64,
    pub worst_pair: Option<(VertexSubset, VertexSubset)>,
    pub worst_pair_density: Option<f64>,
    pub mode: Mode,
    pub global_density: f64,
    /// Exhaustive verdicts are exact; search verdicts certify only failures.
    pub certified: bool,
    /// No disjoint pair meets the mass floors.
    pub vacuous: bool,
    pub warnings: Vec<String>,
}

/// Options shared by the quasi-randomness checks.
#[derive(Clone, Copy, Debug)]
pub struct QrOptions {
    pub mode: Mode,
    pub budget: SearchBudget,
    pub exhaustive_cap: usize,
}

impl Default for QrOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Auto,
            budget: SearchBudget::default(),
            exhaustive_cap: EXHAUSTIVE_CAP,
        }
    }
}

/// `ρ_G(V,V)/μ(V)²` with `ρ_G(V,V)` counting each edge in both orders.
pub fn global_density(g: &WeightedGraph) -> f64 {
    2.0 * g.rho_total() / (g.total_mu() * g.total_mu())
}

/// Exact β-quasi-randomness verdict by enumerating all disjoint pairs.
pub fn check_quasirandom_exhaustive(g: &WeightedGraph, beta: f64) -> Result<QuasirandomVerdict> {
    let opts = QrOptions {
        mode: Mode::Exhaustive,
        ..QrOptions::default()
    };
    check(g, beta, None, &opts)
}

/// β-quasi-randomness verdict by multi-start local search. A pass only means no
/// violation was found within the budget.
pub fn check_quasirandom_search(
    g: &WeightedGraph,
    beta: f64,
    restarts: usize,
    seed: u64,
) -> Result<QuasirandomVerdict> {
    let opts = QrOptions {
        mode: Mode::Search,
        budget: SearchBudget { restarts, seed },
        ..QrOptions::default()
    };
    check(g, beta, None, &opts)
}

/// β-quasi-randomness verdict with explicit options.
pub fn check_quasirandom(g: &WeightedGraph, beta: f64, opts: &QrOptions) -> Result<QuasirandomVerdict> {
    check(g, beta, None, opts)
}

/// (D, β)-quasi-randomness verdict: `global/D ≤ d(A,B) ≤ D·global` on every qualifying pair.
pub fn check_d_quasirandom(
    g: &WeightedGraph,
    d: f64,
    beta: f64,
    opts: &QrOptions,
) -> Result<QuasirandomVerdict> {
    if !(d > 1.0 && d.is_finite()) {
        return Err(Error::Parameter(format!("D must be a finite real > 1, got {d}")));
    }
    check(g, beta, Some(d), opts)
}

fn sandwich_factor(density: f64, global: f64) -> f64 {
    if density == global {
        1.0
    } else if density == 0.0 || global == 0.0 {
        f64::INFINITY
    } else {
        (density / global).max(global / density)
    }
}

fn check(g: &WeightedGraph, beta: f64, d: Option<f64>, opts: &QrOptions) -> Result<QuasirandomVerdict> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Parameter(format!("beta must lie in (0, 1), got {beta}")));
    }
    let n = g.n();
    let mode = match opts.mode {
        Mode::Auto if n <= opts.exhaustive_cap => Mode::Exhaustive,
        Mode::Auto => Mode::Search,
        m => m,
    };
    if mode == Mode::Exhaustive && n > opts.exhaustive_cap {
        return Err(Error::TooLarge {
            size: n,
            cap: opts.exhaustive_cap,
        });
    }
    if mode == Mode::Search && opts.budget.restarts == 0 {
        return Err(Error::Parameter("restarts must be at least 1".into()));
    }
    let global = global_density(g);
    let mut warnings = Vec::new();
    if d.is_none() && !(0.5..=2.0).contains(&global) {
        let msg = format!(
            "global density {global:.6} is outside [0.5, 2]; the absolute threshold beta presumes density near 1 (consider normalizing)"
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let floor = beta * g.total_mu();
    let view = g.view();
    let score = move |s: &PairStats| {
        let density = s.cross / (s.mass_x * s.mass_y);
        match d {
            None => (density - global).abs(),
            Some(_) => sandwich_factor(density, global),
        }
    };
    let problem = PairProblem {
        n,
        w: view.matrix(),
        mass: g.mu(),
        domain: Domain::Disjoint,
        floor_x: floor,
        floor_y: floor,
        score,
    };
    let best: Option<Witness> = match mode {
        Mode::Exhaustive => problem.exhaustive(),
        _ => problem.local_search(opts.budget.restarts, opts.budget.seed),
    };
    let (kind, limit) = match d {
        None => (QuasirandomKind::Beta, beta),
        Some(d) => (QuasirandomKind::DBeta, d),
    };
    let verdict = match best {
        None => QuasirandomVerdict {
            kind,
            beta,
            d,
            passed: true,
            worst_deviation: 0.0,
            worst_pair: None,
            worst_pair_density: None,
            mode,
            global_density: global,
            certified: mode == Mode::Exhaustive,
            vacuous: true,
            warnings,
        },
        Some(w) => {
            let passed = match kind {
                QuasirandomKind::Beta => w.score < limit,
                QuasirandomKind::DBeta => w.score <= limit + TOL,
            };
            let density = w.stats.cross / (w.stats.mass_x * w.stats.mass_y);
            QuasirandomVerdict {
                kind,
                beta,
                d,
                passed,
                worst_deviation: w.score,
                worst_pair: Some((VertexSubset::from_sorted(w.x), VertexSubset::from_sorted(w.y))),
                worst_pair_density: Some(density),
                mode,
                global_density: global,
                certified: mode == Mode::Exhaustive || !passed,
                vacuous: false,
                warnings,
            }
        }
    };
    Ok(verdict)
}
