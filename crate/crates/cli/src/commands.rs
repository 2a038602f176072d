use std::path::{Path, PathBuf};

use serde::Serialize;

use regulab::decomposition::{strong_decompose, DecomposeOptions, JFunction};
use regulab::io::{self, PairFile};
use regulab::models::gnpij::{concentration_test, gen_gnpij, ProbMatrixSpec};
use regulab::models::star::make_star;
use regulab::models::volume::{make_counterexample, volume_deviation, volume_weights};
use regulab::partition::{build_regular_partition, BuildOptions, PairClass};
use regulab::quasirandom::{check_d_quasirandom, check_quasirandom, QrOptions, EXHAUSTIVE_CAP};
use regulab::regularity::{check_pair, check_pair_exhaustive, check_pair_search, check_partition, PairVerdict};
use regulab::{
    EdgeFunction, Error, NormalizationScales, SearchBudget, SubgraphPair, VertexSubset, WeightedGraph,
};

use crate::args::*;
use crate::output::{emit, write_csv, write_text, CliResult};

/// Exit status of a successful run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// A definitional check failed.
    Fail,
    /// Completed without a certificate (search budget or term cap).
    Uncertified,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 3,
            Outcome::Uncertified => 4,
        }
    }

    fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

pub struct Ctx {
    pub timestamp: bool,
}

fn budget(s: &SearchArgs) -> SearchBudget {
    SearchBudget {
        restarts: s.restarts,
        seed: s.seed,
    }
}

fn normalized_pair(p: SubgraphPair) -> CliResult<(SubgraphPair, Option<NormalizationScales>)> {
    if p.host().is_normalized() {
        Ok((p, None))
    } else {
        let (q, s) = p.normalize()?;
        Ok((q, Some(s)))
    }
}

pub fn gen(a: &GenArgs) -> CliResult<Outcome> {
    let text = match a.model {
        Model::Gnpij => {
            let mut spec = match (&a.p, &a.p_range) {
                (Some(p), None) => ProbMatrixSpec::constant(*p),
                (None, Some(r)) if r.len() == 2 => ProbMatrixSpec::uniform_range(r[0], r[1], a.seed),
                _ => return Err("gnpij needs exactly one of --p or --p-range lo,hi".into()),
            };
            if let Some(f) = a.floor {
                spec = spec.with_floor(f);
            }
            if let Some(path) = &a.spec_out {
                std::fs::write(path, serde_json::to_string_pretty(&spec)? + "\n")?;
            }
            io::graph_to_json(&gen_gnpij(a.n, &spec, a.seed)?)
        }
        Model::Star => {
            let g = make_star(a.n)?;
            let center = VertexSubset::new(a.n, [0])?;
            let leaves = VertexSubset::range(1..a.n);
            io::pair_to_json(&SubgraphPair::full(g), Some(&center), Some(&leaves))
        }
        Model::VolumeCounterexample => {
            let ce = make_counterexample(a.n, a.seed)?;
            let g = match a.weights {
                CounterexampleWeights::Unit => ce.graph.clone(),
                CounterexampleWeights::Volume => volume_weights(&ce.graph)?,
                CounterexampleWeights::Reciprocal => ce.reciprocal_weights()?,
            };
            io::pair_to_json(&SubgraphPair::full(g), Some(&ce.a()), Some(&ce.b()))
        }
    };
    write_text(a.output.as_deref(), &text)?;
    Ok(Outcome::Pass)
}

pub fn check_qr(cx: &Ctx, a: &CheckQrArgs) -> CliResult<Outcome> {
    let g = io::read_graph(&a.input)?;
    let opts = QrOptions {
        mode: a.search.mode.into(),
        budget: budget(&a.search),
        exhaustive_cap: EXHAUSTIVE_CAP,
    };
    let v = match a.d {
        Some(d) => check_d_quasirandom(&g, d, a.beta, &opts)?,
        None => check_quasirandom(&g, a.beta, &opts)?,
    };
    emit("check-qr", &v, a.output.as_deref(), cx.timestamp)?;
    Ok(Outcome::from_pass(v.passed))
}

fn pair_sets(file: &PairFile, a: &Option<Vec<usize>>, b: &Option<Vec<usize>>) -> CliResult<(VertexSubset, VertexSubset)> {
    let n = file.graph.n();
    let pick = |arg: &Option<Vec<usize>>, from_file: &Option<VertexSubset>, name: &str| -> CliResult<VertexSubset> {
        match (arg, from_file) {
            (Some(v), _) => Ok(VertexSubset::new(n, v.iter().copied())?),
            (None, Some(s)) => Ok(s.clone()),
            (None, None) => Err(format!("no {name}: pass --{name} or put \"{name}\" in the pair file").into()),
        }
    };
    Ok((pick(a, &file.a, "A")?, pick(b, &file.b, "B")?))
}

#[derive(Serialize)]
struct PairReport<'a> {
    #[serde(rename = "A")]
    a: &'a VertexSubset,
    #[serde(rename = "B")]
    b: &'a VertexSubset,
    normalization: Option<NormalizationScales>,
    verdict: &'a PairVerdict,
}

#[derive(Serialize)]
struct PairRow {
    epsilon: f64,
    passed: bool,
    base_density: f64,
    worst_deviation: f64,
    mode: String,
    certified: bool,
    vacuous: bool,
    witness_a: String,
    witness_b: String,
}

pub fn check_pair_cmd(cx: &Ctx, a: &CheckPairArgs) -> CliResult<Outcome> {
    let file = io::read_pair(&a.input)?;
    let (sa, sb) = pair_sets(&file, &a.a, &a.b)?;
    let pair = file.subgraph_pair()?;
    let (pair, normalization) = if a.normalize { normalized_pair(pair)? } else { (pair, None) };
    let v = check_pair(&pair, &sa, &sb, a.epsilon, a.search.mode.into(), budget(&a.search))?;
    emit(
        "check-pair",
        &PairReport {
            a: &sa,
            b: &sb,
            normalization,
            verdict: &v,
        },
        a.output.as_deref(),
        cx.timestamp,
    )?;
    if let Some(path) = &a.csv {
        let (wa, wb) = v
            .worst_witness
            .as_ref()
            .map_or((String::new(), String::new()), |w| (w.a.to_string(), w.b.to_string()));
        write_csv(
            path,
            [PairRow {
                epsilon: v.epsilon,
                passed: v.passed,
                base_density: v.base_density,
                worst_deviation: v.worst_deviation,
                mode: v.mode.to_string(),
                certified: v.certified,
                vacuous: v.vacuous,
                witness_a: wa,
                witness_b: wb,
            }],
        )?;
    }
    Ok(Outcome::from_pass(v.passed))
}

#[derive(Serialize)]
struct DecomposeReport {
    normalization: Option<NormalizationScales>,
    #[serde(rename = "J")]
    j: JFunction,
    eps: f64,
    #[serde(rename = "Mmax")]
    m_max: usize,
    #[serde(flatten)]
    summary: regulab::decomposition::DecompositionSummary,
}

pub fn decompose(cx: &Ctx, a: &DecomposeArgs) -> CliResult<Outcome> {
    let file = io::read_pair(&a.input)?;
    let (pair, normalization) = normalized_pair(file.subgraph_pair()?)?;
    let j = match a.j {
        JFamily::Constant => JFunction::Constant { c: a.c },
        JFamily::Quadratic => JFunction::Quadratic { c: a.c },
        JFamily::Cluster => JFunction::Cluster {
            c: a.c,
            epsilon: a.cluster_eps.unwrap_or(a.eps),
            l: a.l,
        },
    };
    j.validate()?;
    let opts = DecomposeOptions {
        m_max: a.m_max,
        mode: a.search.mode.into(),
        budget: budget(&a.search),
    };
    let f = EdgeFunction::indicator_of(&pair);
    let d = strong_decompose(pair.host(), &f, a.eps, &j, &opts)?;
    let report = DecomposeReport {
        normalization,
        j,
        eps: a.eps,
        m_max: a.m_max,
        summary: d.summary(pair.host()),
    };
    emit("decompose", &report, a.output.as_deref(), cx.timestamp)?;
    Ok(if d.certified { Outcome::Pass } else { Outcome::Uncertified })
}

#[derive(Serialize)]
struct ClassRow {
    i: usize,
    j: usize,
    class: PairClass,
    error_energy: Option<f64>,
    worst_deviation: f64,
    exhaustive: bool,
}

pub fn partition(cx: &Ctx, a: &PartitionArgs) -> CliResult<Outcome> {
    let pair = io::read_pair(&a.input)?.subgraph_pair()?;
    let opts = BuildOptions {
        l: a.l,
        mode: a.search.mode.into(),
        budget: budget(&a.search),
        m_max: a.m_max,
        eta_factor: a.eta_factor,
        j_factor: a.j_factor,
        max_atoms: a.max_atoms,
        qr_restarts: a.qr_restarts,
    };
    let r = build_regular_partition(&pair, a.epsilon, &opts)?;
    emit("partition", &r, a.output.as_deref(), cx.timestamp)?;
    if let Some(path) = &a.partition_out {
        std::fs::write(path, io::partition_to_json(&r.clusters))?;
    }
    if let Some(path) = &a.csv {
        write_csv(
            path,
            r.pairs.iter().map(|c| ClassRow {
                i: c.i,
                j: c.j,
                class: c.class,
                error_energy: c.error_energy,
                worst_deviation: c.worst_deviation,
                exhaustive: c.exhaustive,
            }),
        )?;
    }
    Ok(if !r.regular {
        Outcome::Fail
    } else if !(r.certified && r.decomposition.certified) {
        Outcome::Uncertified
    } else {
        Outcome::Pass
    })
}

#[derive(Serialize)]
struct VerifyReport {
    normalization: Option<NormalizationScales>,
    #[serde(flatten)]
    report: regulab::regularity::PartitionReport,
}

#[derive(Serialize)]
struct IrregularRow {
    i: usize,
    j: usize,
    base_density: f64,
    worst_deviation: f64,
    mode: String,
    witness_a: String,
    witness_b: String,
}

pub fn verify(cx: &Ctx, a: &VerifyArgs) -> CliResult<Outcome> {
    let pair = io::read_pair(&a.input)?.subgraph_pair()?;
    let (pair, normalization) = if a.no_normalize { (pair, None) } else { normalized_pair(pair)? };
    let clusters = io::read_partition(&a.partition, pair.n())?;
    let r = check_partition(&pair, &clusters, a.epsilon, a.search.mode.into(), budget(&a.search))?;
    if let Some(path) = &a.csv {
        write_csv(
            path,
            r.irregular_pairs.iter().map(|p| {
                let (wa, wb) = p
                    .verdict
                    .worst_witness
                    .as_ref()
                    .map_or((String::new(), String::new()), |w| (w.a.to_string(), w.b.to_string()));
                IrregularRow {
                    i: p.i,
                    j: p.j,
                    base_density: p.verdict.base_density,
                    worst_deviation: p.verdict.worst_deviation,
                    mode: p.verdict.mode.to_string(),
                    witness_a: wa,
                    witness_b: wb,
                }
            }),
        )?;
    }
    let regular = r.regular;
    emit(
        "verify",
        &VerifyReport {
            normalization,
            report: r,
        },
        a.output.as_deref(),
        cx.timestamp,
    )?;
    Ok(Outcome::from_pass(regular))
}

pub fn concentration(cx: &Ctx, a: &ConcentrationArgs) -> CliResult<Outcome> {
    let g = io::read_graph(&a.input)?;
    let spec: ProbMatrixSpec = serde_json::from_str(&std::fs::read_to_string(&a.spec)?)
        .map_err(|e| Error::Format {
            path: a.spec.display().to_string(),
            line: e.line().max(1),
            message: e.to_string(),
        })?;
    let r = concentration_test(&g, &spec, a.beta, a.pairs, a.seed)?;
    emit("concentration", &r, a.output.as_deref(), cx.timestamp)?;
    Ok(Outcome::from_pass(r.passed))
}

#[derive(Serialize)]
struct StarDemo {
    n: usize,
    mu_center: f64,
    mu_leaf: f64,
    rho: f64,
    total_mu: f64,
    rho_total: f64,
    pair_count: f64,
    center_leaves: PairVerdict,
    quasirandom: regulab::quasirandom::QuasirandomVerdict,
}

#[derive(Serialize)]
struct CounterexampleDemo {
    n: usize,
    seed: u64,
    volume_epsilon: f64,
    volume_deviation: f64,
    volume_violation: bool,
    weighted_epsilon: f64,
    weighted: PairVerdict,
    weighted_volume_weights: PairVerdict,
}

#[derive(Serialize)]
struct ConcentrationDemo {
    n: usize,
    spec: ProbMatrixSpec,
    seed: u64,
    rho_total_over_pairs: f64,
    report: regulab::models::gnpij::ConcentrationReport,
}

pub fn demo(cx: &Ctx, a: &DemoArgs) -> CliResult<Outcome> {
    let default = |s: &str| PathBuf::from(format!("demo-{s}.json"));
    match a.name {
        DemoName::Star => {
            let n = 9;
            let g = make_star(n)?;
            let p = SubgraphPair::full(g.clone());
            let leaves = VertexSubset::range(1..n);
            let v = check_pair_exhaustive(&p, &VertexSubset::new(n, [0])?, &leaves, 0.1)?;
            let (gn, _) = g.normalize()?;
            let qr = check_quasirandom(&gn, 0.3, &QrOptions { mode: regulab::Mode::Exhaustive, budget: SearchBudget::default(), exhaustive_cap: EXHAUSTIVE_CAP })?;
            println!("star on {n} vertices");
            println!("  mu(center) = {}, mu(leaf) = {}, rho = {}", g.mu()[0], g.mu()[1], g.edges()[0].rho);
            println!("  mu(V) = {}, sum rho = {} = C({n},2) = {}", g.total_mu(), g.rho_total(), regulab::graph::pair_count(n));
            println!("  (center, leaves) at eps = 0.1: {} (worst deviation {})", if v.passed { "regular" } else { "irregular" }, v.worst_deviation);
            println!("  beta = 0.3 quasi-randomness (normalized): {} (worst deviation {:.4})", if qr.passed { "pass" } else { "fail" }, qr.worst_deviation);
            let report = StarDemo {
                n,
                mu_center: g.mu()[0],
                mu_leaf: g.mu()[1],
                rho: g.edges()[0].rho,
                total_mu: g.total_mu(),
                rho_total: g.rho_total(),
                pair_count: regulab::graph::pair_count(n),
                center_leaves: v,
                quasirandom: qr,
            };
            write_demo(cx, "star", &report, a.output.clone().unwrap_or_else(|| default("star")))
        }
        DemoName::VolumeCounterexample => {
            let (n, seed) = (400, 7);
            let ce = make_counterexample(n, seed)?;
            let (sa, sb) = (ce.a(), ce.b());
            let vol = volume_deviation(&ce.graph, &sa, &sb, &ce.a2, &ce.b2)?;
            let w = check_pair_search(&SubgraphPair::full(ce.reciprocal_weights()?), &sa, &sb, 0.25, 64, seed)?;
            let vw = check_pair_search(&SubgraphPair::full(volume_weights(&ce.graph)?), &sa, &sb, 0.25, 64, seed)?;
            println!("volume counterexample, n = {n}, seed = {seed}");
            println!("  volume deviation at (A2, B2): {:.4} vs eps = 0.05 -> {}", vol.normalized, if vol.normalized >= 0.05 { "irregular" } else { "regular" });
            println!("  weighted (reciprocal weights) at eps = 0.25: worst deviation found {:.4} -> {}", w.worst_deviation, if w.passed { "no witness found" } else { "witness found" });
            println!("  weighted (volume weights) at eps = 0.25: worst deviation found {:.4}", vw.worst_deviation);
            let report = CounterexampleDemo {
                n,
                seed,
                volume_epsilon: 0.05,
                volume_deviation: vol.normalized,
                volume_violation: vol.normalized >= 0.05,
                weighted_epsilon: 0.25,
                weighted: w,
                weighted_volume_weights: vw,
            };
            write_demo(cx, "volume-counterexample", &report, a.output.clone().unwrap_or_else(|| default("volume-counterexample")))
        }
        DemoName::GnpijConcentration => {
            let (n, seed) = (1000, 7);
            let spec = ProbMatrixSpec::uniform_range(0.1, 0.9, seed);
            let g: WeightedGraph = gen_gnpij(n, &spec, seed)?;
            let r = concentration_test(&g, &spec, 0.1, 200, seed)?;
            let ratio = g.rho_total() / regulab::graph::pair_count(n);
            println!("G(n, p_ij), n = {n}, p_ij ~ U[0.1, 0.9], seed = {seed}");
            println!("  max deviation over {} pairs: {:.5} vs beta/2 = {}", r.pairs_tested, r.max_deviation, r.beta / 2.0);
            println!("  sum rho / C(n,2) = {ratio:.5}");
            let report = ConcentrationDemo {
                n,
                spec,
                seed,
                rho_total_over_pairs: ratio,
                report: r,
            };
            write_demo(cx, "gnpij-concentration", &report, a.output.clone().unwrap_or_else(|| default("gnpij-concentration")))
        }
    }
}

fn write_demo<T: Serialize>(cx: &Ctx, name: &str, report: &T, path: PathBuf) -> CliResult<Outcome> {
    emit(&format!("demo {name}"), report, Some(Path::new(&path)), cx.timestamp)?;
    println!("  report written to {}", path.display());
    Ok(Outcome::Pass)
}
