//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so every line is printed; exits non-zero on any FAIL.

use std::time::{Duration, Instant};

use rand::Rng;
use regulab::decomposition::{
    best_basic_exhaustive, best_basic_search, strong_decompose, DecomposeOptions, IncrementSchedule,
    JFunction, StopReason,
};
use regulab::graph::pair_count;
use regulab::models::gnpij::{chernoff_k, concentration_test, gen_gnpij, ProbMatrixSpec};
use regulab::models::star::make_star;
use regulab::models::volume::{check_volume_regular, make_counterexample, volume_deviation, volume_weights};
use regulab::partition::{build_regular_partition, BuildOptions};
use regulab::quasirandom::check_quasirandom_exhaustive;
use regulab::regularity::{check_pair_exhaustive, check_pair_search, classical_epsilon_regular, validate_partition};
use regulab::rng::stream_rng;
use regulab::{EdgeFunction, Mode, SearchBudget, SubgraphPair, VertexSubset, WeightedGraph};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Brute-force `max |⟨r, γ_{A,B}⟩|` over base-3 labelings, summing over the
/// edge list directly.
fn naive_max_correlation(g: &WeightedGraph, r: &EdgeFunction) -> f64 {
    let n = g.n();
    let mut best: f64 = 0.0;
    let mut lab = vec![0u8; n];
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        for l in lab.iter_mut() {
            *l = (c % 3) as u8;
            c /= 3;
        }
        let s: f64 = g
            .edges()
            .iter()
            .filter(|e| lab[e.u] != 0 && lab[e.v] != 0 && lab[e.u] != lab[e.v])
            .map(|e| r.get(e.u, e.v) * e.rho)
            .sum();
        best = best.max(s.abs());
    }
    best / pair_count(n)
}

fn normalized(g: WeightedGraph) -> WeightedGraph {
    g.normalize().unwrap().0
}

fn criterion_1() -> Outcome {
    let mut timed = Duration::ZERO;
    let (mut matches, mut exceed, mut oracle_mismatch) = (0, 0, 0);
    for i in 0..100u64 {
        let mut rng = stream_rng(1000 + i, 0);
        let n = 6 + (i as usize % 7);
        let g = normalized(gen_gnpij(n, &ProbMatrixSpec::constant(rng.gen_range(0.3..0.9)), i).unwrap());
        let r = if i % 2 == 0 {
            EdgeFunction::from_fn(n, |_, _| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
        } else {
            EdgeFunction::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
        };
        let t = Instant::now();
        let (_, exact) = best_basic_exhaustive(&g, &r).unwrap();
        let (_, found) = best_basic_search(&g, &r, 64, i).unwrap();
        timed += t.elapsed();
        if found.abs() > exact.abs() + 1e-12 {
            exceed += 1;
        }
        if found.abs() >= exact.abs() - 1e-12 {
            matches += 1;
        }
        if (naive_max_correlation(&g, &r) - exact.abs()).abs() > 1e-12 {
            oracle_mismatch += 1;
        }
    }
    let pass = exceed == 0 && matches >= 90 && oracle_mismatch == 0 && timed < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "search exceeded oracle {exceed}/100, matched {matches}/100 (need >= 90), oracle vs brute force mismatches {oracle_mismatch}, runtime {:.2}s (< 60s)",
            timed.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Outcome {
    let (mut additivity, mut monotone, mut gain, mut certificate) = (0, 0, 0, 0);
    let mut certified_runs = 0;
    let mut worst_sum = 0.0f64;
    let j = JFunction::Quadratic { c: 20.0 };
    for i in 0..50u64 {
        let mut rng = stream_rng(2000 + i, 0);
        let n = if i < 20 { 8 + (i as usize % 5) } else { 16 + (i as usize * 7) % 49 };
        let g = normalized(gen_gnpij(n, &ProbMatrixSpec::uniform_range(0.3, 0.9, i), i).unwrap());
        let q = rng.gen_range(0.3..0.8);
        let f_edges: Vec<(usize, usize)> = g.edges().iter().filter(|_| rng.gen_bool(q)).map(|e| (e.u, e.v)).collect();
        let pair = SubgraphPair::new(g.clone(), f_edges).unwrap();
        let f = EdgeFunction::indicator_of(&pair);
        let opts = DecomposeOptions {
            budget: SearchBudget { restarts: 64, seed: i },
            ..DecomposeOptions::default()
        };
        let d = strong_decompose(&g, &f, 0.1, &j, &opts).unwrap();
        let sum = &(&d.f_str + &d.f_psd) + &d.f_err;
        let diff = sum.max_abs_diff(&f);
        worst_sum = worst_sum.max(diff);
        if diff > 1e-9 {
            additivity += 1;
        }
        let trace: Vec<f64> = std::iter::once(0.0).chain(d.energy_trace.iter().copied()).collect();
        if trace.windows(2).any(|w| w[1] < w[0] - 1e-9) {
            monotone += 1;
        }
        if !d.ridge_used {
            for (k, w) in trace.windows(2).enumerate() {
                let t = 1.0 / j.j(n, &d.basis[..k], k + 1);
                if w[1] - w[0] < t * t - 1e-9 {
                    gain += 1;
                }
            }
        }
        if n <= 12 {
            certified_runs += 1;
            let bound = 1.0 / j.j(n, &d.basis, d.m);
            let ok = d.stop_reason != StopReason::Pseudorandom || naive_max_correlation(&g, &d.f_psd) < bound;
            if !ok {
                certificate += 1;
            }
        }
    }
    let pass = additivity == 0 && monotone == 0 && gain == 0 && certificate == 0;
    outcome(
        pass,
        format!(
            "additivity violations {additivity}/50 (max |diff| {worst_sum:.2e}), energy decreases {monotone}, steps below (1/J)^2 gain {gain}, pseudorandomness certificate failures {certificate}/{certified_runs} (brute force, n <= 12)"
        ),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let n = 512;
    let g = gen_gnpij(n, &ProbMatrixSpec::uniform_range(0.2, 0.8, 2024), 2024).unwrap();
    let block = |u: usize, v: usize| u < 128 && (128..256).contains(&v);
    let f: Vec<(usize, usize)> = g.edges().iter().filter(|e| !block(e.u, e.v)).map(|e| (e.u, e.v)).collect();
    let pair = SubgraphPair::new(g, f).unwrap();
    let opts = BuildOptions {
        l: 4,
        budget: SearchBudget { restarts: 64, seed: 7 },
        ..BuildOptions::default()
    };
    let r = build_regular_partition(&pair, 0.3, &opts).unwrap();
    let elapsed = start.elapsed();

    let host = pair.normalize().unwrap().0;
    let g = host.host();
    let covered = validate_partition(n, &r.clusters).is_ok();
    let w0 = g.mu_sum(&r.clusters[0]).unwrap();
    let bullet1 = w0 <= 0.3 * g.total_mu() + 1e-9;
    let masses: Vec<f64> = r.clusters[1..].iter().map(|c| g.mu_sum(c).unwrap()).collect();
    let spread = masses.iter().copied().fold(f64::NEG_INFINITY, f64::max) - masses.iter().copied().fold(f64::INFINITY, f64::min);
    let bullet2 = spread <= g.max_mu() + 1e-9;
    let sizes: Vec<usize> = r.clusters[1..].iter().map(|c| c.len()).collect();
    let (smin, smax) = (sizes.iter().min().copied().unwrap_or(0), sizes.iter().max().copied().unwrap_or(0));
    let empirical = r.irregular_pair_ratio <= 0.3;
    let pass = covered && bullet1 && bullet2 && r.refines_atoms && empirical && elapsed < Duration::from_secs(300);
    outcome(
        pass,
        format!(
            "partition {covered}, bullet 1 {bullet1} (mu(W0) = {w0:.3} vs {:.3}), bullet 2 {bullet2} (spread {spread:.3} vs {:.3}), irregular {}/{} pairs = {:.4} (<= 0.3), degenerate {}, M = {}, atoms {}, ell = {}, cluster sizes {smin}..{smax}, stop {:?}, err_norm {:.3e}, wall {:.1}s (< 300s)",
            0.3 * g.total_mu(),
            g.max_mu(),
            r.irregular,
            r.pairs.len(),
            r.irregular_pair_ratio,
            r.degenerate,
            r.decomposition.m,
            r.atom_count,
            r.ell,
            r.decomposition.stop_reason,
            r.decomposition.err_norm,
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_4() -> Outcome {
    let (a, b) = (VertexSubset::range(0..6), VertexSubset::range(6..12));
    let host: Vec<(usize, usize)> = (0..6).flat_map(|u| (6..12).map(move |v| (u, v))).collect();
    let (mut disagree, mut regular) = (0, 0);
    for i in 0..50u64 {
        let mut rng = stream_rng(4000 + i, 0);
        let p = rng.gen_range(0.2..0.8);
        let eps = rng.gen_range(0.1..0.6);
        let f: Vec<(usize, usize)> = host.iter().copied().filter(|_| rng.gen_bool(p)).collect();
        let pair = SubgraphPair::new(WeightedGraph::unweighted(12, host.clone()).unwrap(), f.clone()).unwrap();
        let weighted = check_pair_exhaustive(&pair, &a, &b, eps).unwrap();
        let classical = classical_epsilon_regular(12, &f, &a, &b, eps, Mode::Exhaustive, SearchBudget::default()).unwrap();
        if weighted.passed != classical.passed {
            disagree += 1;
        }
        regular += weighted.passed as usize;
    }
    outcome(disagree == 0, format!("disagreements {disagree}/50 ({regular} regular, {} irregular)", 50 - regular))
}

fn criterion_5() -> Outcome {
    let n = 1000;
    let spec = ProbMatrixSpec::uniform_range(0.1, 0.9, 7);
    let g = gen_gnpij(n, &spec, 7).unwrap();
    let rep = concentration_test(&g, &spec, 0.1, 200, 7).unwrap();
    let ratio = g.rho_total() / pair_count(n);
    let pass = rep.max_deviation < 0.05 && (ratio - 1.0).abs() < 0.01;
    outcome(
        pass,
        format!(
            "max deviation {:.5} over {} pairs (< 0.05), sum rho / C(n,2) = {ratio:.5} (within 1%)",
            rep.max_deviation, rep.pairs_tested
        ),
    )
}

fn criterion_6() -> Outcome {
    let (mut counterexamples, mut antecedent) = (0, 0);
    for i in 0..30u64 {
        let mut rng = stream_rng(6000 + i, 0);
        let n = 12 + 2 * (i as usize % 5);
        let p = rng.gen_range(0.3..0.95);
        let mut edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
        for v in 0..n {
            if !edges.iter().any(|&(x, y)| x == v || y == v) {
                edges.push(if v == 0 { (0, 1) } else { (v - 1, v) });
            }
        }
        let g = WeightedGraph::unweighted(n, edges).unwrap();
        let (a, b) = (VertexSubset::range(0..n / 2), VertexSubset::range(n / 2..n));
        let eps = rng.gen_range(0.2..0.6);
        let w = SubgraphPair::full(volume_weights(&g).unwrap());
        let weighted = check_pair_exhaustive(&w, &a, &b, eps).unwrap();
        let volume = check_volume_regular(&g, &a, &b, eps, Mode::Exhaustive, SearchBudget::default()).unwrap();
        if weighted.passed {
            antecedent += 1;
            if !volume.passed {
                counterexamples += 1;
            }
        }
    }
    outcome(
        counterexamples == 0,
        format!("counterexamples {counterexamples}; weighted-regular (antecedent true) on {antecedent}/30 instances"),
    )
}

fn criterion_7() -> Outcome {
    let ce = make_counterexample(400, 7).unwrap();
    let (a, b) = (ce.a(), ce.b());
    let vol = volume_deviation(&ce.graph, &a, &b, &ce.a2, &ce.b2).unwrap();
    let volume_violation = vol.normalized >= 0.05;
    let weighted = check_pair_search(&SubgraphPair::full(ce.reciprocal_weights().unwrap()), &a, &b, 0.25, 64, 7).unwrap();
    let vw = check_pair_search(&SubgraphPair::full(volume_weights(&ce.graph).unwrap()), &a, &b, 0.25, 64, 7).unwrap();
    outcome(
        volume_violation && weighted.passed,
        format!(
            "volume deviation at (A2, B2) = {:.4} vs 0.05 (margin {:+.4}); weighted search (reciprocal weights) worst deviation {:.4} vs 0.25 (margin {:+.4}, violation found: {}); with volume weights {:.4}",
            vol.normalized,
            vol.normalized - 0.05,
            weighted.worst_deviation,
            0.25 - weighted.worst_deviation,
            !weighted.passed,
            vw.worst_deviation
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for n in [6usize, 8, 10] {
        let v = check_quasirandom_exhaustive(&WeightedGraph::complete(n), 0.2).unwrap();
        let diff = (v.worst_deviation - 1.0 / n as f64).abs();
        pass &= diff <= 4.0 * f64::EPSILON;
        notes.push(format!("K_{n} deviation - 1/n = {diff:.1e}"));
    }
    let k = chernoff_k(0.5).unwrap();
    pass &= k == 307200.0;
    notes.push(format!("chernoff_K(0.5) = {k}"));
    for n in [5usize, 9, 17] {
        let s = make_star(n).unwrap();
        let ok = s.rho_total() == pair_count(n) && s.total_mu() == 1.0;
        pass &= ok;
        notes.push(format!("star({n}) {}", if ok { "exact" } else { "off" }));
    }
    outcome(pass, notes.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("oracle soundness and search quality", criterion_1),
        ("decomposition invariants", criterion_2),
        ("partition construction", criterion_3),
        ("special-case collapse", criterion_4),
        ("concentration", criterion_5),
        ("volume-regularity reduction", criterion_6),
        ("volume counterexample", criterion_7),
        ("analytic anchors", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        failed += !o.pass as usize;
        println!(
            "criterion {} ({name}): {} [{:.1}s] {}",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
