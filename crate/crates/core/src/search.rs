//! Maximization of a score over pairs of vertex sets `(X, Y)`.
//!
//! Every regularity-type check in this crate asks for the worst pair of
//! subsets under mass floors. The score only depends on three sufficient
//! statistics: the cross weight `Σ_{x∈X, y∈Y} w(x, y)` and the two masses.
//! Two domains are supported:
//!
//! * `Bipartite`: `X ⊆ left`, `Y ⊆ right` for fixed disjoint lists.
//! * `Disjoint`: `X`, `Y` any disjoint subsets of the vertex set. Scores on
//!   this domain must be symmetric under `X ↔ Y`; enumeration only visits
//!   pairs whose first assigned vertex lies in `X`.
//!
//! Exhaustive enumeration visits membership vectors in lexicographic order
//! (excluded before included; none < X < Y) and keeps the first maximizer,
//! so ties resolve to the lexicographically smallest witness. Local search
//! runs independent restarts and reduces by `(score, key)`, which makes its
//! result independent of thread scheduling.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::graph::TOL;
use crate::rng::stream_rng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct PairStats {
    pub cross: f64,
    pub mass_x: f64,
    pub mass_y: f64,
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Domain<'a> {
    Bipartite { left: &'a [usize], right: &'a [usize] },
    Disjoint,
}

pub(crate) struct PairProblem<'a, F> {
    pub n: usize,
    /// Dense symmetric `n × n` weights.
    pub w: &'a [f64],
    pub mass: &'a [f64],
    pub domain: Domain<'a>,
    pub floor_x: f64,
    pub floor_y: f64,
    pub score: F,
}

#[derive(Clone, Debug)]
pub(crate) struct Witness {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub stats: PairStats,
    pub score: f64,
    key: Vec<u8>,
}

fn improves(new: f64, old: f64) -> bool {
    if old.is_nan() {
        return !new.is_nan();
    }
    if old == f64::INFINITY {
        return false;
    }
    new > old + 1e-12 * old.abs().max(1.0)
}

fn ties(a: f64, b: f64) -> bool {
    !improves(a, b) && !improves(b, a)
}

impl<'a, F> PairProblem<'a, F>
where
    F: Fn(&PairStats) -> f64 + Sync,
{
    fn qualifies(&self, mx: f64, my: f64) -> bool {
        mx >= self.floor_x - TOL && my >= self.floor_y - TOL
    }

    fn row(&self, u: usize) -> &'a [f64] {
        &self.w[u * self.n..(u + 1) * self.n]
    }

    /// Recomputes the statistics of `(X, Y)` from scratch.
    pub fn stats(&self, x: &[usize], y: &[usize]) -> PairStats {
        let mut cross = 0.0;
        for &u in x {
            let row = self.row(u);
            cross += y.iter().map(|&v| row[v]).sum::<f64>();
        }
        PairStats {
            cross,
            mass_x: x.iter().map(|&v| self.mass[v]).sum(),
            mass_y: y.iter().map(|&v| self.mass[v]).sum(),
        }
    }

    fn make_witness(&self, mut x: Vec<usize>, mut y: Vec<usize>) -> Witness {
        x.sort_unstable();
        y.sort_unstable();
        if matches!(self.domain, Domain::Disjoint) && y.first() < x.first() {
            std::mem::swap(&mut x, &mut y);
        }
        let stats = self.stats(&x, &y);
        let score = (self.score)(&stats);
        let key = match self.domain {
            Domain::Bipartite { left, right } => left
                .iter()
                .map(|v| x.binary_search(v).is_ok() as u8)
                .chain(right.iter().map(|v| y.binary_search(v).is_ok() as u8))
                .collect(),
            Domain::Disjoint => (0..self.n)
                .map(|v| {
                    if x.binary_search(&v).is_ok() {
                        1
                    } else if y.binary_search(&v).is_ok() {
                        2
                    } else {
                        0
                    }
                })
                .collect(),
        };
        Witness {
            x,
            y,
            stats,
            score,
            key,
        }
    }

    /// Exact maximizer over all qualifying nonempty pairs, or `None` when no
    /// pair meets the floors.
    pub fn exhaustive(&self) -> Option<Witness> {
        let best = match self.domain {
            Domain::Bipartite { left, right } => {
                let mut e = BipartiteEnum::new(self, left, right);
                e.left_dfs(0, 0.0);
                e.best
            }
            Domain::Disjoint => {
                let mut e = DisjointEnum::new(self);
                e.dfs(0, 0.0, 0.0, 0.0);
                e.best
            }
        };
        best.map(|(_, x, y)| self.make_witness(x, y))
    }

    /// Multi-start hill climbing. Returns `None` when no qualifying pair
    /// exists (floors exceed the available mass).
    pub fn local_search(&self, restarts: usize, seed: u64) -> Option<Witness> {
        let runs: Vec<Option<Witness>> = (0..restarts.max(1) as u64)
            .into_par_iter()
            .map(|r| self.climb(r, seed))
            .collect();
        runs.into_iter().flatten().reduce(|best, w| {
            if improves(w.score, best.score) || (ties(w.score, best.score) && w.key < best.key) {
                w
            } else {
                best
            }
        })
    }

    fn climb(&self, restart: u64, seed: u64) -> Option<Witness> {
        let mut rng = stream_rng(seed, restart);
        let mut st = ClimbState::new(self);
        let full_start = restart == 0 && matches!(self.domain, Domain::Bipartite { .. });
        if !st.init(self, &mut rng, full_start) {
            return None;
        }
        let max_moves = 50 * st.domain.len().max(1);
        for _ in 0..max_moves {
            if !st.step(self) {
                break;
            }
        }
        Some(self.make_witness(st.members(1), st.members(2)))
    }
}

struct BipartiteEnum<'p, 'a, F> {
    p: &'p PairProblem<'a, F>,
    left: &'a [usize],
    right: &'a [usize],
    left_suffix: Vec<f64>,
    right_suffix: Vec<f64>,
    col: Vec<f64>,
    xs: Vec<usize>,
    ys: Vec<usize>,
    best: Option<(f64, Vec<usize>, Vec<usize>)>,
}

fn suffix_mass(mass: &[f64], list: &[usize]) -> Vec<f64> {
    let mut s = vec![0.0; list.len() + 1];
    for i in (0..list.len()).rev() {
        s[i] = s[i + 1] + mass[list[i]];
    }
    s
}

impl<'p, 'a, F> BipartiteEnum<'p, 'a, F>
where
    F: Fn(&PairStats) -> f64 + Sync,
{
    fn new(p: &'p PairProblem<'a, F>, left: &'a [usize], right: &'a [usize]) -> Self {
        Self {
            p,
            left,
            right,
            left_suffix: suffix_mass(p.mass, left),
            right_suffix: suffix_mass(p.mass, right),
            col: vec![0.0; right.len()],
            xs: Vec::new(),
            ys: Vec::new(),
            best: None,
        }
    }

    fn left_dfs(&mut self, i: usize, mass_x: f64) {
        if mass_x + self.left_suffix[i] < self.p.floor_x - TOL {
            return;
        }
        if i == self.left.len() {
            if !self.xs.is_empty() {
                self.right_dfs(0, 0.0, 0.0, mass_x);
            }
            return;
        }
        self.left_dfs(i + 1, mass_x);
        let u = self.left[i];
        let row = self.p.row(u);
        for (c, &v) in self.col.iter_mut().zip(self.right) {
            *c += row[v];
        }
        self.xs.push(u);
        self.left_dfs(i + 1, mass_x + self.p.mass[u]);
        self.xs.pop();
        for (c, &v) in self.col.iter_mut().zip(self.right) {
            *c -= row[v];
        }
    }

    fn right_dfs(&mut self, j: usize, mass_y: f64, cross: f64, mass_x: f64) {
        if mass_y + self.right_suffix[j] < self.p.floor_y - TOL {
            return;
        }
        if j == self.right.len() {
            if !self.ys.is_empty() && self.p.qualifies(mass_x, mass_y) {
                let s = (self.p.score)(&PairStats {
                    cross,
                    mass_x,
                    mass_y,
                });
                let better = match &self.best {
                    None => !s.is_nan(),
                    Some((b, _, _)) => improves(s, *b),
                };
                if better {
                    self.best = Some((s, self.xs.clone(), self.ys.clone()));
                }
            }
            return;
        }
        self.right_dfs(j + 1, mass_y, cross, mass_x);
        let v = self.right[j];
        self.ys.push(v);
        self.right_dfs(j + 1, mass_y + self.p.mass[v], cross + self.col[j], mass_x);
        self.ys.pop();
    }
}

struct DisjointEnum<'p, 'a, F> {
    p: &'p PairProblem<'a, F>,
    suffix: Vec<f64>,
    xs: Vec<usize>,
    ys: Vec<usize>,
    best: Option<(f64, Vec<usize>, Vec<usize>)>,
}

impl<'p, 'a, F> DisjointEnum<'p, 'a, F>
where
    F: Fn(&PairStats) -> f64 + Sync,
{
    fn new(p: &'p PairProblem<'a, F>) -> Self {
        let all: Vec<usize> = (0..p.n).collect();
        Self {
            p,
            suffix: suffix_mass(p.mass, &all),
            xs: Vec::new(),
            ys: Vec::new(),
            best: None,
        }
    }

    fn dfs(&mut self, i: usize, mass_x: f64, mass_y: f64, cross: f64) {
        let rem = self.suffix[i];
        let (fx, fy) = (self.p.floor_x - TOL, self.p.floor_y - TOL);
        if mass_x + rem < fx || mass_y + rem < fy || mass_x + mass_y + rem < fx + fy {
            return;
        }
        if i == self.p.n {
            if !self.xs.is_empty() && !self.ys.is_empty() && self.p.qualifies(mass_x, mass_y) {
                let s = (self.p.score)(&PairStats {
                    cross,
                    mass_x,
                    mass_y,
                });
                let better = match &self.best {
                    None => !s.is_nan(),
                    Some((b, _, _)) => improves(s, *b),
                };
                if better {
                    self.best = Some((s, self.xs.clone(), self.ys.clone()));
                }
            }
            return;
        }
        let row = self.p.row(i);
        let m = self.p.mass[i];
        self.dfs(i + 1, mass_x, mass_y, cross);

        let gain_x: f64 = self.ys.iter().map(|&y| row[y]).sum();
        self.xs.push(i);
        self.dfs(i + 1, mass_x + m, mass_y, cross + gain_x);
        self.xs.pop();

        // Symmetry breaking: the first assigned vertex always goes to X.
        if !self.xs.is_empty() {
            let gain_y: f64 = self.xs.iter().map(|&x| row[x]).sum();
            self.ys.push(i);
            self.dfs(i + 1, mass_x, mass_y + m, cross + gain_y);
            self.ys.pop();
        }
    }
}

const NONE: u8 = 0;
const IN_X: u8 = 1;
const IN_Y: u8 = 2;

struct ClimbState {
    domain: Vec<usize>,
    /// Bit 1: may join X; bit 2: may join Y.
    allowed: Vec<u8>,
    side: Vec<u8>,
    to_x: Vec<f64>,
    to_y: Vec<f64>,
    stats: PairStats,
    count_x: usize,
    count_y: usize,
    score: f64,
}

enum Move {
    Add(usize, u8),
    Remove(usize, u8),
    Swap { out: usize, inn: usize, side: u8 },
}

impl ClimbState {
    fn new<F>(p: &PairProblem<'_, F>) -> Self {
        let mut allowed = vec![0u8; p.n];
        let domain: Vec<usize> = match p.domain {
            Domain::Bipartite { left, right } => {
                for &u in left {
                    allowed[u] = IN_X;
                }
                for &v in right {
                    allowed[v] = IN_Y;
                }
                left.iter().chain(right).copied().collect()
            }
            Domain::Disjoint => {
                allowed.fill(IN_X | IN_Y);
                (0..p.n).collect()
            }
        };
        Self {
            domain,
            allowed,
            side: vec![NONE; p.n],
            to_x: vec![0.0; p.n],
            to_y: vec![0.0; p.n],
            stats: PairStats {
                cross: 0.0,
                mass_x: 0.0,
                mass_y: 0.0,
            },
            count_x: 0,
            count_y: 0,
            score: f64::NAN,
        }
    }

    fn members(&self, s: u8) -> Vec<usize> {
        self.domain
            .iter()
            .copied()
            .filter(|&v| self.side[v] == s)
            .collect()
    }

    fn apply_add<F>(&mut self, p: &PairProblem<'_, F>, u: usize, s: u8) {
        let row = &p.w[u * p.n..(u + 1) * p.n];
        if s == IN_X {
            self.stats.cross += self.to_y[u];
            self.stats.mass_x += p.mass[u];
            self.count_x += 1;
            for &z in &self.domain {
                self.to_x[z] += row[z];
            }
        } else {
            self.stats.cross += self.to_x[u];
            self.stats.mass_y += p.mass[u];
            self.count_y += 1;
            for &z in &self.domain {
                self.to_y[z] += row[z];
            }
        }
        self.side[u] = s;
    }

    fn apply_remove<F>(&mut self, p: &PairProblem<'_, F>, u: usize, s: u8) {
        let row = &p.w[u * p.n..(u + 1) * p.n];
        if s == IN_X {
            self.stats.cross -= self.to_y[u];
            self.stats.mass_x -= p.mass[u];
            self.count_x -= 1;
            for &z in &self.domain {
                self.to_x[z] -= row[z];
            }
        } else {
            self.stats.cross -= self.to_x[u];
            self.stats.mass_y -= p.mass[u];
            self.count_y -= 1;
            for &z in &self.domain {
                self.to_y[z] -= row[z];
            }
        }
        self.side[u] = NONE;
    }

    /// Random start repaired up to the floors. Returns false when the floors
    /// cannot be met.
    fn init<F, R>(&mut self, p: &PairProblem<'_, F>, rng: &mut R, full: bool) -> bool
    where
        F: Fn(&PairStats) -> f64 + Sync,
        R: Rng,
    {
        let q: f64 = if full { 1.0 } else { rng.gen_range(0.2..0.9) };
        let domain = self.domain.clone();
        for &v in &domain {
            let r: f64 = rng.gen();
            let s = match self.allowed[v] {
                IN_X if r < q => IN_X,
                IN_Y if r < q => IN_Y,
                a if a == IN_X | IN_Y && r < q / 2.0 => IN_X,
                a if a == IN_X | IN_Y && r < q => IN_Y,
                _ => NONE,
            };
            if s != NONE {
                self.apply_add(p, v, s);
            }
        }
        let mut pool: Vec<usize> = domain.clone();
        pool.shuffle(rng);
        for s in [IN_X, IN_Y] {
            loop {
                let (mass, count, floor) = if s == IN_X {
                    (self.stats.mass_x, self.count_x, p.floor_x)
                } else {
                    (self.stats.mass_y, self.count_y, p.floor_y)
                };
                if count > 0 && mass >= floor - TOL {
                    break;
                }
                let pick = pool
                    .iter()
                    .position(|&v| self.side[v] == NONE && self.allowed[v] & s != 0);
                match pick {
                    Some(i) => {
                        let v = pool.swap_remove(i);
                        self.apply_add(p, v, s);
                    }
                    None => return false,
                }
            }
        }
        self.score = (p.score)(&self.stats);
        true
    }

    fn eval<F>(&self, p: &PairProblem<'_, F>, st: PairStats, cx: usize, cy: usize) -> Option<f64>
    where
        F: Fn(&PairStats) -> f64 + Sync,
    {
        if cx == 0 || cy == 0 || !p.qualifies(st.mass_x, st.mass_y) {
            return None;
        }
        Some((p.score)(&st))
    }

    /// One best-improvement move: single additions and removals first, then
    /// swaps. Returns false at a local optimum.
    fn step<F>(&mut self, p: &PairProblem<'_, F>) -> bool
    where
        F: Fn(&PairStats) -> f64 + Sync,
    {
        let mut best: Option<(f64, Move)> = None;
        let consider = |s: f64, m: Move, best: &mut Option<(f64, Move)>| {
            let bar = best.as_ref().map_or(self.score, |b| b.0);
            if improves(s, bar) {
                *best = Some((s, m));
            }
        };
        let base = self.stats;
        for &u in &self.domain {
            let mu = p.mass[u];
            match self.side[u] {
                NONE => {
                    if self.allowed[u] & IN_X != 0 {
                        let st = PairStats {
                            cross: base.cross + self.to_y[u],
                            mass_x: base.mass_x + mu,
                            ..base
                        };
                        if let Some(s) = self.eval(p, st, self.count_x + 1, self.count_y) {
                            consider(s, Move::Add(u, IN_X), &mut best);
                        }
                    }
                    if self.allowed[u] & IN_Y != 0 {
                        let st = PairStats {
                            cross: base.cross + self.to_x[u],
                            mass_y: base.mass_y + mu,
                            ..base
                        };
                        if let Some(s) = self.eval(p, st, self.count_x, self.count_y + 1) {
                            consider(s, Move::Add(u, IN_Y), &mut best);
                        }
                    }
                }
                IN_X => {
                    let st = PairStats {
                        cross: base.cross - self.to_y[u],
                        mass_x: base.mass_x - mu,
                        ..base
                    };
                    if let Some(s) = self.eval(p, st, self.count_x - 1, self.count_y) {
                        consider(s, Move::Remove(u, IN_X), &mut best);
                    }
                }
                _ => {
                    let st = PairStats {
                        cross: base.cross - self.to_x[u],
                        mass_y: base.mass_y - mu,
                        ..base
                    };
                    if let Some(s) = self.eval(p, st, self.count_x, self.count_y - 1) {
                        consider(s, Move::Remove(u, IN_Y), &mut best);
                    }
                }
            }
        }
        if best.is_none() {
            for s in [IN_X, IN_Y] {
                let inside: Vec<usize> = self.members(s);
                let outside: Vec<usize> = self
                    .domain
                    .iter()
                    .copied()
                    .filter(|&v| self.side[v] == NONE && self.allowed[v] & s != 0)
                    .collect();
                let other = if s == IN_X { &self.to_y } else { &self.to_x };
                for &out in &inside {
                    for &inn in &outside {
                        let cross = base.cross - other[out] + other[inn];
                        let delta = p.mass[inn] - p.mass[out];
                        let st = if s == IN_X {
                            PairStats {
                                cross,
                                mass_x: base.mass_x + delta,
                                ..base
                            }
                        } else {
                            PairStats {
                                cross,
                                mass_y: base.mass_y + delta,
                                ..base
                            }
                        };
                        if let Some(sc) = self.eval(p, st, self.count_x, self.count_y) {
                            consider(sc, Move::Swap { out, inn, side: s }, &mut best);
                        }
                    }
                }
            }
        }
        match best {
            None => false,
            Some((s, m)) => {
                match m {
                    Move::Add(u, side) => self.apply_add(p, u, side),
                    Move::Remove(u, side) => self.apply_remove(p, u, side),
                    Move::Swap { out, inn, side } => {
                        self.apply_remove(p, out, side);
                        self.apply_add(p, inn, side);
                    }
                }
                self.score = s;
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_weights(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = stream_rng(seed, 99);
        let mut w = vec![0.0; n * n];
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.6) {
                    let x: f64 = rng.gen_range(0.2..2.0);
                    w[u * n + v] = x;
                    w[v * n + u] = x;
                }
            }
        }
        w
    }

    /// Independent brute force over base-3 membership codes.
    fn brute_disjoint(n: usize, w: &[f64], mass: &[f64], floor: f64, score: impl Fn(&PairStats) -> f64) -> f64 {
        let mut best = f64::NEG_INFINITY;
        let total = 3usize.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let (mut x, mut y) = (vec![], vec![]);
            for v in 0..n {
                match c % 3 {
                    1 => x.push(v),
                    2 => y.push(v),
                    _ => {}
                }
                c /= 3;
            }
            if x.is_empty() || y.is_empty() {
                continue;
            }
            let mx: f64 = x.iter().map(|&v| mass[v]).sum();
            let my: f64 = y.iter().map(|&v| mass[v]).sum();
            if mx < floor - TOL || my < floor - TOL {
                continue;
            }
            let cross: f64 = x.iter().flat_map(|&a| y.iter().map(move |&b| (a, b))).map(|(a, b)| w[a * n + b]).sum();
            best = best.max(score(&PairStats { cross, mass_x: mx, mass_y: my }));
        }
        best
    }

    #[test]
    fn exhaustive_disjoint_matches_brute_force() {
        for seed in 0..6 {
            let n = 7;
            let w = random_weights(n, seed);
            let mass: Vec<f64> = (0..n).map(|v| 0.5 + v as f64 * 0.25).collect();
            let score = |s: &PairStats| (s.cross / (s.mass_x * s.mass_y) - 0.7).abs();
            let p = PairProblem {
                n,
                w: &w,
                mass: &mass,
                domain: Domain::Disjoint,
                floor_x: 1.2,
                floor_y: 1.2,
                score,
            };
            let got = p.exhaustive().unwrap();
            let want = brute_disjoint(n, &w, &mass, 1.2, score);
            assert!((got.score - want).abs() < 1e-12, "seed {seed}: {} vs {want}", got.score);
            assert!(got.stats.mass_x >= 1.2 - TOL && got.stats.mass_y >= 1.2 - TOL);
        }
    }

    #[test]
    fn exhaustive_bipartite_matches_brute_force() {
        let n = 9;
        let w = random_weights(n, 3);
        let mass = vec![1.0; n];
        let left = [0, 2, 4, 6];
        let right = [1, 3, 5, 7, 8];
        let score = |s: &PairStats| s.cross / (s.mass_x * s.mass_y);
        let p = PairProblem {
            n,
            w: &w,
            mass: &mass,
            domain: Domain::Bipartite { left: &left, right: &right },
            floor_x: 2.0,
            floor_y: 2.0,
            score,
        };
        let got = p.exhaustive().unwrap();
        let mut want = f64::NEG_INFINITY;
        for xm in 1u32..16 {
            for ym in 1u32..32 {
                let x: Vec<usize> = (0..4).filter(|i| xm >> i & 1 == 1).map(|i| left[i]).collect();
                let y: Vec<usize> = (0..5).filter(|i| ym >> i & 1 == 1).map(|i| right[i]).collect();
                if x.len() < 2 || y.len() < 2 {
                    continue;
                }
                want = want.max(score(&p.stats(&x, &y)));
            }
        }
        assert!((got.score - want).abs() < 1e-12);
        assert!(got.x.iter().all(|v| left.contains(v)));
        assert!(got.y.iter().all(|v| right.contains(v)));
    }

    #[test]
    fn local_search_never_beats_exhaustive_and_is_deterministic() {
        let n = 8;
        let w = random_weights(n, 11);
        let mass = vec![1.0; n];
        let score = |s: &PairStats| (s.cross / (s.mass_x * s.mass_y) - 0.5).abs();
        let p = PairProblem {
            n,
            w: &w,
            mass: &mass,
            domain: Domain::Disjoint,
            floor_x: 2.0,
            floor_y: 2.0,
            score,
        };
        let exact = p.exhaustive().unwrap();
        let a = p.local_search(16, 5).unwrap();
        let b = p.local_search(16, 5).unwrap();
        assert!(a.score <= exact.score + 1e-12);
        assert_eq!(a.x, b.x);
        assert_eq!(a.y, b.y);
        assert!(a.x.iter().all(|v| !a.y.contains(v)));
    }

    #[test]
    fn infeasible_floors_give_none() {
        let n = 4;
        let w = vec![0.0; 16];
        let mass = vec![1.0; n];
        let p = PairProblem {
            n,
            w: &w,
            mass: &mass,
            domain: Domain::Disjoint,
            floor_x: 3.0,
            floor_y: 3.0,
            score: |s: &PairStats| s.cross,
        };
        assert!(p.exhaustive().is_none());
        assert!(p.local_search(4, 0).is_none());
    }

    #[test]
    fn ties_resolve_to_lexicographically_smallest() {
        // All weights equal: every qualifying pair scores the same.
        let n = 5;
        let mut w = vec![1.0; n * n];
        for v in 0..n {
            w[v * n + v] = 0.0;
        }
        let mass = vec![1.0; n];
        let p = PairProblem {
            n,
            w: &w,
            mass: &mass,
            domain: Domain::Disjoint,
            floor_x: 0.0,
            floor_y: 0.0,
            score: |s: &PairStats| s.cross / (s.mass_x * s.mass_y),
        };
        let best = p.exhaustive().unwrap();
        assert_eq!(best.x, vec![3]);
        assert_eq!(best.y, vec![4]);
    }
}
