#![allow(dead_code)]

use geomatch::gen::{generate, Distribution2d, GenSpec};
use geomatch::hsearch_ds::{HSearchDs, IntCandidate};
use geomatch::hungarian::{Candidate, ClosestPairEngine};
use geomatch::match_ds::eligible_path_exists;
use geomatch::matching::{AltPath, Matching};
use geomatch::model::Instance;
use geomatch::reduction::{build_reduced, ReducedGraph};
use geomatch::scaling::{check_one_feasible, normalize, CheckPoint, GtObserver, IntCosts, IntDuals};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn uniform(ns: usize, nt: usize, seed: u64) -> Instance {
    generate(&GenSpec::new(Distribution2d::UniformSquare, ns, nt, seed)).unwrap()
}

pub fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

/// Minimum perfect-matching cost of the reduced graph by enumerating all
/// permutations. `n <= 8`.
pub fn permutation_min(g: &ReducedGraph) -> f64 {
    fn rec(g: &ReducedGraph, r: usize, used: &mut [bool], acc: f64, best: &mut f64) {
        let n = g.n();
        if r == n {
            *best = best.min(acc);
            return;
        }
        for b in 0..n {
            if used[b] {
                continue;
            }
            if let Some(c) = g.weight(r, b) {
                used[b] = true;
                rec(g, r + 1, used, acc + c, best);
                used[b] = false;
            }
        }
    }
    assert!(g.n() <= 8);
    let mut best = f64::INFINITY;
    rec(g, 0, &mut vec![false; g.n()], 0.0, &mut best);
    best
}

fn scan_float(g: &ReducedGraph, in_r: &[bool], live_b: &[bool], sr: &[f64], sb: &[f64]) -> Option<Candidate> {
    let mut best = None;
    for r in (0..g.n()).filter(|&r| in_r[r]) {
        for b in (0..g.n()).filter(|&b| live_b[b]) {
            if let Some(c) = g.weight(r, b) {
                best = Candidate::min(best, Some(Candidate { r, b, slack: c - sr[r] - sb[b] }));
            }
        }
    }
    best
}

/// Random insert/remove script on the exact solver's engine; returns
/// (queries, mismatches) against a full scan.
pub fn engine_script(ns: usize, nt: usize, seed: u64) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = uniform(ns, nt, seed);
    let g = build_reduced(&inst);
    let n = g.n();
    let sb: Vec<f64> = (0..n).map(|_| rng.random_range(-4..5) as f64 * 0.125).collect();
    let mut e = ClosestPairEngine::new(&g, sb.clone());
    let mut in_r = vec![false; n];
    let mut live_b = vec![true; n];
    let mut sr = vec![0.0; n];
    let mut rs: Vec<usize> = (0..n).collect();
    let mut bs: Vec<usize> = (0..n).collect();
    rs.shuffle(&mut rng);
    bs.shuffle(&mut rng);
    let (mut queries, mut bad) = (0, 0);
    while !rs.is_empty() || !bs.is_empty() {
        if !rs.is_empty() && (bs.is_empty() || rng.random_bool(0.5)) {
            let r = rs.pop().unwrap();
            sr[r] = rng.random_range(-4..5) as f64 * 0.125;
            in_r[r] = true;
            e.add_r(r, sr[r]).unwrap();
        } else {
            let b = bs.pop().unwrap();
            live_b[b] = false;
            e.remove_b(b).unwrap();
        }
        queries += 1;
        let got = e.global_min();
        let want = scan_float(&g, &in_r, &live_b, &sr, &sb);
        let same = match (got, want) {
            (None, None) => true,
            (Some(x), Some(y)) => x.r == y.r && x.b == y.b && (x.slack - y.slack).abs() <= 1e-12,
            _ => false,
        };
        if !same {
            bad += 1;
        }
    }
    (queries, bad)
}

/// Random script on the scaling solver's search structure.
pub fn hsearch_script(ns: usize, nt: usize, seed: u64, eps: f64) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = uniform(ns, nt, seed);
    let g = build_reduced(&inst);
    let norm = normalize(&g, eps).unwrap();
    let w = norm.weights();
    let n = w.n();
    let sb: Vec<i64> = (0..n).map(|_| rng.random_range(-3..4)).collect();
    let mut ds = HSearchDs::new(&w, sb);
    let mut rs: Vec<usize> = (0..n).collect();
    let mut bs: Vec<usize> = (0..n).collect();
    rs.shuffle(&mut rng);
    bs.shuffle(&mut rng);
    let (mut queries, mut bad) = (0, 0);
    while !rs.is_empty() || !bs.is_empty() {
        let pick = rng.random_range(0..3);
        if pick == 0 && !rs.is_empty() && !bs.is_empty() {
            let (u, v) = (rs.pop().unwrap(), bs.pop().unwrap());
            ds.update_closest_pair(u, rng.random_range(-3..4), v).unwrap();
        } else if pick == 1 && !rs.is_empty() || bs.is_empty() {
            ds.insert_r(rs.pop().unwrap(), rng.random_range(-3..4)).unwrap();
        } else {
            ds.remove_b(bs.pop().unwrap()).unwrap();
        }
        queries += 1;
        if ds.global_min() != ds.scan_min() {
            bad += 1;
        }
    }
    (queries, bad)
}

/// Records every violated invariant of an instrumented scaling run.
#[derive(Default)]
pub struct GtChecker {
    pub feasibility_checks: usize,
    pub failures: Vec<String>,
    pub path_sets: usize,
    pub search_queries: usize,
    pub search_mismatches: usize,
    /// Skip the `O(n^2)` 1-feasibility check.
    pub skip_feasibility: bool,
}

impl GtChecker {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.search_mismatches == 0
    }
}

fn check_paths(costs: &IntCosts<'_>, m: &Matching, y: &IntDuals, paths: &[AltPath]) -> Result<(), String> {
    let n = costs.n();
    let mut used_r = vec![false; n];
    let mut used_b = vec![false; n];
    for p in paths {
        p.check_augmenting(m).map_err(|e| e.to_string())?;
        for &(r, b) in &p.edges {
            if std::mem::replace(&mut used_r[r], true) || std::mem::replace(&mut used_b[b], true) {
                return Err(format!("paths share a vertex at ({r}, {b})"));
            }
            let c = costs.cost(r, b).ok_or_else(|| format!("({r}, {b}) is not an edge"))?;
            let want = if m.is_matched(r, b) { c } else { c + 1 };
            if y.r[r] + y.b[b] != want {
                return Err(format!("({r}, {b}) is not eligible"));
            }
        }
    }
    if eligible_path_exists(costs, y, m, paths) {
        return Err("path set is not maximal".into());
    }
    Ok(())
}

impl GtObserver for GtChecker {
    fn on_state(&mut self, at: CheckPoint, costs: &IntCosts<'_>, m: &Matching, y: &IntDuals) {
        if self.skip_feasibility {
            return;
        }
        self.feasibility_checks += 1;
        if let Err(e) = check_one_feasible(costs, m, y) {
            self.failures.push(format!("{at:?}: {e}"));
        }
    }

    fn on_paths(&mut self, costs: &IntCosts<'_>, m: &Matching, y: &IntDuals, paths: &[AltPath]) {
        self.path_sets += 1;
        if let Err(e) = check_paths(costs, m, y, paths) {
            self.failures.push(e);
        }
    }

    fn on_search_min(&mut self, _costs: &IntCosts<'_>, ds: &HSearchDs<'_>, found: Option<IntCandidate>) {
        self.search_queries += 1;
        if found != ds.scan_min() {
            self.search_mismatches += 1;
        }
    }
}
