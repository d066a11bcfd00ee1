//! Exact minimum-cost perfect matching on the reduced graph.
//!
//! Plain Hungarian method: start from `M = {}` and `y = 0`, and repeat a
//! Hungarian search that grows an alternating forest from every free
//! R-vertex until it reaches a free B-vertex. Dual updates are deferred
//! through per-vertex weights `sigma` and an accumulated shift `Delta`:
//! inside the forest `y(r) = sigma_r + Delta` and `y(b) = sigma_b - Delta`.

mod engine;

pub use engine::{BichromaticEngine, Candidate, ClosestPairEngine, DenseSlackEngine, OrdF64};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matching::{AltPath, Matching};
use crate::reduction::{PerfectMatching, ReducedGraph};

/// Dual values for both sides.
#[derive(Clone, Debug, PartialEq)]
pub struct Duals {
    pub r: Vec<f64>,
    pub b: Vec<f64>,
}

impl Duals {
    pub fn zero(n: usize) -> Self {
        Duals {
            r: vec![0.0; n],
            b: vec![0.0; n],
        }
    }
}

/// One record per Hungarian search.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SearchTrace {
    pub deltas: Vec<f64>,
    pub path_len: usize,
}

/// Snapshot handed to a [`SearchObserver`] before each dual adjustment.
pub struct SearchProbe<'a> {
    y: &'a Duals,
    sigma_r: &'a [f64],
    sigma_b: &'a [f64],
    in_r: &'a [bool],
    in_forest_b: &'a [bool],
    shift: f64,
    /// The minimum-slack pair chosen by the engine.
    pub candidate: Candidate,
    /// `slack - Delta`, the dual adjustment about to be applied.
    pub delta: f64,
}

impl SearchProbe<'_> {
    pub fn in_r_prime(&self, r: usize) -> bool {
        self.in_r[r]
    }

    pub fn in_b_prime(&self, b: usize) -> bool {
        !self.in_forest_b[b]
    }

    /// Current dual of R-vertex `r`.
    pub fn y_r(&self, r: usize) -> f64 {
        if self.in_r[r] {
            self.sigma_r[r] + self.shift
        } else {
            self.y.r[r]
        }
    }

    /// Current dual of B-vertex `b`.
    pub fn y_b(&self, b: usize) -> f64 {
        if self.in_forest_b[b] {
            self.sigma_b[b] - self.shift
        } else {
            self.y.b[b]
        }
    }

    pub fn sigma_r(&self, r: usize) -> f64 {
        self.sigma_r[r]
    }

    pub fn sigma_b(&self, b: usize) -> f64 {
        self.sigma_b[b]
    }
}

pub trait SearchObserver {
    fn on_step(&mut self, _probe: &SearchProbe<'_>) {}
}

impl SearchObserver for () {}

impl<F: FnMut(&SearchProbe<'_>)> SearchObserver for F {
    fn on_step(&mut self, probe: &SearchProbe<'_>) {
        self(probe)
    }
}

/// Finds a minimum net-cost augmenting path of admissible edges and
/// updates `y` so that it stays feasible and the path is tight.
///
/// An edge is admissible because it was the minimizer when `Delta` reached
/// its slack; equality of floating-point duals is never tested.
pub fn hungarian_search(
    g: &ReducedGraph,
    m: &Matching,
    y: &mut Duals,
    observer: &mut impl SearchObserver,
) -> Result<(AltPath, SearchTrace)> {
    let n = g.n();
    let sigma_b = y.b.clone();
    let mut sigma_r = y.r.clone();
    let mut in_r = vec![false; n];
    let mut in_forest_b = vec![false; n];
    let mut parent_b = vec![usize::MAX; n];
    let mut engine = ClosestPairEngine::new(g, sigma_b.clone());
    let mut sigma_b = sigma_b;
    for r in m.free_r() {
        in_r[r] = true;
        engine.add_r(r, sigma_r[r])?;
    }
    let mut shift = 0.0f64;
    let mut trace = SearchTrace::default();
    let end_b = loop {
        let cand = engine
            .global_min()
            .ok_or_else(|| Error::NotPerfect("no augmenting path in the reduced graph".into()))?;
        let delta = (cand.slack - shift).max(0.0);
        observer.on_step(&SearchProbe {
            y,
            sigma_r: &sigma_r,
            sigma_b: &sigma_b,
            in_r: &in_r,
            in_forest_b: &in_forest_b,
            shift,
            candidate: cand,
            delta,
        });
        if delta > 0.0 {
            trace.deltas.push(delta);
        }
        shift = shift.max(cand.slack);
        parent_b[cand.b] = cand.r;
        match m.b_to_r[cand.b] {
            None => break cand.b,
            Some(mate) => {
                engine.remove_b(cand.b)?;
                in_forest_b[cand.b] = true;
                sigma_b[cand.b] = y.b[cand.b] + shift;
                sigma_r[mate] = y.r[mate] - shift;
                in_r[mate] = true;
                engine.add_r(mate, sigma_r[mate])?;
            }
        }
    };
    for r in 0..n {
        if in_r[r] {
            y.r[r] = sigma_r[r] + shift;
        }
    }
    for b in 0..n {
        if in_forest_b[b] {
            y.b[b] = sigma_b[b] - shift;
        }
    }
    let mut edges = Vec::new();
    let mut b = end_b;
    loop {
        let r = parent_b[b];
        edges.push((r, b));
        match m.r_to_b[r] {
            None => break,
            Some(prev_b) => b = prev_b,
        }
    }
    edges.reverse();
    trace.path_len = edges.len();
    Ok((AltPath { edges }, trace))
}

/// Cost change of augmenting `m` along `path`.
pub fn net_cost(g: &ReducedGraph, m: &Matching, path: &AltPath) -> Result<f64> {
    path.check_alternating(m)?;
    let w = |r: usize, b: usize| {
        g.weight(r, b)
            .ok_or_else(|| Error::NotAlternating(format!("({r}, {b}) is not an edge")))
    };
    let mut total = 0.0;
    for (i, &(r, b)) in path.edges.iter().enumerate() {
        total += w(r, b)?;
        if let Some(&(next_r, _)) = path.edges.get(i + 1) {
            total -= w(next_r, b)?;
        }
    }
    Ok(total)
}

/// Cost of a (possibly partial) matching.
pub fn matching_cost(g: &ReducedGraph, m: &Matching) -> f64 {
    m.r_to_b
        .iter()
        .enumerate()
        .filter_map(|(r, b)| b.map(|b| g.weight(r, b).expect("matched pairs are edges")))
        .sum()
}

/// Verifies `y(r) + y(b) <= c(r, b) + tol` on every edge and equality
/// within `tol` on matched edges. Full enumeration, `O(n^2)`.
pub fn check_dual_feasibility(
    g: &ReducedGraph,
    m: &Matching,
    y: &Duals,
    tol: f64,
) -> std::result::Result<(), String> {
    let n = g.n();
    for r in 0..n {
        for b in 0..n {
            let Some(c) = g.weight(r, b) else { continue };
            let lhs = y.r[r] + y.b[b];
            if lhs > c + tol {
                return Err(format!("edge ({r}, {b}): y sum {lhs} > cost {c}"));
            }
            if m.is_matched(r, b) && (lhs - c).abs() > tol {
                return Err(format!("matched edge ({r}, {b}): y sum {lhs} != cost {c}"));
            }
        }
    }
    Ok(())
}

/// Step-wise exact solver; exposes the state between augmentations.
pub struct ExactSolver<'g> {
    g: &'g ReducedGraph,
    m: Matching,
    y: Duals,
    traces: Vec<SearchTrace>,
}

impl<'g> ExactSolver<'g> {
    pub fn new(g: &'g ReducedGraph) -> Self {
        ExactSolver {
            g,
            m: Matching::empty(g.n()),
            y: Duals::zero(g.n()),
            traces: Vec::new(),
        }
    }

    pub fn matching(&self) -> &Matching {
        &self.m
    }

    pub fn duals(&self) -> &Duals {
        &self.y
    }

    pub fn traces(&self) -> &[SearchTrace] {
        &self.traces
    }

    /// One search plus augmentation; `None` once the matching is perfect.
    pub fn augment_once(&mut self) -> Option<AltPath> {
        self.augment_observed(&mut ())
    }

    pub fn augment_observed(&mut self, observer: &mut impl SearchObserver) -> Option<AltPath> {
        if self.m.is_perfect() {
            return None;
        }
        let (path, trace) = hungarian_search(self.g, &self.m, &mut self.y, observer)
            .expect("the reduced graph always has a perfect matching");
        self.m.augment(&path);
        self.traces.push(trace);
        Some(path)
    }

    pub fn run(mut self) -> (PerfectMatching, Duals, Vec<SearchTrace>) {
        while self.augment_once().is_some() {}
        let pm = self.m.to_perfect().expect("loop ends on a perfect matching");
        (pm, self.y, self.traces)
    }
}

/// Minimum-cost perfect matching of `g`.
pub fn solve_exact(g: &ReducedGraph) -> PerfectMatching {
    ExactSolver::new(g).run().0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Instance, Point};
    use crate::reduction::build_reduced;

    fn graph(s: &[(f64, f64)], t: &[(f64, f64)]) -> ReducedGraph {
        build_reduced(
            &Instance::new(
                s.iter().map(|&(x, y)| Point::new(x, y)).collect(),
                t.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn small_examples() {
        let g = graph(&[(0.0, 0.0)], &[(3.0, 0.0)]);
        assert_eq!(solve_exact(&g).cost(&g), 3.0);
        let g = graph(&[(0.0, 0.0)], &[(3.0, 0.0), (4.0, 0.0)]);
        assert_eq!(solve_exact(&g).cost(&g), 7.0);
    }

    #[test]
    fn first_search_pays_delta_once() {
        // R = [u, v^], B = [v, u^]. All R free, sigma = 0: the E1 edge
        // (v^, u^) has slack 0 and is taken first without a dual change.
        let g = graph(&[(0.0, 0.0)], &[(3.0, 0.0)]);
        let m = Matching::empty(2);
        let mut y = Duals::zero(2);
        let (p, t) = hungarian_search(&g, &m, &mut y, &mut ()).unwrap();
        assert_eq!(p.edges, vec![(1, 1)]);
        assert!(t.deltas.is_empty());

        // Then u alone: its edges (u, v) and (u, u^) both cost 3.
        let mut m = m;
        m.augment(&p);
        let (p, t) = hungarian_search(&g, &m, &mut y, &mut ()).unwrap();
        assert_eq!(t.deltas, vec![3.0]);
        assert_eq!(p.edges, vec![(0, 0)]);
        m.augment(&p);
        check_dual_feasibility(&g, &m, &y, 1e-12).unwrap();
    }

    #[test]
    fn net_cost_examples() {
        // S = {(0,0), (10,0)}, T = {(3,0), (13,0)}
        let g = graph(&[(0.0, 0.0), (10.0, 0.0)], &[(3.0, 0.0), (13.0, 0.0)]);
        let m = Matching::empty(4);
        assert_eq!(net_cost(&g, &m, &AltPath { edges: vec![(0, 0)] }).unwrap(), 3.0);

        let mut m = Matching::empty(4);
        m.augment(&AltPath { edges: vec![(0, 0)] });
        // (1, 0) costs 7, matched (0, 0) costs 3, (0, 1) costs 13
        let p = AltPath { edges: vec![(1, 0), (0, 1)] };
        assert_eq!(net_cost(&g, &m, &p).unwrap(), 7.0 - 3.0 + 13.0);
        let before = matching_cost(&g, &m);
        let mut after = m.clone();
        after.augment(&p);
        assert!((matching_cost(&g, &after) - before - net_cost(&g, &m, &p).unwrap()).abs() < 1e-12);

        assert!(net_cost(&g, &m, &AltPath { edges: vec![(0, 0)] }).is_err());
    }

    #[test]
    fn net_cost_three_four_two() {
        // unmatched 3 and 4 around a matched 2
        let g = graph(&[(0.0, 0.0), (0.0, 6.0)], &[(3.0, 0.0), (0.0, 2.0)]);
        // (1, 1): |(0,6)-(0,2)| = 4; (0, 1): 2; (0, 0): 3
        let mut m = Matching::empty(4);
        m.augment(&AltPath { edges: vec![(0, 1)] });
        let p = AltPath { edges: vec![(1, 1), (0, 0)] };
        assert_eq!(net_cost(&g, &m, &p).unwrap(), 5.0);
    }
}
