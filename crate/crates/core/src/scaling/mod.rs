//! The `(1+eps)`-approximate solver: weight normalization, bit scaling and
//! the `match` procedure over 1-feasible matchings.
//!
//! Real weights are clamped at the greedy cover cost `C`, measured in units
//! of `eps' C / (2n)` and rounded up to integers, then snapped up to weight
//! classes. `E0` edges get their class through the biclique cover. Each
//! scale works on the leading bits of `(n+1) W` and ends with a 1-optimal
//! perfect matching; duals carry over as `2y - 1`.

mod rounding;

pub use rounding::Rounding;

use serde::Serialize;

use crate::biclique::{build_cover, BicliqueCover};
use crate::error::{Error, Result};
use crate::hsearch_ds::{HSearchDs, IntCandidate};
use crate::match_ds::MatchDs;
use crate::matching::{AltPath, Matching};
use crate::model::cover_cost;
use crate::nearest::greedy_from_neighbors;
use crate::reduction::{PerfectMatching, ReducedGraph};

/// Integer edge costs on the reduced graph, stored per edge family.
#[derive(Clone, Debug)]
pub struct IntCosts<'a> {
    cover: &'a BicliqueCover,
    ns: usize,
    nt: usize,
    /// Per biclique.
    pub biclique: Vec<i64>,
    pub e1: i64,
    /// Indexed by `S`.
    pub e2: Vec<i64>,
    /// Indexed by `T`.
    pub e3: Vec<i64>,
}

impl<'a> IntCosts<'a> {
    pub fn cover(&self) -> &'a BicliqueCover {
        self.cover
    }

    pub fn ns(&self) -> usize {
        self.ns
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn n(&self) -> usize {
        self.ns + self.nt
    }

    /// `None` for non-edges and excluded edges.
    pub fn cost(&self, r: usize, b: usize) -> Option<i64> {
        let (a, bt) = (self.ns, self.nt);
        match (r < a, b < bt) {
            (true, true) => self.cover.find(r, b).map(|j| self.biclique[j]),
            (false, false) => Some(self.e1),
            (true, false) => (b == bt + r).then(|| self.e2[r]),
            (false, true) => (b == r - a).then(|| self.e3[b]),
        }
    }

    pub fn max_cost(&self) -> i64 {
        self.biclique
            .iter()
            .chain(&self.e2)
            .chain(&self.e3)
            .copied()
            .fold(self.e1, i64::max)
    }

    pub fn map(&self, f: impl Fn(i64) -> i64) -> IntCosts<'a> {
        IntCosts {
            cover: self.cover,
            ns: self.ns,
            nt: self.nt,
            biclique: self.biclique.iter().map(|&c| f(c)).collect(),
            e1: f(self.e1),
            e2: self.e2.iter().map(|&c| f(c)).collect(),
            e3: self.e3.iter().map(|&c| f(c)).collect(),
        }
    }

    /// `None` if some matched pair is not an edge.
    pub fn matching_cost(&self, pm: &PerfectMatching) -> Option<i64> {
        pm.match_of
            .iter()
            .enumerate()
            .map(|(r, &b)| self.cost(r, b))
            .sum()
    }
}

/// Rounded integer instance.
pub struct NormalizedInstance<'g> {
    g: &'g ReducedGraph,
    eps: f64,
    rounding: Rounding,
    cover: BicliqueCover,
    e2: Vec<i64>,
    e3: Vec<i64>,
}

/// Width of the weight classes and of the unit, relative to the target.
pub fn eps_internal(eps: f64) -> f64 {
    eps / EPS_DIVISOR
}

pub const EPS_DIVISOR: f64 = 8.0;

/// Largest biclique weight excess over the integer weight that keeps the
/// total within `1 + eps`: `(1 + f)(1 + eps_internal) <= 1 + eps`.
pub fn fidelity(eps: f64) -> f64 {
    ((1.0 + eps) / (1.0 + eps_internal(eps)) - 1.0) * 0.999
}

/// Builds the integer instance for a target ratio `1 + eps`.
pub fn normalize(g: &ReducedGraph, eps: f64) -> Result<NormalizedInstance<'_>> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidInput(format!("eps must lie in (0, 1], got {eps}")));
    }
    let inst = g.instance();
    let clamp = cover_cost(inst, &greedy_from_neighbors(g.neighbors()));
    let rounding = Rounding::new(eps_internal(eps), clamp, g.n());
    let cover = build_cover(inst, &rounding, fidelity(eps));
    let nn_edge = |w: f64| {
        rounding
            .rounded(w)
            .expect("nearest-neighbor edges lie within the clamp")
    };
    let e2 = (0..g.ns()).map(|s| nn_edge(g.e2_weight(s))).collect();
    let e3 = (0..g.nt()).map(|t| nn_edge(g.e3_weight(t))).collect();
    Ok(NormalizedInstance {
        g,
        eps,
        rounding,
        cover,
        e2,
        e3,
    })
}

impl<'g> NormalizedInstance<'g> {
    pub fn graph(&self) -> &'g ReducedGraph {
        self.g
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn eps_internal(&self) -> f64 {
        self.rounding.eps()
    }

    pub fn rounding(&self) -> &Rounding {
        &self.rounding
    }

    pub fn clamp(&self) -> f64 {
        self.rounding.clamp()
    }

    pub fn unit(&self) -> f64 {
        self.rounding.unit()
    }

    pub fn cover(&self) -> &BicliqueCover {
        &self.cover
    }

    /// Class of the `E1` edges.
    pub fn ell(&self) -> usize {
        0
    }

    /// Rounded weights `W`.
    pub fn weights(&self) -> IntCosts<'_> {
        IntCosts {
            cover: &self.cover,
            ns: self.g.ns(),
            nt: self.g.nt(),
            biclique: self.cover.bicliques.iter().map(|b| b.weight).collect(),
            e1: self.rounding.class_weight(self.ell()),
            e2: self.e2.clone(),
            e3: self.e3.clone(),
        }
    }
}

/// Bits of `(n+1) N`.
pub fn scale_count(n: usize, max_weight: i64) -> u32 {
    let top = (n as u128 + 1) * max_weight.max(1) as u128;
    128 - top.leading_zeros()
}

/// Costs at scale `i` of `k`: the leading `i` bits of `(n+1) W`.
pub fn scale_costs<'a>(w: &IntCosts<'a>, k: u32, i: u32) -> IntCosts<'a> {
    let f = w.n() as i64 + 1;
    w.map(|c| (f * c) >> (k - i))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntDuals {
    pub r: Vec<i64>,
    pub b: Vec<i64>,
}

impl IntDuals {
    pub fn zero(n: usize) -> Self {
        IntDuals {
            r: vec![0; n],
            b: vec![0; n],
        }
    }
}

/// `y <- 2y - 1` on every vertex.
pub fn scale_duals(y: &mut IntDuals) {
    for v in y.r.iter_mut().chain(y.b.iter_mut()) {
        *v = 2 * *v - 1;
    }
}

/// Integer check of `y(u) + y(v) <= c + 1` on every edge and equality
/// with `c` on matched edges.
pub fn check_one_feasible(costs: &IntCosts<'_>, m: &Matching, y: &IntDuals) -> std::result::Result<(), String> {
    let n = costs.n();
    for r in 0..n {
        if let Some(b) = m.r_to_b[r] {
            let Some(c) = costs.cost(r, b) else {
                return Err(format!("matched pair ({r}, {b}) is not an edge"));
            };
            if y.r[r] + y.b[b] != c {
                return Err(format!("matched ({r}, {b}): {} != {c}", y.r[r] + y.b[b]));
            }
        }
        for b in 0..n {
            if let Some(c) = costs.cost(r, b) {
                if y.r[r] + y.b[b] > c + 1 {
                    return Err(format!("edge ({r}, {b}): {} > {c} + 1", y.r[r] + y.b[b]));
                }
            }
        }
    }
    Ok(())
}

pub fn is_one_feasible(costs: &IntCosts<'_>, m: &Matching, y: &IntDuals) -> bool {
    check_one_feasible(costs, m, y).is_ok()
}

/// `c(other) >= c(one_opt) - n`, which holds whenever `one_opt` is
/// 1-optimal.
pub fn one_optimal_gap_check(one_opt: &PerfectMatching, other: &PerfectMatching, costs: &IntCosts<'_>) -> bool {
    match (costs.matching_cost(one_opt), costs.matching_cost(other)) {
        (Some(a), Some(b)) => b >= a - costs.n() as i64,
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stage {
    ScaleStart,
    AfterStep1,
    AfterStep2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CheckPoint {
    pub scale: u32,
    pub iteration: usize,
    pub stage: Stage,
}

/// Instrumentation hooks for the scaling solver.
pub trait GtObserver {
    fn on_state(&mut self, _at: CheckPoint, _costs: &IntCosts<'_>, _m: &Matching, _y: &IntDuals) {}
    /// Before augmenting the paths found by step 1.
    fn on_paths(&mut self, _costs: &IntCosts<'_>, _m: &Matching, _y: &IntDuals, _paths: &[AltPath]) {}
    /// After every global-minimum query of a step-2 search.
    fn on_search_min(&mut self, _costs: &IntCosts<'_>, _ds: &HSearchDs<'_>, _found: Option<IntCandidate>) {}
}

impl GtObserver for () {}

/// Per-scale record.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScaleTrace {
    pub scale: u32,
    pub iterations: usize,
    pub searches: usize,
    /// Matching size after each step 1.
    pub sizes: Vec<usize>,
    pub tree_searches: u64,
    pub tree_deletions: u64,
    pub heap_ops: u64,
}

/// Step 2: a Hungarian search over `sigma` weights that stops once an
/// eligible augmenting path exists. Nothing is augmented.
fn eligible_search(
    costs: &IntCosts<'_>,
    m: &Matching,
    y: &mut IntDuals,
    obs: &mut impl GtObserver,
) -> u64 {
    let n = costs.n();
    let mut ds = HSearchDs::new(costs, y.b.clone());
    let mut sigma_r = vec![0i64; n];
    let mut in_r = vec![false; n];
    let mut sigma_b = vec![0i64; n];
    let mut in_forest = vec![false; n];
    for r in m.free_r() {
        sigma_r[r] = y.r[r];
        in_r[r] = true;
        ds.insert_r(r, sigma_r[r]).expect("fresh root");
    }
    let mut shift = 0i64;
    loop {
        let found = ds.global_min();
        obs.on_search_min(costs, &ds, found);
        let cand = found.expect("an augmenting path always exists");
        shift = shift.max(cand.slack + 1);
        let Some(w) = m.b_to_r[cand.b] else { break };
        sigma_b[cand.b] = y.b[cand.b] + shift;
        in_forest[cand.b] = true;
        sigma_r[w] = y.r[w] - shift;
        in_r[w] = true;
        ds.update_closest_pair(w, sigma_r[w], cand.b).expect("forest grows by fresh vertices");
    }
    for v in 0..n {
        if in_r[v] {
            y.r[v] = sigma_r[v] + shift;
        }
        if in_forest[v] {
            y.b[v] = sigma_b[v] - shift;
        }
    }
    ds.ops()
}

/// Computes a 1-optimal perfect matching from 1-feasible duals and an
/// empty matching.
pub fn match_scale(
    costs: &IntCosts<'_>,
    y: &mut IntDuals,
    scale: u32,
    obs: &mut impl GtObserver,
) -> (Matching, ScaleTrace) {
    let n = costs.n();
    let mut m = Matching::empty(n);
    let mut trace = ScaleTrace {
        scale,
        ..Default::default()
    };
    loop {
        trace.iterations += 1;
        let at = |stage| CheckPoint {
            scale,
            iteration: trace.iterations,
            stage,
        };
        let mut ds = MatchDs::build(costs, y);
        let paths = ds.find_maximal_aps(&m);
        trace.tree_searches += ds.work.searches;
        trace.tree_deletions += ds.work.deletions;
        obs.on_paths(costs, &m, y, &paths);
        for p in &paths {
            m.augment(p);
            for &(_, b) in &p.edges {
                y.b[b] -= 1;
            }
        }
        trace.sizes.push(m.size());
        obs.on_state(at(Stage::AfterStep1), costs, &m, y);
        if m.is_perfect() {
            break;
        }
        trace.searches += 1;
        trace.heap_ops += eligible_search(costs, &m, y, obs);
        obs.on_state(at(Stage::AfterStep2), costs, &m, y);
    }
    (m, trace)
}

#[derive(Clone, Debug)]
pub struct GtResult {
    pub matching: PerfectMatching,
    /// Rounded weight `W` of the matching.
    pub weight: i64,
    pub scales: u32,
    pub traces: Vec<ScaleTrace>,
}

pub fn gt_solve(norm: &NormalizedInstance<'_>) -> GtResult {
    gt_solve_observed(norm, &mut ())
}

pub fn gt_solve_observed(norm: &NormalizedInstance<'_>, obs: &mut impl GtObserver) -> GtResult {
    let w = norm.weights();
    let n = w.n();
    let k = scale_count(n, w.max_cost());
    let mut y = IntDuals::zero(n);
    let mut traces = Vec::with_capacity(k as usize);
    let mut last = None;
    for i in 1..=k {
        if i > 1 {
            scale_duals(&mut y);
        }
        let costs = scale_costs(&w, k, i);
        let start = CheckPoint {
            scale: i,
            iteration: 0,
            stage: Stage::ScaleStart,
        };
        obs.on_state(start, &costs, &Matching::empty(n), &y);
        let (m, trace) = match_scale(&costs, &mut y, i, obs);
        traces.push(trace);
        last = Some(m);
    }
    let matching = last
        .expect("at least one scale")
        .to_perfect()
        .expect("every scale ends perfect");
    let weight = w.matching_cost(&matching).expect("only included edges are matched");
    GtResult {
        matching,
        weight,
        scales: k,
        traces,
    }
}

/// Normalize and solve.
pub fn solve_gt(g: &ReducedGraph, eps: f64) -> Result<GtResult> {
    Ok(gt_solve(&normalize(g, eps)?))
}
