//! Reduction from many-to-many matching to bipartite perfect matching.
//!
//! For `|S| = a` and `|T| = b` the graph has `a + b` vertices per side:
//!
//! | side | part | index range     | stands for            |
//! |------|------|-----------------|-----------------------|
//! | R    | 0    | `0..a`          | the points of `S`     |
//! | R    | 1    | `a..a+b`        | copies of `T`         |
//! | B    | 0    | `0..b`          | the points of `T`     |
//! | B    | 1    | `b..b+a`        | copies of `S`         |
//!
//! Edges: `E0 = R0 x B0` at Euclidean cost, `E1 = R1 x B1` at cost zero,
//! `E2 = {(u, copy of u)}` and `E3 = {(copy of v, v)}` at the
//! nearest-neighbor distance of the original point. Only the two
//! nearest-neighbor tables are stored.

use crate::error::{Error, Result};
use crate::model::{cover_cost, is_valid_cover, Instance, PairSet};
use crate::nearest::NearestNeighbors;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    R,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    Original,
    Copy,
}

/// A vertex of the reduced graph, addressed by side, part, and the index of
/// the original point it stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VertexId {
    pub side: Side,
    pub part: Part,
    pub index: usize,
}

impl VertexId {
    pub const fn r0(s: usize) -> Self {
        VertexId { side: Side::R, part: Part::Original, index: s }
    }
    pub const fn r1(t: usize) -> Self {
        VertexId { side: Side::R, part: Part::Copy, index: t }
    }
    pub const fn b0(t: usize) -> Self {
        VertexId { side: Side::B, part: Part::Original, index: t }
    }
    pub const fn b1(s: usize) -> Self {
        VertexId { side: Side::B, part: Part::Copy, index: s }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeClass {
    E0,
    E1,
    E2,
    E3,
}

#[derive(Clone, Debug)]
pub struct ReducedGraph {
    inst: Instance,
    nn: NearestNeighbors,
}

pub fn build_reduced(inst: &Instance) -> ReducedGraph {
    ReducedGraph {
        inst: inst.clone(),
        nn: NearestNeighbors::compute(inst),
    }
}

impl ReducedGraph {
    pub fn instance(&self) -> &Instance {
        &self.inst
    }

    pub fn neighbors(&self) -> &NearestNeighbors {
        &self.nn
    }

    /// `|S|`, the size of `R0` and `B1`.
    pub fn ns(&self) -> usize {
        self.inst.s().len()
    }

    /// `|T|`, the size of `B0` and `R1`.
    pub fn nt(&self) -> usize {
        self.inst.t().len()
    }

    /// Vertices per side, `|S| + |T|`.
    pub fn n(&self) -> usize {
        self.ns() + self.nt()
    }

    /// Weight of the `E2` edge at `s`.
    pub fn e2_weight(&self, s: usize) -> f64 {
        self.nn.s_nn[s].1
    }

    /// Weight of the `E3` edge at `t`.
    pub fn e3_weight(&self, t: usize) -> f64 {
        self.nn.t_nn[t].1
    }

    pub fn r_index(&self, v: VertexId) -> Option<usize> {
        match (v.side, v.part) {
            (Side::R, Part::Original) if v.index < self.ns() => Some(v.index),
            (Side::R, Part::Copy) if v.index < self.nt() => Some(self.ns() + v.index),
            _ => None,
        }
    }

    pub fn b_index(&self, v: VertexId) -> Option<usize> {
        match (v.side, v.part) {
            (Side::B, Part::Original) if v.index < self.nt() => Some(v.index),
            (Side::B, Part::Copy) if v.index < self.ns() => Some(self.nt() + v.index),
            _ => None,
        }
    }

    pub fn r_vertex(&self, r: usize) -> VertexId {
        if r < self.ns() {
            VertexId::r0(r)
        } else {
            VertexId::r1(r - self.ns())
        }
    }

    pub fn b_vertex(&self, b: usize) -> VertexId {
        if b < self.nt() {
            VertexId::b0(b)
        } else {
            VertexId::b1(b - self.nt())
        }
    }

    /// Class of the edge between R-vertex `r` and B-vertex `b`, if it exists.
    pub fn edge_class(&self, r: usize, b: usize) -> Option<EdgeClass> {
        let (a, bt) = (self.ns(), self.nt());
        match (r < a, b < bt) {
            (true, true) => Some(EdgeClass::E0),
            (false, false) => Some(EdgeClass::E1),
            (true, false) if b - bt == r => Some(EdgeClass::E2),
            (false, true) if r - a == b => Some(EdgeClass::E3),
            _ => None,
        }
    }

    /// Weight by dense indices; `None` for pairs that are not edges.
    #[inline]
    pub fn weight(&self, r: usize, b: usize) -> Option<f64> {
        Some(match self.edge_class(r, b)? {
            EdgeClass::E0 => self.inst.pair_distance(r, b),
            EdgeClass::E1 => 0.0,
            EdgeClass::E2 => self.e2_weight(r),
            EdgeClass::E3 => self.e3_weight(b),
        })
    }

    /// Weight of the edge `(u, v)` with `u` on side R and `v` on side B.
    pub fn edge_weight(&self, u: VertexId, v: VertexId) -> Option<f64> {
        self.weight(self.r_index(u)?, self.b_index(v)?)
    }

    /// Largest edge weight; used to scale numeric tolerances.
    pub fn max_weight(&self) -> f64 {
        let mut m: f64 = 0.0;
        for p in self.inst.s() {
            for q in self.inst.t() {
                m = m.max(crate::model::distance(p, q));
            }
        }
        m
    }
}

/// A perfect matching of the reduced graph: `match_of[r]` is the B-vertex
/// matched to R-vertex `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectMatching {
    pub match_of: Vec<usize>,
}

impl PerfectMatching {
    /// Checks the bijection and that every matched pair is an edge.
    pub fn validate(&self, g: &ReducedGraph) -> Result<()> {
        let n = g.n();
        if self.match_of.len() != n {
            return Err(Error::NotPerfect(format!(
                "{} R-vertices matched, expected {n}",
                self.match_of.len()
            )));
        }
        let mut seen = vec![false; n];
        for (r, &b) in self.match_of.iter().enumerate() {
            if b >= n || seen[b] {
                return Err(Error::NotPerfect(format!("B-vertex {b} out of range or reused")));
            }
            seen[b] = true;
            if g.edge_class(r, b).is_none() {
                return Err(Error::NotPerfect(format!("({r}, {b}) is not an edge")));
            }
        }
        Ok(())
    }

    pub fn cost(&self, g: &ReducedGraph) -> f64 {
        self.match_of
            .iter()
            .enumerate()
            .map(|(r, &b)| g.weight(r, b).expect("matched pairs are edges"))
            .sum()
    }

    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![usize::MAX; self.match_of.len()];
        for (r, &b) in self.match_of.iter().enumerate() {
            inv[b] = r;
        }
        inv
    }
}

/// Removes the middle edge of every 3-edge path until each component of the
/// pair graph is a star. Degrees only decrease, so one pass in canonical
/// order reaches the fixed point.
pub fn canonicalize(inst: &Instance, m: &PairSet) -> PairSet {
    let mut deg_s = vec![0usize; inst.s().len()];
    let mut deg_t = vec![0usize; inst.t().len()];
    for (s, t) in m.iter() {
        deg_s[s] += 1;
        deg_t[t] += 1;
    }
    let mut out = PairSet::new();
    for (s, t) in m.iter() {
        if deg_s[s] >= 2 && deg_t[t] >= 2 {
            deg_s[s] -= 1;
            deg_t[t] -= 1;
        } else {
            out.insert(s, t);
        }
    }
    out
}

/// True iff the pair graph contains a path with three edges.
pub fn has_three_edge_path(inst: &Instance, m: &PairSet) -> bool {
    let mut deg_s = vec![0usize; inst.s().len()];
    let mut deg_t = vec![0usize; inst.t().len()];
    for (s, t) in m.iter() {
        deg_s[s] += 1;
        deg_t[t] += 1;
    }
    m.iter().any(|(s, t)| deg_s[s] >= 2 && deg_t[t] >= 2)
}

/// Converts a valid cover into a perfect matching of cost at most the cover
/// cost.
///
/// Each star contributes its lowest-index leaf as an `E0` edge, the shadow
/// of that edge in `E1`, and an `E2`/`E3` edge for each remaining leaf.
pub fn cover_to_perfect(g: &ReducedGraph, m: &PairSet) -> Result<PerfectMatching> {
    let inst = g.instance();
    if !is_valid_cover(inst, m)? {
        return Err(Error::InvalidCover);
    }
    let canon = canonicalize(inst, m);
    let (a, bt) = (g.ns(), g.nt());
    let mut s_nbrs: Vec<Vec<usize>> = vec![Vec::new(); a];
    let mut t_nbrs: Vec<Vec<usize>> = vec![Vec::new(); bt];
    for (s, t) in canon.iter() {
        s_nbrs[s].push(t);
        t_nbrs[t].push(s);
    }
    let mut match_of = vec![usize::MAX; g.n()];
    // S-centered stars, including single edges; neighbor lists are sorted
    // because the pair set iterates in canonical order.
    for (s, leaves) in s_nbrs.iter().enumerate() {
        let single = leaves.len() == 1 && t_nbrs[leaves[0]].len() == 1;
        if leaves.len() >= 2 || single {
            let t1 = leaves[0];
            match_of[s] = t1;
            match_of[a + t1] = bt + s;
            for &t in &leaves[1..] {
                match_of[a + t] = t;
            }
        }
    }
    for (t, leaves) in t_nbrs.iter().enumerate() {
        if leaves.len() >= 2 {
            let s1 = leaves[0];
            match_of[s1] = t;
            match_of[a + t] = bt + s1;
            for &s in &leaves[1..] {
                match_of[s] = bt + s;
            }
        }
    }
    let pm = PerfectMatching { match_of };
    pm.validate(g)?;
    Ok(pm)
}

/// Converts a perfect matching back into a cover of cost at most the
/// matching cost. `E2`/`E3` edges become nearest-neighbor pairs; a pair
/// produced twice is kept once.
pub fn perfect_to_cover(g: &ReducedGraph, pm: &PerfectMatching) -> Result<PairSet> {
    pm.validate(g)?;
    let (a, bt) = (g.ns(), g.nt());
    let inv = pm.inverse();
    let nn = g.neighbors();
    let mut m = PairSet::new();
    for s in 0..a {
        let b = pm.match_of[s];
        if b == bt + s {
            m.insert(s, nn.s_nn[s].0);
        } else {
            m.insert(s, b);
        }
    }
    for t in 0..bt {
        let r = inv[t];
        if r == a + t {
            m.insert(nn.t_nn[t].0, t);
        } else {
            m.insert(r, t);
        }
    }
    debug_assert!(is_valid_cover(g.instance(), &m).unwrap_or(false));
    debug_assert!(cover_cost(g.instance(), &m) <= pm.cost(g) * (1.0 + 1e-12) + 1e-12);
    Ok(m)
}
