//! Closest-pair maintenance for the exact Hungarian search.
//!
//! The search needs, at every step, the pair `(r, b)` in `R' x B'` that
//! minimises `c(r, b) - sigma_r - sigma_b`. `R'` only grows and `B'` only
//! shrinks within one search, and each vertex's `sigma` is fixed while it
//! is in its set. The edges split into three families, each with its own
//! structure:
//!
//! * `E0 = R0 x B0`: a pluggable [`BichromaticEngine`];
//! * `E1 = R1 x B1`: all weights equal, so the best pair is the largest
//!   `sigma` on each side;
//! * `E2 u E3`: a min-heap over the live edges.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::reduction::ReducedGraph;

/// `f64` ordered by `total_cmp`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrdF64(pub f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// A pair with its reduced slack `c - sigma_r - sigma_b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub r: usize,
    pub b: usize,
    pub slack: f64,
}

impl Candidate {
    /// Order by slack, then by `(r, b)`.
    pub fn key(&self) -> (OrdF64, usize, usize) {
        (OrdF64(self.slack), self.r, self.b)
    }

    pub fn min(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
        match (a, b) {
            (Some(x), Some(y)) => Some(if y.key() < x.key() { y } else { x }),
            (x, None) => x,
            (None, y) => y,
        }
    }
}

/// Additively weighted bichromatic closest pair over `S` (red) and `T`
/// (blue) under `d(r, b) - sigma_r - sigma_b`.
pub trait BichromaticEngine {
    /// Inserts red point `r` with weight `sigma`.
    fn insert_red(&mut self, r: usize, sigma: f64);
    /// Deletes blue point `b`.
    fn remove_blue(&mut self, b: usize);
    /// Minimum pair, ties broken by `(r, b)`.
    fn closest(&self) -> Option<Candidate>;
}

/// Keeps, for every live blue point, the minimum of `d(r, b) - sigma_r`
/// over inserted reds. Insertion and query are `O(|T|)`.
#[derive(Clone, Debug)]
pub struct DenseSlackEngine<'a> {
    inst: &'a Instance,
    sigma_b: Vec<f64>,
    live: Vec<bool>,
    best: Vec<(f64, usize)>,
}

impl<'a> DenseSlackEngine<'a> {
    /// All blue points start live with the given weights.
    pub fn new(inst: &'a Instance, sigma_b: Vec<f64>) -> Self {
        let nt = inst.t().len();
        assert_eq!(sigma_b.len(), nt);
        DenseSlackEngine {
            inst,
            sigma_b,
            live: vec![true; nt],
            best: vec![(f64::INFINITY, usize::MAX); nt],
        }
    }
}

impl BichromaticEngine for DenseSlackEngine<'_> {
    fn insert_red(&mut self, r: usize, sigma: f64) {
        let p = self.inst.s()[r];
        for (b, q) in self.inst.t().iter().enumerate() {
            if !self.live[b] {
                continue;
            }
            let val = crate::model::distance(&p, q) - sigma;
            let cur = &mut self.best[b];
            if val < cur.0 || (val == cur.0 && r < cur.1) {
                *cur = (val, r);
            }
        }
    }

    fn remove_blue(&mut self, b: usize) {
        self.live[b] = false;
    }

    fn closest(&self) -> Option<Candidate> {
        let mut out: Option<Candidate> = None;
        for b in 0..self.best.len() {
            let (val, r) = self.best[b];
            if !self.live[b] || r == usize::MAX {
                continue;
            }
            let c = Candidate {
                r,
                b,
                slack: val - self.sigma_b[b],
            };
            out = Candidate::min(out, Some(c));
        }
        out
    }
}

/// The composite structure over all four edge families of the reduced
/// graph, in dense R/B indices.
pub struct ClosestPairEngine<'g, E = DenseSlackEngine<'g>> {
    g: &'g ReducedGraph,
    d1: E,
    sigma_r: Vec<f64>,
    in_r: Vec<bool>,
    sigma_b: Vec<f64>,
    live_b: Vec<bool>,
    h1r: Option<(f64, usize)>,
    h1b: BinaryHeap<(OrdF64, Reverse<usize>)>,
    h23: BinaryHeap<Reverse<(OrdF64, usize, usize)>>,
}

impl<'g> ClosestPairEngine<'g, DenseSlackEngine<'g>> {
    /// `R'` empty, `B'` = all of `B` with weights `sigma_b`.
    pub fn new(g: &'g ReducedGraph, sigma_b: Vec<f64>) -> Self {
        let d1 = DenseSlackEngine::new(g.instance(), sigma_b[..g.nt()].to_vec());
        Self::with_engine(g, sigma_b, d1)
    }
}

impl<'g, E: BichromaticEngine> ClosestPairEngine<'g, E> {
    pub fn with_engine(g: &'g ReducedGraph, sigma_b: Vec<f64>, d1: E) -> Self {
        let n = g.n();
        assert_eq!(sigma_b.len(), n);
        let h1b = (g.nt()..n).map(|b| (OrdF64(sigma_b[b]), Reverse(b))).collect();
        ClosestPairEngine {
            g,
            d1,
            sigma_r: vec![0.0; n],
            in_r: vec![false; n],
            sigma_b,
            live_b: vec![true; n],
            h1r: None,
            h1b,
            h23: BinaryHeap::new(),
        }
    }

    pub fn contains_r(&self, r: usize) -> bool {
        self.in_r[r]
    }

    pub fn is_live_b(&self, b: usize) -> bool {
        self.live_b[b]
    }

    fn push_e23(&mut self, r: usize, b: usize, c: f64) {
        let slack = c - self.sigma_r[r] - self.sigma_b[b];
        self.h23.push(Reverse((OrdF64(slack), r, b)));
    }

    /// Adds `r` to `R'` with weight `sigma`.
    pub fn add_r(&mut self, r: usize, sigma: f64) -> Result<()> {
        if self.in_r[r] {
            return Err(Error::DoubleInsert(r));
        }
        self.in_r[r] = true;
        self.sigma_r[r] = sigma;
        let (a, bt) = (self.g.ns(), self.g.nt());
        if r < a {
            self.d1.insert_red(r, sigma);
            let copy = bt + r;
            if self.live_b[copy] {
                self.push_e23(r, copy, self.g.e2_weight(r));
            }
        } else {
            let better = match self.h1r {
                None => true,
                Some((s, i)) => sigma > s || (sigma == s && r < i),
            };
            if better {
                self.h1r = Some((sigma, r));
            }
            let orig = r - a;
            if self.live_b[orig] {
                self.push_e23(r, orig, self.g.e3_weight(orig));
            }
        }
        Ok(())
    }

    /// Removes `b` from `B'`.
    pub fn remove_b(&mut self, b: usize) -> Result<()> {
        if !self.live_b[b] {
            return Err(Error::DoubleRemove(b));
        }
        self.live_b[b] = false;
        if b < self.g.nt() {
            self.d1.remove_blue(b);
        }
        // B1 heap entries and E2/E3 edges are dropped lazily
        Ok(())
    }

    /// The pair of `R' x B'` with minimum slack, ties by `(r, b)`.
    pub fn global_min(&mut self) -> Option<Candidate> {
        while let Some(&(_, Reverse(b))) = self.h1b.peek() {
            if self.live_b[b] {
                break;
            }
            self.h1b.pop();
        }
        while let Some(&Reverse((_, _, b))) = self.h23.peek() {
            if self.live_b[b] {
                break;
            }
            self.h23.pop();
        }
        let mut best = self.d1.closest();
        if let (Some((sr, r)), Some(&(OrdF64(sb), Reverse(b)))) = (self.h1r, self.h1b.peek()) {
            best = Candidate::min(best, Some(Candidate { r, b, slack: 0.0 - sr - sb }));
        }
        if let Some(&Reverse((OrdF64(slack), r, b))) = self.h23.peek() {
            best = Candidate::min(best, Some(Candidate { r, b, slack }));
        }
        best
    }
}
