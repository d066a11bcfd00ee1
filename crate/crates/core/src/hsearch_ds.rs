//! Closest-pair structure for the Hungarian search of the scaling solver.
//!
//! Every edge family is represented implicitly. Inside one biclique all
//! edges cost the same, so the best pair is the R-vertex of largest
//! `sigma` in `P` with the B-vertex of largest `sigma` in `Q`; the `E1`
//! clique works the same way. `E2` and `E3` edges sit in a set ordered by
//! slack. A global set keeps one candidate per source.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use crate::error::{Error, Result};
use crate::scaling::IntCosts;

/// A pair with its slack `c - sigma_r - sigma_b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct IntCandidate {
    pub slack: i64,
    pub r: usize,
    pub b: usize,
}

type Key = (i64, usize, usize);

pub struct HSearchDs<'c> {
    costs: &'c IntCosts<'c>,
    sigma_r: Vec<i64>,
    in_r: Vec<bool>,
    sigma_b: Vec<i64>,
    live_b: Vec<bool>,
    best_r: Vec<Option<(i64, Reverse<usize>)>>,
    heap_b: Vec<BinaryHeap<(i64, Reverse<usize>)>>,
    h1r: Option<(i64, Reverse<usize>)>,
    h1b: BinaryHeap<(i64, Reverse<usize>)>,
    h23: BTreeSet<Key>,
    current: Vec<Option<Key>>,
    global: BTreeSet<(Key, usize)>,
    ops: u64,
}

impl<'c> HSearchDs<'c> {
    /// `R'` empty, `B'` all of `B` with weights `sigma_b`.
    pub fn new(costs: &'c IntCosts<'_>, sigma_b: Vec<i64>) -> Self {
        let n = costs.n();
        assert_eq!(sigma_b.len(), n);
        let nb = costs.cover().len();
        let heap_b = costs
            .cover()
            .bicliques
            .iter()
            .map(|bc| bc.q.iter().map(|&t| (sigma_b[t], Reverse(t))).collect())
            .collect();
        let h1b = (costs.nt()..n).map(|b| (sigma_b[b], Reverse(b))).collect();
        HSearchDs {
            costs,
            sigma_r: vec![0; n],
            in_r: vec![false; n],
            sigma_b,
            live_b: vec![true; n],
            best_r: vec![None; nb],
            heap_b,
            h1r: None,
            h1b,
            h23: BTreeSet::new(),
            current: vec![None; nb + 2],
            global: BTreeSet::new(),
            ops: 0,
        }
    }

    pub fn in_r(&self, r: usize) -> bool {
        self.in_r[r]
    }

    pub fn sigma_r(&self, r: usize) -> i64 {
        self.sigma_r[r]
    }

    pub fn live_b(&self, b: usize) -> bool {
        self.live_b[b]
    }

    pub fn sigma_b(&self, b: usize) -> i64 {
        self.sigma_b[b]
    }

    /// Heap and set operations performed so far.
    pub fn ops(&self) -> u64 {
        self.ops
    }

    fn e1_source(&self) -> usize {
        self.best_r.len()
    }

    fn h23_source(&self) -> usize {
        self.best_r.len() + 1
    }

    fn top_live(heap: &mut BinaryHeap<(i64, Reverse<usize>)>, live: &[bool], ops: &mut u64) -> Option<(i64, usize)> {
        while let Some(&(s, Reverse(b))) = heap.peek() {
            if live[b] {
                return Some((s, b));
            }
            heap.pop();
            *ops += 1;
        }
        None
    }

    fn refresh(&mut self, source: usize) {
        let nb = self.best_r.len();
        let cand: Option<Key> = if source < nb {
            let top = Self::top_live(&mut self.heap_b[source], &self.live_b, &mut self.ops);
            match (self.best_r[source], top) {
                (Some((sr, Reverse(r))), Some((sb, b))) => Some((self.costs.biclique[source] - sr - sb, r, b)),
                _ => None,
            }
        } else if source == nb {
            let top = Self::top_live(&mut self.h1b, &self.live_b, &mut self.ops);
            match (self.h1r, top) {
                (Some((sr, Reverse(r))), Some((sb, b))) => Some((self.costs.e1 - sr - sb, r, b)),
                _ => None,
            }
        } else {
            self.h23.first().copied()
        };
        if cand != self.current[source] {
            if let Some(old) = self.current[source] {
                self.global.remove(&(old, source));
            }
            if let Some(new) = cand {
                self.global.insert((new, source));
            }
            self.current[source] = cand;
            self.ops += 1;
        }
    }

    fn edge_key(&self, r: usize, b: usize) -> Key {
        let c = self.costs.cost(r, b).expect("E2/E3 edge");
        (c - self.sigma_r[r] - self.sigma_b[b], r, b)
    }

    /// Adds `r` to `R'` with weight `sigma`.
    pub fn insert_r(&mut self, r: usize, sigma: i64) -> Result<()> {
        if self.in_r[r] {
            return Err(Error::DoubleInsert(r));
        }
        self.in_r[r] = true;
        self.sigma_r[r] = sigma;
        let (ns, nt) = (self.costs.ns(), self.costs.nt());
        let entry = Some((sigma, Reverse(r)));
        let partner = if r < ns {
            for &j in &self.costs.cover().of_s[r] {
                if entry > self.best_r[j] {
                    self.best_r[j] = entry;
                    self.refresh(j);
                }
            }
            nt + r
        } else {
            if entry > self.h1r {
                self.h1r = entry;
                self.refresh(self.e1_source());
            }
            r - ns
        };
        if self.live_b[partner] {
            let key = self.edge_key(r, partner);
            self.h23.insert(key);
            self.ops += 1;
            self.refresh(self.h23_source());
        }
        Ok(())
    }

    /// Removes `b` from `B'`.
    pub fn remove_b(&mut self, b: usize) -> Result<()> {
        if !self.live_b[b] {
            return Err(Error::DoubleRemove(b));
        }
        self.live_b[b] = false;
        let (ns, nt) = (self.costs.ns(), self.costs.nt());
        let partner = if b < nt {
            for j in self.costs.cover().of_t[b].clone() {
                self.refresh(j);
            }
            ns + b
        } else {
            self.refresh(self.e1_source());
            b - nt
        };
        if self.in_r[partner] {
            let key = self.edge_key(partner, b);
            self.h23.remove(&key);
            self.ops += 1;
            self.refresh(self.h23_source());
        }
        Ok(())
    }

    /// `v` leaves `B'`, then `u` enters `R'` with weight `sigma_u`.
    pub fn update_closest_pair(&mut self, u: usize, sigma_u: i64, v: usize) -> Result<()> {
        if self.in_r[u] {
            return Err(Error::DoubleInsert(u));
        }
        self.remove_b(v)?;
        self.insert_r(u, sigma_u)
    }

    /// Minimum-slack pair of `R' x B'`, ties by `(r, b)`.
    pub fn global_min(&self) -> Option<IntCandidate> {
        self.global
            .first()
            .map(|&((slack, r, b), _)| IntCandidate { slack, r, b })
    }

    /// Linear scan over every edge of `R' x B'`; test oracle.
    pub fn scan_min(&self) -> Option<IntCandidate> {
        let n = self.costs.n();
        let mut best: Option<IntCandidate> = None;
        for r in (0..n).filter(|&r| self.in_r[r]) {
            for b in (0..n).filter(|&b| self.live_b[b]) {
                if let Some(c) = self.costs.cost(r, b) {
                    let cand = IntCandidate {
                        slack: c - self.sigma_r[r] - self.sigma_b[b],
                        r,
                        b,
                    };
                    if best.is_none_or(|x| cand < x) {
                        best = Some(cand);
                    }
                }
            }
        }
        best
    }
}
