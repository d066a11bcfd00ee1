//! Step 1 of `match`: a maximal set of vertex-disjoint augmenting paths of
//! eligible edges, found by depth-first search over per-biclique ordered
//! trees.
//!
//! With duals fixed for the phase, an unmatched edge `(r, b)` of cost `c`
//! is eligible iff `y(r) + y(b) = c + 1`, i.e. iff `b` is stored under key
//! `c + 1 - y(b) = y(r)`. Each biclique keeps its `Q` side in a tree keyed
//! this way, and all of `B1` shares one tree for the `E1` clique.

use std::collections::{BTreeSet, VecDeque};

use crate::matching::{AltPath, Matching};
use crate::scaling::{IntCosts, IntDuals};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MatchWork {
    pub searches: u64,
    pub deletions: u64,
    pub probes: u64,
}

/// Result of offering an edge `(last(P), v)` to the path stack.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Done,
    Extended,
    Skip,
}

pub struct MatchDs<'c, 'a> {
    costs: &'c IntCosts<'a>,
    y: &'c IntDuals,
    trees: Vec<BTreeSet<(i64, usize)>>,
    t1: BTreeSet<(i64, usize)>,
    cursor: Vec<usize>,
    e1_failed: Vec<bool>,
    marked_r: Vec<bool>,
    marked_b: Vec<bool>,
    path: Vec<(usize, usize)>,
    pending: Option<usize>,
    pub work: MatchWork,
}

impl<'c, 'a> MatchDs<'c, 'a> {
    pub fn build(costs: &'c IntCosts<'a>, y: &'c IntDuals) -> Self {
        let cover = costs.cover();
        let (ns, nt, n) = (costs.ns(), costs.nt(), costs.n());
        let trees = cover
            .bicliques
            .iter()
            .zip(&costs.biclique)
            .map(|(bc, &c)| bc.q.iter().map(|&t| (c + 1 - y.b[t], t)).collect())
            .collect();
        let t1 = (nt..n).map(|b| (costs.e1 + 1 - y.b[b], b)).collect();
        MatchDs {
            costs,
            y,
            trees,
            t1,
            cursor: vec![0; ns],
            e1_failed: vec![false; nt],
            marked_r: vec![false; n],
            marked_b: vec![false; n],
            path: Vec::new(),
            pending: None,
            work: MatchWork::default(),
        }
    }

    /// Stored keys, per biclique tree then `T_1`.
    pub fn keys(&self) -> (Vec<Vec<(i64, usize)>>, Vec<(i64, usize)>) {
        (
            self.trees.iter().map(|t| t.iter().copied().collect()).collect(),
            self.t1.iter().copied().collect(),
        )
    }

    pub fn is_marked_b(&self, b: usize) -> bool {
        self.marked_b[b]
    }

    fn eligible(&self, r: usize, b: usize, c: i64) -> bool {
        self.y.r[r] + self.y.b[b] == c + 1
    }

    fn mark_b(&mut self, b: usize) {
        self.marked_b[b] = true;
        let nt = self.costs.nt();
        let yb = self.y.b[b];
        if b < nt {
            for &j in &self.costs.cover().of_t[b] {
                let key = (self.costs.biclique[j] + 1 - yb, b);
                if self.trees[j].remove(&key) {
                    self.work.deletions += 1;
                }
            }
        } else if self.t1.remove(&(self.costs.e1 + 1 - yb, b)) {
            self.work.deletions += 1;
        }
    }

    fn search(tree: &BTreeSet<(i64, usize)>, key: i64) -> Option<usize> {
        tree.range((key, 0)..=(key, usize::MAX)).next().map(|&(_, b)| b)
    }

    /// An unmarked `b` with `(r, b)` eligible and unmatched.
    fn next_eligible(&mut self, r: usize) -> Option<usize> {
        let (ns, nt) = (self.costs.ns(), self.costs.nt());
        let yr = self.y.r[r];
        if r < ns {
            let b = nt + r;
            if !self.marked_b[b] {
                self.work.probes += 1;
                if self.eligible(r, b, self.costs.e2[r]) {
                    return Some(b);
                }
            }
            let list = &self.costs.cover().of_s[r];
            while self.cursor[r] < list.len() {
                let j = list[self.cursor[r]];
                self.work.searches += 1;
                if let Some(b) = Self::search(&self.trees[j], yr) {
                    return Some(b);
                }
                self.cursor[r] += 1;
            }
        } else {
            let t = r - ns;
            if !self.marked_b[t] {
                self.work.probes += 1;
                if self.eligible(r, t, self.costs.e3[t]) {
                    return Some(t);
                }
            }
            if !self.e1_failed[t] {
                self.work.searches += 1;
                if let Some(b) = Self::search(&self.t1, yr) {
                    return Some(b);
                }
                self.e1_failed[t] = true;
            }
        }
        None
    }

    /// Offers the eligible unmatched edge `(last(P), v)`.
    pub fn augmenting_path_step(&mut self, m: &Matching, v: usize, out: &mut Vec<AltPath>) -> Step {
        if self.marked_b[v] {
            return Step::Skip;
        }
        let u = self.path_end();
        self.mark_b(v);
        self.path.push((u, v));
        match m.b_to_r[v] {
            None => {
                out.push(AltPath {
                    edges: std::mem::take(&mut self.path),
                });
                Step::Done
            }
            Some(w) => {
                debug_assert!(!self.marked_r[w]);
                self.marked_r[w] = true;
                self.pending = Some(w);
                Step::Extended
            }
        }
    }

    fn path_end(&self) -> usize {
        self.pending.expect("a path is in progress")
    }

    /// Depth-first search from every free unmarked R-vertex.
    pub fn find_maximal_aps(&mut self, m: &Matching) -> Vec<AltPath> {
        let mut out = Vec::new();
        let roots: Vec<usize> = m.free_r().collect();
        for root in roots {
            if self.marked_r[root] {
                continue;
            }
            self.marked_r[root] = true;
            self.path.clear();
            self.pending = Some(root);
            loop {
                let r = self.path_end();
                match self.next_eligible(r) {
                    Some(b) => match self.augmenting_path_step(m, b, &mut out) {
                        Step::Done => break,
                        Step::Extended => {}
                        Step::Skip => unreachable!("trees and probes only yield unmarked vertices"),
                    },
                    None => match self.path.pop() {
                        None => break,
                        Some((prev, _)) => self.pending = Some(prev),
                    },
                }
            }
        }
        self.pending = None;
        out
    }
}

/// Whether an augmenting path of eligible edges avoids every vertex of
/// `paths`. Breadth-first search over all edges; test oracle.
pub fn eligible_path_exists(costs: &IntCosts<'_>, y: &IntDuals, m: &Matching, paths: &[AltPath]) -> bool {
    let n = costs.n();
    let mut blocked_r = vec![false; n];
    let mut blocked_b = vec![false; n];
    for p in paths {
        for &(r, b) in &p.edges {
            blocked_r[r] = true;
            blocked_b[b] = true;
        }
    }
    let mut seen_r = blocked_r.clone();
    let mut seen_b = blocked_b;
    let mut queue: VecDeque<usize> = VecDeque::new();
    for r in m.free_r() {
        if !seen_r[r] {
            seen_r[r] = true;
            queue.push_back(r);
        }
    }
    while let Some(r) = queue.pop_front() {
        for b in 0..n {
            if seen_b[b] || m.is_matched(r, b) {
                continue;
            }
            let Some(c) = costs.cost(r, b) else { continue };
            if y.r[r] + y.b[b] != c + 1 {
                continue;
            }
            seen_b[b] = true;
            match m.b_to_r[b] {
                None => return true,
                Some(w) => {
                    if !seen_r[w] {
                        seen_r[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    false
}
