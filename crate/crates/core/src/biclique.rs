//! Bi-clique covers of the `S x T` edges, grouped by weight class.
//!
//! Two quadtrees with tight bounding boxes, one per side, and a pair
//! recursion over their nodes. A node pair becomes a biclique once every
//! distance between its cells rounds to one class representative within
//! the requested fidelity; pairs entirely beyond the clamp are dropped.

use std::collections::BTreeMap;

use crate::model::{Instance, Point};
use crate::scaling::Rounding;

/// `P x Q` with a common rounded weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Biclique {
    pub class: usize,
    pub weight: i64,
    /// Sorted `S` indices.
    pub p: Vec<usize>,
    /// Sorted `T` indices.
    pub q: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicliqueCover {
    /// Sorted by class, then by construction order.
    pub bicliques: Vec<Biclique>,
    /// `I(s)`: bicliques containing `s`, in cover order.
    pub of_s: Vec<Vec<usize>>,
    /// `I(t)`: bicliques containing `t`, in cover order.
    pub of_t: Vec<Vec<usize>>,
}

impl BicliqueCover {
    pub fn len(&self) -> usize {
        self.bicliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bicliques.is_empty()
    }

    /// `sum(|P| + |Q|)`.
    pub fn size(&self) -> usize {
        self.bicliques.iter().map(|b| b.p.len() + b.q.len()).sum()
    }

    /// Number of covered pairs, with multiplicity.
    pub fn pair_count(&self) -> usize {
        self.bicliques.iter().map(|b| b.p.len() * b.q.len()).sum()
    }

    /// Index of the biclique containing `(s, t)`.
    pub fn find(&self, s: usize, t: usize) -> Option<usize> {
        self.of_s[s]
            .iter()
            .copied()
            .find(|&j| self.bicliques[j].q.binary_search(&t).is_ok())
    }

    /// `None` when the pair is excluded.
    pub fn rounded_weight(&self, s: usize, t: usize) -> Option<i64> {
        self.find(s, t).map(|j| self.bicliques[j].weight)
    }

    /// Per-class statistics as CSV.
    pub fn stats_csv(&self) -> String {
        let mut per: BTreeMap<usize, (i64, usize, usize, usize)> = BTreeMap::new();
        for b in &self.bicliques {
            let e = per.entry(b.class).or_insert((b.weight, 0, 0, 0));
            e.1 += 1;
            e.2 += b.p.len() * b.q.len();
            e.3 += b.p.len() + b.q.len();
        }
        let mut out = String::from("class,weight,bicliques,pairs,size\n");
        for (c, (w, k, pairs, size)) in per {
            out.push_str(&format!("{c},{w},{k},{pairs},{size}\n"));
        }
        out
    }
}

#[derive(Clone, Debug)]
struct Node {
    lo: Point,
    hi: Point,
    start: usize,
    end: usize,
    children: Vec<usize>,
}

impl Node {
    fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    fn diag2(&self) -> f64 {
        self.lo.dist2(&self.hi)
    }
}

/// Quadtree with tight boxes. Every internal node has at least two
/// children; coincident points share one leaf.
struct QuadTree {
    order: Vec<usize>,
    nodes: Vec<Node>,
}

fn split_at(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if lo < mid && mid <= hi {
        mid
    } else {
        hi
    }
}

impl QuadTree {
    fn build(points: &[Point]) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        let mut nodes = vec![];
        let mut stack = vec![];
        nodes.push(Node {
            lo: points[0],
            hi: points[0],
            start: 0,
            end: points.len(),
            children: vec![],
        });
        stack.push(0usize);
        while let Some(id) = stack.pop() {
            let (start, end) = (nodes[id].start, nodes[id].end);
            let slice = &mut order[start..end];
            let mut lo = points[slice[0]];
            let mut hi = lo;
            for &i in slice.iter() {
                let p = points[i];
                lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
                hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
            }
            nodes[id].lo = lo;
            nodes[id].hi = hi;
            if lo == hi {
                continue;
            }
            let mx = split_at(lo.x, hi.x);
            let my = split_at(lo.y, hi.y);
            let quad = |p: &Point| (usize::from(p.x >= mx) << 1) | usize::from(p.y >= my);
            slice.sort_by_key(|&i| quad(&points[i]));
            let mut s = start;
            while s < end {
                let q = quad(&points[order[s]]);
                let mut e = s;
                while e < end && quad(&points[order[e]]) == q {
                    e += 1;
                }
                let child = nodes.len();
                nodes.push(Node {
                    lo,
                    hi,
                    start: s,
                    end: e,
                    children: vec![],
                });
                nodes[id].children.push(child);
                stack.push(child);
                s = e;
            }
            debug_assert!(nodes[id].children.len() >= 2);
        }
        QuadTree { order, nodes }
    }

    fn members(&self, id: usize) -> Vec<usize> {
        let n = &self.nodes[id];
        let mut v = self.order[n.start..n.end].to_vec();
        v.sort_unstable();
        v
    }
}

fn box_min_dist(a: &Node, b: &Node) -> f64 {
    let dx = (a.lo.x - b.hi.x).max(b.lo.x - a.hi.x).max(0.0);
    let dy = (a.lo.y - b.hi.y).max(b.lo.y - a.hi.y).max(0.0);
    (dx * dx + dy * dy).sqrt()
}

fn box_max_dist(a: &Node, b: &Node) -> f64 {
    let dx = (a.hi.x - b.lo.x).abs().max((b.hi.x - a.lo.x).abs());
    let dy = (a.hi.y - b.lo.y).abs().max((b.hi.y - a.lo.y).abs());
    (dx * dx + dy * dy).sqrt()
}

/// Node pairs with at most this many point pairs use exact distance
/// ranges instead of box bounds.
const EXACT_RANGE_LIMIT: usize = 256;

fn point_range(inst: &Instance, p: &[usize], q: &[usize]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for &s in p {
        for &t in q {
            let d = inst.pair_distance(s, t);
            lo = lo.min(d);
            hi = hi.max(d);
        }
    }
    (lo, hi)
}

/// Covers every pair of `S x T` within the clamp of `rounding` exactly
/// once. A biclique's weight is the class representative of its largest
/// possible distance and exceeds the integer weight of each member pair by
/// a factor at most `1 + fidelity`.
pub fn build_cover(inst: &Instance, rounding: &Rounding, fidelity: f64) -> BicliqueCover {
    let ts = QuadTree::build(inst.s());
    let tt = QuadTree::build(inst.t());
    let mut accepted: Vec<(usize, usize, usize, i64)> = Vec::new();
    let size = |t: &QuadTree, i: usize| t.nodes[i].end - t.nodes[i].start;
    let mut stack = vec![(0usize, 0usize)];
    while let Some((i, j)) = stack.pop() {
        let (a, b) = (&ts.nodes[i], &tt.nodes[j]);
        let mut lower = box_min_dist(a, b);
        if lower > rounding.clamp() {
            continue;
        }
        let mut upper = box_max_dist(a, b);
        if size(&ts, i) * size(&tt, j) <= EXACT_RANGE_LIMIT {
            (lower, upper) = point_range(inst, &ts.order[a.start..a.end], &tt.order[b.start..b.end]);
            if lower > rounding.clamp() {
                continue;
            }
        }
        let both_leaves = a.is_leaf() && b.is_leaf();
        if let (Some(a_lo), Some(a_hi)) = (rounding.int_weight(lower), rounding.int_weight(upper)) {
            let class = rounding.class_of(a_hi);
            let weight = rounding.class_weight(class);
            if both_leaves || weight as f64 <= (1.0 + fidelity) * a_lo as f64 {
                accepted.push((i, j, class, weight));
                continue;
            }
        }
        let split_a = !a.is_leaf() && (b.is_leaf() || a.diag2() >= b.diag2());
        if split_a {
            for &c in a.children.iter().rev() {
                stack.push((c, j));
            }
        } else {
            for &c in b.children.iter().rev() {
                stack.push((i, c));
            }
        }
    }
    // Merge accepted pairs sharing a node and a class. Each pair joins the
    // group where its amortized share of the listing is smaller.
    let mut count: BTreeMap<(usize, bool, usize), usize> = BTreeMap::new();
    for &(i, j, class, _) in &accepted {
        *count.entry((class, true, i)).or_default() += 1;
        *count.entry((class, false, j)).or_default() += 1;
    }
    let mut groups: BTreeMap<(usize, bool, usize), (i64, Vec<usize>)> = BTreeMap::new();
    for &(i, j, class, weight) in &accepted {
        let (si, sj) = (size(&ts, i) as f64, size(&tt, j) as f64);
        let by_s = sj + si / count[&(class, true, i)] as f64;
        let by_t = si + sj / count[&(class, false, j)] as f64;
        let (key, other) = if by_s <= by_t {
            ((class, true, i), j)
        } else {
            ((class, false, j), i)
        };
        groups.entry(key).or_insert((weight, Vec::new())).1.push(other);
    }
    let found: Vec<Biclique> = groups
        .into_iter()
        .map(|((class, s_side, key), (weight, others))| {
            let (keyed, listed) = if s_side { (&ts, &tt) } else { (&tt, &ts) };
            let mut rest: Vec<usize> = others.iter().flat_map(|&o| listed.members(o)).collect();
            rest.sort_unstable();
            let own = keyed.members(key);
            let (p, q) = if s_side { (own, rest) } else { (rest, own) };
            Biclique { class, weight, p, q }
        })
        .collect();
    let mut of_s = vec![Vec::new(); inst.s().len()];
    let mut of_t = vec![Vec::new(); inst.t().len()];
    for (k, b) in found.iter().enumerate() {
        for &s in &b.p {
            of_s[s].push(k);
        }
        for &t in &b.q {
            of_t[t].push(k);
        }
    }
    BicliqueCover {
        bicliques: found,
        of_s,
        of_t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, Distribution2d, GenSpec};

    fn check_exact_once(inst: &Instance, r: &Rounding, cover: &BicliqueCover) {
        let mut count = vec![vec![0u32; inst.t().len()]; inst.s().len()];
        for b in &cover.bicliques {
            for &s in &b.p {
                for &t in &b.q {
                    count[s][t] += 1;
                }
            }
        }
        for s in 0..inst.s().len() {
            for t in 0..inst.t().len() {
                let included = r.int_weight(inst.pair_distance(s, t)).is_some();
                assert_eq!(count[s][t], u32::from(included), "pair ({s}, {t})");
            }
        }
    }

    #[test]
    fn tiny_generic() {
        let inst = Instance::new(
            vec![Point::new(0.0, 0.0), Point::new(1.0, 3.0)],
            vec![Point::new(5.0, 1.0), Point::new(2.0, 7.0)],
        )
        .unwrap();
        let r = Rounding::new(0.1, 100.0, 4);
        let cover = build_cover(&inst, &r, 0.2);
        check_exact_once(&inst, &r, &cover);
        assert_eq!(cover.pair_count(), 4);
    }

    #[test]
    fn one_biclique_when_all_distances_share_a_class() {
        // two tight clusters far apart
        let inst = Instance::new(
            vec![Point::new(0.0, 0.0), Point::new(0.0, 1e-6)],
            vec![Point::new(100.0, 0.0), Point::new(100.0, 1e-6)],
        )
        .unwrap();
        let r = Rounding::new(0.25, 1000.0, 4);
        let cover = build_cover(&inst, &r, 0.5);
        assert_eq!(cover.len(), 1);
        assert_eq!(cover.bicliques[0].p, vec![0, 1]);
        assert_eq!(cover.bicliques[0].q, vec![0, 1]);
    }

    #[test]
    fn clamp_excludes_far_pairs() {
        let inst = Instance::new(
            vec![Point::new(0.0, 0.0), Point::new(10.0, 0.0)],
            vec![Point::new(1.0, 0.0)],
        )
        .unwrap();
        let r = Rounding::new(0.25, 2.0, 3);
        let cover = build_cover(&inst, &r, 0.5);
        assert_eq!(cover.rounded_weight(1, 0), None);
        assert!(cover.rounded_weight(0, 0).is_some());
        check_exact_once(&inst, &r, &cover);
    }

    #[test]
    fn coincident_points_share_a_leaf() {
        let inst = Instance::new(vec![Point::new(1.0, 1.0); 3], vec![Point::new(1.0, 1.0); 2]).unwrap();
        let r = Rounding::new(0.25, 0.0, 5);
        let cover = build_cover(&inst, &r, 0.5);
        assert_eq!(cover.len(), 1);
        assert_eq!(cover.bicliques[0].weight, 1);
        assert_eq!(cover.size(), 5);
    }

    #[test]
    fn random_coverage_and_fidelity() {
        for (seed, dist) in [
            (1, Distribution2d::UniformSquare),
            (2, Distribution2d::GaussianClusters(3)),
            (3, Distribution2d::Grid),
        ] {
            let inst = generate(&GenSpec::new(dist, 40, 40, seed)).unwrap();
            for eps in [0.05, 0.25] {
                // small clamp so that some pairs are excluded
                let r = Rounding::new(eps, 0.6, 80);
                let cover = build_cover(&inst, &r, 2.0 * eps);
                check_exact_once(&inst, &r, &cover);
                for s in 0..40 {
                    for t in 0..40 {
                        if let Some(w) = cover.rounded_weight(s, t) {
                            let raw = inst.pair_distance(s, t);
                            let a = r.int_weight(raw).unwrap();
                            assert!(w >= a);
                            assert!(w as f64 >= raw / r.unit());
                            assert!(w as f64 <= (1.0 + 2.0 * eps) * a as f64);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn deterministic() {
        let inst = generate(&GenSpec::new(Distribution2d::UniformSquare, 30, 20, 9)).unwrap();
        let r = Rounding::new(0.1, 5.0, 50);
        assert_eq!(build_cover(&inst, &r, 0.2), build_cover(&inst, &r, 0.2));
        assert!(build_cover(&inst, &r, 0.2).stats_csv().starts_with("class,weight"));
    }
}
