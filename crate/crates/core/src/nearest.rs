//! Exact nearest-neighbor queries and the greedy nearest-neighbor cover.

use crate::error::{Error, Result};
use crate::model::{distance, Instance, PairSet, Point};

const LEAF_SIZE: usize = 8;
const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct Rect {
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
}

impl Rect {
    fn of(points: &[Point], idx: &[usize]) -> Rect {
        let mut r = Rect {
            min_x: f64::INFINITY,
            min_y: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            max_y: f64::NEG_INFINITY,
        };
        for &i in idx {
            let p = points[i];
            r.min_x = r.min_x.min(p.x);
            r.min_y = r.min_y.min(p.y);
            r.max_x = r.max_x.max(p.x);
            r.max_y = r.max_y.max(p.y);
        }
        r
    }

    /// Squared distance from `q` to the rectangle; a lower bound on the
    /// squared distance to any point inside.
    fn dist2(&self, q: &Point) -> f64 {
        let dx = (self.min_x - q.x).max(0.0).max(q.x - self.max_x);
        let dy = (self.min_y - q.y).max(0.0).max(q.y - self.max_y);
        dx * dx + dy * dy
    }
}

#[derive(Clone, Debug)]
struct Node {
    lo: u32,
    hi: u32,
    rect: Rect,
    left: u32,
    right: u32,
}

/// Static 2-d tree answering exact nearest-neighbor queries.
///
/// Ties on distance go to the smallest point index, so results are
/// identical to a linear scan over `(dist², index)`.
#[derive(Clone, Debug)]
pub struct NnIndex {
    points: Vec<Point>,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

impl NnIndex {
    pub fn build(points: &[Point]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("nearest-neighbor index needs at least one point".into()));
        }
        let mut index = NnIndex {
            points: points.to_vec(),
            order: (0..points.len()).collect(),
            nodes: Vec::with_capacity(2 * points.len() / LEAF_SIZE + 1),
        };
        index.build_node(0, points.len());
        Ok(index)
    }

    fn build_node(&mut self, lo: usize, hi: usize) -> u32 {
        let rect = Rect::of(&self.points, &self.order[lo..hi]);
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            lo: lo as u32,
            hi: hi as u32,
            rect,
            left: NONE,
            right: NONE,
        });
        if hi - lo > LEAF_SIZE {
            let by_x = rect.max_x - rect.min_x >= rect.max_y - rect.min_y;
            let mid = (lo + hi) / 2;
            let pts = &self.points;
            self.order[lo..hi].select_nth_unstable_by(mid - lo, |&a, &b| {
                let (ka, kb) = if by_x { (pts[a].x, pts[b].x) } else { (pts[a].y, pts[b].y) };
                ka.total_cmp(&kb)
            });
            let left = self.build_node(lo, mid);
            let right = self.build_node(mid, hi);
            let node = &mut self.nodes[id as usize];
            node.left = left;
            node.right = right;
        }
        id
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Index and distance of the nearest indexed point to `q`.
    pub fn nearest(&self, q: &Point) -> (usize, f64) {
        let mut best = (f64::INFINITY, usize::MAX);
        self.search(0, q, &mut best);
        (best.1, best.0.sqrt())
    }

    fn search(&self, node: u32, q: &Point, best: &mut (f64, usize)) {
        let n = &self.nodes[node as usize];
        // equal distance may still hide a lower index, so prune strictly
        if n.rect.dist2(q) > best.0 {
            return;
        }
        if n.left == NONE {
            for &i in &self.order[n.lo as usize..n.hi as usize] {
                let d2 = self.points[i].dist2(q);
                if d2 < best.0 || (d2 == best.0 && i < best.1) {
                    *best = (d2, i);
                }
            }
            return;
        }
        let (l, r) = (n.left, n.right);
        let dl = self.nodes[l as usize].rect.dist2(q);
        let dr = self.nodes[r as usize].rect.dist2(q);
        if dl <= dr {
            self.search(l, q, best);
            self.search(r, q, best);
        } else {
            self.search(r, q, best);
            self.search(l, q, best);
        }
    }
}

/// For each point of one side, the index of and distance to its nearest
/// neighbor on the other side.
#[derive(Clone, Debug)]
pub struct NearestNeighbors {
    /// `s_nn[i] = (t index, distance)`.
    pub s_nn: Vec<(usize, f64)>,
    /// `t_nn[j] = (s index, distance)`.
    pub t_nn: Vec<(usize, f64)>,
}

impl NearestNeighbors {
    pub fn compute(inst: &Instance) -> Self {
        let t_index = NnIndex::build(inst.t()).expect("instance sides are non-empty");
        let s_index = NnIndex::build(inst.s()).expect("instance sides are non-empty");
        NearestNeighbors {
            s_nn: inst.s().iter().map(|p| t_index.nearest(p)).collect(),
            t_nn: inst.t().iter().map(|p| s_index.nearest(p)).collect(),
        }
    }

    /// Sum over all points of the distance to the nearest neighbor.
    pub fn total(&self) -> f64 {
        self.s_nn.iter().chain(&self.t_nn).map(|&(_, d)| d).sum()
    }
}

/// Greedy 2-approximation: pair every point with its nearest neighbor in
/// the other set. Mutual nearest pairs collapse into one.
pub fn greedy_two_approx(inst: &Instance) -> PairSet {
    greedy_from_neighbors(&NearestNeighbors::compute(inst))
}

pub fn greedy_from_neighbors(nn: &NearestNeighbors) -> PairSet {
    let mut m = PairSet::new();
    for (si, &(ti, _)) in nn.s_nn.iter().enumerate() {
        m.insert(si, ti);
    }
    for (ti, &(si, _)) in nn.t_nn.iter().enumerate() {
        m.insert(si, ti);
    }
    m
}

/// Linear-scan nearest neighbor with the same tie rule as [`NnIndex`].
pub fn nearest_linear(points: &[Point], q: &Point) -> (usize, f64) {
    let (i, _) = points
        .iter()
        .enumerate()
        .map(|(i, p)| (i, p.dist2(q)))
        .fold((usize::MAX, f64::INFINITY), |best, (i, d2)| {
            if d2 < best.1 {
                (i, d2)
            } else {
                best
            }
        });
    debug_assert!(i < points.len());
    (i, distance(&points[i], q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{cover_cost, is_valid_cover};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_point_index() {
        let idx = NnIndex::build(&[Point::new(0.0, 0.0)]).unwrap();
        let (i, d) = idx.nearest(&Point::new(5.0, 5.0));
        assert_eq!(i, 0);
        assert!((d - 50f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn two_point_index() {
        let idx = NnIndex::build(&[Point::new(0.0, 0.0), Point::new(10.0, 0.0)]).unwrap();
        assert_eq!(idx.nearest(&Point::new(4.0, 0.0)), (0, 4.0));
    }

    #[test]
    fn empty_index_rejected() {
        assert!(matches!(NnIndex::build(&[]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn matches_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for round in 0..20 {
            // coarse grid coordinates create many exact ties
            let coarse = round % 2 == 0;
            let pt = |rng: &mut ChaCha8Rng| {
                if coarse {
                    Point::new(rng.random_range(0..6) as f64, rng.random_range(0..6) as f64)
                } else {
                    Point::new(rng.random::<f64>(), rng.random::<f64>())
                }
            };
            let pts: Vec<Point> = (0..50).map(|_| pt(&mut rng)).collect();
            let idx = NnIndex::build(&pts).unwrap();
            for _ in 0..50 {
                let q = pt(&mut rng);
                assert_eq!(idx.nearest(&q), nearest_linear(&pts, &q));
            }
        }
    }

    #[test]
    fn greedy_examples() {
        let inst = Instance::new(
            vec![Point::new(0.0, 0.0), Point::new(4.0, 0.0)],
            vec![Point::new(1.0, 0.0)],
        )
        .unwrap();
        let m = greedy_two_approx(&inst);
        assert_eq!(m.to_vec(), vec![(0, 0), (1, 0)]);
        assert_eq!(cover_cost(&inst, &m), 4.0);

        let inst = Instance::new(vec![Point::new(0.0, 0.0)], vec![Point::new(1.0, 0.0)]).unwrap();
        let m = greedy_two_approx(&inst);
        assert_eq!(m.len(), 1);
        assert_eq!(cover_cost(&inst, &m), 1.0);
    }

    #[test]
    fn greedy_picks_nearest_and_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let inst = crate::gen::random_small_instance(&mut rng, 12);
            let m = greedy_two_approx(&inst);
            assert!(is_valid_cover(&inst, &m).unwrap());
            let nn = NearestNeighbors::compute(&inst);
            assert!(cover_cost(&inst, &m) <= nn.total() + 1e-12);
            for (si, p) in inst.s().iter().enumerate() {
                let (ti, _) = nearest_linear(inst.t(), p);
                assert_eq!(nn.s_nn[si].0, ti);
                assert!(m.contains(si, ti));
            }
            for (ti, p) in inst.t().iter().enumerate() {
                let (si, _) = nearest_linear(inst.s(), p);
                assert_eq!(nn.t_nn[ti].0, si);
                assert!(m.contains(si, ti));
            }
        }
    }
}
