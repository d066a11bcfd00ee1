//! Ground-truth solvers used by the test suites and by `geomatch verify`.
//!
//! Two unrelated methods: exhaustive subset enumeration over the pair set,
//! and a dense `O(n^3)` Hungarian method on an explicit matrix.

use crate::error::{Error, Result};
use crate::model::{Instance, PairSet};
use crate::reduction::ReducedGraph;

/// Largest `|S| * |T|` accepted by [`brute_force_cover`].
pub const BRUTE_FORCE_MAX_PAIRS: usize = 25;

/// Largest vertex count per side accepted by [`materialize`].
pub const MATERIALIZE_MAX: usize = 400;

const CHUNK_BITS: usize = 8;

/// Enumerates every subset of `S x T`, keeping the cheapest valid cover.
/// Ties go to the lexicographically smallest sorted pair list.
pub fn brute_force_cover(inst: &Instance) -> Result<(PairSet, f64)> {
    let (a, b) = (inst.s().len(), inst.t().len());
    let m = a * b;
    if m > BRUTE_FORCE_MAX_PAIRS {
        return Err(Error::TooLarge {
            what: "brute-force cover",
            size: m,
            limit: BRUTE_FORCE_MAX_PAIRS,
        });
    }
    // pair e = s * b + t; coverage bit s for S, a + t for T
    let pair = |e: usize| (e / b, e % b);
    let chunks = m.div_ceil(CHUNK_BITS);
    let mut cost_tab: Vec<Vec<f64>> = Vec::with_capacity(chunks);
    let mut cov_tab: Vec<Vec<u32>> = Vec::with_capacity(chunks);
    for c in 0..chunks {
        let lo = c * CHUNK_BITS;
        let width = CHUNK_BITS.min(m - lo);
        let mut costs = vec![0.0; 1 << width];
        let mut covs = vec![0u32; 1 << width];
        for mask in 1usize..(1 << width) {
            let bit = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let (s, t) = pair(lo + bit);
            costs[mask] = costs[rest] + inst.pair_distance(s, t);
            covs[mask] = covs[rest] | (1 << s) | (1 << (a + t));
        }
        cost_tab.push(costs);
        cov_tab.push(covs);
    }
    let full: u32 = ((1u64 << (a + b)) - 1) as u32;
    let chunk_mask = (1usize << CHUNK_BITS) - 1;
    let mut best: Option<(f64, usize)> = None;
    for subset in 0usize..(1 << m) {
        let mut cov = 0u32;
        let mut cost = 0.0;
        for c in 0..chunks {
            let part = (subset >> (c * CHUNK_BITS)) & chunk_mask;
            cov |= cov_tab[c][part];
            cost += cost_tab[c][part];
        }
        if cov != full {
            continue;
        }
        best = match best {
            None => Some((cost, subset)),
            Some((bc, _)) if cost < bc => Some((cost, subset)),
            Some((bc, bs)) if cost == bc && lex_less(subset, bs, m, &pair) => Some((cost, subset)),
            keep => keep,
        };
    }
    let (_, subset) = best.expect("the full pair set is always a cover");
    let pairs: PairSet = (0..m).filter(|e| subset >> e & 1 == 1).map(pair).collect();
    let cost = crate::model::cover_cost(inst, &pairs);
    Ok((pairs, cost))
}

fn lex_less(x: usize, y: usize, m: usize, pair: &impl Fn(usize) -> (usize, usize)) -> bool {
    let list = |s: usize| -> Vec<(usize, usize)> { (0..m).filter(|e| s >> e & 1 == 1).map(pair).collect() };
    list(x) < list(y)
}

/// Square weight matrix over `R x B`; `None` marks a missing edge.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitGraph {
    pub weights: Vec<Vec<Option<f64>>>,
}

impl ExplicitGraph {
    pub fn new(weights: Vec<Vec<Option<f64>>>) -> Result<Self> {
        let n = weights.len();
        if weights.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput("weight matrix must be square".into()));
        }
        Ok(ExplicitGraph { weights })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn get(&self, r: usize, b: usize) -> Option<f64> {
        self.weights[r][b]
    }
}

/// Explicit matrix of a reduced graph.
pub fn materialize(g: &ReducedGraph) -> Result<ExplicitGraph> {
    let n = g.n();
    if n > MATERIALIZE_MAX {
        return Err(Error::TooLarge {
            what: "materialize",
            size: n,
            limit: MATERIALIZE_MAX,
        });
    }
    let weights = (0..n).map(|r| (0..n).map(|b| g.weight(r, b)).collect()).collect();
    Ok(ExplicitGraph { weights })
}

/// Minimum-cost perfect matching by the shortest-augmenting-path Hungarian
/// method with row/column potentials. Returns `match_of[r] = b` and the
/// cost.
pub fn dense_hungarian(g: &ExplicitGraph) -> Result<(Vec<usize>, f64)> {
    let n = g.n();
    const INF: f64 = f64::INFINITY;
    // 1-based with column 0 as the virtual root
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                if let Some(c) = g.weights[i0 - 1][j - 1] {
                    let cur = c - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if j1 == 0 {
                return Err(Error::NoPerfectMatching);
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut match_of = vec![0usize; n];
    for j in 1..=n {
        match_of[p[j] - 1] = j - 1;
    }
    let cost = match_of
        .iter()
        .enumerate()
        .map(|(r, &b)| g.weights[r][b].expect("matched entries are present"))
        .sum();
    Ok((match_of, cost))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{is_valid_cover, Point};
    use crate::reduction::build_reduced;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn brute_force_examples() {
        let inst = Instance::new(pts(&[(0.0, 0.0)]), pts(&[(3.0, 0.0), (4.0, 0.0)])).unwrap();
        let (m, c) = brute_force_cover(&inst).unwrap();
        assert_eq!(c, 7.0);
        assert!(is_valid_cover(&inst, &m).unwrap());

        let inst = Instance::new(pts(&[(0.0, 0.0)]), pts(&[(3.0, 0.0)])).unwrap();
        assert_eq!(brute_force_cover(&inst).unwrap().1, 3.0);
    }

    #[test]
    fn brute_force_tie_is_lexicographic() {
        // s0 and s1 both at distance 1 from t0; t0 must be covered once.
        let inst = Instance::new(pts(&[(0.0, 0.0), (2.0, 0.0)]), pts(&[(1.0, 0.0)])).unwrap();
        let (m, c) = brute_force_cover(&inst).unwrap();
        assert_eq!(c, 2.0);
        assert_eq!(m.to_vec(), vec![(0, 0), (1, 0)]);

        // a square: two diagonal-free perfect covers of equal cost
        let inst = Instance::new(
            pts(&[(0.0, 0.0), (1.0, 1.0)]),
            pts(&[(1.0, 0.0), (0.0, 1.0)]),
        )
        .unwrap();
        let (m, c) = brute_force_cover(&inst).unwrap();
        assert_eq!(c, 2.0);
        assert_eq!(m.to_vec(), vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn brute_force_size_limit() {
        let inst = Instance::new(vec![Point::new(0.0, 0.0); 6], vec![Point::new(1.0, 0.0); 5]).unwrap();
        assert!(matches!(brute_force_cover(&inst), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn dense_examples() {
        let g = ExplicitGraph::new(vec![vec![Some(5.0)]]).unwrap();
        assert_eq!(dense_hungarian(&g).unwrap(), (vec![0], 5.0));

        let w = |i: usize, j: usize| Some(if i == j { 1.0 } else { 10.0 + (i * 3 + j) as f64 });
        let g = ExplicitGraph::new((0..3).map(|i| (0..3).map(|j| w(i, j)).collect()).collect()).unwrap();
        assert_eq!(dense_hungarian(&g).unwrap(), (vec![0, 1, 2], 3.0));

        let g = ExplicitGraph::new(vec![vec![Some(1.0), None], vec![Some(1.0), None]]).unwrap();
        assert!(matches!(dense_hungarian(&g), Err(Error::NoPerfectMatching)));
    }

    #[test]
    fn dense_respects_absent_entries() {
        let g = ExplicitGraph::new(vec![
            vec![Some(0.0), Some(5.0)],
            vec![Some(0.0), None],
        ])
        .unwrap();
        assert_eq!(dense_hungarian(&g).unwrap(), (vec![1, 0], 5.0));
    }

    #[test]
    fn materialize_one_one() {
        let inst = Instance::new(pts(&[(0.0, 0.0)]), pts(&[(3.0, 0.0)])).unwrap();
        let g = build_reduced(&inst);
        let e = materialize(&g).unwrap();
        assert_eq!(e.weights, vec![vec![Some(3.0), Some(3.0)], vec![Some(3.0), Some(0.0)]]);
        assert_eq!(dense_hungarian(&e).unwrap().1, 3.0);
    }

    #[test]
    fn materialize_absent_pattern() {
        let inst = crate::gen::generate(&crate::gen::GenSpec::new(
            crate::gen::Distribution2d::UniformSquare,
            3,
            4,
            2,
        ))
        .unwrap();
        let g = build_reduced(&inst);
        let e = materialize(&g).unwrap();
        let (a, b) = (3, 4);
        for r in 0..a + b {
            for c in 0..a + b {
                let present = (r < a && c < b)
                    || (r >= a && c >= b)
                    || (r < a && c == b + r)
                    || (r >= a && c == r - a);
                assert_eq!(e.get(r, c).is_some(), present, "({r},{c})");
                assert_eq!(e.get(r, c), g.weight(r, c));
            }
        }
    }
}
