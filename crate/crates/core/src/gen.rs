//! Seeded instance generators.
//!
//! All randomness comes from [`ChaCha8Rng`] seeded with the 64-bit seed in
//! [`GenSpec`]; the algorithm identifier is [`PRNG_ALGORITHM`].

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::model::{Instance, Point};

/// Identifier of the PRNG behind every generator.
pub const PRNG_ALGORITHM: &str = "chacha8";

/// Standard deviation of each Gaussian cluster, in unit-square coordinates.
pub const CLUSTER_SIGMA: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distribution2d {
    /// Independent uniform points in `[0, 1)^2`.
    UniformSquare,
    /// `k` cluster centers uniform in the unit square, points normal around
    /// a uniformly chosen center.
    GaussianClusters(usize),
    /// Distinct integer lattice points on a `ceil(sqrt(n))`-wide grid,
    /// randomly assigned to the two sides.
    Grid,
}

impl fmt::Display for Distribution2d {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distribution2d::UniformSquare => write!(f, "uniform"),
            Distribution2d::GaussianClusters(k) => write!(f, "gaussian:{k}"),
            Distribution2d::Grid => write!(f, "grid"),
        }
    }
}

impl FromStr for Distribution2d {
    type Err = Error;

    /// Accepts `uniform`, `grid`, `gaussian` (4 clusters) or `gaussian:K`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "uniform-square" => Ok(Distribution2d::UniformSquare),
            "grid" => Ok(Distribution2d::Grid),
            "gaussian" | "gaussian-clusters" => Ok(Distribution2d::GaussianClusters(4)),
            other => {
                let k = other
                    .strip_prefix("gaussian:")
                    .or_else(|| other.strip_prefix("gaussian-clusters:"))
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown distribution '{other}'")))?;
                Ok(Distribution2d::GaussianClusters(k))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub distribution: Distribution2d,
    pub ns: usize,
    pub nt: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(distribution: Distribution2d, ns: usize, nt: usize, seed: u64) -> Self {
        GenSpec {
            distribution,
            ns,
            nt,
            seed,
        }
    }
}

pub fn generate(spec: &GenSpec) -> Result<Instance> {
    if spec.ns == 0 || spec.nt == 0 {
        return Err(Error::InvalidInput("sizes must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.ns + spec.nt;
    let points: Vec<Point> = match spec.distribution {
        Distribution2d::UniformSquare => (0..n)
            .map(|_| Point::new(rng.random::<f64>(), rng.random::<f64>()))
            .collect(),
        Distribution2d::GaussianClusters(k) => {
            if k == 0 {
                return Err(Error::InvalidInput("cluster count must be >= 1".into()));
            }
            let centers: Vec<Point> = (0..k)
                .map(|_| Point::new(rng.random::<f64>(), rng.random::<f64>()))
                .collect();
            let normal = Normal::new(0.0, CLUSTER_SIGMA).expect("valid sigma");
            (0..n)
                .map(|_| {
                    let c = centers[rng.random_range(0..k)];
                    Point::new(c.x + normal.sample(&mut rng), c.y + normal.sample(&mut rng))
                })
                .collect()
        }
        Distribution2d::Grid => {
            let width = (n as f64).sqrt().ceil() as usize;
            let mut cells: Vec<usize> = (0..n).collect();
            cells.shuffle(&mut rng);
            cells
                .into_iter()
                .map(|c| Point::new((c % width) as f64, (c / width) as f64))
                .collect()
        }
    };
    let (s, t) = points.split_at(spec.ns);
    Instance::new(s.to_vec(), t.to_vec())
}

/// Deterministic stream of random instances with `|S|` and `|T|` drawn
/// uniformly from `1..=max_side`. Used by the oracle-backed test suites.
pub fn random_small_instance(rng: &mut ChaCha8Rng, max_side: usize) -> Instance {
    let ns = rng.random_range(1..=max_side);
    let nt = rng.random_range(1..=max_side);
    let seed = rng.random::<u64>();
    generate(&GenSpec::new(Distribution2d::UniformSquare, ns, nt, seed)).expect("valid spec")
}
