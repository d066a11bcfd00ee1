//! Problem model: planar points, many-to-many instances and pair sets.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in the plane with finite coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Squared Euclidean distance. Nearest-neighbor comparisons use this so
    /// that ties are decided on one exactly-rounded value.
    #[inline]
    pub fn dist2(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point::new(a[0], a[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

/// Euclidean distance between two points.
#[inline]
pub fn distance(p: &Point, q: &Point) -> f64 {
    p.dist2(q).sqrt()
}

/// Two planar point sets `S` and `T`.
///
/// Immutable once built; both sides are non-empty and every coordinate is
/// finite.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    s: Vec<Point>,
    t: Vec<Point>,
}

impl Instance {
    pub fn new(s: Vec<Point>, t: Vec<Point>) -> Result<Self> {
        if s.is_empty() || t.is_empty() {
            return Err(Error::InvalidInput(format!(
                "both point sets must be non-empty (|S|={}, |T|={})",
                s.len(),
                t.len()
            )));
        }
        if let Some(p) = s.iter().chain(t.iter()).find(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite coordinate ({}, {})",
                p.x, p.y
            )));
        }
        Ok(Instance { s, t })
    }

    pub fn s(&self) -> &[Point] {
        &self.s
    }

    pub fn t(&self) -> &[Point] {
        &self.t
    }

    /// Total number of points, `|S| + |T|`.
    pub fn n(&self) -> usize {
        self.s.len() + self.t.len()
    }

    pub fn pair_distance(&self, si: usize, ti: usize) -> f64 {
        distance(&self.s[si], &self.t[ti])
    }

    /// Every `(s, t)` pair; always a valid cover.
    pub fn full_pair_set(&self) -> PairSet {
        let mut m = PairSet::new();
        for si in 0..self.s.len() {
            for ti in 0..self.t.len() {
                m.insert(si, ti);
            }
        }
        m
    }
}

/// A set of `(s_index, t_index)` pairs kept in canonical sorted order.
/// Inserting a pair twice is a no-op.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PairSet {
    pairs: BTreeSet<(usize, usize)>,
}

impl PairSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `true` if the pair was not present.
    pub fn insert(&mut self, si: usize, ti: usize) -> bool {
        self.pairs.insert((si, ti))
    }

    pub fn remove(&mut self, si: usize, ti: usize) -> bool {
        self.pairs.remove(&(si, ti))
    }

    pub fn contains(&self, si: usize, ti: usize) -> bool {
        self.pairs.contains(&(si, ti))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<(usize, usize)> {
        self.iter().collect()
    }

    /// Fails if any index is out of range for `inst`.
    pub fn check_indices(&self, inst: &Instance) -> Result<()> {
        match self
            .iter()
            .find(|&(si, ti)| si >= inst.s().len() || ti >= inst.t().len())
        {
            Some((si, ti)) => Err(Error::InvalidInput(format!(
                "pair ({si}, {ti}) out of range for |S|={}, |T|={}",
                inst.s().len(),
                inst.t().len()
            ))),
            None => Ok(()),
        }
    }
}

impl FromIterator<(usize, usize)> for PairSet {
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        PairSet {
            pairs: iter.into_iter().collect(),
        }
    }
}

impl Extend<(usize, usize)> for PairSet {
    fn extend<I: IntoIterator<Item = (usize, usize)>>(&mut self, iter: I) {
        self.pairs.extend(iter)
    }
}

/// True iff every point of `S` and of `T` appears in at least one pair.
pub fn is_valid_cover(inst: &Instance, m: &PairSet) -> Result<bool> {
    m.check_indices(inst)?;
    let mut s_hit = vec![false; inst.s().len()];
    let mut t_hit = vec![false; inst.t().len()];
    for (si, ti) in m.iter() {
        s_hit[si] = true;
        t_hit[ti] = true;
    }
    Ok(s_hit.iter().all(|&h| h) && t_hit.iter().all(|&h| h))
}

/// Sum of pair distances. Each distinct pair counts once.
pub fn cover_cost(inst: &Instance, m: &PairSet) -> f64 {
    m.iter().map(|(si, ti)| inst.pair_distance(si, ti)).sum()
}
