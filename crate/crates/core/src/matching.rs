//! Partial matchings and alternating paths over `R x B` index spaces.

use crate::error::{Error, Result};
use crate::reduction::PerfectMatching;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub r_to_b: Vec<Option<usize>>,
    pub b_to_r: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching {
            r_to_b: vec![None; n],
            b_to_r: vec![None; n],
        }
    }

    pub fn size(&self) -> usize {
        self.r_to_b.iter().filter(|m| m.is_some()).count()
    }

    pub fn is_perfect(&self) -> bool {
        self.r_to_b.iter().all(|m| m.is_some())
    }

    pub fn is_matched(&self, r: usize, b: usize) -> bool {
        self.r_to_b[r] == Some(b)
    }

    pub fn free_r(&self) -> impl Iterator<Item = usize> + '_ {
        self.r_to_b.iter().enumerate().filter(|(_, m)| m.is_none()).map(|(r, _)| r)
    }

    /// Flips `path`: its listed edges become matched, the matched edges
    /// between consecutive listed edges become free.
    pub fn augment(&mut self, path: &AltPath) {
        for &(r, b) in &path.edges {
            self.r_to_b[r] = Some(b);
            self.b_to_r[b] = Some(r);
        }
    }

    pub fn to_perfect(&self) -> Result<PerfectMatching> {
        let match_of = self
            .r_to_b
            .iter()
            .enumerate()
            .map(|(r, m)| m.ok_or_else(|| Error::NotPerfect(format!("R-vertex {r} is free"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(PerfectMatching { match_of })
    }

    pub fn from_perfect(pm: &PerfectMatching) -> Self {
        let mut m = Matching::empty(pm.match_of.len());
        for (r, &b) in pm.match_of.iter().enumerate() {
            m.r_to_b[r] = Some(b);
            m.b_to_r[b] = Some(r);
        }
        m
    }
}

/// Alternating path `r0 - b0 = r1 - b1 = ... - bk` stored as its unmatched
/// edges `(r_i, b_i)`; the matched edge `(b_i, r_{i+1})` is implied.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AltPath {
    pub edges: Vec<(usize, usize)>,
}

impl AltPath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Checks alternation against `m`: listed edges are unmatched and each
    /// `b_i` is matched to `r_{i+1}`.
    pub fn check_alternating(&self, m: &Matching) -> Result<()> {
        if self.edges.is_empty() {
            return Err(Error::NotAlternating("empty path".into()));
        }
        for (i, &(r, b)) in self.edges.iter().enumerate() {
            if m.is_matched(r, b) {
                return Err(Error::NotAlternating(format!("edge ({r}, {b}) is matched")));
            }
            if let Some(&(next_r, _)) = self.edges.get(i + 1) {
                if m.b_to_r[b] != Some(next_r) {
                    return Err(Error::NotAlternating(format!(
                        "({next_r}, {b}) is not a matched edge"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks that the path is alternating and both ends are free.
    pub fn check_augmenting(&self, m: &Matching) -> Result<()> {
        self.check_alternating(m)?;
        let (r0, _) = self.edges[0];
        let (_, bk) = *self.edges.last().unwrap();
        if m.r_to_b[r0].is_some() || m.b_to_r[bk].is_some() {
            return Err(Error::NotAlternating("path endpoints are not free".into()));
        }
        Ok(())
    }

    /// Vertices in path order, R-vertices tagged `false`, B-vertices `true`.
    pub fn vertices(&self) -> Vec<(bool, usize)> {
        self.edges.iter().flat_map(|&(r, b)| [(false, r), (true, b)]).collect()
    }
}
