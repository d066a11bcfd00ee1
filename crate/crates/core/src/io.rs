//! File formats.
//!
//! * instance JSON: `{"s": [[x,y],...], "t": [[x,y],...]}`
//! * solution JSON: `{"pairs": [[si,ti],...], "cost": c, "algo": "..."}`, with
//!   an optional `wall_ms` field
//! * instance text: first line `|S| |T|`, then one `x y` line per point,
//!   the `S` block followed by the `T` block

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, PairSet, Point};

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    s: Vec<Point>,
    t: Vec<Point>,
}

pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string(&InstanceJson {
        s: inst.s().to_vec(),
        t: inst.t().to_vec(),
    })
    .expect("points serialize")
}

pub fn instance_from_json(text: &str) -> Result<Instance> {
    let raw: InstanceJson = serde_json::from_str(text)?;
    Instance::new(raw.s, raw.t)
}

pub fn instance_to_text(inst: &Instance) -> String {
    let mut out = format!("{} {}\n", inst.s().len(), inst.t().len());
    for p in inst.s().iter().chain(inst.t()) {
        // `{:?}` on f64 is the shortest round-tripping representation
        writeln!(out, "{:?} {:?}", p.x, p.y).unwrap();
    }
    out
}

pub fn instance_from_text(text: &str) -> Result<Instance> {
    let mut tokens = text.split_whitespace();
    let mut next_usize = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("missing {what}")))?
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("bad {what}: {e}")))
    };
    let ns = next_usize("|S|")?;
    let nt = next_usize("|T|")?;
    let coords: Vec<f64> = tokens
        .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("bad coordinate '{t}': {e}"))))
        .collect::<Result<_>>()?;
    if coords.len() != 2 * (ns + nt) {
        return Err(Error::Parse(format!(
            "expected {} coordinates, found {}",
            2 * (ns + nt),
            coords.len()
        )));
    }
    let pts: Vec<Point> = coords.chunks(2).map(|c| Point::new(c[0], c[1])).collect();
    Instance::new(pts[..ns].to_vec(), pts[ns..].to_vec())
}

/// Reads either format; JSON is detected by a leading `{`.
pub fn instance_from_str(text: &str) -> Result<Instance> {
    if text.trim_start().starts_with('{') {
        instance_from_json(text)
    } else {
        instance_from_text(text)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub pairs: Vec<[usize; 2]>,
    pub cost: f64,
    pub algo: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl SolutionFile {
    pub fn new(pairs: &PairSet, cost: f64, algo: &str, wall_ms: Option<f64>) -> Self {
        SolutionFile {
            pairs: pairs.iter().map(|(s, t)| [s, t]).collect(),
            cost,
            algo: algo.to_string(),
            wall_ms,
        }
    }

    pub fn pair_set(&self) -> PairSet {
        self.pairs.iter().map(|p| (p[0], p[1])).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("solution serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
