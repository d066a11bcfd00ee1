//! One entry point for the three cover algorithms.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hungarian::{ExactSolver, SearchTrace};
use crate::model::{cover_cost, is_valid_cover, Instance, PairSet};
use crate::nearest::greedy_two_approx;
use crate::reduction::{build_reduced, perfect_to_cover};
use crate::scaling::{gt_solve, normalize, ScaleTrace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Exact,
    Greedy2,
    Gt,
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Exact => "exact",
            Algo::Greedy2 => "greedy2",
            Algo::Gt => "gt",
        })
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Algo::Exact),
            "greedy2" => Ok(Algo::Greedy2),
            "gt" => Ok(Algo::Gt),
            other => Err(Error::InvalidInput(format!("unknown algorithm '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Trace {
    Exact(Vec<SearchTrace>),
    Gt(Vec<ScaleTrace>),
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub pairs: PairSet,
    /// Cost reported by the solver.
    pub cost: f64,
    pub algo: Algo,
    pub trace: Option<Trace>,
}

/// `eps` is required for `gt` only and must lie in `(0, 1]`.
pub fn check_eps(algo: Algo, eps: Option<f64>) -> Result<()> {
    match (algo, eps) {
        (Algo::Gt, None) => Err(Error::InvalidInput("gt requires eps".into())),
        (Algo::Gt, Some(e)) if !(e > 0.0 && e <= 1.0) => {
            Err(Error::InvalidInput(format!("eps must lie in (0, 1], got {e}")))
        }
        (Algo::Exact | Algo::Greedy2, Some(_)) => {
            Err(Error::InvalidInput(format!("{algo} takes no eps")))
        }
        _ => Ok(()),
    }
}

/// Solves and validates: the pairs always form a cover whose recomputed
/// cost matches the reported one to `1e-9` relative.
pub fn solve(inst: &Instance, algo: Algo, eps: Option<f64>) -> Result<Solution> {
    check_eps(algo, eps)?;
    let (pairs, cost, trace) = match algo {
        Algo::Greedy2 => {
            let pairs = greedy_two_approx(inst);
            let cost = pairs.iter().map(|(s, t)| inst.pair_distance(s, t)).sum();
            (pairs, cost, None)
        }
        Algo::Exact => {
            let g = build_reduced(inst);
            let (pm, _, traces) = ExactSolver::new(&g).run();
            let pairs = perfect_to_cover(&g, &pm)?;
            (pairs, pm.cost(&g), Some(Trace::Exact(traces)))
        }
        Algo::Gt => {
            let g = build_reduced(inst);
            let norm = normalize(&g, eps.expect("checked above"))?;
            let res = gt_solve(&norm);
            let pairs = perfect_to_cover(&g, &res.matching)?;
            let cost = cover_cost(inst, &pairs);
            (pairs, cost, Some(Trace::Gt(res.traces)))
        }
    };
    if !is_valid_cover(inst, &pairs)? {
        return Err(Error::InvalidCover);
    }
    let recomputed = cover_cost(inst, &pairs);
    if (recomputed - cost).abs() > 1e-9 * cost.abs().max(1e-300) && (recomputed - cost).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "reported cost {cost} differs from recomputed {recomputed}"
        )));
    }
    Ok(Solution {
        pairs,
        cost,
        algo,
        trace,
    })
}
