//! `geomatch bench`: wall time and cost over a size grid, as CSV.

use std::time::Instant;

use clap::Args;

use crate::error::{Error, Result};
use crate::gen::{generate, Distribution2d, GenSpec};
use crate::solve::{solve, Algo};

use super::{parse_sizes, write_output};

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    /// Total point counts.
    #[arg(long, default_value = "256,512,1024")]
    pub sizes: String,
    /// Comma-separated algorithms.
    #[arg(long, default_value = "exact,gt")]
    pub algos: String,
    /// eps for gt.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "uniform")]
    pub dist: Distribution2d,
    #[arg(long, short)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub algo: Algo,
    pub eps: Option<f64>,
    pub wall_ms: f64,
    pub cost: f64,
    /// Cost over the exact cost of the same instance, when measured.
    pub ratio: Option<f64>,
}

pub const CSV_HEADER: &str = "n,algo,eps,wall_ms,cost,ratio";

impl BenchRow {
    pub fn csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{:.3},{},{}",
            self.n,
            self.algo,
            opt(self.eps),
            self.wall_ms,
            self.cost,
            opt(self.ratio)
        )
    }
}

pub fn parse_algos(spec: &str) -> Result<Vec<Algo>> {
    let algos: Vec<Algo> = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if algos.is_empty() {
        return Err(Error::InvalidInput("no algorithms given".into()));
    }
    Ok(algos)
}

/// One row per (size, algorithm); the exact solver runs first when asked
/// for so that ratios can be filled in.
pub fn run_grid(sizes: &[usize], algos: &[Algo], eps: f64, seed: u64, dist: Distribution2d) -> Result<Vec<BenchRow>> {
    let mut order = algos.to_vec();
    order.sort_by_key(|a| *a != Algo::Exact);
    let mut rows = Vec::new();
    for &n in sizes {
        if n < 2 {
            return Err(Error::InvalidInput("bench sizes must be >= 2".into()));
        }
        let inst = generate(&GenSpec::new(dist, n / 2, n - n / 2, seed.wrapping_add(n as u64)))?;
        let mut exact_cost = None;
        let mut found = Vec::new();
        for &algo in &order {
            let e = (algo == Algo::Gt).then_some(eps);
            let start = Instant::now();
            let sol = solve(&inst, algo, e)?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            if algo == Algo::Exact {
                exact_cost = Some(sol.cost);
            }
            found.push(BenchRow {
                n,
                algo,
                eps: e,
                wall_ms,
                cost: sol.cost,
                ratio: None,
            });
        }
        for r in &mut found {
            r.ratio = exact_cost.map(|c| r.cost / c);
        }
        found.sort_by_key(|r| algos.iter().position(|a| *a == r.algo));
        rows.extend(found);
    }
    Ok(rows)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}

pub fn slope_of(rows: &[BenchRow], algo: Algo) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.algo == algo)
        .map(|r| (r.n as f64, r.wall_ms))
        .collect();
    loglog_slope(&pts)
}

pub fn cmd_bench(a: &BenchArgs) -> Result<()> {
    let sizes = parse_sizes(&a.sizes)?;
    let algos = parse_algos(&a.algos)?;
    if algos.contains(&Algo::Gt) {
        crate::solve::check_eps(Algo::Gt, Some(a.eps))?;
    }
    let rows = run_grid(&sizes, &algos, a.eps, a.seed, a.dist)?;
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&r.csv());
        csv.push('\n');
    }
    write_output(a.out.as_deref(), &csv)?;
    for &algo in &algos {
        let times: Vec<f64> = rows.iter().filter(|r| r.algo == algo).map(|r| r.wall_ms).collect();
        if times.windows(2).any(|w| w[1] < w[0]) {
            eprintln!("note: {algo} wall time is not monotone in n");
        }
        if let Some(s) = slope_of(&rows, algo) {
            eprintln!("log-log slope {algo}: {s:.3}");
        }
    }
    Ok(())
}
