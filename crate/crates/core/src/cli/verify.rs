//! `geomatch verify`: solvers against the oracles on seeded instances.

use clap::Args;

use crate::error::Result;
use crate::gen::{generate, Distribution2d, GenSpec};
use crate::model::{Instance, Point};
use crate::oracle::{brute_force_cover, dense_hungarian, materialize, MATERIALIZE_MAX};
use crate::reduction::build_reduced;
use crate::solve::{solve, Algo};

use super::{parse_sizes, EXIT_OK, EXIT_VERIFY};

/// Instances up to this many points are checked against subset enumeration.
pub const BRUTE_FORCE_SIZES: usize = 10;

const REL_TOL: f64 = 1e-9;

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Total point counts, e.g. `4..10,16,32`.
    #[arg(long, default_value = "4..10,16,32,64")]
    pub sizes: String,
    /// Instances per size.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value = "uniform")]
    pub dist: Distribution2d,
    /// Test hook: shift one point of the instance handed to the solvers.
    #[arg(long, hide = true)]
    pub perturb: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckLine {
    pub size: usize,
    pub check: &'static str,
    pub passed: usize,
    pub total: usize,
    pub first_failure: Option<String>,
}

impl CheckLine {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

fn rel_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(1e-300)
}

fn perturbed(inst: &Instance, delta: Option<f64>) -> Instance {
    let Some(d) = delta else { return inst.clone() };
    let mut t = inst.t().to_vec();
    t[0] = Point::new(t[0].x + d, t[0].y);
    Instance::new(inst.s().to_vec(), t).expect("finite shift")
}

struct Tally {
    lines: Vec<CheckLine>,
}

impl Tally {
    fn record(&mut self, size: usize, check: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let line = match self.lines.iter_mut().find(|l| l.size == size && l.check == check) {
            Some(l) => l,
            None => {
                self.lines.push(CheckLine {
                    size,
                    check,
                    passed: 0,
                    total: 0,
                    first_failure: None,
                });
                self.lines.last_mut().unwrap()
            }
        };
        line.total += 1;
        if ok {
            line.passed += 1;
        } else if line.first_failure.is_none() {
            line.first_failure = Some(detail());
        }
    }
}

/// Runs every check; one line per (size, check).
pub fn run_checks(a: &VerifyArgs) -> Result<Vec<CheckLine>> {
    let sizes = parse_sizes(&a.sizes)?;
    crate::solve::check_eps(Algo::Gt, Some(a.eps))?;
    let mut tally = Tally { lines: Vec::new() };
    for &n in &sizes {
        if n < 2 {
            continue;
        }
        for i in 0..a.count {
            let seed = a.seed.wrapping_mul(1_000_003).wrapping_add((n * 1009 + i) as u64);
            let ns = n / 2;
            let inst = generate(&GenSpec::new(a.dist, ns, n - ns, seed))?;
            let work = perturbed(&inst, a.perturb);
            let exact = solve(&work, Algo::Exact, None)?.cost;
            let greedy = solve(&work, Algo::Greedy2, None)?.cost;
            let gt = solve(&work, Algo::Gt, Some(a.eps))?.cost;
            let tag = |what: &str, x: f64, y: f64| format!("seed {seed}: {what} {x} vs {y}");
            if n <= BRUTE_FORCE_SIZES {
                let (_, opt) = brute_force_cover(&inst)?;
                let (_, dense) = dense_hungarian(&materialize(&build_reduced(&inst))?)?;
                tally.record(n, "exact == brute-force", rel_eq(exact, opt), || tag("exact", exact, opt));
                tally.record(n, "brute-force == dense(reduced)", rel_eq(dense, opt), || {
                    tag("dense", dense, opt)
                });
                tally.record(n, "greedy2 <= 2 opt", greedy <= 2.0 * opt * (1.0 + REL_TOL), || {
                    tag("greedy2", greedy, opt)
                });
                tally.record(n, "gt <= (1+eps) opt", gt <= (1.0 + a.eps) * opt * (1.0 + REL_TOL), || {
                    tag("gt", gt, opt)
                });
            } else {
                if n <= MATERIALIZE_MAX {
                    let (_, dense) = dense_hungarian(&materialize(&build_reduced(&inst))?)?;
                    tally.record(n, "exact == dense(reduced)", rel_eq(exact, dense), || {
                        tag("exact", exact, dense)
                    });
                }
                tally.record(n, "greedy2 <= 2 exact", greedy <= 2.0 * exact * (1.0 + REL_TOL), || {
                    tag("greedy2", greedy, exact)
                });
                tally.record(n, "gt <= (1+eps) exact", gt <= (1.0 + a.eps) * exact * (1.0 + REL_TOL), || {
                    tag("gt", gt, exact)
                });
            }
        }
    }
    Ok(tally.lines)
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let lines = run_checks(a)?;
    let mut all_ok = true;
    for l in &lines {
        all_ok &= l.ok();
        let status = if l.ok() { "PASS" } else { "FAIL" };
        print!("{status} n={:<4} {:<32} {}/{}", l.size, l.check, l.passed, l.total);
        match &l.first_failure {
            Some(f) => println!("  first failure: {f}"),
            None => println!(),
        }
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_VERIFY })
}
