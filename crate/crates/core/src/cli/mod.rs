//! Command-line interface: `gen`, `solve`, `verify`, `bench`, `render`.
//!
//! Exit codes: 0 ok, 1 usage or input error, 2 verification failure.

pub mod bench;
pub mod render;
pub mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::gen::{generate, Distribution2d, GenSpec};
use crate::io::{instance_from_str, instance_to_json, instance_to_text, SolutionFile};
use crate::solve::{solve, Algo, Trace};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

/// Environment variable that turns on line-delimited JSON traces on stderr.
pub const TRACE_ENV: &str = "GEOMATCH_TRACE";

#[derive(Parser, Debug)]
#[command(name = "geomatch", version, about = "Minimum-cost many-to-many matching between planar point sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a random instance.
    Gen(GenArgs),
    /// Solve an instance and write the cover as JSON.
    Solve(SolveArgs),
    /// Check the solvers against the oracles.
    Verify(verify::VerifyArgs),
    /// Time the solvers over a size grid and write CSV.
    Bench(bench::BenchArgs),
    /// Draw an instance and a solution as SVG.
    Render(render::RenderArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// uniform, grid, gaussian or gaussian:K
    #[arg(long, default_value = "uniform")]
    pub dist: Distribution2d,
    #[arg(long)]
    pub ns: usize,
    #[arg(long)]
    pub nt: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// json or text
    #[arg(long, default_value = "json")]
    pub format: String,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// exact, greedy2 or gt
    #[arg(long)]
    pub algo: Algo,
    /// Approximation parameter, required for gt.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

pub(crate) fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

pub(crate) fn read_instance(path: &Path) -> Result<crate::model::Instance> {
    instance_from_str(&fs::read_to_string(path)?)
}

pub fn tracing_enabled() -> bool {
    std::env::var(TRACE_ENV).is_ok_and(|v| v == "1")
}

fn emit_trace(trace: &Trace) {
    let mut err = std::io::stderr().lock();
    match trace {
        Trace::Exact(searches) => {
            for (i, t) in searches.iter().enumerate() {
                let rec = serde_json::json!({"search": i, "deltas": t.deltas, "path_len": t.path_len});
                let _ = writeln!(err, "{rec}");
            }
        }
        Trace::Gt(scales) => {
            for t in scales {
                let _ = writeln!(err, "{}", serde_json::to_string(t).expect("trace serializes"));
            }
        }
    }
}

fn cmd_gen(a: &GenArgs) -> Result<()> {
    let inst = generate(&GenSpec::new(a.dist, a.ns, a.nt, a.seed))?;
    let text = match a.format.as_str() {
        "json" => instance_to_json(&inst) + "\n",
        "text" => instance_to_text(&inst),
        other => return Err(Error::InvalidInput(format!("unknown format '{other}'"))),
    };
    write_output(a.out.as_deref(), &text)
}

fn cmd_solve(a: &SolveArgs) -> Result<()> {
    let inst = read_instance(&a.input)?;
    let start = Instant::now();
    let sol = solve(&inst, a.algo, a.eps)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    if tracing_enabled() {
        if let Some(t) = &sol.trace {
            emit_trace(t);
        }
    }
    let file = SolutionFile::new(&sol.pairs, sol.cost, &a.algo.to_string(), Some(wall_ms));
    write_output(a.out.as_deref(), &(file.to_json() + "\n"))
}

/// Parses `args` (including the program name) and runs; returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a).map(|_| EXIT_OK),
        Command::Solve(a) => cmd_solve(a).map(|_| EXIT_OK),
        Command::Verify(a) => verify::cmd_verify(a),
        Command::Bench(a) => bench::cmd_bench(a).map(|_| EXIT_OK),
        Command::Render(a) => render::cmd_render(a).map(|_| EXIT_OK),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Parses `4..10,16,32` into a sorted, deduplicated size list.
pub fn parse_sizes(spec: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidInput(format!("bad size list '{spec}'"));
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.split_once("..") {
            Some((lo, hi)) => {
                let lo: usize = lo.parse().map_err(|_| bad())?;
                let hi: usize = hi.trim_start_matches('=').parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(item.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() || out.contains(&0) {
        return Err(bad());
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
