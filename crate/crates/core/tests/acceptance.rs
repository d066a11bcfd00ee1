//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test --release --test acceptance`.

mod common;

use std::time::Instant;

use common::{engine_script, hsearch_script, rel_eq, uniform, GtChecker};
use geomatch::cli::bench::{loglog_slope, run_grid, slope_of};
use geomatch::gen::{random_small_instance, Distribution2d};
use geomatch::hungarian::{check_dual_feasibility, ExactSolver};
use geomatch::io::instance_to_json;
use geomatch::oracle::{brute_force_cover, dense_hungarian, materialize};
use geomatch::reduction::{build_reduced, perfect_to_cover};
use geomatch::model::cover_cost;
use geomatch::scaling::{fidelity, gt_solve_observed, normalize};
use geomatch::solve::{solve, Algo};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

struct Outcome {
    pass: bool,
    /// Soft criteria are reported but never fail the run.
    soft: bool,
    detail: String,
}

fn hard(pass: bool, detail: String) -> Outcome {
    Outcome { pass, soft: false, detail }
}

fn exact_vs_brute_force() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut bad = Vec::new();
    for i in 0..500 {
        let inst = random_small_instance(&mut rng, 5);
        let g = build_reduced(&inst);
        let (pm, _, _) = ExactSolver::new(&g).run();
        let exact = cover_cost(&inst, &perfect_to_cover(&g, &pm).unwrap());
        let (_, opt) = brute_force_cover(&inst).unwrap();
        if !rel_eq(exact, opt, TOL) {
            bad.push(i);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    hard(
        bad.is_empty() && secs < 30.0,
        format!("500 instances, {} mismatches, {secs:.2}s (limit 30s)", bad.len()),
    )
}

fn reduction_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut bad = 0;
    for _ in 0..500 {
        let inst = random_small_instance(&mut rng, 5);
        let (_, opt) = brute_force_cover(&inst).unwrap();
        let (_, dense) = dense_hungarian(&materialize(&build_reduced(&inst)).unwrap()).unwrap();
        bad += usize::from(!rel_eq(opt, dense, TOL));
    }
    hard(bad == 0, format!("500 instances, {bad} mismatches"))
}

fn greedy_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut over, mut witness, mut worst) = (0, None, 1.0f64);
    for _ in 0..1000 {
        let inst = random_small_instance(&mut rng, 5);
        let greedy = solve(&inst, Algo::Greedy2, None).unwrap().cost;
        let (_, opt) = brute_force_cover(&inst).unwrap();
        over += usize::from(greedy > 2.0 * opt * (1.0 + TOL));
        if opt > 0.0 {
            worst = worst.max(greedy / opt);
        }
        if witness.is_none() && greedy > opt * (1.0 + 1e-6) {
            witness = Some((inst, greedy, opt));
        }
    }
    let w = match &witness {
        Some((inst, g, o)) => format!("witness greedy {g:.6} > opt {o:.6} on {}", instance_to_json(inst)),
        None => "no strictly suboptimal witness".into(),
    };
    hard(
        over == 0 && witness.is_some(),
        format!("1000 instances, {over} above 2 OPT, worst ratio {worst:.4}; {w}"),
    )
}

/// Results of the (1+eps) suite, reused by the iteration budget line.
struct GtSuite {
    runs: usize,
    violations: usize,
    worst: f64,
    secs: f64,
    iter_over: usize,
    iter_worst: f64,
}

fn gt_suite() -> GtSuite {
    let start = Instant::now();
    let mut s = GtSuite {
        runs: 0,
        violations: 0,
        worst: 0.0,
        secs: 0.0,
        iter_over: 0,
        iter_worst: 0.0,
    };
    for (k, eps) in [0.05, 0.1, 0.5].into_iter().enumerate() {
        for i in 0..200usize {
            let n = 4 + i * 196 / 199;
            let ns = 1 + (i * 7) % (n - 1);
            let inst = uniform(ns, n - ns, (k * 1000 + i) as u64);
            let exact = solve(&inst, Algo::Exact, None).unwrap().cost;
            let sol = solve(&inst, Algo::Gt, Some(eps)).unwrap();
            s.runs += 1;
            if sol.cost > (1.0 + eps) * exact * (1.0 + TOL) {
                s.violations += 1;
            }
            if exact > 0.0 {
                s.worst = s.worst.max(sol.cost / exact / (1.0 + eps));
            }
            if let Some(geomatch::solve::Trace::Gt(traces)) = &sol.trace {
                let budget = 6.0 * (n as f64).sqrt();
                for t in traces {
                    s.iter_worst = s.iter_worst.max(t.iterations as f64 / budget);
                    s.iter_over += usize::from(t.iterations as f64 > budget);
                }
            }
        }
    }
    s.secs = start.elapsed().as_secs_f64();
    s
}

fn gt_bound(s: &GtSuite) -> Outcome {
    hard(
        s.violations == 0 && s.secs < 300.0,
        format!(
            "{} runs, eps in {{0.05, 0.1, 0.5}}, n up to 200, {} violations, worst cost/((1+eps) exact) {:.4}, {:.1}s (limit 300s)",
            s.runs, s.violations, s.worst, s.secs
        ),
    )
}

fn one_feasibility() -> Outcome {
    let (mut checks, mut failures, mut runs) = (0, Vec::new(), 0);
    for seed in 0..60u64 {
        let n = 2 + (seed as usize * 13) % 39;
        let ns = 1 + (seed as usize) % (n - 1);
        let eps = [0.05, 0.1, 0.5, 1.0][seed as usize % 4];
        let inst = uniform(ns, n - ns, 500 + seed);
        let g = build_reduced(&inst);
        let norm = normalize(&g, eps).unwrap();
        let mut chk = GtChecker::default();
        gt_solve_observed(&norm, &mut chk);
        runs += 1;
        checks += chk.feasibility_checks;
        failures.extend(chk.failures.into_iter().map(|f| format!("seed {seed}: {f}")));
    }
    hard(
        failures.is_empty(),
        format!(
            "{runs} runs, n <= 40, {checks} checkpoints, {} violations{}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

fn dual_feasibility() -> Outcome {
    let (mut checks, mut bad) = (0, 0);
    for seed in 0..40u64 {
        let n = 2 + (seed as usize * 17) % 59;
        let ns = 1 + (seed as usize * 3) % (n - 1);
        let inst = uniform(ns, n - ns, 700 + seed);
        let g = build_reduced(&inst);
        let tol = 1e-7 * g.max_weight();
        let mut solver = ExactSolver::new(&g);
        while solver.augment_once().is_some() {
            checks += 1;
            bad += usize::from(check_dual_feasibility(&g, solver.matching(), solver.duals(), tol).is_err());
        }
    }
    hard(bad == 0, format!("40 runs, n <= 60, {checks} augmentations checked, {bad} violations"))
}

fn biclique_cover() -> Outcome {
    let mut bad = Vec::new();
    let mut pairs_checked = 0;
    for seed in 0..24u64 {
        let n = 4 + (seed as usize * 11) % 77;
        let ns = 1 + (seed as usize * 5) % (n - 1);
        let eps = [0.05, 0.1, 0.5, 1.0][seed as usize % 4];
        let dist = [
            Distribution2d::UniformSquare,
            Distribution2d::GaussianClusters(3),
            Distribution2d::Grid,
        ][seed as usize % 3];
        let inst = geomatch::gen::generate(&geomatch::gen::GenSpec::new(dist, ns, n - ns, seed)).unwrap();
        let g = build_reduced(&inst);
        let norm = normalize(&g, eps).unwrap();
        let (cover, r, f) = (norm.cover(), norm.rounding(), fidelity(eps));
        let mut count = vec![vec![0usize; n - ns]; ns];
        for bc in &cover.bicliques {
            for &s in &bc.p {
                for &t in &bc.q {
                    count[s][t] += 1;
                }
            }
        }
        for s in 0..ns {
            for t in 0..n - ns {
                pairs_checked += 1;
                let raw = inst.pair_distance(s, t);
                let ok = match r.int_weight(raw) {
                    None => count[s][t] == 0,
                    Some(a) => {
                        count[s][t] == 1 && {
                            let w = cover.rounded_weight(s, t).unwrap();
                            w >= a && w as f64 >= raw / r.unit() && w as f64 <= (1.0 + f) * a as f64
                        }
                    }
                };
                if !ok && bad.len() < 3 {
                    bad.push(format!("seed {seed} pair ({s}, {t})"));
                }
            }
        }
    }

    let mut fits = Vec::new();
    let mut gate = None;
    for eps in [1.0, 0.5, 0.25] {
        let pts: Vec<(f64, f64)> = (6..=12)
            .map(|k| {
                let n = 1usize << k;
                let inst = uniform(n / 2, n / 2, k as u64);
                let g = build_reduced(&inst);
                (n as f64, normalize(&g, eps).unwrap().cover().size() as f64)
            })
            .collect();
        let slope = loglog_slope(&pts).unwrap();
        if eps == 1.0 {
            gate = Some(slope);
        }
        fits.push(format!("eps={eps}: {slope:.3}"));
    }
    let gate = gate.unwrap();
    hard(
        bad.is_empty() && gate < 1.5,
        format!(
            "{pairs_checked} pairs enumerated (n <= 80), {} coverage/fidelity failures{}; size exponent over n=2^6..2^12 at eps=1 is {gate:.3} (limit 1.5); all fits: {}",
            bad.len(),
            bad.first().map(|b| format!(" (first: {b})")).unwrap_or_default(),
            fits.join(", ")
        ),
    )
}

fn engines() -> Outcome {
    let (mut q, mut bad) = (0, 0);
    for seed in 0..30u64 {
        let ns = 1 + (seed as usize * 7) % 59;
        let (a, b) = engine_script(ns, 60 - ns, seed);
        let (c, d) = hsearch_script(ns, 60 - ns, seed, [0.05, 0.1, 0.5][seed as usize % 3]);
        q += a + c;
        bad += b + d;
    }
    let (mut runs_q, mut runs_bad) = (0, 0);
    for seed in 0..20u64 {
        let n = 2 + (seed as usize * 3) % 59;
        let inst = uniform(n / 2, n - n / 2, 900 + seed);
        let g = build_reduced(&inst);
        let norm = normalize(&g, 0.1).unwrap();
        let mut chk = GtChecker {
            skip_feasibility: true,
            ..Default::default()
        };
        gt_solve_observed(&norm, &mut chk);
        runs_q += chk.search_queries;
        runs_bad += chk.search_mismatches;
    }
    hard(
        bad == 0 && runs_bad == 0,
        format!("scripts: {q} queries, {bad} mismatches; inside solver runs: {runs_q} queries, {runs_bad} mismatches"),
    )
}

fn iteration_budget(s: &GtSuite) -> Outcome {
    hard(
        s.iter_over == 0,
        format!(
            "{} runs, {} scales above 6 sqrt(n), worst iterations/(6 sqrt(n)) {:.3}",
            s.runs, s.iter_over, s.iter_worst
        ),
    )
}

fn runtime_trend() -> Outcome {
    let sizes = [256, 512, 1024];
    let rows = run_grid(&sizes, &[Algo::Exact, Algo::Gt], 0.1, 0, Distribution2d::UniformSquare).unwrap();
    let (e, g) = (slope_of(&rows, Algo::Exact).unwrap(), slope_of(&rows, Algo::Gt).unwrap());
    let times: Vec<String> = rows.iter().map(|r| format!("{}:{}={:.0}ms", r.algo, r.n, r.wall_ms)).collect();
    Outcome {
        pass: g < e,
        soft: true,
        detail: format!("n in {sizes:?}: gt slope {g:.3}, exact slope {e:.3}; {}", times.join(" ")),
    }
}

fn main() {
    // libtest-style flags such as --nocapture are accepted and ignored
    let mut all = true;
    let mut report = |name: &str, o: Outcome| {
        let status = if o.pass { "PASS" } else { "FAIL" };
        let soft = if o.soft { " [report-only]" } else { "" };
        println!("{status} {name}{soft}: {}", o.detail);
        all &= o.pass || o.soft;
    };
    report("exact solver equals brute force", exact_vs_brute_force());
    report("reduction equivalence", reduction_equivalence());
    report("greedy2 within 2 OPT", greedy_bound());
    let suite = gt_suite();
    report("gt within (1+eps) of exact", gt_bound(&suite));
    report("1-feasibility at every checkpoint", one_feasibility());
    report("exact solver dual feasibility", dual_feasibility());
    report("biclique cover", biclique_cover());
    report("closest-pair engines match scans", engines());
    report("match iterations within 6 sqrt(n)", iteration_budget(&suite));
    report("runtime trend", runtime_trend());
    if !all {
        std::process::exit(1);
    }
}
