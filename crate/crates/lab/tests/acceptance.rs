//! Acceptance run: one line per criterion with its measurement, tolerance and runtime.

use std::process::ExitCode;
use std::time::Instant;

use jones_core::banach::NormedSpace;
use jones_core::beta::beta_number;
use jones_core::region::ClosedBall;
use jones_lab::config::ExperimentConfig;
use jones_lab::fixtures;
use jones_lab::generators::CurveSpec;
use jones_lab::pipeline::run_pipeline;
use jones_lab::ratio::tsp_ratio_table;
use jones_lab::suites::{self, Counts, PropertyResult};
use rand::Rng;

const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_results(results: &[PropertyResult]) -> Outcome {
    let passed = results.iter().all(PropertyResult::passed);
    let detail = results
        .iter()
        .map(|r| {
            let mark = if r.passed() { "" } else { " FAILED" };
            let note = if r.note.is_empty() { String::new() } else { format!(" [{}]", r.note) };
            format!(
                "{} {}/{} max excess {:.2e} tol {:.0e}{note}{mark}",
                r.property,
                r.cases - r.violations,
                r.cases,
                r.worst,
                r.tol
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { passed, detail }
}

fn beta_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for (i, &p) in [1.0, 1.5, 2.0, 3.0, f64::INFINITY].iter().enumerate() {
        let space = NormedSpace::lp(2, p).expect("valid exponent");
        let mut rng = fixtures::rng(SEED, 100 + i as u64);
        for _ in 0..200 {
            let pts = fixtures::planar_cloud(&mut rng, 3, 12);
            let c = vec![rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)];
            let r = rng.gen_range(0.8..1.6);
            let got = beta_number(&pts, &ClosedBall::new(c.clone(), r), &space).expect("planar").beta;
            let want = jones_oracle::beta_in_ball(&pts, &c, r, p, 100_000);
            worst = worst.max((got - want).abs());
            n += 1;
        }
    }
    Outcome { passed: worst < 1e-6, detail: format!("{n} instances over 5 norms, worst |β − grid β| {worst:.2e} (tol 1e-6)") }
}

fn segment_degeneracy() -> Outcome {
    let mut parts = Vec::new();
    let mut passed = true;
    for p in [1.0, 2.0] {
        let mut cfg = ExperimentConfig::for_curve(CurveSpec::Segment { length: 1.0 });
        cfg.p = p;
        let b = run_pipeline(&cfg).expect("segment pipeline");
        let ok = b.betas.iter().all(|r| r.beta < 1e-12) && b.summary.jones_sum == b.summary.diam && b.summary.b_balls == 0;
        passed &= ok;
        parts.push(format!(
            "p={p}: {} balls, max β {:.1e}, S − diam = {:e}, |𝓑| = {}",
            b.betas.len(),
            b.summary.beta_max,
            b.summary.jones_sum - b.summary.diam,
            b.summary.b_balls
        ));
    }
    Outcome { passed, detail: parts.join("; ") }
}

fn tsp_ratio() -> Outcome {
    let cfg = ExperimentConfig::for_curve(CurveSpec::Koch { depth: 3, angle: 60.0 });
    let rows = tsp_ratio_table(&cfg, &[3, 4, 5, 6]).expect("koch ratio table");
    let mut length_err: f64 = 0.0;
    for r in &rows {
        let want = (4.0f64 / 3.0).powi(r.depth as i32);
        length_err = length_err.max((r.length - want).abs() / want);
    }
    let (r3, r6) = (rows[0].ratio, rows[3].ratio);
    let ratios: Vec<String> = rows.iter().map(|r| format!("{}:{:.4}", r.depth, r.ratio)).collect();
    Outcome {
        passed: r6 <= 2.0 * r3 && length_err <= 1e-12,
        detail: format!(
            "S/length by depth [{}], depth 6 / depth 3 = {:.4} (≤ 2), max rel. length error {length_err:.1e} (tol 1e-12)",
            ratios.join(" "),
            r6 / r3
        ),
    }
}

fn main() -> ExitCode {
    let full = Counts::FULL;
    let criteria: Vec<(&str, f64, Box<dyn Fn() -> Outcome>)> = vec![
        ("β oracle agreement", 60.0, Box::new(beta_oracle)),
        (
            "β monotonicity",
            30.0,
            Box::new(move || from_results(&suites::beta_suite(SEED, full.monotone)[..1])),
        ),
        ("J-projection suite", 30.0, Box::new(move || from_results(&suites::banach_suite(SEED, full.triples, None)))),
        ("net and counting", 30.0, Box::new(move || from_results(&suites::net_suite(SEED, full.net_sets, full.counting)))),
        ("core lemma", 60.0, Box::new(move || from_results(&suites::cores_suite(SEED, full.hierarchies)))),
        (
            "ball-chain lemma",
            10.0,
            Box::new(move || from_results(&suites::chain_suite(SEED, full.chains, full.broken_chains))),
        ),
        (
            "martingale suite",
            30.0,
            Box::new(move || from_results(&suites::martingale_suite(SEED, full.forests, full.overlap_samples))),
        ),
        ("straight-line degeneracy", 5.0, Box::new(segment_degeneracy)),
        ("TSP-ratio stability", 300.0, Box::new(tsp_ratio)),
        (
            "case taxonomy",
            60.0,
            Box::new(|| from_results(&suites::case_taxonomy_suite(jones_core::martingale::DEFAULT_Q))),
        ),
        ("fragment bounds", 60.0, Box::new(|| from_results(&suites::fragment_suite()))),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let ok = out.passed && secs < *limit;
        if !ok {
            failed += 1;
        }
        println!(
            "[{}] {:>2}. {name}: {} | {secs:.2} s (limit {limit} s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            out.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
