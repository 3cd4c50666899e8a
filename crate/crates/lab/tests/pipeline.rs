use std::fs;
use std::path::{Path, PathBuf};

use jones_core::net::BallId;
use jones_lab::config::ExperimentConfig;
use jones_lab::generators::CurveSpec;
use jones_lab::output::write_bundle;
use jones_lab::pipeline::{run_pipeline, run_until, Stage};
use jones_lab::ratio::tsp_ratio_table;

fn cfg(spec: CurveSpec) -> ExperimentConfig {
    ExperimentConfig::for_curve(spec)
}

#[test]
fn segment_is_degenerate() {
    let b = run_pipeline(&cfg(CurveSpec::Segment { length: 1.0 })).unwrap();
    assert!(b.betas.iter().all(|r| r.beta < 1e-12));
    assert_eq!(b.summary.jones_sum, b.summary.diam);
    assert_eq!(b.summary.b_balls, 0);
    assert!(b.buckets.is_empty());
    assert!(b.passed());
}

#[test]
fn koch_depth_four_bundle() {
    let b = run_pipeline(&cfg(CurveSpec::Koch { depth: 4, angle: 60.0 })).unwrap();
    assert!(!b.betas.is_empty());
    assert!(b.summary.jones_sum.is_finite() && b.summary.jones_sum > b.summary.diam);
    assert!(b.passed(), "{:?}", b.failures());
}

/// Endpoints of the pieces of a polyline inside a Euclidean ball.
fn clip_euclidean(path: &[Vec<f64>], c: &[f64], r: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for w in path.windows(2) {
        let d = [w[1][0] - w[0][0], w[1][1] - w[0][1]];
        let f = [w[0][0] - c[0], w[0][1] - c[1]];
        let a = d[0] * d[0] + d[1] * d[1];
        let b = 2.0 * (f[0] * d[0] + f[1] * d[1]);
        let cc = f[0] * f[0] + f[1] * f[1] - r * r;
        let disc = b * b - 4.0 * a * cc;
        if disc < 0.0 {
            continue;
        }
        let t0 = ((-b - disc.sqrt()) / (2.0 * a)).max(0.0);
        let t1 = ((-b + disc.sqrt()) / (2.0 * a)).min(1.0);
        if t0 <= t1 {
            for t in [t0, t1] {
                out.push(vec![w[0][0] + t * d[0], w[0][1] + t * d[1]]);
            }
        }
    }
    out
}

#[test]
fn koch_betas_match_oracle_on_subsample() {
    let b = run_until(&cfg(CurveSpec::Koch { depth: 4, angle: 60.0 }), Stage::Betas).unwrap();
    let path = b.curve.path().to_vec();
    let step = b.betas.len() / 10;
    for row in b.betas.iter().step_by(step).take(10) {
        let pts = clip_euclidean(&path, &row.center, row.radius);
        let want = jones_oracle::beta_in_ball(&pts, &row.center, row.radius * (1.0 + 1e-12), 2.0, 100_000);
        assert!((row.beta - want).abs() < 1e-6, "{}: {} vs {}", row.ball_id, row.beta, want);
    }
}

#[test]
fn plus_sign_has_b_ball_at_crossing() {
    let b = run_until(&cfg(CurveSpec::PlusSign { arm: 1.0 }), Stage::Classify).unwrap();
    let at_crossing = b.classes.iter().any(|r| {
        let ball = b.family.ball(r.ball_id).unwrap();
        r.is_b && ball.center.iter().all(|x| x.abs() < 1e-12)
    });
    assert!(at_crossing);
}

#[test]
fn bucket_levels_are_congruent() {
    let mut c = cfg(CurveSpec::PlusSign { arm: 1.0 });
    c.k_max = Some(11);
    c.j = 4;
    let b = run_pipeline(&c).unwrap();
    assert!(b.buckets.iter().any(|k| k.nodes.iter().any(|n| !n.children.is_empty())));
    for k in &b.buckets {
        for n in &k.nodes {
            assert_eq!(n.level.rem_euclid(4), k.j);
        }
    }
    assert!(b.passed(), "{:?}", b.failures());
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn repeated_runs_are_byte_identical() {
    let mut c = cfg(CurveSpec::RandomWalk { n: 40, seed: 9 });
    c.seed = 5;
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    write_bundle(&run_pipeline(&c).unwrap(), a.path()).unwrap();
    write_bundle(&run_pipeline(&c).unwrap(), b.path()).unwrap();
    assert_eq!(files(a.path()), files(b.path()));
}

fn golden(name: &str, spec: CurveSpec) {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    let out = tempfile::tempdir().unwrap();
    write_bundle(&run_pipeline(&cfg(spec)).unwrap(), out.path()).unwrap();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(&dir).unwrap();
        for (f, bytes) in files(out.path()) {
            fs::write(dir.join(f), bytes).unwrap();
        }
        return;
    }
    let want = files(&dir);
    let got = files(out.path());
    assert_eq!(want.iter().map(|f| &f.0).collect::<Vec<_>>(), got.iter().map(|f| &f.0).collect::<Vec<_>>());
    for ((name, w), (_, g)) in want.iter().zip(&got) {
        assert!(w == g, "{name} drifted from the golden copy; rerun with UPDATE_GOLDEN=1 after checking the change");
    }
}

#[test]
fn golden_segment() {
    golden("segment", CurveSpec::Segment { length: 1.0 });
}

#[test]
fn golden_koch_depth_three() {
    golden("koch3", CurveSpec::Koch { depth: 3, angle: 60.0 });
}

#[test]
fn segment_ratio_is_one_at_every_depth() {
    let rows = tsp_ratio_table(&cfg(CurveSpec::Segment { length: 1.0 }), &[1, 2, 3]).unwrap();
    for r in rows {
        assert_eq!(r.ratio, 1.0);
    }
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    fs::write(&path, r#"{"curve":{"name":"t_junction"},"lambda":5,"J":8,"out":"x"}"#).unwrap();
    let c = ExperimentConfig::load(&path).unwrap();
    assert_eq!(c.j, 8);
    let b = run_until(&c, Stage::Classify).unwrap();
    assert_eq!(b.classes[0].lambda, 5.0);
    assert_eq!(b.classes[0].ball_id, BallId { level: b.summary.k_min, index: 0 });
}
