//! Seeded random instances shared by the verification suites and the acceptance run.

use jones_core::banach::{j_projection, JProjection, Line, NormedSpace};
use jones_core::martingale::{s_value, WeightTree};
use jones_core::region::ClosedBall;
use jones_core::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sub-seed for stream `stream` of a run seeded with `seed`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Random planar point cloud in [-1, 1]².
pub fn planar_cloud(rng: &mut ChaCha8Rng, min: usize, max: usize) -> Vec<Point> {
    let n = rng.gen_range(min..max);
    (0..n).map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect()
}

/// Four clusters of different spreads so that nets at several levels interact.
pub fn clustered_samples(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    let mut pts = Vec::new();
    for _ in 0..4 {
        let c = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
        let spread: f64 = rng.gen_range(0.001..0.2);
        for _ in 0..n / 4 {
            pts.push(vec![c[0] + spread * rng.gen_range(-1.0..1.0), c[1] + spread * rng.gen_range(-1.0..1.0)]);
        }
    }
    pts
}

/// A δ-separated set hugging a line, with two projections onto nearby lines.
pub fn near_collinear(rng: &mut ChaCha8Rng, space: &NormedSpace, delta: f64) -> (Vec<Point>, JProjection, JProjection) {
    let angle: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    let l1 = Line::from_direction(space, vec![0.0, 0.0], &[angle.cos(), angle.sin()]).expect("unit direction");
    let tilt = angle + rng.gen_range(-0.01..0.01);
    let l2 = Line::from_direction(space, vec![0.0, 0.0], &[tilt.cos(), tilt.sin()]).expect("unit direction");
    let normal = [-angle.sin(), angle.cos()];
    let mut t = 0.0;
    let mut v = Vec::new();
    for _ in 0..rng.gen_range(3..25) {
        let h = rng.gen_range(-0.03..0.03) * delta;
        let q = l1.point_at(t);
        v.push(vec![q[0] + h * normal[0], q[1] + h * normal[1]]);
        t += delta * rng.gen_range(1.1..3.0);
    }
    let p1 = j_projection(space, &l1, 0.0).expect("smooth norm");
    let p2 = j_projection(space, &l2, 0.0).expect("smooth norm");
    (v, p1, p2)
}

/// A chain of balls with radii ≤ ξ^{-k} and same-level gaps ≥ 3ξ^{-k}, rooted at B(0, 1).
pub fn ball_chain(rng: &mut ChaCha8Rng, xi: f64, n: usize) -> (Vec<ClosedBall>, Vec<i32>) {
    let s = NormedSpace::euclidean(2);
    let mut balls = vec![ClosedBall::new(vec![0.0, 0.0], 1.0)];
    let mut levels = vec![0];
    let mut tries = 0;
    while balls.len() < n && tries < 10_000 {
        tries += 1;
        let i = rng.gen_range(0..balls.len());
        let k = levels[i] + rng.gen_range(1..3);
        let r = xi.powi(-k) * rng.gen_range(0.5..1.0);
        let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let d = (balls[i].radius + r) * rng.gen_range(0.0..1.0);
        let b = ClosedBall::new(vec![balls[i].center[0] + d * a.cos(), balls[i].center[1] + d * a.sin()], r);
        let separated = balls.iter().zip(&levels).all(|(o, &l)| l != k || o.gap(&s, &b) >= 3.0 * xi.powi(-k));
        if separated {
            balls.push(b);
            levels.push(k);
        }
    }
    (balls, levels)
}

/// Takes a valid chain and breaks one hypothesis: `kind` 0 detaches a ball,
/// 1 inflates a radius, 2 puts two same-level balls too close.
pub fn broken_chain(rng: &mut ChaCha8Rng, xi: f64, kind: usize) -> (Vec<ClosedBall>, Vec<i32>) {
    let (mut balls, mut levels) = ball_chain(rng, xi, 12);
    match kind % 3 {
        0 => {
            balls.push(ClosedBall::new(vec![10.0 + rng.gen_range(0.0..1.0), 0.0], xi.powi(-1) * 0.5));
            levels.push(1);
        }
        1 => {
            let last = balls.len() - 1;
            balls[last].radius = xi.powi(-levels[last]) * rng.gen_range(2.0..4.0);
        }
        _ => {
            let c = balls[0].center.clone();
            let r = xi.powi(-1) * 0.5;
            balls.push(ClosedBall::new(vec![c[0] + 0.5, c[1]], r));
            balls.push(ClosedBall::new(vec![c[0] + 0.5 + 2.5 * r, c[1]], r));
            levels.extend([1, 1]);
        }
    }
    (balls, levels)
}

/// Adds a random subtree under `parent` with ℓ(U) = `ell`; returns the node.
/// diam H is capped at 0.95·s so every ratio stays below 1.
fn grow(t: &mut WeightTree, rng: &mut ChaCha8Rng, parent: Option<usize>, ell: f64, depth: usize, tiny: bool) -> usize {
    let id = format!("n{}", t.nodes.len());
    let node = t.add(parent, id, f64::NAN, ell);
    if depth > 0 {
        let n = rng.gen_range(0..4);
        let mut left = ell * rng.gen_range(0.5..1.0);
        for _ in 0..n {
            let share = if tiny && rng.gen_bool(0.3) { left * 1e-6 } else { left * rng.gen_range(0.2..0.6) };
            left -= share;
            grow(t, rng, Some(node), share, depth - 1, tiny);
        }
    }
    let s = s_value(t, node).expect("children have diam H");
    t.nodes[node].diam_h = (ell * rng.gen_range(0.4..1.0)).min(0.95 * s);
    node
}

/// A random forest of 1 to 3 trees of depth ≤ 4; `tiny` mixes in children of relative size 1e-6.
pub fn weight_forest(rng: &mut ChaCha8Rng, tiny: bool) -> WeightTree {
    let mut t = WeightTree::new();
    for _ in 0..rng.gen_range(1..4) {
        let ell = rng.gen_range(0.5..2.0);
        grow(&mut t, rng, None, ell, 4, tiny);
    }
    t
}

/// A single chain P = Q_0 ⊃ Q_1 ⊃ … with the given diam H and ℓ(U).
pub fn chain_tree(diam: &[f64], ell: &[f64]) -> (WeightTree, Vec<usize>) {
    let mut t = WeightTree::new();
    let mut prev = None;
    let mut ids = Vec::new();
    for (i, (&d, &l)) in diam.iter().zip(ell).enumerate() {
        let n = t.add(prev, format!("q{i}"), d, l);
        ids.push(n);
        prev = Some(n);
    }
    (t, ids)
}

/// Closed form of the leaf value of a chain tree: diam H_P·Π diam H_{i+1}/s_i / ℓ(U_last).
pub fn chain_leaf_value(diam: &[f64], ell: &[f64]) -> f64 {
    let mut mass = diam[0];
    for i in 0..diam.len() - 1 {
        mass *= diam[i + 1] / (101.0 * (ell[i] - ell[i + 1]) + diam[i + 1]);
    }
    mass / ell[ell.len() - 1]
}

/// A unit segment core tiled by ten children separated by 0.5% gaps in total.
pub fn tiled_segment_tree() -> WeightTree {
    let mut t = WeightTree::new();
    let r = t.add(None, "P", 1.0, 1.0);
    for i in 0..10 {
        t.add(Some(r), format!("c{i}"), 0.0995, 0.0995);
    }
    t
}

/// The tiled segment's root ratio 1/(101·0.005 + 0.995).
pub fn tiled_segment_ratio() -> f64 {
    1.0 / (101.0 * 0.005 + 0.995)
}
