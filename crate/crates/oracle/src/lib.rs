//! Brute-force reference computations used by the test suites.
//!
//! Everything here is written from scratch with closed-form or grid-search
//! methods and shares no code with `jones-core`.

/// ℓ_p norm; `p = f64::INFINITY` gives the max norm.
pub fn lp_norm(x: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        x.iter().fold(0.0, |m, v| m.max(v.abs()))
    } else {
        x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Distance from `x` to the planar line `base + t·dir` via the dual-norm formula
/// |⟨n, x − base⟩| / |n|_q with n ⊥ dir.
pub fn planar_line_distance(x: &[f64], base: &[f64], dir: &[f64], p: f64) -> f64 {
    let n = [-dir[1], dir[0]];
    let v = (x[0] - base[0]) * n[0] + (x[1] - base[1]) * n[1];
    v.abs() / lp_norm(&n, conjugate(p))
}

/// min over a uniform grid of t ∈ [−range, range] of |x − base − t·dir|_p.
pub fn grid_line_distance(x: &[f64], base: &[f64], dir: &[f64], p: f64, range: f64, n: usize) -> f64 {
    let mut best = f64::INFINITY;
    let mut buf = vec![0.0; x.len()];
    for i in 0..=n {
        let t = -range + 2.0 * range * i as f64 / n as f64;
        for k in 0..x.len() {
            buf[k] = x[k] - base[k] - t * dir[k];
        }
        best = best.min(lp_norm(&buf, p));
    }
    best
}

/// Half-width of a planar set in the direction of the normal at angle θ,
/// measured as a distance to lines of direction (cos θ, sin θ).
fn half_width(points: &[[f64; 2]], theta: f64, q: f64) -> f64 {
    let n = [-theta.sin(), theta.cos()];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for x in points {
        let s = n[0] * x[0] + n[1] * x[1];
        lo = lo.min(s);
        hi = hi.max(s);
    }
    0.5 * (hi - lo) / lp_norm(&n, q)
}

/// inf over lines of sup_i dist(x_i, L), by scanning `n_angles` directions in
/// [0, π) and then re-scanning finely around the best few grid cells.
pub fn minimax_line_width(points: &[Vec<f64>], p: f64, n_angles: usize) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let pts: Vec<[f64; 2]> = points.iter().map(|v| [v[0], v[1]]).collect();
    let q = conjugate(p);
    let step = std::f64::consts::PI / n_angles as f64;
    let mut vals: Vec<(f64, usize)> = (0..n_angles).map(|j| (half_width(&pts, j as f64 * step, q), j)).collect();
    let mut best = vals.iter().map(|v| v.0).fold(f64::INFINITY, f64::min);
    vals.sort_by(|a, b| a.0.total_cmp(&b.0));
    for &(_, j) in vals.iter().take(8) {
        let centre = j as f64 * step;
        let fine = 4000;
        for i in 0..=fine {
            let t = centre - step + 2.0 * step * i as f64 / fine as f64;
            best = best.min(half_width(&pts, t, q));
        }
    }
    best
}

/// Brute-force β: the minimax width of the points inside the closed ball,
/// divided by the ball's diameter.
pub fn beta_in_ball(points: &[Vec<f64>], center: &[f64], radius: f64, p: f64, n_angles: usize) -> f64 {
    let inside: Vec<Vec<f64>> = points
        .iter()
        .filter(|x| {
            let d: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
            lp_norm(&d, p) <= radius
        })
        .cloned()
        .collect();
    minimax_line_width(&inside, p, n_angles) / (2.0 * radius)
}

/// Brute-force diameter of a finite set.
pub fn diameter(points: &[Vec<f64>], p: f64) -> f64 {
    let mut d: f64 = 0.0;
    for a in points {
        for b in points {
            let v: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            d = d.max(lp_norm(&v, p));
        }
    }
    d
}

/// Length of the part of segment [a, b] lying in the closed ball B(c, r),
/// estimated with `n` midpoint samples.
pub fn segment_measure_in_ball(a: &[f64], b: &[f64], c: &[f64], r: f64, p: f64, n: usize) -> f64 {
    let seg: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let len = lp_norm(&seg, p);
    let mut inside = 0usize;
    for i in 0..n {
        let t = (i as f64 + 0.5) / n as f64;
        let x: Vec<f64> = a.iter().zip(&seg).zip(c).map(|((a, s), c)| a + t * s - c).collect();
        if lp_norm(&x, p) <= r {
            inside += 1;
        }
    }
    len * inside as f64 / n as f64
}
