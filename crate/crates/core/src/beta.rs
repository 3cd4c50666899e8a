//! Jones β-numbers by minimax line fitting, and Jones sums over ball families.

use rayon::prelude::*;
use serde::Serialize;

use crate::banach::{dist_to_line, norming_functional, Line, NormedSpace};
use crate::error::{GeomError, Result};
use crate::net::{BallId, MultiresFamily};
use crate::region::ClosedBall;
use crate::search::golden_min;
use crate::tol::{ABS_TOL, ANGLE_SEEDS, BETA_FLOOR};
use crate::Point;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaResult {
    pub beta: f64,
    pub best_line: Option<Line>,
    pub achieved_sup: f64,
    pub window_diam: f64,
    /// False when the value is only an upper bound (d ≥ 3).
    pub exact: bool,
}

impl BetaResult {
    fn empty(window_diam: f64) -> Self {
        Self { beta: 0.0, best_line: None, achieved_sup: 0.0, window_diam, exact: true }
    }
}

/// Minimax line fit: a line minimizing the largest distance to `points`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineFit {
    pub line: Line,
    pub sup: f64,
    pub exact: bool,
}

/// Convex hull of planar points in counter-clockwise order, collinear points dropped.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<&Point> = points.iter().collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() <= 2 {
        return pts.into_iter().cloned().collect();
    }
    let cross = |o: &Point, a: &Point, b: &Point| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<&Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &&Point>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.is_empty() {
        // all points coincide after dedup, handled above; collinear input keeps both ends
        return vec![pts[0].clone(), pts[pts.len() - 1].clone()];
    }
    hull.into_iter().cloned().collect()
}

/// Largest pairwise distance.
pub fn diameter(points: &[Point], space: &NormedSpace) -> f64 {
    let ext = if space.dim() == 2 { convex_hull(points) } else { points.to_vec() };
    let mut d: f64 = 0.0;
    for i in 0..ext.len() {
        for j in i + 1..ext.len() {
            d = d.max(space.dist(&ext[i], &ext[j]));
        }
    }
    d
}

/// Planar line-fitting objective for one direction angle.
struct PlanarFit<'a> {
    space: &'a NormedSpace,
    hull: &'a [Point],
}

struct Candidate {
    theta: f64,
    value: f64,
    u: [f64; 2],
    w: [f64; 2],
    mid: f64,
}

impl PlanarFit<'_> {
    /// With u the unit direction, g a norming functional of u and w = (−g₂, g₁),
    /// every x equals a·u + σ·w with σ = u₁x₂ − u₂x₁. The distance from x to the
    /// line {b·w + t·u} is |σ − b|·κ with κ = dist(w, span u), so the best offset
    /// is the midpoint of the σ-range.
    fn eval(&self, theta: f64) -> Candidate {
        let v = [theta.cos(), theta.sin()];
        let n = self.space.norm(&v);
        let u = [v[0] / n, v[1] / n];
        let g = norming_functional(self.space, &u);
        let w = [-g[1], g[0]];
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for x in self.hull {
            let s = u[0] * x[1] - u[1] * x[0];
            lo = lo.min(s);
            hi = hi.max(s);
        }
        let axis = Line { base: vec![0.0, 0.0], dir: u.to_vec() };
        let kappa = dist_to_line(self.space, &w, &axis);
        Candidate { theta, value: 0.5 * (hi - lo) * kappa, u, w, mid: 0.5 * (hi + lo) }
    }
}

fn fit_planar(points: &[Point], space: &NormedSpace) -> LineFit {
    let hull = convex_hull(points);
    if hull.len() == 1 {
        let line = Line::from_direction(space, hull[0].clone(), &[1.0, 0.0]).expect("nonzero direction");
        return LineFit { line, sup: 0.0, exact: true };
    }
    if hull.len() == 2 {
        let line = Line::through(space, &hull[0], &hull[1]).expect("distinct points");
        return LineFit { line, sup: 0.0, exact: true };
    }
    let fit = PlanarFit { space, hull: &hull };
    let pi = std::f64::consts::PI;
    let mut angles: Vec<f64> = (0..ANGLE_SEEDS).map(|j| j as f64 * pi / ANGLE_SEEDS as f64).collect();
    // the optimum is attained at a direction parallel to a hull edge
    for i in 0..hull.len() {
        let a = &hull[i];
        let b = &hull[(i + 1) % hull.len()];
        angles.push((b[1] - a[1]).atan2(b[0] - a[0]).rem_euclid(pi));
    }
    let mut best = fit.eval(angles[0]);
    for &t in &angles[1..] {
        let c = fit.eval(t);
        if c.value < best.value {
            best = c;
        }
    }
    let h = pi / ANGLE_SEEDS as f64;
    let (t, _) = golden_min(|t| fit.eval(t).value, best.theta - h, best.theta + h, 1e-13, 200);
    let refined = fit.eval(t);
    if refined.value < best.value {
        best = refined;
    }
    let base = vec![best.mid * best.w[0], best.mid * best.w[1]];
    let line = Line { base, dir: best.u.to_vec() };
    let sup = hull.iter().map(|x| dist_to_line(space, x, &line)).fold(0.0, f64::max);
    LineFit { line, sup, exact: true }
}

/// Heuristic fit in d ≥ 3: pair directions, bounding-box offsets, pattern search.
fn fit_general(points: &[Point], space: &NormedSpace) -> LineFit {
    let d = space.dim();
    let mut uniq: Vec<&Point> = Vec::new();
    for p in points {
        if !uniq.iter().any(|q| *q == p) {
            uniq.push(p);
        }
        if uniq.len() > 4000 {
            break;
        }
    }
    if uniq.len() == 1 {
        let mut e = vec![0.0; d];
        e[0] = 1.0;
        let line = Line::from_direction(space, uniq[0].clone(), &e).expect("nonzero direction");
        return LineFit { line, sup: 0.0, exact: false };
    }
    let step = (uniq.len() / 40).max(1);
    let sample: Vec<&Point> = uniq.iter().step_by(step).copied().collect();
    let fit_dir = |v: &[f64]| -> Option<(Line, f64)> {
        let n = space.norm(v);
        if n == 0.0 {
            return None;
        }
        let u: Vec<f64> = v.iter().map(|x| x / n).collect();
        let g = norming_functional(space, &u);
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for x in points {
            let a: f64 = g.iter().zip(x.iter()).map(|(g, x)| g * x).sum();
            for i in 0..d {
                let r = x[i] - a * u[i];
                lo[i] = lo[i].min(r);
                hi[i] = hi[i].max(r);
            }
        }
        let base: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let line = Line { base, dir: u };
        let sup = points.iter().map(|x| dist_to_line(space, x, &line)).fold(0.0, f64::max);
        Some((line, sup))
    };
    let mut best: Option<(Line, f64)> = None;
    for i in 0..sample.len() {
        for j in i + 1..sample.len() {
            let v: Vec<f64> = sample[j].iter().zip(sample[i].iter()).map(|(a, b)| a - b).collect();
            if let Some(c) = fit_dir(&v) {
                if best.as_ref().map_or(true, |b| c.1 < b.1) {
                    best = Some(c);
                }
            }
        }
    }
    let (mut line, mut sup) = best.expect("at least two distinct points");
    let mut step = 0.05;
    while step > 1e-7 {
        let mut improved = false;
        for i in 0..d {
            for s in [-1.0, 1.0] {
                let mut v = line.dir.clone();
                v[i] += s * step;
                if let Some((l, v)) = fit_dir(&v) {
                    if v < sup {
                        line = l;
                        sup = v;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    LineFit { line, sup, exact: false }
}

/// Minimax line for a nonempty point set.
pub fn fit_line(points: &[Point], space: &NormedSpace) -> Result<LineFit> {
    if points.is_empty() {
        return Err(GeomError::Empty("point set"));
    }
    for p in points {
        space.check_dim(p)?;
    }
    Ok(if space.dim() == 2 { fit_planar(points, space) } else { fit_general(points, space) })
}

/// β of a set already restricted to the window, normalized by `window_diam`.
pub fn beta_of_points(points: &[Point], window_diam: f64, space: &NormedSpace) -> Result<BetaResult> {
    if !(window_diam > 0.0) || !window_diam.is_finite() {
        return Err(GeomError::Degenerate(format!("window diameter {window_diam}")));
    }
    if points.is_empty() {
        return Ok(BetaResult::empty(window_diam));
    }
    let fit = fit_line(points, space)?;
    Ok(BetaResult {
        beta: (fit.sup / window_diam).clamp(0.0, 1.0),
        best_line: Some(fit.line),
        achieved_sup: fit.sup,
        window_diam,
        exact: fit.exact,
    })
}

/// β_E(Q) for a point set E and a closed ball Q (diam Q = 2·radius).
pub fn beta_number(points: &[Point], window: &ClosedBall, space: &NormedSpace) -> Result<BetaResult> {
    let inside: Vec<Point> = points.iter().filter(|x| window.contains(space, x)).cloned().collect();
    beta_of_points(&inside, window.diam(), space)
}

/// β of a set relative to itself: the window is the set and the denominator its diameter.
pub fn self_beta(points: &[Point], space: &NormedSpace) -> Result<f64> {
    let d = diameter(points, space);
    if d == 0.0 {
        return Ok(0.0);
    }
    Ok(beta_of_points(points, d, space)?.beta)
}

/// Checks β_E(R) ≤ (diam Q / diam R)·β_F(Q) + 2·ABS_TOL for E ⊆ F, R ⊆ Q.
pub fn beta_monotone_check(
    e: &[Point],
    f: &[Point],
    r: &ClosedBall,
    q: &ClosedBall,
    space: &NormedSpace,
) -> Result<bool> {
    if !e.iter().all(|x| f.contains(x)) {
        return Err(GeomError::Precondition("E is not a subset of F".into()));
    }
    if !q.contains_ball(space, r, 0.0) {
        return Err(GeomError::Precondition("R is not contained in Q".into()));
    }
    let small = beta_number(e, r, space)?.beta;
    let large = beta_number(f, q, space)?.beta;
    Ok(small <= q.diam() / r.diam() * large + 2.0 * ABS_TOL)
}

/// A set that can report its intersection with a closed ball as a point list
/// whose minimax line fit equals that of the true intersection.
pub trait WindowedSet: Sync {
    fn space(&self) -> &NormedSpace;
    fn diam(&self) -> f64;
    fn clip(&self, window: &ClosedBall) -> Vec<Point>;
}

/// A finite point set.
pub struct PointSet {
    pub space: NormedSpace,
    pub points: Vec<Point>,
}

impl WindowedSet for PointSet {
    fn space(&self) -> &NormedSpace {
        &self.space
    }
    fn diam(&self) -> f64 {
        diameter(&self.points, &self.space)
    }
    fn clip(&self, window: &ClosedBall) -> Vec<Point> {
        self.points.iter().filter(|x| window.contains(&self.space, x)).cloned().collect()
    }
}

/// β_E(Q) for every ball of the family, in family order.
pub fn beta_map<S: WindowedSet>(family: &MultiresFamily, set: &S) -> Result<Vec<(BallId, BetaResult)>> {
    family
        .balls
        .par_iter()
        .map(|b| {
            let pts = set.clip(&b.closed());
            beta_of_points(&pts, b.diam(), set.space()).map(|r| (b.id, r))
        })
        .collect()
}

/// diam E + Σ β^p·diam Q over a computed β-map. For p = 1 only balls with
/// diam Q ≤ c1·diam E contribute. Values at or below [`BETA_FLOOR`] count as 0.
pub fn jones_sum_from_map(
    family: &MultiresFamily,
    map: &[(BallId, BetaResult)],
    diam_e: f64,
    p: f64,
    c1: f64,
) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(GeomError::InvalidExponent(p));
    }
    let mut total = diam_e;
    for (id, r) in map {
        let q = family.ball(*id).ok_or_else(|| GeomError::Precondition(format!("unknown ball {id}")))?;
        if p == 1.0 && q.diam() > c1 * diam_e {
            continue;
        }
        if r.beta > BETA_FLOOR {
            total += r.beta.powf(p) * q.diam();
        }
    }
    Ok(total)
}

/// S_{E,p} = diam E + Σ_Q β_E(Q)^p·diam Q.
pub fn jones_sum<S: WindowedSet>(family: &MultiresFamily, set: &S, p: f64, c1: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(GeomError::InvalidExponent(p));
    }
    let map = beta_map(family, set)?;
    jones_sum_from_map(family, &map, set.diam(), p, c1)
}

/// Jones sum of a finite point set.
pub fn jones_sum_points(family: &MultiresFamily, points: &[Point], p: f64, c1: f64) -> Result<f64> {
    if points.is_empty() {
        return Err(GeomError::Empty("point set"));
    }
    let set = PointSet { space: *family.space(), points: points.to_vec() };
    jones_sum(family, &set, p, c1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e2() -> NormedSpace {
        NormedSpace::euclidean(2)
    }

    #[test]
    fn hull_basics() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![0.5, 0.5]];
        assert_eq!(convex_hull(&pts).len(), 4);
        let line = vec![vec![0.0, 0.0], vec![2.0, 2.0], vec![1.0, 1.0]];
        assert_eq!(convex_hull(&line), vec![vec![0.0, 0.0], vec![2.0, 2.0]]);
        assert_eq!(convex_hull(&[vec![1.0, 1.0], vec![1.0, 1.0]]).len(), 1);
    }

    #[test]
    fn collinear_is_flat() {
        let pts: Vec<Point> = (0..10).map(|i| vec![i as f64 * 0.1, i as f64 * 0.05]).collect();
        let r = beta_number(&pts, &ClosedBall::new(vec![0.5, 0.2], 1.0), &e2()).unwrap();
        assert!(r.beta < 1e-15);
    }

    #[test]
    fn three_point_example() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 0.1]];
        let r = beta_number(&pts, &ClosedBall::new(vec![0.5, 0.0], 1.0), &e2()).unwrap();
        assert!((r.beta - 0.025).abs() < 1e-9, "{}", r.beta);
        let line = r.best_line.unwrap();
        assert!(line.dir[1].abs() < 1e-9);
        assert!((line.base[1] - 0.05).abs() < 1e-9);
    }

    #[test]
    fn empty_window() {
        let pts = vec![vec![5.0, 5.0]];
        let r = beta_number(&pts, &ClosedBall::new(vec![0.0, 0.0], 1.0), &e2()).unwrap();
        assert_eq!(r.beta, 0.0);
        assert!(r.best_line.is_none());
        assert!(beta_number(&pts, &ClosedBall::new(vec![0.0, 0.0], 0.0), &e2()).is_err());
    }

    #[test]
    fn monotone_examples() {
        let s = e2();
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 0.3], vec![0.2, -0.1]];
        let q = ClosedBall::new(vec![0.5, 0.0], 1.0);
        assert!(beta_monotone_check(&pts, &pts, &q, &q, &s).unwrap());
        let r = ClosedBall::new(vec![0.5, 0.0], 0.5);
        assert!(beta_monotone_check(&pts[..3], &pts, &r, &q, &s).unwrap());
        assert!(beta_monotone_check(&pts, &pts[..3], &r, &q, &s).is_err());
        assert!(beta_monotone_check(&pts, &pts, &q, &r, &s).is_err());
    }

    #[test]
    fn three_dimensional_upper_bound() {
        let s = NormedSpace::euclidean(3);
        let pts = vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.5, 0.1, 0.0]];
        let r = beta_number(&pts, &ClosedBall::new(vec![0.5, 0.0, 0.0], 1.0), &s).unwrap();
        assert!(!r.exact);
        assert!(r.beta >= 0.025 - 1e-9 && r.beta < 0.026, "{}", r.beta);
    }
}
