//! Polyline curves with a constant-speed parameterization on [0, 1].

mod arcs;
mod cylinder;
mod fragment;

pub use arcs::*;
pub use cylinder::*;
pub use fragment::*;

use serde::{Deserialize, Serialize};

use crate::banach::{axpy, sub, NormedSpace};
use crate::beta::{diameter, WindowedSet};
use crate::error::{GeomError, Result};
use crate::region::{ClosedBall, Region};
use crate::search::{bisect, golden_min};
use crate::Point;

/// A closed parameter interval [a, b] ⊆ [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamInterval {
    pub a: f64,
    pub b: f64,
}

impl ParamInterval {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub fn len(&self) -> f64 {
        (self.b - self.a).max(0.0)
    }

    pub fn is_degenerate(&self) -> bool {
        self.b <= self.a
    }

    pub fn contains(&self, t: f64) -> bool {
        self.a <= t && t <= self.b
    }

    pub fn intersect(&self, other: &ParamInterval) -> Option<ParamInterval> {
        let a = self.a.max(other.a);
        let b = self.b.min(other.b);
        (a <= b).then_some(ParamInterval { a, b })
    }
}

/// Finite polyline Γ with parameterization f: [0, 1] → Γ of constant speed.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    space: NormedSpace,
    vertices: Vec<Point>,
    closed: bool,
    /// Vertices followed by the first vertex again when closed.
    path: Vec<Point>,
    /// cumulative[i] = length of the path up to path[i].
    cumulative: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct CurveRepr {
    space: NormedSpace,
    closed: bool,
    vertices: Vec<Point>,
}

impl Serialize for Curve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CurveRepr { space: self.space, closed: self.closed, vertices: self.vertices.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Curve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CurveRepr::deserialize(d)?;
        Curve::new(r.space, r.vertices, r.closed).map_err(serde::de::Error::custom)
    }
}

impl Curve {
    pub fn new(space: NormedSpace, vertices: Vec<Point>, closed: bool) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(GeomError::Degenerate("a curve needs at least two vertices".into()));
        }
        for v in &vertices {
            space.check_dim(v)?;
            if v.iter().any(|x| !x.is_finite()) {
                return Err(GeomError::Degenerate("non-finite vertex".into()));
            }
        }
        let mut path = vertices.clone();
        if closed {
            path.push(vertices[0].clone());
        }
        let mut cumulative = vec![0.0];
        for w in path.windows(2) {
            let d = space.dist(&w[0], &w[1]);
            if d == 0.0 {
                return Err(GeomError::Degenerate("consecutive vertices coincide".into()));
            }
            cumulative.push(cumulative.last().unwrap() + d);
        }
        Ok(Self { space, vertices, closed, path, cumulative })
    }

    /// Polyline through `vertices`, dropping consecutive duplicates.
    pub fn from_points_dedup(space: NormedSpace, vertices: Vec<Point>, closed: bool) -> Result<Self> {
        let mut v: Vec<Point> = Vec::with_capacity(vertices.len());
        for p in vertices {
            if v.last() != Some(&p) {
                v.push(p);
            }
        }
        if closed && v.len() > 1 && v.first() == v.last() {
            v.pop();
        }
        Self::new(space, v, closed)
    }

    pub fn space(&self) -> &NormedSpace {
        &self.space
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Vertices along the parameterization (the first vertex repeated at the end when closed).
    pub fn path(&self) -> &[Point] {
        &self.path
    }

    pub fn cumulative_length(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn segment_count(&self) -> usize {
        self.path.len() - 1
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn diam(&self) -> f64 {
        diameter(&self.vertices, &self.space)
    }

    /// Parameter of path vertex `i`.
    pub fn vertex_param(&self, i: usize) -> f64 {
        if i + 1 == self.path.len() {
            1.0
        } else {
            self.cumulative[i] / self.length()
        }
    }

    fn segment_of(&self, t: f64) -> usize {
        let s = t.clamp(0.0, 1.0) * self.length();
        let i = self.cumulative.partition_point(|&c| c <= s);
        i.saturating_sub(1).min(self.segment_count() - 1)
    }

    /// f(t).
    pub fn point_at(&self, t: f64) -> Point {
        if t <= 0.0 {
            return self.path[0].clone();
        }
        if t >= 1.0 {
            return self.path.last().unwrap().clone();
        }
        let i = self.segment_of(t);
        let s = t * self.length();
        let len = self.cumulative[i + 1] - self.cumulative[i];
        let u = ((s - self.cumulative[i]) / len).clamp(0.0, 1.0);
        self.lerp(i, u)
    }

    fn lerp(&self, i: usize, u: f64) -> Point {
        let a = &self.path[i];
        let b = &self.path[i + 1];
        a.iter().zip(b).map(|(x, y)| x + u * (y - x)).collect()
    }

    fn seg_param(&self, i: usize, u: f64) -> f64 {
        if i + 1 == self.segment_count() && u >= 1.0 {
            return 1.0;
        }
        (self.cumulative[i] + u * (self.cumulative[i + 1] - self.cumulative[i])) / self.length()
    }

    /// f([a, b]) as a point list: f(a), the vertices strictly inside, f(b).
    /// The image is the polyline through these points.
    pub fn arc_points(&self, iv: ParamInterval) -> Vec<Point> {
        let mut pts = vec![self.point_at(iv.a)];
        if iv.b > iv.a {
            let total = self.length();
            for i in 1..self.path.len() - 1 {
                let t = self.cumulative[i] / total;
                if t > iv.a && t < iv.b {
                    pts.push(self.path[i].clone());
                }
            }
            pts.push(self.point_at(iv.b));
        }
        pts
    }

    /// Diameter of f([a, b]).
    pub fn arc_diam(&self, iv: ParamInterval) -> f64 {
        diameter(&self.arc_points(iv), &self.space)
    }

    /// Local parameters u ∈ [0, 1] of segment `i` at which f lies in the closed ball.
    pub fn segment_ball_interval(&self, i: usize, ball: &ClosedBall) -> Option<(f64, f64)> {
        let s = &self.space;
        let a = &self.path[i];
        let b = &self.path[i + 1];
        let len = self.cumulative[i + 1] - self.cumulative[i];
        let r = ball.radius;
        let phi0 = s.dist(a, &ball.center);
        let phi1 = s.dist(b, &ball.center);
        if phi0 <= r && phi1 <= r {
            return Some((0.0, 1.0));
        }
        // |f(u) - c| is len-Lipschitz, so its minimum is at least this
        if 0.5 * (phi0 + phi1 - len) > r {
            return None;
        }
        let d = sub(b, a);
        let mut buf = vec![0.0; a.len()];
        let mut phi = |u: f64| {
            for k in 0..buf.len() {
                buf[k] = a[k] + u * d[k] - ball.center[k];
            }
            s.norm(&buf)
        };
        let (um, vm) = if phi0 <= r {
            (0.0, phi0)
        } else if phi1 <= r {
            (1.0, phi1)
        } else {
            golden_min(&mut phi, 0.0, 1.0, 1e-15, 200)
        };
        if vm > r {
            return None;
        }
        let lo = if phi0 <= r { 0.0 } else { bisect(|u| phi(u) <= r, um, 0.0) };
        let hi = if phi1 <= r { 1.0 } else { bisect(|u| phi(u) <= r, um, 1.0) };
        Some((lo, hi))
    }

    /// Sorted, merged parameter intervals of f^{-1}(ball). Intervals may be degenerate.
    pub fn clip_ball(&self, ball: &ClosedBall) -> Vec<ParamInterval> {
        self.clip_region_balls(std::slice::from_ref(ball))
    }

    /// Sorted, merged parameter intervals of f^{-1}(region).
    pub fn clip_region(&self, region: &Region) -> Vec<ParamInterval> {
        self.clip_region_balls(&region.balls)
    }

    fn clip_region_balls(&self, balls: &[ClosedBall]) -> Vec<ParamInterval> {
        let mut out: Vec<ParamInterval> = Vec::new();
        let mut local: Vec<(f64, f64)> = Vec::new();
        for i in 0..self.segment_count() {
            local.clear();
            for b in balls {
                if let Some(iv) = self.segment_ball_interval(i, b) {
                    local.push(iv);
                }
            }
            local.sort_by(|x, y| x.0.total_cmp(&y.0));
            for &(lo, hi) in &local {
                let iv = ParamInterval::new(self.seg_param(i, lo), self.seg_param(i, hi));
                match out.last_mut() {
                    Some(last) if iv.a <= last.b => last.b = last.b.max(iv.b),
                    _ => out.push(iv),
                }
            }
        }
        out
    }

    /// ℓ(Γ ∩ region) counted along the parameterization.
    pub fn restricted_measure(&self, region: &Region) -> f64 {
        self.clip_region(region).iter().map(|iv| iv.len()).sum::<f64>() * self.length()
    }

    /// Whether no two non-adjacent segments meet (planar curves only; `None` otherwise).
    pub fn is_simple(&self) -> Option<bool> {
        if self.space.dim() != 2 {
            return None;
        }
        let n = self.segment_count();
        let orient = |p: &Point, q: &Point, r: &Point| {
            let v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
            if v > 0.0 {
                1
            } else if v < 0.0 {
                -1
            } else {
                0
            }
        };
        let on_seg = |p: &Point, q: &Point, r: &Point| {
            q[0] <= p[0].max(r[0]) && q[0] >= p[0].min(r[0]) && q[1] <= p[1].max(r[1]) && q[1] >= p[1].min(r[1])
        };
        let hit = |p1: &Point, q1: &Point, p2: &Point, q2: &Point| {
            let (o1, o2, o3, o4) = (orient(p1, q1, p2), orient(p1, q1, q2), orient(p2, q2, p1), orient(p2, q2, q1));
            (o1 != o2 && o3 != o4)
                || (o1 == 0 && on_seg(p1, p2, q1))
                || (o2 == 0 && on_seg(p1, q2, q1))
                || (o3 == 0 && on_seg(p2, p1, q2))
                || (o4 == 0 && on_seg(p2, q1, q2))
        };
        for i in 0..n {
            for j in i + 2..n {
                if self.closed && i == 0 && j == n - 1 {
                    continue;
                }
                if hit(&self.path[i], &self.path[i + 1], &self.path[j], &self.path[j + 1]) {
                    return Some(false);
                }
            }
        }
        Some(true)
    }

    /// Smallest distance from `x` to f(iv), exact up to the line-search tolerance.
    pub fn arc_distance_to(&self, iv: ParamInterval, x: &[f64]) -> f64 {
        let pts = self.arc_points(iv);
        if pts.len() == 1 {
            return self.space.dist(&pts[0], x);
        }
        let mut best = f64::INFINITY;
        for w in pts.windows(2) {
            let d = sub(&w[1], &w[0]);
            let (_, v) = golden_min(|u| self.space.dist(&axpy(&w[0], u, &d), x), 0.0, 1.0, 1e-14, 200);
            best = best.min(v).min(self.space.dist(&w[0], x)).min(self.space.dist(&w[1], x));
        }
        best
    }

    /// Union of the images of the given parameter intervals, as a point list.
    pub fn image_points(&self, ivs: &[ParamInterval]) -> Vec<Point> {
        ivs.iter().flat_map(|iv| self.arc_points(*iv)).collect()
    }
}

impl WindowedSet for Curve {
    fn space(&self) -> &NormedSpace {
        &self.space
    }

    fn diam(&self) -> f64 {
        Curve::diam(self)
    }

    fn clip(&self, window: &ClosedBall) -> Vec<Point> {
        self.image_points(&self.clip_ball(window))
    }
}

/// ℓ(Γ) for a polyline.
pub fn curve_length(c: &Curve) -> f64 {
    c.length()
}

/// ℓ(Γ ∩ region).
pub fn restricted_measure(c: &Curve, region: &Region) -> f64 {
    c.restricted_measure(region)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e2() -> NormedSpace {
        NormedSpace::euclidean(2)
    }

    fn unit_segment() -> Curve {
        Curve::new(e2(), vec![vec![0.0, 0.0], vec![1.0, 0.0]], false).unwrap()
    }

    #[test]
    fn lengths() {
        assert_eq!(unit_segment().length(), 1.0);
        let sq = Curve::new(e2(), vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]], true).unwrap();
        assert_eq!(sq.length(), 4.0);
        assert_eq!(sq.point_at(0.5), vec![1.0, 1.0]);
        assert_eq!(sq.point_at(1.0), vec![0.0, 0.0]);
        let h = 3f64.sqrt() / 6.0;
        let zig = Curve::new(
            e2(),
            vec![vec![0.0, 0.0], vec![1.0 / 3.0, 0.0], vec![0.5, h], vec![2.0 / 3.0, 0.0], vec![1.0, 0.0]],
            false,
        )
        .unwrap();
        assert!((zig.length() - 4.0 / 3.0).abs() < 1e-15);
        assert!(Curve::new(e2(), vec![vec![0.0, 0.0], vec![0.0, 0.0]], false).is_err());
    }

    #[test]
    fn measure_examples() {
        let c = unit_segment();
        let all = Region::ball(ClosedBall::new(vec![0.5, 0.0], 2.0));
        assert_eq!(c.restricted_measure(&all), 1.0);
        let far = Region::ball(ClosedBall::new(vec![5.0, 5.0], 1.0));
        assert_eq!(c.restricted_measure(&far), 0.0);
        let mid = Region::ball(ClosedBall::new(vec![0.5, 0.0], 0.25));
        assert!((c.restricted_measure(&mid) - 0.5).abs() < 1e-12);
        let two = Region::new(vec![ClosedBall::new(vec![0.3, 0.0], 0.1), ClosedBall::new(vec![0.35, 0.0], 0.1)]);
        assert!((c.restricted_measure(&two) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn clipping_merges_across_vertices() {
        let c = Curve::new(e2(), vec![vec![0.0, 0.0], vec![0.5, 0.0], vec![1.0, 0.0]], false).unwrap();
        let ivs = c.clip_ball(&ClosedBall::new(vec![0.5, 0.1], 0.2));
        assert_eq!(ivs.len(), 1);
        let half = (0.04f64 - 0.01).sqrt();
        assert!((ivs[0].a - (0.5 - half)).abs() < 1e-12 && (ivs[0].b - (0.5 + half)).abs() < 1e-12);
    }

    #[test]
    fn json_roundtrip() {
        let c = unit_segment();
        let j = serde_json::to_string(&c).unwrap();
        assert_eq!(j, r#"{"space":{"norm":"lp","p":2.0,"dim":2},"closed":false,"vertices":[[0.0,0.0],[1.0,0.0]]}"#);
        assert_eq!(serde_json::from_str::<Curve>(&j).unwrap(), c);
    }

    #[test]
    fn simplicity() {
        assert_eq!(unit_segment().is_simple(), Some(true));
        let bow = Curve::new(e2(), vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]], false).unwrap();
        assert_eq!(bow.is_simple(), Some(false));
    }
}
