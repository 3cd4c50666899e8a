//! Nested 2^{-k}-separated nets and multiresolution ball families.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::banach::NormedSpace;
use crate::error::{GeomError, Result};
use crate::region::ClosedBall;
use crate::Point;

/// 2^k, exact for every level used in practice.
pub fn pow2(k: i32) -> f64 {
    2f64.powi(k)
}

/// One level X_k of a net hierarchy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetLevel {
    pub k: i32,
    pub points: Vec<Point>,
    /// Index of each net point in the sample list it was drawn from.
    pub sample_ids: Vec<usize>,
    /// False for levels of a partial family, which skip the maximality check.
    pub maximal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetHierarchy {
    pub space: NormedSpace,
    pub k_min: i32,
    pub k_max: i32,
    pub levels: Vec<NetLevel>,
}

/// Spatial hash with cubical cells of side `h`. Points at distance < h lie in
/// neighbouring cells because every ℓ_p norm dominates the max norm.
struct Grid {
    h: f64,
    cells: HashMap<Vec<i64>, Vec<usize>>,
}

impl Grid {
    fn new(h: f64) -> Self {
        Self { h, cells: HashMap::new() }
    }

    fn key(&self, x: &[f64]) -> Vec<i64> {
        x.iter().map(|v| (v / self.h).floor() as i64).collect()
    }

    fn insert(&mut self, x: &[f64], id: usize) {
        let key = self.key(x);
        self.cells.entry(key).or_default().push(id);
    }

    /// Calls `f` on ids in the 3^d block of cells around `x` until it returns true.
    fn any_near(&self, x: &[f64], mut f: impl FnMut(usize) -> bool) -> bool {
        let base = self.key(x);
        let d = base.len();
        let mut offset = vec![-1i64; d];
        loop {
            let key: Vec<i64> = base.iter().zip(&offset).map(|(a, b)| a + b).collect();
            if let Some(ids) = self.cells.get(&key) {
                if ids.iter().any(|&i| f(i)) {
                    return true;
                }
            }
            let mut i = 0;
            loop {
                if i == d {
                    return false;
                }
                offset[i] += 1;
                if offset[i] <= 1 {
                    break;
                }
                offset[i] = -1;
                i += 1;
            }
        }
    }
}

/// Greedy coarse-to-fine construction of nested maximal nets over `samples`.
///
/// X_{k_min} is built greedily in input order; X_{k+1} starts from X_k and is
/// extended greedily in input order.
pub fn build_nets(samples: &[Point], k_min: i32, k_max: i32, space: &NormedSpace) -> Result<NetHierarchy> {
    if samples.is_empty() {
        return Err(GeomError::Empty("sample set"));
    }
    if k_min > k_max {
        return Err(GeomError::Precondition(format!("k_min {k_min} > k_max {k_max}")));
    }
    for s in samples {
        space.check_dim(s)?;
    }
    let mut levels = Vec::with_capacity((k_max - k_min + 1) as usize);
    let mut chosen: Vec<usize> = Vec::new();
    let mut in_net = vec![false; samples.len()];
    for k in k_min..=k_max {
        let sep = pow2(-k);
        let mut grid = Grid::new(sep);
        for &i in &chosen {
            grid.insert(&samples[i], i);
        }
        for (i, x) in samples.iter().enumerate() {
            if in_net[i] {
                continue;
            }
            let close = grid.any_near(x, |j| space.dist(x, &samples[j]) < sep);
            if !close {
                grid.insert(x, i);
                chosen.push(i);
                in_net[i] = true;
            }
        }
        levels.push(NetLevel {
            k,
            points: chosen.iter().map(|&i| samples[i].clone()).collect(),
            sample_ids: chosen.clone(),
            maximal: true,
        });
    }
    Ok(NetHierarchy { space: *space, k_min, k_max, levels })
}

/// Finest level for which 2^{-k} is at most half of `min_spacing`.
pub fn default_k_max(min_spacing: f64) -> i32 {
    if !(min_spacing > 0.0) {
        return 0;
    }
    (2.0 / min_spacing).log2().ceil() as i32
}

/// Smallest distance between consecutive samples (the spacing of an ordered sampling).
pub fn consecutive_spacing(samples: &[Point], space: &NormedSpace) -> f64 {
    samples
        .windows(2)
        .map(|w| space.dist(&w[0], &w[1]))
        .filter(|d| *d > 0.0)
        .fold(f64::INFINITY, f64::min)
}

/// Violations of the net invariants, by brute force.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct NetReport {
    pub separation: Vec<(i32, usize, usize)>,
    pub maximality: Vec<(i32, usize)>,
    pub nesting: Vec<(i32, usize)>,
}

impl NetReport {
    pub fn ok(&self) -> bool {
        self.separation.is_empty() && self.maximality.is_empty() && self.nesting.is_empty()
    }
}

impl NetHierarchy {
    pub fn level(&self, k: i32) -> Option<&NetLevel> {
        if k < self.k_min || k > self.k_max {
            return None;
        }
        self.levels.get((k - self.k_min) as usize)
    }

    /// Replace level `k` by the subset of its points accepted by `keep`,
    /// marking it non-maximal. Finer levels are left untouched, so nesting
    /// still holds.
    pub fn restrict_level(&mut self, k: i32, mut keep: impl FnMut(&[f64]) -> bool) -> Result<()> {
        let idx = (k - self.k_min) as usize;
        if k < self.k_min || k > self.k_max {
            return Err(GeomError::Precondition(format!("level {k} out of range")));
        }
        let lvl = &mut self.levels[idx];
        let (points, ids): (Vec<_>, Vec<_>) =
            lvl.points.drain(..).zip(lvl.sample_ids.drain(..)).filter(|(p, _)| keep(p)).unzip();
        lvl.points = points;
        lvl.sample_ids = ids;
        lvl.maximal = false;
        Ok(())
    }

    /// Check separation, maximality (for maximal levels) and nesting against `samples`.
    pub fn verify(&self, samples: &[Point]) -> NetReport {
        let s = &self.space;
        let mut rep = NetReport::default();
        for (li, lvl) in self.levels.iter().enumerate() {
            let sep = pow2(-lvl.k);
            for i in 0..lvl.points.len() {
                for j in i + 1..lvl.points.len() {
                    if s.dist(&lvl.points[i], &lvl.points[j]) < sep {
                        rep.separation.push((lvl.k, i, j));
                    }
                }
            }
            if lvl.maximal {
                for (i, x) in samples.iter().enumerate() {
                    if !lvl.points.iter().any(|y| s.dist(x, y) < sep || x == y) {
                        rep.maximality.push((lvl.k, i));
                    }
                }
            }
            if li > 0 {
                let finer = lvl;
                for (i, x) in self.levels[li - 1].points.iter().enumerate() {
                    if !finer.points.iter().any(|y| y == x) {
                        rep.nesting.push((self.levels[li - 1].k, i));
                    }
                }
            }
        }
        rep
    }
}

/// Stable ball identifier: (level, index within the level).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BallId {
    pub level: i32,
    pub index: usize,
}

impl fmt::Display for BallId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.level, self.index)
    }
}

impl std::str::FromStr for BallId {
    type Err = GeomError;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || GeomError::Precondition(format!("bad ball id `{s}`"));
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        Ok(BallId { level: a.parse().map_err(|_| bad())?, index: b.parse().map_err(|_| bad())? })
    }
}

impl Serialize for BallId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BallId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// B(center, A·2^{-level}).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub id: BallId,
    pub center: Point,
    pub level: i32,
    pub radius: f64,
}

impl Ball {
    pub fn new(id: BallId, center: Point, inflation: f64) -> Self {
        let level = id.level;
        Self { id, center, level, radius: inflation * pow2(-level) }
    }

    pub fn closed(&self) -> ClosedBall {
        ClosedBall::new(self.center.clone(), self.radius)
    }

    /// The concentric ball λ·Q.
    pub fn scaled(&self, factor: f64) -> ClosedBall {
        ClosedBall::new(self.center.clone(), self.radius * factor)
    }

    pub fn diam(&self) -> f64 {
        2.0 * self.radius
    }
}

/// The net ball B(x, (1/3)·2^{-k}) of Q = B(x, A·2^{-k}).
pub fn net_ball(q: &Ball) -> Ball {
    Ball { id: q.id, center: q.center.clone(), level: q.level, radius: pow2(-q.level) / 3.0 }
}

#[derive(Clone, Debug)]
pub struct MultiresFamily {
    pub hierarchy: NetHierarchy,
    pub inflation: f64,
    /// Ordered by level, then by index within the level.
    pub balls: Vec<Ball>,
}

pub fn make_family(h: NetHierarchy, inflation: f64) -> Result<MultiresFamily> {
    if !(inflation > 1.0) || !inflation.is_finite() {
        return Err(GeomError::Precondition(format!("inflation must exceed 1, got {inflation}")));
    }
    let mut balls = Vec::new();
    for lvl in &h.levels {
        for (index, x) in lvl.points.iter().enumerate() {
            balls.push(Ball::new(BallId { level: lvl.k, index }, x.clone(), inflation));
        }
    }
    Ok(MultiresFamily { hierarchy: h, inflation, balls })
}

impl MultiresFamily {
    pub fn space(&self) -> &NormedSpace {
        &self.hierarchy.space
    }

    pub fn ball(&self, id: BallId) -> Option<&Ball> {
        let start = self.balls.partition_point(|b| b.id < id);
        self.balls.get(start).filter(|b| b.id == id)
    }

    pub fn balls_at(&self, k: i32) -> &[Ball] {
        let lo = self.balls.partition_point(|b| b.level < k);
        let hi = self.balls.partition_point(|b| b.level <= k);
        &self.balls[lo..hi]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_samples(n: usize) -> Vec<Point> {
        (0..=n).map(|i| vec![i as f64 / n as f64, 0.0]).collect()
    }

    #[test]
    fn singleton_nets() {
        let s = NormedSpace::euclidean(2);
        let h = build_nets(&[vec![0.3, 0.4]], -2, 5, &s).unwrap();
        assert!(h.levels.iter().all(|l| l.points == vec![vec![0.3, 0.4]]));
        let fam = make_family(h, 240.0).unwrap();
        assert_eq!(fam.balls.len(), 8);
        for b in &fam.balls {
            assert_eq!(b.radius, 240.0 * pow2(-b.level));
        }
    }

    #[test]
    fn two_points_level_zero() {
        let s = NormedSpace::euclidean(2);
        let h = build_nets(&[vec![0.0, 0.0], vec![1.0, 0.0]], 0, 0, &s).unwrap();
        assert_eq!(h.levels[0].points.len(), 2);
        let fam = make_family(h, 4.0).unwrap();
        assert!(fam.balls.iter().all(|b| b.radius == 4.0));
    }

    #[test]
    fn dense_segment_level_two() {
        let s = NormedSpace::euclidean(2);
        let samples = line_samples(100);
        let h = build_nets(&samples, 2, 2, &s).unwrap();
        let xs: Vec<f64> = h.levels[0].points.iter().map(|p| p[0]).collect();
        assert_eq!(xs, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let fam = make_family(h, 4.0).unwrap();
        assert_eq!(fam.balls.len(), 5);
        assert!(fam.balls.iter().all(|b| b.radius == 1.0));

        let h = build_nets(&samples, 0, 2, &s).unwrap();
        let mut xs: Vec<f64> = h.level(2).unwrap().points.iter().map(|p| p[0]).collect();
        xs.sort_by(f64::total_cmp);
        assert_eq!(xs, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(h.verify(&samples).ok());
    }

    #[test]
    fn net_ball_radii() {
        let b = Ball::new(BallId { level: 0, index: 0 }, vec![0.0, 0.0], 240.0);
        assert!((net_ball(&b).radius - 1.0 / 3.0).abs() < 1e-16);
        let b = Ball::new(BallId { level: 3, index: 0 }, vec![0.0, 0.0], 4.0);
        assert!((net_ball(&b).radius - 1.0 / 24.0).abs() < 1e-16);
    }

    #[test]
    fn errors() {
        let s = NormedSpace::euclidean(2);
        assert!(build_nets(&[], 0, 1, &s).is_err());
        assert!(build_nets(&[vec![0.0, 0.0]], 2, 1, &s).is_err());
        let h = build_nets(&[vec![0.0, 0.0]], 0, 0, &s).unwrap();
        assert!(make_family(h, 1.0).is_err());
    }

    #[test]
    fn partial_level_skips_maximality() {
        let s = NormedSpace::euclidean(2);
        let samples = line_samples(64);
        let mut h = build_nets(&samples, 0, 3, &s).unwrap();
        h.restrict_level(3, |p| p[0] < 0.5).unwrap();
        let rep = h.verify(&samples);
        assert!(rep.separation.is_empty() && rep.maximality.is_empty());
        assert!(!rep.nesting.is_empty());
    }

    #[test]
    fn ball_lookup_and_ids() {
        let s = NormedSpace::euclidean(2);
        let fam = make_family(build_nets(&line_samples(32), 0, 3, &s).unwrap(), 4.0).unwrap();
        for b in &fam.balls {
            assert_eq!(fam.ball(b.id).unwrap(), b);
            assert_eq!(b.id.to_string().parse::<BallId>().unwrap(), b.id);
        }
        assert_eq!(fam.balls_at(2).len(), fam.hierarchy.level(2).unwrap().points.len());
    }
}
