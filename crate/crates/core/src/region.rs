//! Closed balls and finite unions of them.

use serde::{Deserialize, Serialize};

use crate::banach::NormedSpace;
use crate::Point;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedBall {
    #[serde(rename = "c")]
    pub center: Point,
    #[serde(rename = "r")]
    pub radius: f64,
}

impl ClosedBall {
    pub fn new(center: Point, radius: f64) -> Self {
        Self { center, radius }
    }

    pub fn contains(&self, space: &NormedSpace, x: &[f64]) -> bool {
        space.dist(&self.center, x) <= self.radius
    }

    /// Membership with an absolute slack.
    pub fn contains_tol(&self, space: &NormedSpace, x: &[f64], tol: f64) -> bool {
        space.dist(&self.center, x) <= self.radius + tol
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { center: self.center.clone(), radius: self.radius * factor }
    }

    pub fn diam(&self) -> f64 {
        2.0 * self.radius
    }

    pub fn intersects(&self, space: &NormedSpace, other: &ClosedBall) -> bool {
        space.dist(&self.center, &other.center) <= self.radius + other.radius
    }

    /// Distance between the two balls (0 if they meet).
    pub fn gap(&self, space: &NormedSpace, other: &ClosedBall) -> f64 {
        (space.dist(&self.center, &other.center) - self.radius - other.radius).max(0.0)
    }

    /// Whether `other` ⊆ `self` (sufficient test via the triangle inequality,
    /// exact for strictly convex norms).
    pub fn contains_ball(&self, space: &NormedSpace, other: &ClosedBall, tol: f64) -> bool {
        space.dist(&self.center, &other.center) + other.radius <= self.radius + tol
    }
}

/// A finite union of closed balls.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub balls: Vec<ClosedBall>,
}

impl Region {
    pub fn new(balls: Vec<ClosedBall>) -> Self {
        Self { balls }
    }

    pub fn ball(b: ClosedBall) -> Self {
        Self { balls: vec![b] }
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn contains(&self, space: &NormedSpace, x: &[f64]) -> bool {
        self.balls.iter().any(|b| b.contains(space, x))
    }

    pub fn contains_tol(&self, space: &NormedSpace, x: &[f64], tol: f64) -> bool {
        self.balls.iter().any(|b| b.contains_tol(space, x, tol))
    }

    pub fn intersects_ball(&self, space: &NormedSpace, b: &ClosedBall) -> bool {
        self.balls.iter().any(|m| m.intersects(space, b))
    }

    /// Smallest radius of a ball about `center` containing every member ball.
    pub fn enclosing_radius(&self, space: &NormedSpace, center: &[f64]) -> f64 {
        self.balls.iter().map(|b| space.dist(center, &b.center) + b.radius).fold(0.0, f64::max)
    }

    /// Lower bound on the distance between two regions (0 if any balls meet).
    pub fn gap(&self, space: &NormedSpace, other: &Region) -> f64 {
        let mut g = f64::INFINITY;
        for a in &self.balls {
            for b in &other.balls {
                g = g.min(a.gap(space, b));
            }
        }
        g
    }
}
