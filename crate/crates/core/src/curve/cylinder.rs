//! Cylinders over a projected line, transverse arcs and the tall/wide core classes.

use serde::{Deserialize, Serialize};

use super::{classify, ArcRef, Curve, Lambda, ParamInterval};
use crate::banach::{sub, JProjection};
use crate::error::Result;
use crate::region::{ClosedBall, Region};

/// Position of a point relative to the cylinder P_W = Π⁻¹(Π(W)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Inside,
    Plus,
    Minus,
}

/// Π(W) for a finite union of balls, as the hull of the ball shadows.
///
/// A functional of dual norm one maps B(c, r) onto ⟨g, c⟩ ± r, so each
/// shadow is exact; the hull is exact whenever W is connected.
pub fn shadow(proj: &JProjection, w: &Region) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for b in &w.balls {
        let t = proj.coordinate(&b.center);
        lo = lo.min(t - b.radius);
        hi = hi.max(t + b.radius);
    }
    (lo, hi)
}

fn side_of(t: f64, (lo, hi): (f64, f64)) -> Side {
    if t < lo {
        Side::Minus
    } else if t > hi {
        Side::Plus
    } else {
        Side::Inside
    }
}

/// Classifies `x` against the cylinder over W; "plus" is the side of increasing
/// line coordinate.
pub fn cylinder_membership(proj: &JProjection, w: &Region, x: &[f64]) -> Side {
    side_of(proj.coordinate(x), shadow(proj, w))
}

/// Whether f(iv) meets the closed set {x : Π(x) ∈ [lo, hi], |x − c| ≥ rho}.
fn meets_slab_outside(c: &Curve, iv: ParamInterval, proj: &JProjection, slab: (f64, f64), center: &[f64], rho: f64) -> bool {
    let s = c.space();
    let pts = c.arc_points(iv);
    for w in pts.windows(2) {
        let (p0, p1) = (proj.coordinate(&w[0]), proj.coordinate(&w[1]));
        // sub-interval of the segment inside the slab (the coordinate is affine)
        let (u0, u1) = if p0 == p1 {
            if p0 < slab.0 || p0 > slab.1 {
                continue;
            }
            (0.0, 1.0)
        } else {
            let ua = ((slab.0 - p0) / (p1 - p0)).clamp(0.0, 1.0);
            let ub = ((slab.1 - p0) / (p1 - p0)).clamp(0.0, 1.0);
            let (ua, ub) = (ua.min(ub), ua.max(ub));
            let mid = 0.5 * (ua + ub);
            let pm = p0 + mid * (p1 - p0);
            if pm < slab.0 || pm > slab.1 {
                continue;
            }
            (ua, ub)
        };
        let d = sub(&w[1], &w[0]);
        // the distance to the center is convex, so its max on the piece is at an end
        for u in [u0, u1] {
            let x: Vec<f64> = w[0].iter().zip(&d).map(|(a, b)| a + u * b).collect();
            if s.dist(&x, center) >= rho {
                return true;
            }
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoreClass {
    #[serde(rename = "not_adjacent")]
    NotAdjacent,
    N1,
    #[serde(rename = "N2_1")]
    N2_1,
    #[serde(rename = "N2_2")]
    N2_2,
    #[serde(rename = "unnecessary")]
    Unnecessary,
}

impl CoreClass {
    pub fn is_n2(self) -> bool {
        matches!(self, CoreClass::N2_1 | CoreClass::N2_2)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CoreClass::NotAdjacent => "not_adjacent",
            CoreClass::N1 => "N1",
            CoreClass::N2_1 => "N2_1",
            CoreClass::N2_2 => "N2_2",
            CoreClass::Unnecessary => "unnecessary",
        }
    }
}

/// The child core's data needed for classification.
pub struct ChildCore<'a> {
    pub ball: &'a crate::net::Ball,
    pub q_star: &'a ClosedBall,
    pub core: &'a Region,
}

/// Tall/wide classification of a child core relative to an efficient subarc `t`
/// of the parent, with `proj` a projection onto the line through its endpoints.
pub fn classify_core(
    c: &Curve,
    t: &ArcRef,
    proj: &JProjection,
    child: &ChildCore<'_>,
    lambda: Lambda,
    eps2: f64,
) -> Result<CoreClass> {
    let near = child.q_star.scaled(1.00002);
    let near_ivs = c.clip_ball(&near);
    if !near_ivs.iter().any(|iv| iv.intersect(&t.interval).is_some()) {
        return Ok(CoreClass::NotAdjacent);
    }
    let cls = classify(c, child.ball, lambda, eps2)?;
    let candidates: Vec<&ArcRef> = cls
        .flat_arcs()
        .filter(|a| near_ivs.iter().any(|iv| iv.intersect(&a.interval).is_some()))
        .collect();
    let r = child.q_star.radius;
    let centre = proj.coordinate(&child.q_star.center);
    let slab = (centre - 1.01 * r, centre + 1.01 * r);
    if candidates.iter().any(|a| meets_slab_outside(c, a.interval, proj, slab, &child.q_star.center, 4.0 * r)) {
        return Ok(CoreClass::N1);
    }
    let sh = shadow(proj, child.core);
    let wide: Vec<&&ArcRef> = candidates
        .iter()
        .filter(|a| {
            let s0 = side_of(proj.coordinate(&c.point_at(a.start())), sh);
            let s1 = side_of(proj.coordinate(&c.point_at(a.end())), sh);
            matches!((s0, s1), (Side::Plus, Side::Minus) | (Side::Minus, Side::Plus))
        })
        .collect();
    if wide.is_empty() {
        return Ok(CoreClass::Unnecessary);
    }
    let tiny = c.clip_ball(&child.q_star.scaled(2f64.powi(-14)));
    let central = wide.iter().any(|a| tiny.iter().any(|iv| iv.intersect(&a.interval).is_some()));
    Ok(if central { CoreClass::N2_1 } else { CoreClass::N2_2 })
}
