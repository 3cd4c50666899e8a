//! Maximal arc fragments H_Q inside a core and efficient subarcs G_Q.

use serde::Serialize;

use super::{ArcRef, Curve, ParamInterval};
use crate::banach::{norming_projection, Line};
use crate::beta::{diameter, fit_line};
use crate::error::{GeomError, Result};
use crate::region::{ClosedBall, Region};
use crate::Point;

/// Image(τ) ∩ W for one arc τ, stored as parameter pieces.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fragment {
    pub pieces: Vec<ParamInterval>,
    pub diam: f64,
    pub source_arc: ArcRef,
}

impl Fragment {
    pub fn points(&self, c: &Curve) -> Vec<Point> {
        c.image_points(&self.pieces)
    }
}

/// Pieces of f^{-1}(region) inside the arc's domain.
pub fn fragment_of(c: &Curve, arc: &ArcRef, region: &Region) -> Option<Fragment> {
    let pieces: Vec<ParamInterval> =
        c.clip_region(region).iter().filter_map(|iv| iv.intersect(&arc.interval)).collect();
    if pieces.is_empty() {
        return None;
    }
    let diam = diameter(&c.image_points(&pieces), c.space());
    Some(Fragment { pieces, diam, source_arc: *arc })
}

/// Largest fragment Image(τ) ∩ U over the given arcs among those meeting (1/4)·Q_*.
///
/// `arcs` should be S*(λQ). Ties in diameter go to the arc with the smallest
/// start parameter.
pub fn maximal_fragment(c: &Curve, arcs: &[ArcRef], core: &Region, q_star: &ClosedBall) -> Result<Fragment> {
    let quarter = c.clip_ball(&q_star.scaled(0.25));
    let mut sorted: Vec<&ArcRef> = arcs.iter().collect();
    sorted.sort_by(|x, y| x.interval.a.total_cmp(&y.interval.a));
    let mut best: Option<Fragment> = None;
    for arc in sorted {
        if !quarter.iter().any(|iv| iv.intersect(&arc.interval).is_some()) {
            continue;
        }
        let Some(frag) = fragment_of(c, arc, core) else { continue };
        if best.as_ref().map_or(true, |b| frag.diam > b.diam * (1.0 + 1e-12)) {
            best = Some(frag);
        }
    }
    best.ok_or_else(|| GeomError::NoFragment("no *-almost flat arc meets the quarter ball".into()))
}

/// Size checks for a chosen fragment H_Q.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FragmentBounds {
    /// diam H_Q / diam Q_*.
    pub ratio_q_star: f64,
    /// diam H_Q / diam U_Q.
    pub ratio_core: f64,
    /// Upper bound used for `ratio_q_star`: the core's enclosing factor.
    pub upper: f64,
    /// Whether the enclosing factor is within the 1.00001 regime.
    pub fine_regime: bool,
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub core_ok: bool,
}

impl FragmentBounds {
    pub fn ok(&self) -> bool {
        self.lower_ok && self.upper_ok && self.core_ok
    }
}

/// Checks 0.5·diam Q_* ≤ diam H ≤ upper·diam Q_* and 0.49999·diam U ≤ diam H ≤ diam U.
///
/// `enclosing` is the ratio between the radius of the smallest ball about the
/// center of Q_* containing U and the radius of Q_*.
pub fn fragment_bounds(h: &Fragment, q_star: &ClosedBall, core_diam: f64, enclosing: f64) -> FragmentBounds {
    let slack = 1e-9;
    let fine_regime = enclosing <= 1.00001;
    let upper = if fine_regime { 1.00001 } else { enclosing };
    let ratio_q_star = h.diam / q_star.diam();
    let ratio_core = h.diam / core_diam;
    FragmentBounds {
        ratio_q_star,
        ratio_core,
        upper,
        fine_regime,
        lower_ok: ratio_q_star >= 0.5 - slack,
        upper_ok: ratio_q_star <= upper + slack,
        core_ok: ratio_core >= 0.49999 - slack && ratio_core <= 1.0 + slack,
    }
}

/// Efficient subarc G_Q = f([a, b]) of a fragment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Subarc {
    pub arc: ArcRef,
    /// |f(a) − f(b)|.
    pub chord: f64,
    /// diam G / diam H.
    pub ratio: f64,
    /// f([a, b]) ⊆ 0.99999·Q_*.
    pub inside: bool,
    /// f([a, b]) meets 0.25007·Q_* (checked only when H meets (1/4)·Q_*).
    pub meets_quarter: bool,
    pub line: Line,
}

impl Subarc {
    /// |f(a) − f(b)| = diam f([a, b]) and diam G > 0.99993·diam H.
    pub fn efficient(&self) -> bool {
        (self.chord - self.arc.diam).abs() <= 1e-9 * self.arc.diam.max(1.0) && self.ratio > 0.99993
    }
}

/// Values of the affine map t ↦ π(f(t)) at the breakpoints of f|[a, b].
fn breakpoints(c: &Curve, iv: ParamInterval) -> Vec<f64> {
    let mut ts = vec![iv.a];
    for i in 1..c.path().len() - 1 {
        let t = c.vertex_param(i);
        if t > iv.a && t < iv.b {
            ts.push(t);
        }
    }
    ts.push(iv.b);
    ts
}

/// First parameter interval on which π∘f runs from one level to the other
/// while staying between them.
fn crossing(ts: &[f64], vals: &[f64], lo: f64, hi: f64) -> Option<(f64, f64)> {
    // last time the value was ≤ lo (resp. ≥ hi)
    let mut last_lo: Option<f64> = None;
    let mut last_hi: Option<f64> = None;
    let at = |i: usize, level: f64| {
        let (v0, v1) = (vals[i], vals[i + 1]);
        if v1 == v0 {
            ts[i]
        } else {
            let u = ((level - v0) / (v1 - v0)).clamp(0.0, 1.0);
            ts[i] + u * (ts[i + 1] - ts[i])
        }
    };
    if vals[0] <= lo {
        last_lo = Some(ts[0]);
    }
    if vals[0] >= hi {
        last_hi = Some(ts[0]);
    }
    for i in 0..ts.len() - 1 {
        let (v0, v1) = (vals[i], vals[i + 1]);
        // order the level events inside this segment by time
        let mut events: Vec<(f64, bool)> = Vec::new();
        if (v0 - lo) * (v1 - lo) <= 0.0 && v0 != v1 {
            events.push((at(i, lo), true));
        }
        if (v0 - hi) * (v1 - hi) <= 0.0 && v0 != v1 {
            events.push((at(i, hi), false));
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (t, is_lo) in events {
            if is_lo {
                if let Some(h) = last_hi {
                    if last_lo.map_or(true, |l| h > l) {
                        return Some((h, t));
                    }
                }
                last_lo = Some(t);
            } else {
                if let Some(l) = last_lo {
                    if last_hi.map_or(true, |h| l > h) {
                        return Some((l, t));
                    }
                }
                last_hi = Some(t);
            }
        }
        if v1 <= lo {
            last_lo = Some(ts[i + 1]);
        }
        if v1 >= hi {
            last_hi = Some(ts[i + 1]);
        }
    }
    None
}

/// The projection sweep: fit a line to the source arc, project the fragment,
/// trim 0.00003·diam H at both ends and take a crossing subarc, then shrink
/// it to the pair of breakpoints realizing its diameter.
pub fn efficient_subarc(c: &Curve, h: &Fragment, q_star: &ClosedBall) -> Result<Subarc> {
    if h.pieces.is_empty() || !(h.diam > 0.0) {
        return Err(GeomError::Degenerate("empty fragment".into()));
    }
    let s = c.space();
    let source = h.source_arc.interval;
    let arc_pts = c.arc_points(source);
    let fit = fit_line(&arc_pts, s)?;
    if fit.sup > 2f64.powi(-36) * h.diam {
        return Err(GeomError::NotFlat(format!(
            "arc deviates {:.3e} from its best line, above 2^-36·diam H = {:.3e}",
            fit.sup,
            2f64.powi(-36) * h.diam
        )));
    }
    let proj = norming_projection(s, &fit.line);
    let frag_pts = h.points(c);
    let coords: Vec<f64> = frag_pts.iter().map(|x| proj.coordinate(x)).collect();
    let cmin = coords.iter().copied().fold(f64::INFINITY, f64::min);
    let cmax = coords.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let margin = 0.00003 * h.diam;
    let (lo, hi) = (cmin + margin, cmax - margin);
    let ts = breakpoints(c, source);
    let vals: Vec<f64> = ts.iter().map(|&t| proj.coordinate(&c.point_at(t))).collect();
    let (t0, t1) = crossing(&ts, &vals, lo, hi)
        .ok_or_else(|| GeomError::NoFragment("projection never crosses the trimmed range".into()))?;
    let (ta, tb) = (t0.min(t1), t0.max(t1));
    // diameter of a polyline is attained at breakpoints
    let inner = breakpoints(c, ParamInterval::new(ta, tb));
    let pts: Vec<Point> = inner.iter().map(|&t| c.point_at(t)).collect();
    let (mut bi, mut bj, mut bd) = (0, inner.len() - 1, -1.0);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = s.dist(&pts[i], &pts[j]);
            if d > bd {
                (bi, bj, bd) = (i, j, d);
            }
        }
    }
    let iv = ParamInterval::new(inner[bi], inner[bj]);
    let arc = ArcRef::new(c, iv);
    let sub_pts = c.arc_points(iv);
    let inside = sub_pts.iter().all(|x| s.dist(x, &q_star.center) <= 0.99999 * q_star.radius);
    let meets_quarter = c.arc_distance_to(iv, &q_star.center) <= 0.25007 * q_star.radius;
    Ok(Subarc { chord: bd, ratio: arc.diam / h.diam, arc, inside, meets_quarter, line: fit.line })
}
