//! Arcs in a window, their flatness classification and 𝓑-ball detection.

use serde::Serialize;

use super::{Curve, ParamInterval};
use crate::beta::{beta_of_points, diameter, self_beta};
use crate::error::{GeomError, Result};
use crate::net::{net_ball, Ball};
use crate::tol::BETA_FLOOR;
use crate::Point;

/// Window scaling factor λ. Only 1 and 5 are accepted unless explicitly unlocked.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Lambda(f64);

impl Lambda {
    pub const ONE: Lambda = Lambda(1.0);
    pub const FIVE: Lambda = Lambda(5.0);

    pub fn new(value: f64, allow_any: bool) -> Result<Self> {
        if value == 1.0 || value == 5.0 || (allow_any && value >= 1.0 && value.is_finite()) {
            Ok(Lambda(value))
        } else {
            Err(GeomError::Precondition(format!("λ = {value} is not in {{1, 5}}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Flatness thresholds ε₁ (for 𝓑 balls) and ε₂ (for almost flat arcs).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Flatness {
    pub eps1: f64,
    pub eps2: f64,
}

/// ε₂ used for desk-scale experiments.
pub const LAB_EPS2: f64 = 0.05;

impl Flatness {
    /// ε₁ = 1/(126A), ε₂ = 2^{-55}·ε₁/A.
    pub fn asymptotic(inflation: f64) -> Self {
        let eps1 = 1.0 / (126.0 * inflation);
        Self { eps1, eps2: 2f64.powi(-55) * eps1 / inflation }
    }

    /// ε₁ = 1/(126A), ε₂ = 0.05.
    pub fn lab(inflation: f64) -> Self {
        Self { eps1: 1.0 / (126.0 * inflation), eps2: LAB_EPS2 }
    }
}

/// An arc f|[a, b] with its image diameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ArcRef {
    pub interval: ParamInterval,
    pub diam: f64,
}

impl ArcRef {
    pub fn new(curve: &Curve, interval: ParamInterval) -> Self {
        Self { interval, diam: curve.arc_diam(interval) }
    }

    pub fn start(&self) -> f64 {
        self.interval.a
    }

    pub fn end(&self) -> f64 {
        self.interval.b
    }
}

fn meets(ivs: &[ParamInterval], arc: &ParamInterval) -> bool {
    ivs.iter().any(|iv| iv.a <= arc.b && iv.b >= arc.a)
}

/// Λ(λQ): components of f^{-1}(2λQ) whose image meets λQ.
pub fn lambda_arcs(c: &Curve, q: &Ball, lambda: Lambda) -> Vec<ArcRef> {
    let outer = c.clip_ball(&q.scaled(2.0 * lambda.value()));
    if outer.is_empty() {
        return Vec::new();
    }
    let inner = c.clip_ball(&q.scaled(lambda.value()));
    outer
        .into_iter()
        .filter(|iv| !iv.is_degenerate() && meets(&inner, iv))
        .map(|iv| ArcRef::new(c, iv))
        .collect()
}

/// β(τ): β of the arc's image with the image itself as window.
pub fn arc_beta(c: &Curve, interval: ParamInterval) -> Result<f64> {
    if !(interval.b > interval.a) {
        return Err(GeomError::Precondition(format!("arc [{}, {}] is empty", interval.a, interval.b)));
    }
    self_beta(&c.arc_points(interval), c.space())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArcClassification {
    pub lambda: f64,
    pub lambda_set: Vec<ArcRef>,
    /// β(τ) for each arc of `lambda_set`.
    pub betas: Vec<f64>,
    /// Indices into `lambda_set`.
    pub flat: Vec<usize>,
    pub star_flat: Vec<usize>,
    pub dominant: Vec<usize>,
    /// β_Γ(Q).
    pub beta_gamma: f64,
    /// β_{Λ(λQ)}(2λQ).
    pub beta_lambda: f64,
    /// β_{S*(λQ)}(2λQ).
    pub beta_star: f64,
}

impl ArcClassification {
    pub fn is_flat(&self, i: usize) -> bool {
        self.flat.contains(&i)
    }

    pub fn flat_arcs(&self) -> impl Iterator<Item = &ArcRef> {
        self.flat.iter().map(|&i| &self.lambda_set[i])
    }

    pub fn star_arcs(&self) -> impl Iterator<Item = &ArcRef> {
        self.star_flat.iter().map(|&i| &self.lambda_set[i])
    }
}

fn union_points(c: &Curve, arcs: &[ArcRef], pick: &[usize]) -> Vec<Point> {
    pick.iter().flat_map(|&i| c.arc_points(arcs[i].interval)).collect()
}

/// Splits Λ(λQ) into almost flat, *-almost flat and dominant arcs.
///
/// Numerically zero β values (≤ `BETA_FLOOR`) are treated as 0 on both sides of
/// each comparison.
pub fn classify(c: &Curve, q: &Ball, lambda: Lambda, eps2: f64) -> Result<ArcClassification> {
    if !(eps2 > 0.0) {
        return Err(GeomError::Precondition(format!("ε₂ must be positive, got {eps2}")));
    }
    let s = c.space();
    let lambda_set = lambda_arcs(c, q, lambda);
    let betas = lambda_set.iter().map(|a| arc_beta(c, a.interval)).collect::<Result<Vec<_>>>()?;
    let gamma_pts = c.image_points(&c.clip_ball(&q.closed()));
    let beta_gamma = beta_of_points(&gamma_pts, q.diam(), s)?.beta;
    let outer_diam = 2.0 * lambda.value() * q.diam();
    let all: Vec<usize> = (0..lambda_set.len()).collect();
    let beta_lambda = beta_of_points(&union_points(c, &lambda_set, &all), outer_diam, s)?.beta;
    let flat: Vec<usize> = all.iter().copied().filter(|&i| betas[i] <= eps2 * beta_gamma + BETA_FLOOR).collect();
    let star_flat: Vec<usize> =
        all.iter().copied().filter(|&i| betas[i] <= 50.0 * eps2 * beta_lambda + BETA_FLOOR).collect();
    let dominant: Vec<usize> = all.iter().copied().filter(|i| !flat.contains(i)).collect();
    let beta_star = beta_of_points(&union_points(c, &lambda_set, &star_flat), outer_diam, s)?.beta;
    Ok(ArcClassification {
        lambda: lambda.value(),
        lambda_set,
        betas,
        flat,
        star_flat,
        dominant,
        beta_gamma,
        beta_lambda,
        beta_star,
    })
}

/// Which clause of the 𝓑-ball definition failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BClause {
    /// β_Γ(Q) = 0 or Γ ⊆ 14Q.
    I,
    /// An arc meeting the net ball is not almost flat.
    II,
    /// β_{S*}(2λQ) ≤ ε₁·β_Λ(2λQ).
    III,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BReport {
    pub is_b: bool,
    pub clause_i: bool,
    pub clause_ii: bool,
    pub clause_iii: bool,
    /// First failing clause, if any.
    pub failed: Option<BClause>,
    /// Some almost flat arc meeting the net ball contains f(0) or f(1).
    pub b0_excluded: bool,
    /// Arcs (indices into the Λ set) that meet the net ball.
    pub net_ball_arcs: Vec<usize>,
    pub classification: ArcClassification,
}

/// Evaluates the three 𝓑-ball clauses and the endpoint exclusion flag.
pub fn is_b_ball(c: &Curve, q: &Ball, lambda: Lambda, flat: Flatness) -> Result<BReport> {
    let cls = classify(c, q, lambda, flat.eps2)?;
    let s = c.space();
    let reach = c.vertices().iter().map(|v| s.dist(v, &q.center)).fold(0.0, f64::max);
    let clause_i = cls.beta_gamma > BETA_FLOOR && reach > 14.0 * q.radius;
    let nb = c.clip_ball(&net_ball(q).closed());
    let net_ball_arcs: Vec<usize> =
        (0..cls.lambda_set.len()).filter(|&i| meets(&nb, &cls.lambda_set[i].interval)).collect();
    let clause_ii = net_ball_arcs.iter().all(|&i| cls.is_flat(i));
    let clause_iii = cls.beta_star > BETA_FLOOR && cls.beta_star > flat.eps1 * cls.beta_lambda;
    let failed = if !clause_i {
        Some(BClause::I)
    } else if !clause_ii {
        Some(BClause::II)
    } else if !clause_iii {
        Some(BClause::III)
    } else {
        None
    };
    let touches_end = |iv: &ParamInterval| iv.a <= 0.0 || iv.b >= 1.0;
    let b0_excluded = net_ball_arcs.iter().any(|&i| cls.is_flat(i) && touches_end(&cls.lambda_set[i].interval));
    Ok(BReport {
        is_b: failed.is_none(),
        clause_i,
        clause_ii,
        clause_iii,
        failed,
        b0_excluded,
        net_ball_arcs,
        classification: cls,
    })
}

/// Largest distance from the arc image to its minimax line, relative to Diam τ.
pub fn arc_line_deviation(c: &Curve, interval: ParamInterval) -> Result<f64> {
    let pts = c.arc_points(interval);
    let d = diameter(&pts, c.space());
    if d == 0.0 {
        return Ok(0.0);
    }
    Ok(beta_of_points(&pts, d, c.space())?.achieved_sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banach::NormedSpace;
    use crate::net::BallId;

    fn e2() -> NormedSpace {
        NormedSpace::euclidean(2)
    }

    fn ball(center: Vec<f64>, radius: f64) -> Ball {
        Ball { id: BallId { level: 0, index: 0 }, center, level: 0, radius }
    }

    /// Horizontal pass through the origin, a detour outside 2λQ, then a vertical pass.
    pub(crate) fn plus_sign(arm: f64) -> Curve {
        let far = 3.0 * arm;
        Curve::new(
            e2(),
            vec![
                vec![-arm, 0.0],
                vec![arm, 0.0],
                vec![far, 0.0],
                vec![far, far],
                vec![0.0, far],
                vec![0.0, arm],
                vec![0.0, -arm],
            ],
            false,
        )
        .unwrap()
    }

    #[test]
    fn line_through_center_gives_one_arc() {
        let c = Curve::new(e2(), vec![vec![-10.0, 0.0], vec![10.0, 0.0]], false).unwrap();
        let arcs = lambda_arcs(&c, &ball(vec![0.0, 0.0], 1.0), Lambda::ONE);
        assert_eq!(arcs.len(), 1);
        assert!((arcs[0].diam - 4.0).abs() < 1e-12);
        assert!(lambda_arcs(&c, &ball(vec![0.0, 5.0], 1.0), Lambda::ONE).is_empty());
    }

    #[test]
    fn plus_sign_has_two_flat_arcs_and_is_b() {
        let c = plus_sign(20.0);
        let q = ball(vec![0.0, 0.0], 1.0);
        let arcs = lambda_arcs(&c, &q, Lambda::ONE);
        assert_eq!(arcs.len(), 2);
        let cls = classify(&c, &q, Lambda::ONE, LAB_EPS2).unwrap();
        assert!(cls.beta_gamma > 0.1);
        assert_eq!(cls.flat.len(), 2);
        assert!(cls.dominant.is_empty());
        let rep = is_b_ball(&c, &q, Lambda::ONE, Flatness::lab(4.0)).unwrap();
        assert!(rep.is_b, "{rep:?}");
        assert!(!rep.b0_excluded);
    }

    #[test]
    fn straight_curve_is_not_b() {
        let c = Curve::new(e2(), vec![vec![-30.0, 0.0], vec![30.0, 0.0]], false).unwrap();
        let q = ball(vec![0.0, 0.0], 1.0);
        let cls = classify(&c, &q, Lambda::ONE, LAB_EPS2).unwrap();
        assert_eq!(cls.flat, vec![0]);
        let rep = is_b_ball(&c, &q, Lambda::ONE, Flatness::lab(4.0)).unwrap();
        assert_eq!(rep.failed, Some(BClause::I));
    }

    #[test]
    fn bent_arc_is_dominant() {
        let c = Curve::new(e2(), vec![vec![-30.0, -30.0], vec![0.0, 0.0], vec![30.0, -30.0]], false).unwrap();
        let q = ball(vec![0.0, -0.2], 1.0);
        let cls = classify(&c, &q, Lambda::ONE, LAB_EPS2).unwrap();
        assert_eq!(cls.dominant, vec![0]);
        let rep = is_b_ball(&c, &q, Lambda::ONE, Flatness::lab(4.0)).unwrap();
        assert_eq!(rep.failed, Some(BClause::II));
    }

    #[test]
    fn lambda_values() {
        assert!(Lambda::new(2.0, false).is_err());
        assert_eq!(Lambda::new(2.0, true).unwrap().value(), 2.0);
        assert_eq!(Lambda::new(5.0, false).unwrap(), Lambda::FIVE);
    }

    #[test]
    fn asymptotic_constants() {
        let f = Flatness::asymptotic(240.0);
        assert!((f.eps1 - 1.0 / 30240.0).abs() < 1e-18);
        assert_eq!(f.eps2, 2f64.powi(-55) / 30240.0 / 240.0);
    }
}
