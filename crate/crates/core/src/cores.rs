//! (J,c)-cores: accretion of finer net balls around a shrunken ball, the
//! lemma checks on core families, the core tree and remainders.

use std::collections::HashSet;

use serde::Serialize;

use crate::banach::NormedSpace;
use crate::curve::Curve;
use crate::error::{GeomError, Result};
use crate::net::{pow2, Ball, BallId, MultiresFamily, NetHierarchy};
use crate::region::{ClosedBall, Region};
use crate::tol::LINE_TOL;
use crate::Point;

/// Core parameters: level stride J ≥ 4 and seed scale 0 < c ≤ 1/5.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoreParams {
    pub j: u32,
    pub c: f64,
}

impl CoreParams {
    pub fn new(j: u32, c: f64) -> Result<Self> {
        if j < 4 {
            return Err(GeomError::Precondition(format!("J must be at least 4, got {j}")));
        }
        if !(c > 0.0 && c <= 0.2) {
            return Err(GeomError::Precondition(format!("c must lie in (0, 1/5], got {c}")));
        }
        Ok(Self { j, c })
    }

    /// The bound (1 + 3/2^J)·c on the core radius in units of 2^{-k}.
    pub fn enclosing_factor(&self) -> f64 {
        (1.0 + 3.0 * pow2(-(self.j as i32))) * self.c
    }
}

/// K = 100 + ⌈log₂ A⌉.
pub fn k_constant(inflation: f64) -> u32 {
    100 + inflation.log2().ceil().max(0.0) as u32
}

/// One ball of a core, tagged with its net level and the accretion round that added it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MemberBall {
    #[serde(rename = "c")]
    pub center: Point,
    #[serde(rename = "r")]
    pub radius: f64,
    pub level: i32,
    #[serde(skip)]
    pub index: usize,
    #[serde(skip)]
    pub round: usize,
}

impl MemberBall {
    pub fn closed(&self) -> ClosedBall {
        ClosedBall::new(self.center.clone(), self.radius)
    }
}

/// The core U_Q of Q = B(x, A·2^{-k}); the first member is Q_* = B(x, c·2^{-k}).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Core {
    pub ball_id: BallId,
    pub level: i32,
    pub q_star: ClosedBall,
    pub members: Vec<MemberBall>,
    #[serde(skip)]
    pub params: CoreParams,
}

impl Core {
    pub fn center(&self) -> &Point {
        &self.q_star.center
    }

    pub fn region(&self) -> Region {
        Region::new(self.members.iter().map(|m| m.closed()).collect())
    }

    /// Radius of the smallest ball about x containing U_Q.
    pub fn enclosing_radius(&self, space: &NormedSpace) -> f64 {
        self.members.iter().map(|m| space.dist(&m.center, &self.q_star.center) + m.radius).fold(0.0, f64::max)
    }

    /// enclosing radius / radius of Q_*.
    pub fn enclosing_ratio(&self, space: &NormedSpace) -> f64 {
        self.enclosing_radius(space) / self.q_star.radius
    }

    /// diam U_Q (for a union of balls, the largest |x_i − x_j| + r_i + r_j).
    pub fn diam(&self, space: &NormedSpace) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.members.iter().enumerate() {
            d = d.max(2.0 * a.radius);
            for b in &self.members[i + 1..] {
                d = d.max(space.dist(&a.center, &b.center) + a.radius + b.radius);
            }
        }
        d
    }

    pub fn intersects(&self, space: &NormedSpace, other: &Core) -> bool {
        self.members.iter().any(|a| other.members.iter().any(|b| a.closed().intersects(space, &b.closed())))
    }

    /// Distance between the two unions (exact for unions of balls).
    pub fn gap(&self, space: &NormedSpace, other: &Core) -> f64 {
        let mut g = f64::INFINITY;
        for a in &self.members {
            for b in &other.members {
                g = g.min(a.closed().gap(space, &b.closed()));
            }
        }
        g
    }

    /// Every member of `other` lies in some member of `self`.
    pub fn contains(&self, space: &NormedSpace, other: &Core, tol: f64) -> bool {
        other.members.iter().all(|b| self.members.iter().any(|a| a.closed().contains_ball(space, &b.closed(), tol)))
    }
}

/// Per-level index of net points sorted by first coordinate.
pub struct CoreBuilder<'a> {
    hierarchy: &'a NetHierarchy,
    params: CoreParams,
    sorted: Vec<Vec<(f64, usize)>>,
}

impl<'a> CoreBuilder<'a> {
    pub fn new(hierarchy: &'a NetHierarchy, params: CoreParams) -> Self {
        let sorted = hierarchy
            .levels
            .iter()
            .map(|l| {
                let mut v: Vec<(f64, usize)> = l.points.iter().enumerate().map(|(i, p)| (p[0], i)).collect();
                v.sort_by(|a, b| a.0.total_cmp(&b.0));
                v
            })
            .collect();
        Self { hierarchy, params, sorted }
    }

    pub fn params(&self) -> CoreParams {
        self.params
    }

    /// Builds U_Q by repeatedly adding every ball B(y, c·2^{-(k+Jj)}), y ∈ X_{k+Jj},
    /// j ≥ 1, that meets the current union, until nothing changes.
    pub fn build(&self, q: &Ball) -> Result<Core> {
        let h = self.hierarchy;
        let s = &h.space;
        let k = q.level;
        let lvl = h.level(k).ok_or_else(|| GeomError::Precondition(format!("level {k} is not in the hierarchy")))?;
        let on_net = lvl.points.get(q.id.index).map_or(false, |p| *p == q.center);
        if !on_net {
            return Err(GeomError::Precondition(format!("center of ball {} is not a point of X_{k}", q.id)));
        }
        let c = self.params.c;
        let stride = self.params.j as i32;
        let q_star = ClosedBall::new(q.center.clone(), c * pow2(-k));
        let mut members = vec![MemberBall {
            center: q.center.clone(),
            radius: q_star.radius,
            level: k,
            index: q.id.index,
            round: 0,
        }];
        let mut seen: HashSet<(i32, usize)> = HashSet::new();
        let mut frontier = 0;
        while frontier < members.len() {
            let m = members[frontier].clone();
            frontier += 1;
            let mut level = k + stride;
            while level <= h.k_max {
                let rho = c * pow2(-level);
                let idx = &self.sorted[(level - h.k_min) as usize];
                let pts = &h.levels[(level - h.k_min) as usize].points;
                let reach = m.radius + rho;
                let lo = idx.partition_point(|e| e.0 < m.center[0] - reach);
                for &(x0, i) in &idx[lo..] {
                    if x0 > m.center[0] + reach {
                        break;
                    }
                    if seen.contains(&(level, i)) {
                        continue;
                    }
                    if s.dist(&pts[i], &m.center) <= reach {
                        seen.insert((level, i));
                        members.push(MemberBall {
                            center: pts[i].clone(),
                            radius: rho,
                            level,
                            index: i,
                            round: m.round + 1,
                        });
                    }
                }
                level += stride;
            }
        }
        Ok(Core { ball_id: q.id, level: k, q_star, members, params: self.params })
    }
}

/// Convenience wrapper around [`CoreBuilder`] for a single ball.
pub fn build_core(q: &Ball, h: &NetHierarchy, params: CoreParams) -> Result<Core> {
    CoreBuilder::new(h, params).build(q)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CoreLemmaReport {
    pub cores: usize,
    /// (ball id, enclosing radius, bound) for shape violations.
    pub shape: Vec<(String, f64, f64)>,
    /// (id, id, gap) for same-level pairs closer than 2^{-k}/2.
    pub separation: Vec<(String, String, f64)>,
    /// (coarse id, fine id) for intersecting cores without containment.
    pub nesting: Vec<(String, String)>,
    /// Largest enclosing radius over (1 + 3/2^J)·c·2^{-k}.
    pub max_shape_ratio: f64,
}

impl CoreLemmaReport {
    pub fn ok(&self) -> bool {
        self.shape.is_empty() && self.separation.is_empty() && self.nesting.is_empty()
    }
}

/// Shape, same-level separation and nesting of a family of cores.
pub fn verify_core_lemma(cores: &[Core], space: &NormedSpace) -> CoreLemmaReport {
    let mut rep = CoreLemmaReport { cores: cores.len(), ..Default::default() };
    let enclosing: Vec<f64> = cores.iter().map(|c| c.enclosing_radius(space)).collect();
    for (core, &e) in cores.iter().zip(&enclosing) {
        let scale = pow2(-core.level);
        let bound = core.params.enclosing_factor() * scale;
        rep.max_shape_ratio = rep.max_shape_ratio.max(e / bound);
        let seeded = core.members.first().map_or(false, |m| m.closed() == core.q_star);
        if !seeded || e > bound * (1.0 + 1e-12) || e > 0.25 * scale {
            rep.shape.push((core.ball_id.to_string(), e, bound));
        }
    }
    let mut order: Vec<usize> = (0..cores.len()).collect();
    order.sort_by(|&a, &b| cores[a].center()[0].total_cmp(&cores[b].center()[0]));
    let widest = enclosing.iter().copied().fold(0.0, f64::max);
    let coarsest = cores.iter().map(|c| c.level).min().unwrap_or(0);
    let window = 2.0 * widest + 0.5 * pow2(-coarsest);
    for (pos, &a) in order.iter().enumerate() {
        for &b in &order[pos + 1..] {
            let (ca, cb) = (&cores[a], &cores[b]);
            if cb.center()[0] - ca.center()[0] > window {
                break;
            }
            let d = space.dist(ca.center(), cb.center());
            if ca.level == cb.level {
                let need = 0.5 * pow2(-ca.level);
                if d - enclosing[a] - enclosing[b] >= need {
                    continue;
                }
                let g = ca.gap(space, cb);
                if g < need - LINE_TOL * need {
                    rep.separation.push((ca.ball_id.to_string(), cb.ball_id.to_string(), g));
                }
            } else {
                if d > enclosing[a] + enclosing[b] {
                    continue;
                }
                let (coarse, fine) = if ca.level < cb.level { (ca, cb) } else { (cb, ca) };
                if coarse.intersects(space, fine) && !coarse.contains(space, fine, LINE_TOL * coarse.q_star.radius) {
                    rep.nesting.push((coarse.ball_id.to_string(), fine.ball_id.to_string()));
                }
            }
        }
    }
    rep
}

/// Checks diam 2λQ' ≤ 2^{-84}·diam Q_* and 2λQ' ∩ 0.99999·Q_* ≠ ∅ ⇒ 2λQ' ⊆ Q_* for a
/// parent at level k with c = 2^{-12} and a child ball at level m > k.
pub fn scale_gap_check(
    space: &NormedSpace,
    parent_center: &[f64],
    k: i32,
    child_center: &[f64],
    m: i32,
    inflation: f64,
    lambda: f64,
) -> (bool, bool) {
    let q_star = ClosedBall::new(parent_center.to_vec(), pow2(-12 - k));
    let child = ClosedBall::new(child_center.to_vec(), 2.0 * lambda * inflation * pow2(-m));
    let diam_ok = child.diam() <= pow2(-84) * q_star.diam();
    let inner = q_star.scaled(0.99999);
    let containment_ok = !child.intersects(space, &inner) || q_star.contains_ball(space, &child, 0.0);
    (diam_ok, containment_ok)
}

/// Appendix-style ball chain hypotheses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ChainHypothesis {
    /// Some initial segment is not chain connected.
    Chain,
    /// r_i > ξ^{-k_i}·r₀.
    Decay,
    /// Two balls of one level are closer than 3ξ^{-k}·r₀.
    Separation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainReport {
    pub violated: Option<ChainHypothesis>,
    /// Index of the unique ball of minimal level (when the hypotheses hold).
    pub min_index: Option<usize>,
    /// Whether the minimal level is attained once.
    pub unique_min: bool,
    /// Whether the union lies in B(x_M, (1+3/ξ)·ξ^{-k_M}·r₀).
    pub contained: bool,
    /// Largest |x_i − x_M| + r_i over the containment radius.
    pub max_ratio: f64,
}

impl ChainReport {
    pub fn ok(&self) -> bool {
        self.violated.is_none() && self.unique_min && self.contained
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Checks the chain, decay and separation hypotheses; when they hold, locates
/// the ball of minimal level and checks the union containment.
pub fn verify_ball_chain(space: &NormedSpace, balls: &[ClosedBall], levels: &[i32], xi: f64, r0: f64) -> Result<ChainReport> {
    if balls.len() != levels.len() {
        return Err(GeomError::Precondition("one level per ball is required".into()));
    }
    if balls.is_empty() {
        return Err(GeomError::Empty("ball list"));
    }
    if !(xi > 6.0) || !(r0 > 0.0) {
        return Err(GeomError::Precondition(format!("need ξ > 6 and r₀ > 0, got ξ = {xi}, r₀ = {r0}")));
    }
    let scale = |k: i32| xi.powi(-k) * r0;
    let fail = |h| ChainReport { violated: Some(h), min_index: None, unique_min: false, contained: false, max_ratio: f64::NAN };
    let n = balls.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut components = 0usize;
    for j in 0..n {
        components += 1;
        for i in 0..j {
            if balls[i].intersects(space, &balls[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                    components -= 1;
                }
            }
        }
        if components != 1 {
            return Ok(fail(ChainHypothesis::Chain));
        }
    }
    for (b, &k) in balls.iter().zip(levels) {
        if b.radius > scale(k) * (1.0 + 1e-12) {
            return Ok(fail(ChainHypothesis::Decay));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if levels[i] == levels[j] && balls[i].gap(space, &balls[j]) < 3.0 * scale(levels[i]) * (1.0 - 1e-12) {
                return Ok(fail(ChainHypothesis::Separation));
            }
        }
    }
    let kmin = *levels.iter().min().unwrap();
    let minima: Vec<usize> = (0..n).filter(|&i| levels[i] == kmin).collect();
    let m = minima[0];
    let radius = (1.0 + 3.0 / xi) * scale(kmin);
    let max_ratio = balls.iter().map(|b| (space.dist(&b.center, &balls[m].center) + b.radius) / radius).fold(0.0, f64::max);
    Ok(ChainReport {
        violated: None,
        min_index: Some(m),
        unique_min: minima.len() == 1,
        contained: max_ratio <= 1.0 + 1e-12,
        max_ratio,
    })
}

/// A core with its place in the tree.
#[derive(Clone, Debug, Serialize)]
pub struct CoreNode {
    pub core: Core,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub depth: usize,
}

/// Cores of a selected subfamily ordered by inclusion.
#[derive(Clone, Debug, Serialize)]
pub struct CoreForest {
    pub nodes: Vec<CoreNode>,
    pub roots: Vec<usize>,
    /// Pairs (coarse, fine) that intersect without nesting; empty when the core lemma holds.
    pub anomalies: Vec<(usize, usize)>,
}

impl CoreForest {
    pub fn descendants(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![i];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(self.nodes[n].children.iter().rev());
        }
        out
    }

    pub fn max_depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }
}

/// Builds cores for `selected` and links each to the finest strictly coarser core containing it.
pub fn build_core_tree(family: &MultiresFamily, selected: &[BallId], params: CoreParams) -> Result<CoreForest> {
    let stride = params.j as i32;
    if let Some(first) = selected.first() {
        let j = first.level.rem_euclid(stride);
        if let Some(bad) = selected.iter().find(|id| id.level.rem_euclid(stride) != j) {
            return Err(GeomError::Precondition(format!(
                "ball {bad} is at a level not congruent to {j} mod {stride}"
            )));
        }
    }
    let builder = CoreBuilder::new(&family.hierarchy, params);
    let mut ids = selected.to_vec();
    ids.sort();
    ids.dedup();
    let cores = ids
        .iter()
        .map(|id| {
            let ball = family.ball(*id).ok_or_else(|| GeomError::Precondition(format!("unknown ball {id}")))?;
            builder.build(ball)
        })
        .collect::<Result<Vec<_>>>()?;
    forest_from_cores(cores, family.space())
}

/// Links prebuilt cores into a forest by inclusion.
pub fn forest_from_cores(cores: Vec<Core>, space: &NormedSpace) -> Result<CoreForest> {
    let enclosing: Vec<f64> = cores.iter().map(|c| c.enclosing_radius(space)).collect();
    let mut parent: Vec<Option<usize>> = vec![None; cores.len()];
    let mut anomalies = Vec::new();
    for i in 0..cores.len() {
        let mut best: Option<usize> = None;
        for p in 0..cores.len() {
            if cores[p].level >= cores[i].level {
                continue;
            }
            if space.dist(cores[p].center(), cores[i].center()) > enclosing[p] + enclosing[i] {
                continue;
            }
            if !cores[p].intersects(space, &cores[i]) {
                continue;
            }
            if !cores[p].contains(space, &cores[i], LINE_TOL * cores[p].q_star.radius) {
                anomalies.push((p, i));
                continue;
            }
            if best.map_or(true, |b| cores[p].level > cores[b].level) {
                best = Some(p);
            }
        }
        parent[i] = best;
    }
    let mut nodes: Vec<CoreNode> = cores
        .into_iter()
        .zip(&parent)
        .map(|(core, &parent)| CoreNode { core, parent, children: Vec::new(), depth: 0 })
        .collect();
    for i in 0..nodes.len() {
        if let Some(p) = parent[i] {
            nodes[p].children.push(i);
        }
    }
    let roots: Vec<usize> = (0..nodes.len()).filter(|&i| parent[i].is_none()).collect();
    let mut stack: Vec<(usize, usize)> = roots.iter().map(|&r| (r, 0)).collect();
    while let Some((n, d)) = stack.pop() {
        nodes[n].depth = d;
        for &c in &nodes[n].children {
            stack.push((c, d + 1));
        }
    }
    Ok(CoreForest { nodes, roots, anomalies })
}

/// R_Q = U_Q ∖ ⋃ U_{Q^i}, kept as the core together with the removed child cores.
#[derive(Clone, Debug)]
pub struct Remainder {
    pub core: Region,
    pub holes: Vec<Region>,
    pub measure: f64,
    pub ell_u: f64,
}

impl Remainder {
    pub fn contains(&self, space: &NormedSpace, x: &[f64]) -> bool {
        self.core.contains(space, x) && !self.holes.iter().any(|h| h.contains(space, x))
    }
}

/// ℓ(R_Q) = ℓ(Γ ∩ U_Q) − Σ ℓ(Γ ∩ U_{Q^i}), clamped at 0.
pub fn remainder(forest: &CoreForest, node: usize, c: &Curve) -> Remainder {
    let n = &forest.nodes[node];
    let core = n.core.region();
    let ell_u = c.restricted_measure(&core);
    let holes: Vec<Region> = n.children.iter().map(|&ch| forest.nodes[ch].core.region()).collect();
    let taken: f64 = holes.iter().map(|h| c.restricted_measure(h)).sum();
    Remainder { measure: (ell_u - taken).max(0.0), core, holes, ell_u }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{build_nets, make_family};

    fn e2() -> NormedSpace {
        NormedSpace::euclidean(2)
    }

    fn segment_samples(n: usize) -> Vec<Point> {
        (0..=n).map(|i| vec![i as f64 / n as f64, 0.0]).collect()
    }

    #[test]
    fn isolated_point_core_is_q_star() {
        let s = e2();
        let h = build_nets(&[vec![0.0, 0.0]], 0, 12, &s).unwrap();
        let fam = make_family(h, 4.0).unwrap();
        let core = build_core(&fam.balls[0], &fam.hierarchy, CoreParams::new(4, 0.2).unwrap()).unwrap();
        // the same point reappears at finer levels and is accreted, but stays inside Q_*
        assert!(core.members.iter().all(|m| m.center == vec![0.0, 0.0]));
        assert_eq!(core.enclosing_radius(&s), core.q_star.radius);
    }

    #[test]
    fn one_finer_ball() {
        let s = e2();
        let mut h = build_nets(&[vec![0.0, 0.0]], 0, 4, &s).unwrap();
        h.levels[4].points.push(vec![0.21, 0.0]);
        h.levels[4].sample_ids.push(1);
        let fam = make_family(h, 4.0).unwrap();
        let params = CoreParams::new(4, 0.2).unwrap();
        let core = build_core(&fam.balls[0], &fam.hierarchy, params).unwrap();
        let far: Vec<_> = core.members.iter().filter(|m| m.center != vec![0.0, 0.0]).collect();
        assert_eq!(far.len(), 1);
        assert_eq!(far[0].radius, 0.2 / 16.0);
    }

    #[test]
    fn dense_segment_shape() {
        let s = e2();
        let samples = segment_samples(4096);
        let h = build_nets(&samples, 0, 12, &s).unwrap();
        let fam = make_family(h, 4.0).unwrap();
        let params = CoreParams::new(4, 0.2).unwrap();
        let builder = CoreBuilder::new(&fam.hierarchy, params);
        let cores: Vec<Core> = fam.balls.iter().filter(|b| b.level % 4 == 0).map(|b| builder.build(b).unwrap()).collect();
        for c in &cores {
            assert!(c.enclosing_radius(&s) <= (1.0 + 3.0 / 16.0) * 0.2 * pow2(-c.level) + 1e-15);
        }
        let rep = verify_core_lemma(&cores, &s);
        assert!(rep.ok(), "{rep:?}");
    }

    #[test]
    fn invalid_params() {
        assert!(CoreParams::new(3, 0.1).is_err());
        assert!(CoreParams::new(4, 0.3).is_err());
        assert_eq!(k_constant(240.0), 108);
        assert_eq!(k_constant(4.0), 102);
    }

    #[test]
    fn chain_examples() {
        let s = e2();
        let one = verify_ball_chain(&s, &[ClosedBall::new(vec![0.0, 0.0], 1.0)], &[0], 16.0, 1.0).unwrap();
        assert!(one.ok());
        assert_eq!(one.min_index, Some(0));
        let two = verify_ball_chain(
            &s,
            &[ClosedBall::new(vec![0.0, 0.0], 1.0), ClosedBall::new(vec![0.9, 0.0], 1.0 / 16.0)],
            &[0, 1],
            16.0,
            1.0,
        )
        .unwrap();
        assert!(two.ok());
        assert!(two.max_ratio <= 1.0);
        let close = verify_ball_chain(
            &s,
            &[ClosedBall::new(vec![0.0, 0.0], 1.0), ClosedBall::new(vec![1.05, 0.0], 1.0 / 16.0), ClosedBall::new(vec![1.15, 0.0], 1.0 / 16.0)],
            &[0, 1, 1],
            16.0,
            1.0,
        )
        .unwrap();
        assert_eq!(close.violated, Some(ChainHypothesis::Separation));
    }

    #[test]
    fn tree_from_two_levels() {
        let s = e2();
        let samples = segment_samples(1024);
        let h = build_nets(&samples, 0, 10, &s).unwrap();
        let fam = make_family(h, 4.0).unwrap();
        let params = CoreParams::new(4, 0.2).unwrap();
        let coarse = fam.balls_at(0)[0].id;
        let fine: Vec<BallId> = fam.balls_at(4).iter().map(|b| b.id).collect();
        let mut sel = vec![coarse];
        sel.extend(fine);
        let forest = build_core_tree(&fam, &sel, params).unwrap();
        assert!(forest.anomalies.is_empty());
        let root = forest.nodes.iter().position(|n| n.core.ball_id == coarse).unwrap();
        assert!(forest.roots.contains(&root));
        assert!(!forest.nodes[root].children.is_empty());
        for &ch in &forest.nodes[root].children {
            assert_eq!(forest.nodes[ch].depth, 1);
        }
        assert!(build_core_tree(&fam, &[coarse, fam.balls_at(1)[0].id], params).is_err());
    }
}
