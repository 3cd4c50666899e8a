//! Property suites runnable from the command line. Each property draws its
//! cases from a sub-seed of the run seed and reports its worst deviation.

use std::time::Instant;

use jones_core::banach::{dot, duality_map, dist_to_line, j_projection, verify_counting, Line, NormedSpace};
use jones_core::beta::{beta_monotone_check, beta_number};
use jones_core::cores::{verify_ball_chain, verify_core_lemma, Core, CoreBuilder, CoreParams};
use jones_core::martingale::{
    all_weights, build_weights, max_ratio, q_hypothesis_scan, stacked_weight, verify_bounds, verify_conservation,
    CellKind, CellRef, REMAINDER_WEIGHT,
};
use jones_core::net::{build_nets, make_family, pow2};
use jones_core::region::ClosedBall;
use jones_core::Point;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::fixtures;
use crate::generators::{generate, CurveSpec};
use crate::pipeline::run_pipeline;
use crate::LabError;

pub const SUITES: [&str; 8] = ["banach", "net", "beta", "curve", "cores", "chain", "martingale", "lab"];

/// A deliberately broken check, used to confirm that the runner reports failures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Checks projections against half the true Lipschitz constant.
    Lipschitz,
}

impl std::str::FromStr for Fault {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self, LabError> {
        match s {
            "lipschitz" => Ok(Fault::Lipschitz),
            _ => Err(LabError::BadInput(format!("unknown fault {s:?}; known: lipschitz"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub suite: &'static str,
    pub property: String,
    pub cases: usize,
    pub violations: usize,
    /// Largest deviation seen (0 when the property is boolean).
    pub worst: f64,
    pub tol: f64,
    pub seconds: f64,
    pub note: String,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.cases > 0
    }
}

struct Tally {
    suite: &'static str,
    property: String,
    tol: f64,
    cases: usize,
    violations: usize,
    worst: f64,
    start: Instant,
    note: String,
}

impl Tally {
    fn new(suite: &'static str, property: &str, tol: f64) -> Self {
        Self {
            suite,
            property: property.to_string(),
            tol,
            cases: 0,
            violations: 0,
            worst: 0.0,
            start: Instant::now(),
            note: String::new(),
        }
    }

    /// Records a deviation: a violation when it exceeds the tolerance.
    fn excess(&mut self, dev: f64) {
        self.cases += 1;
        if dev.is_nan() || dev > self.tol {
            self.violations += 1;
        }
        if !dev.is_nan() {
            self.worst = self.worst.max(dev);
        } else {
            self.worst = f64::NAN;
        }
    }

    fn check(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    fn done(self) -> PropertyResult {
        PropertyResult {
            suite: self.suite,
            property: self.property,
            cases: self.cases,
            violations: self.violations,
            worst: self.worst,
            tol: self.tol,
            seconds: self.start.elapsed().as_secs_f64(),
            note: self.note,
        }
    }
}

/// Case counts used by `verify`; the acceptance run passes larger ones.
#[derive(Clone, Copy, Debug)]
pub struct Counts {
    pub triples: usize,
    pub monotone: usize,
    pub net_sets: usize,
    pub counting: usize,
    pub hierarchies: usize,
    pub chains: usize,
    pub broken_chains: usize,
    pub forests: usize,
    pub overlap_samples: usize,
}

impl Counts {
    pub const QUICK: Counts = Counts {
        triples: 1000,
        monotone: 200,
        net_sets: 10,
        counting: 30,
        hierarchies: 5,
        chains: 30,
        broken_chains: 9,
        forests: 8,
        overlap_samples: 2000,
    };
    pub const FULL: Counts = Counts {
        triples: 10_000,
        monotone: 1000,
        net_sets: 50,
        counting: 100,
        hierarchies: 50,
        chains: 100,
        broken_chains: 20,
        forests: 20,
        overlap_samples: 10_000,
    };
}

fn random_point(rng: &mut ChaCha8Rng, d: usize) -> Point {
    (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect()
}

fn smooth_space(rng: &mut ChaCha8Rng) -> NormedSpace {
    let d = rng.gen_range(2..5);
    let p = match rng.gen_range(0..5) {
        0 => 1.5,
        1 => 2.0,
        2 => 3.0,
        3 => 7.0,
        _ => rng.gen_range(1.1..12.0),
    };
    NormedSpace::lp(d, p).expect("valid exponent")
}

/// Random line with a direction of norm at least 1e-3.
fn random_line(rng: &mut ChaCha8Rng, s: &NormedSpace) -> Line {
    loop {
        let b = random_point(rng, s.dim());
        let v = random_point(rng, s.dim());
        if s.norm(&v) >= 1e-3 {
            if let Ok(l) = Line::from_direction(s, b, &v) {
                return l;
            }
        }
    }
}

/// Lipschitz, idempotence and the distance sandwich of J-projections, the
/// duality identities and the ℓ_1² closed form.
pub fn banach_suite(seed: u64, n: usize, fault: Option<Fault>) -> Vec<PropertyResult> {
    let mut out = Vec::new();
    let lip_factor = if fault == Some(Fault::Lipschitz) { 0.5 } else { 1.0 };
    let mut rng = fixtures::rng(seed, 1);
    let mut lip = Tally::new("banach", "projection_lipschitz", 1e-9);
    let mut idem = Tally::new("banach", "projection_idempotent", 1e-9);
    let mut sand = Tally::new("banach", "dist_sandwich", 1e-9);
    for _ in 0..n {
        let s = smooth_space(&mut rng);
        let l = random_line(&mut rng, &s);
        let pr = j_projection(&s, &l, 0.0).expect("smooth norm");
        let (x, y) = (random_point(&mut rng, s.dim()), random_point(&mut rng, s.dim()));
        let (px, py) = (pr.project(&x), pr.project(&y));
        lip.excess(s.dist(&px, &py) - lip_factor * s.dist(&x, &y));
        idem.excess(s.dist(&pr.project(&px), &px));
        let dl = dist_to_line(&s, &x, &l);
        let e = s.dist(&x, &px);
        sand.excess((dl - e).max(e - 2.0 * dl));
    }
    out.extend([lip.done(), idem.done(), sand.done()]);
    let mut dual = Tally::new("banach", "duality_identities", 1e-9);
    for _ in 0..n {
        let s = smooth_space(&mut rng);
        let x = random_point(&mut rng, s.dim());
        let j = duality_map(&s, &x).expect("smooth norm");
        let nx = s.norm(&x);
        let a = (s.dual_norm(&j) - nx).abs() / (1.0 + nx);
        let b = (dot(&j, &x) - nx * nx).abs() / (1.0 + nx * nx);
        dual.excess(a.max(b));
    }
    out.push(dual.done());
    let mut fam = Tally::new("banach", "l1_plane_family", 1e-9);
    let s = NormedSpace::lp(2, 1.0).expect("valid exponent");
    let dirs = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
    for _ in 0..n {
        let sp: f64 = rng.gen_range(-0.5..=0.5);
        let axis = rng.gen_range(0..4);
        let (x, y, b) = (random_point(&mut rng, 2), random_point(&mut rng, 2), random_point(&mut rng, 2));
        let l = Line::new(&s, b.clone(), dirs[axis].to_vec()).expect("unit axis");
        let pr = j_projection(&s, &l, sp).expect("|s| ≤ 1/2");
        let (px, py) = (pr.project(&x), pr.project(&y));
        let mut dev = (s.dist(&px, &py) - lip_factor * s.dist(&x, &y)).max(s.dist(&pr.project(&px), &px));
        if axis == 0 {
            let k = sp / (1.0 - sp.abs());
            dev = dev.max((px[0] - (x[0] - k * (x[1] - b[1]))).abs()).max((px[1] - b[1]).abs());
        }
        fam.excess(dev);
    }
    out.push(fam.done());
    out
}

/// Net invariants on clustered sample sets and the counting bound near lines.
pub fn net_suite(seed: u64, sets: usize, configs: usize) -> Vec<PropertyResult> {
    let mut rng = fixtures::rng(seed, 2);
    let mut nets = Tally::new("net", "net_invariants", 0.0);
    for i in 0..sets {
        let p = [1.0, 1.5, 2.0, 3.0, f64::INFINITY][i % 5];
        let s = NormedSpace::lp(2, p).expect("valid exponent");
        let pts = fixtures::clustered_samples(&mut rng, 200);
        let h = build_nets(&pts, -1, 9, &s).expect("nonempty samples");
        nets.check(h.verify(&pts).ok());
    }
    let mut count = Tally::new("net", "counting_bound", 0.0);
    let mut rejected = 0;
    while count.cases < configs {
        let p = [1.5, 2.0, 3.0][count.cases % 3];
        let s = NormedSpace::lp(2, p).expect("valid exponent");
        let (v, p1, p2) = fixtures::near_collinear(&mut rng, &s, 1.0);
        match verify_counting(&s, &v, 1.0, &p1, &p2) {
            Ok(rep) => {
                count.excess(if rep.order_ok && rep.sandwich_ok { rep.max_excess.max(0.0) } else { f64::INFINITY })
            }
            Err(_) => rejected += 1,
        }
    }
    vec![nets.done(), count.note(format!("{rejected} configurations failed the separation or α precondition and were redrawn")).done()]
}

/// β monotonicity under nesting, and translation and dilation invariance.
pub fn beta_suite(seed: u64, n: usize) -> Vec<PropertyResult> {
    let mut rng = fixtures::rng(seed, 3);
    let spaces: Vec<NormedSpace> =
        [1.0, 1.5, 2.0, 3.0, f64::INFINITY].iter().map(|&p| NormedSpace::lp(2, p).expect("valid exponent")).collect();
    let mut mono = Tally::new("beta", "beta_monotone", 2e-8);
    for i in 0..n {
        let s = &spaces[i % spaces.len()];
        let f = fixtures::planar_cloud(&mut rng, 3, 40);
        let e: Vec<Point> = f.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
        let q = ClosedBall::new(vec![rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)], rng.gen_range(0.5..1.5));
        let r_rad = q.radius * rng.gen_range(0.1..1.0);
        let room = (q.radius - r_rad) * rng.gen_range(0.0..1.0);
        let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = ClosedBall::new(vec![q.center[0] + room * a.cos(), q.center[1] + room * a.sin()], r_rad);
        let r = if q.contains_ball(s, &r, 0.0) { r } else { ClosedBall::new(q.center.clone(), r_rad) };
        let small = beta_number(&e, &r, s).expect("planar").beta;
        let large = beta_number(&f, &q, s).expect("planar").beta;
        mono.excess(small - q.diam() / r.diam() * large);
        debug_assert!(beta_monotone_check(&e, &f, &r, &q, s).is_ok());
    }
    let mut inv = Tally::new("beta", "beta_invariance", 1e-9);
    for i in 0..n {
        let s = &spaces[i % spaces.len()];
        let pts = fixtures::planar_cloud(&mut rng, 2, 30);
        let q = ClosedBall::new(vec![0.0, 0.0], 0.9);
        let b = beta_number(&pts, &q, s).expect("planar").beta;
        let t = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
        let lam: f64 = rng.gen_range(0.1..10.0);
        let moved: Vec<Point> = pts.iter().map(|x| vec![x[0] + t[0], x[1] + t[1]]).collect();
        let bm = beta_number(&moved, &ClosedBall::new(t.to_vec(), 0.9), s).expect("planar").beta;
        let scaled: Vec<Point> = pts.iter().map(|x| vec![lam * x[0], lam * x[1]]).collect();
        let bs = beta_number(&scaled, &ClosedBall::new(vec![0.0, 0.0], lam * 0.9), s).expect("planar").beta;
        inv.excess((b - bm).abs().max((b - bs).abs()));
    }
    vec![mono.done(), inv.done()]
}

/// Generator lengths and the 𝓑 ball at the crossing of the plus sign.
pub fn curve_suite() -> Vec<PropertyResult> {
    let s = NormedSpace::euclidean(2);
    let mut koch = Tally::new("curve", "koch_length", 1e-12);
    for depth in 0..=7 {
        let c = generate(&CurveSpec::Koch { depth, angle: 60.0 }, &s).expect("koch");
        let want = (4.0f64 / 3.0).powi(depth as i32);
        koch.excess((c.length() - want).abs() / want);
    }
    let mut plus = Tally::new("curve", "plus_sign_has_b_ball", 0.0);
    let cfg = ExperimentConfig::for_curve(CurveSpec::PlusSign { arm: 1.0 });
    match crate::pipeline::run_until(&cfg, crate::pipeline::Stage::Classify) {
        Ok(b) => plus.check(b.summary.b_balls > 0),
        Err(_) => plus.check(false),
    }
    vec![koch.done(), plus.done()]
}

/// Core lemma clauses on random hierarchies for each (J, c).
pub fn cores_suite(seed: u64, hierarchies: usize) -> Vec<PropertyResult> {
    let s = NormedSpace::euclidean(2);
    let mut out = Vec::new();
    for (stream, (j, c)) in [(4u32, 0.2), (6, pow2(-12)), (19, pow2(-12))].into_iter().enumerate() {
        let params = CoreParams::new(j, c).expect("valid parameters");
        let mut rng = fixtures::rng(seed, 40 + stream as u64);
        let mut t = Tally::new("cores", &format!("core_lemma[J={j}]"), 0.0);
        let mut shape: f64 = 0.0;
        for _ in 0..hierarchies {
            let pts = fixtures::clustered_samples(&mut rng, 120);
            let h = build_nets(&pts, 0, 2 * j as i32 + 2, &s).expect("nonempty samples");
            let fam = make_family(h, 4.0).expect("A > 1");
            let builder = CoreBuilder::new(&fam.hierarchy, params);
            for jr in 0..j as i32 {
                let cores: Vec<Core> = fam
                    .balls
                    .iter()
                    .filter(|b| b.level.rem_euclid(j as i32) == jr)
                    .map(|b| builder.build(b).expect("net point centre"))
                    .collect();
                let rep = verify_core_lemma(&cores, &s);
                shape = shape.max(rep.max_shape_ratio);
                t.check(rep.ok());
            }
        }
        out.push(t.note(format!("max enclosing / bound = {shape:.6}")).done());
    }
    out
}

/// Containment for valid chains and rejection of broken ones.
pub fn chain_suite(seed: u64, chains: usize, broken: usize) -> Vec<PropertyResult> {
    let s = NormedSpace::euclidean(2);
    let mut rng = fixtures::rng(seed, 5);
    let xis = [8.0, 16.0, 64.0];
    let mut valid = Tally::new("chain", "chain_containment", 0.0);
    let mut worst: f64 = 0.0;
    for i in 0..chains {
        let xi = xis[i % 3];
        let (balls, levels) = fixtures::ball_chain(&mut rng, xi, 30);
        match verify_ball_chain(&s, &balls, &levels, xi, 1.0) {
            Ok(rep) => {
                worst = worst.max(rep.max_ratio);
                valid.check(rep.ok());
            }
            Err(_) => valid.check(false),
        }
    }
    let mut bad = Tally::new("chain", "chain_violation_rejected", 0.0);
    for i in 0..broken {
        let xi = xis[i % 3];
        let (balls, levels) = fixtures::broken_chain(&mut rng, xi, i);
        let rejected = verify_ball_chain(&s, &balls, &levels, xi, 1.0).map_or(false, |r| r.violated.is_some());
        bad.check(rejected);
    }
    vec![valid.note(format!("max union radius ratio {worst:.6}")).done(), bad.done()]
}

/// Conservation, Y ≤ 101, mass identity, sampled overlap and the chain product formula.
pub fn martingale_suite(seed: u64, forests: usize, samples: usize) -> Vec<PropertyResult> {
    let mut rng = fixtures::rng(seed, 6);
    let mut cons = Tally::new("martingale", "conservation", 1e-12);
    let mut ybound = Tally::new("martingale", "y_le_101", 1e-12);
    let mut mass = Tally::new("martingale", "mass_identity", 1e-10);
    let mut overlap = Tally::new("martingale", "overlap_bound", 1e-9);
    let mut failures = 0;
    for i in 0..forests {
        let t = fixtures::weight_forest(&mut rng, i % 2 == 1);
        let Ok(weights) = all_weights(&t) else {
            failures += 1;
            continue;
        };
        for w in &weights {
            let rep = verify_conservation(&t, w);
            cons.excess(rep.max_step_error / rep.integrals[0]);
            let d = t.nodes[w.root].diam_h;
            mass.excess((w.integral() - d).abs() / d);
            let y = w.cells.iter().map(|c| c.value).fold(0.0, f64::max);
            ybound.excess(y / REMAINDER_WEIGHT - 1.0);
        }
        let q = q_hypothesis_scan(&t).map(|s| max_ratio(&s)).unwrap_or(f64::NAN).max(0.5);
        let bound = 101.0 / (1.0 - q);
        if let Ok(rep) = verify_bounds(&t, q) {
            overlap.excess(rep.max_overlap - rep.overlap_bound);
        }
        let cells = t.cells();
        let total: f64 = cells.iter().map(|c| c.1).sum();
        for _ in 0..samples / forests.max(1) {
            let mut u = rng.gen_range(0.0..total);
            let cell = cells
                .iter()
                .find(|c| {
                    u -= c.1;
                    u <= 0.0
                })
                .unwrap_or(cells.last().expect("nonempty forest"))
                .0;
            overlap.excess(stacked_weight(&t, &weights, cell) - bound);
        }
    }
    let mut chain = Tally::new("martingale", "chain_product_formula", 1e-10);
    for _ in 0..forests {
        let n = rng.gen_range(2..7);
        let mut diam = Vec::new();
        let mut ell = Vec::new();
        let mut l: f64 = rng.gen_range(0.5..2.0);
        for _ in 0..n {
            ell.push(l);
            diam.push(l * rng.gen_range(0.5..0.95));
            l *= rng.gen_range(0.3..0.8);
        }
        let (t, ids) = fixtures::chain_tree(&diam, &ell);
        let want = fixtures::chain_leaf_value(&diam, &ell);
        let got = build_weights(&t, ids[0])
            .ok()
            .and_then(|w| w.value(CellRef { node: ids[n - 1], kind: CellKind::Leaf }))
            .unwrap_or(f64::NAN);
        chain.excess((got - want).abs() / want);
    }
    let note = if failures > 0 { format!("{failures} forests failed to build") } else { String::new() };
    vec![cons.done(), ybound.done(), mass.done(), overlap.note(note).done(), chain.done()]
}

fn pipeline_nodes(spec: CurveSpec, k_max: Option<i32>, j: u32) -> Result<Vec<crate::pipeline::Bucket>, LabError> {
    let mut cfg = ExperimentConfig::for_curve(spec);
    cfg.k_max = k_max;
    cfg.j = j;
    Ok(run_pipeline(&cfg)?.buckets)
}

/// Fragment size bounds and subarc efficiency on every pipeline node whose
/// fragment exists, plus the radial spoke and diametrical segment fixtures.
pub fn fragment_suite() -> Vec<PropertyResult> {
    let mut bounds = Tally::new("curve", "fragment_bounds", 0.0);
    let mut eff = Tally::new("curve", "subarc_efficiency", 0.0);
    let mut skipped = 0;
    let mut worst_eff: f64 = 1.0;
    let runs = [
        (CurveSpec::PlusSign { arm: 1.0 }, None, 6),
        (CurveSpec::PlusSign { arm: 1.0 }, Some(11), 4),
        (CurveSpec::TJunction { arm: 1.0 }, None, 6),
        (CurveSpec::RandomWalk { n: 60, seed: 3 }, None, 6),
    ];
    for (spec, k_max, j) in runs {
        let Ok(buckets) = pipeline_nodes(spec, k_max, j) else {
            bounds.check(false);
            continue;
        };
        for n in buckets.iter().flat_map(|b| &b.nodes) {
            if let Some(f) = &n.fragment {
                bounds.check(f.ok());
            }
            match (n.subarc_efficient, n.subarc_ratio) {
                (Some(ok), Some(r)) => {
                    worst_eff = worst_eff.min(r);
                    eff.check(ok);
                }
                _ if n.fragment.is_some() => skipped += 1,
                _ => {}
            }
        }
    }
    let mut radial = Tally::new("curve", "radial_spoke_lower_regime", 1e-12);
    let mut diametrical = Tally::new("curve", "segment_diametrical", 1e-12);
    let s = NormedSpace::euclidean(2);
    for (spec, tally, want) in [
        (CurveSpec::RadialSpoke { length: 1.0 }, &mut radial, 0.5),
        (CurveSpec::Segment { length: 2.0 }, &mut diametrical, 1.0),
    ] {
        let c = generate(&spec, &s).expect("fixture");
        let centre = if want == 0.5 { vec![0.0, 0.0] } else { vec![1.0, 0.0] };
        for k in 2..8 {
            let q_star = ClosedBall::new(centre.clone(), pow2(-k));
            let core = jones_core::region::Region::ball(q_star.clone());
            let whole = jones_core::curve::ArcRef::new(&c, jones_core::curve::ParamInterval::new(0.0, 1.0));
            match jones_core::curve::maximal_fragment(&c, &[whole], &core, &q_star) {
                Ok(h) => {
                    let f = jones_core::curve::fragment_bounds(&h, &q_star, q_star.diam(), 1.0);
                    bounds.check(f.ok());
                    tally.excess((f.ratio_q_star - want).abs());
                    match jones_core::curve::efficient_subarc(&c, &h, &q_star) {
                        Ok(g) => {
                            worst_eff = worst_eff.min(g.ratio);
                            eff.check(g.efficient() && g.inside);
                        }
                        Err(_) => eff.check(false),
                    }
                }
                Err(_) => tally.check(false),
            }
        }
    }
    vec![
        bounds.done(),
        eff.note(format!("min diam G/diam H {worst_eff:.6}; {skipped} fragments skipped, flatness hypothesis not met")).done(),
        radial.done(),
        diametrical.done(),
    ]
}

/// Every node's ratio against its case bound, and the overall maximum against q.
pub fn case_taxonomy_suite(q: f64) -> Vec<PropertyResult> {
    let mut cases = Tally::new("martingale", "case_bounds", 0.0);
    let mut overall = Tally::new("martingale", "max_ratio_le_q", 0.0);
    let mut tags = std::collections::BTreeMap::<String, usize>::new();
    let mut trees = vec![fixtures::tiled_segment_tree()];
    let mut worst: f64 = 0.0;
    for (k_max, j) in [(None, 6), (Some(11), 4), (Some(11), 6)] {
        match pipeline_nodes(CurveSpec::PlusSign { arm: 1.0 }, k_max, j) {
            Ok(buckets) => {
                for b in buckets {
                    match b.weights {
                        Some(reports) => {
                            for r in reports {
                                for n in &r.nodes {
                                    *tags.entry(format!("{:?}", n.case)).or_default() += 1;
                                    cases.check(n.pass);
                                }
                                worst = worst.max(r.max_ratio);
                                overall.check(r.max_ratio <= q);
                            }
                        }
                        None => cases.check(false),
                    }
                }
            }
            Err(_) => cases.check(false),
        }
    }
    for t in trees.drain(..) {
        match q_hypothesis_scan(&t) {
            Ok(reports) => {
                for r in reports {
                    for n in &r.nodes {
                        *tags.entry(format!("{:?}", n.case)).or_default() += 1;
                        cases.check(n.pass);
                    }
                    worst = worst.max(r.max_ratio);
                    overall.check(r.max_ratio <= q);
                }
            }
            Err(_) => cases.check(false),
        }
    }
    let tag_note: Vec<String> = tags.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    vec![cases.note(tag_note.join(", ")).done(), overall.note(format!("max ratio {worst:.6}")).done()]
}

/// The segment runs degenerate and a repeated run is identical.
pub fn lab_suite() -> Vec<PropertyResult> {
    let cfg = ExperimentConfig::for_curve(CurveSpec::Segment { length: 1.0 });
    let mut seg = Tally::new("lab", "segment_degenerate", 1e-12);
    let mut det = Tally::new("lab", "deterministic_summary", 0.0);
    match (run_pipeline(&cfg), run_pipeline(&cfg)) {
        (Ok(a), Ok(b)) => {
            seg.excess(a.summary.beta_max);
            seg.excess((a.summary.jones_sum - a.summary.diam).abs());
            seg.check(a.summary.b_balls == 0);
            let ja = serde_json::to_string(&a.summary).unwrap_or_default();
            let jb = serde_json::to_string(&b.summary).unwrap_or_default();
            det.check(!ja.is_empty() && ja == jb);
        }
        _ => {
            seg.check(false);
            det.check(false);
        }
    }
    vec![seg.done(), det.done()]
}

pub fn run_suite(name: &str, seed: u64, counts: Counts, fault: Option<Fault>) -> Result<Vec<PropertyResult>, LabError> {
    Ok(match name {
        "banach" => banach_suite(seed, counts.triples, fault),
        "net" => net_suite(seed, counts.net_sets, counts.counting),
        "beta" => beta_suite(seed, counts.monotone),
        "curve" => {
            let mut r = curve_suite();
            r.extend(fragment_suite());
            r
        }
        "cores" => cores_suite(seed, counts.hierarchies),
        "chain" => chain_suite(seed, counts.chains, counts.broken_chains),
        "martingale" => {
            let mut r = martingale_suite(seed, counts.forests, counts.overlap_samples);
            r.extend(case_taxonomy_suite(jones_core::martingale::DEFAULT_Q));
            r
        }
        "lab" => lab_suite(),
        other => return Err(LabError::BadInput(format!("unknown suite {other:?}; known: {}", SUITES.join(", ")))),
    })
}

/// Runs the selected suites (all when `only` is empty).
pub fn verify_all(seed: u64, only: &[String], counts: Counts, fault: Option<Fault>) -> Result<Vec<PropertyResult>, LabError> {
    let names: Vec<&str> = if only.is_empty() { SUITES.to_vec() } else { only.iter().map(String::as_str).collect() };
    let mut out = Vec::new();
    for n in names {
        out.extend(run_suite(n, seed, counts, fault)?);
    }
    Ok(out)
}

/// Fixed-width summary table.
pub fn table(results: &[PropertyResult]) -> String {
    let mut s = format!("{:<11} {:<32} {:>7} {:>5} {:>11} {:>9} {:>8}  note\n", "suite", "property", "cases", "fail", "worst", "tol", "secs");
    for r in results {
        s.push_str(&format!(
            "{:<11} {:<32} {:>7} {:>5} {:>11.3e} {:>9.1e} {:>8.3}  {}{}\n",
            r.suite,
            r.property,
            r.cases,
            r.violations,
            r.worst,
            r.tol,
            r.seconds,
            if r.passed() { "ok" } else { "FAIL" },
            if r.note.is_empty() { String::new() } else { format!(" ({})", r.note) }
        ));
    }
    s
}
