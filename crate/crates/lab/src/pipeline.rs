//! End-to-end run: samples → nets → β-map → 𝓑 detection → buckets → core
//! trees → fragments → classification → weights.

use std::collections::BTreeMap;

use jones_core::banach::{norming_projection, Line};
use jones_core::beta::{beta_map, jones_sum_from_map};
use jones_core::cores::{build_core_tree, remainder, verify_core_lemma, CoreForest, CoreLemmaReport};
use jones_core::curve::{
    classify_core, efficient_subarc, fragment_bounds, is_b_ball, maximal_fragment, BReport, ChildCore, Curve,
    FragmentBounds, Subarc,
};
use jones_core::martingale::{
    all_weights, q_hypothesis_scan, verify_bounds, verify_conservation, BoundsReport, ConservationReport, QReport,
    WeightTree,
};
use jones_core::net::{build_nets, make_family, pow2, BallId, MultiresFamily};
use jones_core::Point;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{CurveSource, ExperimentConfig};
use crate::generators::generate;
use crate::LabError;

/// Largest sample count for which the brute-force net check runs inside the pipeline.
pub const NET_CHECK_LIMIT: usize = 4000;

pub fn load_curve(cfg: &ExperimentConfig) -> Result<Curve, LabError> {
    match &cfg.curve {
        CurveSource::Generator(spec) => generate(spec, &cfg.space),
        CurveSource::File { path } => {
            let text =
                std::fs::read_to_string(path).map_err(|e| LabError::BadInput(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| LabError::BadInput(format!("{}: {e}", path.display())))
        }
    }
}

/// Points on Γ: every vertex plus equally spaced points at most `h` apart on each segment.
pub fn sample_curve(c: &Curve, h: f64) -> Vec<Point> {
    let path = c.path();
    let mut out = vec![path[0].clone()];
    let s = c.space();
    for w in path.windows(2) {
        let n = (s.dist(&w[0], &w[1]) / h).ceil().max(1.0) as usize;
        for i in 1..=n {
            let u = i as f64 / n as f64;
            out.push(w[0].iter().zip(&w[1]).map(|(a, b)| a + u * (b - a)).collect());
        }
    }
    if c.is_closed() {
        out.pop();
    }
    out
}

/// Default level range: k_min = ⌊log₂(1/diam Γ)⌋, k_max = k_min + 8.
pub fn level_range(cfg: &ExperimentConfig, diam: f64) -> (i32, i32) {
    let k_min = cfg.k_min.unwrap_or_else(|| (1.0 / diam).log2().floor() as i32);
    let k_max = cfg.k_max.unwrap_or(k_min + 8).max(k_min);
    (k_min, k_max)
}

/// Sample spacing used for nets with finest level `k_max`.
pub fn sample_spacing(k_max: i32) -> f64 {
    pow2(-k_max) / 4.0
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BetaRow {
    pub ball_id: BallId,
    pub level: i32,
    pub center: Point,
    pub radius: f64,
    pub beta: f64,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRow {
    pub ball_id: BallId,
    pub lambda: f64,
    pub n_arcs: usize,
    pub n_flat: usize,
    pub n_star: usize,
    pub n_dominant: usize,
    pub beta_gamma: f64,
    pub beta_lambda: f64,
    pub beta_star: f64,
    pub is_b: bool,
    pub b0_excluded: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChildClass {
    pub ball_id: BallId,
    pub class: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct NodeReport {
    pub ball_id: BallId,
    pub level: i32,
    pub parent: Option<BallId>,
    pub children: Vec<BallId>,
    pub ell_u: f64,
    pub ell_r: f64,
    pub core_diam: f64,
    pub enclosing_ratio: f64,
    pub diam_h: Option<f64>,
    pub fragment: Option<FragmentBounds>,
    pub fragment_error: Option<String>,
    pub subarc_ratio: Option<f64>,
    pub subarc_efficient: Option<bool>,
    pub subarc_error: Option<String>,
    pub child_classes: Vec<ChildClass>,
    pub non_n2_diam: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoreJson {
    pub ball_id: BallId,
    pub q_star: jones_core::region::ClosedBall,
    pub members: Vec<jones_core::cores::MemberBall>,
    pub children: Vec<BallId>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Bucket {
    #[serde(rename = "M")]
    pub m: i32,
    pub j: i32,
    pub cores: Vec<CoreJson>,
    pub nodes: Vec<NodeReport>,
    pub core_lemma: CoreLemmaReport,
    /// Present when every node has a fragment.
    pub weights: Option<Vec<QReport>>,
    pub bounds: Option<BoundsReport>,
    pub conservation: Vec<ConservationReport>,
    pub weights_skipped: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub config: ExperimentConfig,
    pub curve_name: String,
    pub vertices: usize,
    pub length: f64,
    pub diam: f64,
    pub simple: Option<bool>,
    pub k_min: i32,
    pub k_max: i32,
    /// Nets are built over samples this far apart; scales below it are not resolved.
    pub sample_spacing: f64,
    pub samples: usize,
    pub balls: usize,
    pub beta_max: f64,
    pub jones_sum: f64,
    pub ratio: f64,
    pub b_balls: usize,
    pub b0_excluded: usize,
    pub g_balls: usize,
    pub buckets: usize,
    pub eps1: f64,
    pub eps2: f64,
    pub checks: Vec<Check>,
}

pub struct Bundle {
    pub stage: Stage,
    pub summary: Summary,
    pub curve: Curve,
    pub family: MultiresFamily,
    pub betas: Vec<BetaRow>,
    pub classes: Vec<ClassRow>,
    pub buckets: Vec<Bucket>,
}

impl Bundle {
    pub fn passed(&self) -> bool {
        self.summary.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.summary.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Which stages to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Nets,
    Betas,
    Classify,
    Full,
}

fn err<E: std::fmt::Display>(ctx: impl std::fmt::Display) -> impl FnOnce(E) -> LabError {
    move |e| LabError::Geometry(format!("{ctx}: {e}"))
}

pub fn run_pipeline(cfg: &ExperimentConfig) -> Result<Bundle, LabError> {
    run_until(cfg, Stage::Full)
}

pub fn run_until(cfg: &ExperimentConfig, stage: Stage) -> Result<Bundle, LabError> {
    cfg.validate()?;
    let c = load_curve(cfg)?;
    let diam = c.diam();
    let (k_min, k_max) = level_range(cfg, diam);
    let spacing = sample_spacing(k_max);
    let samples = sample_curve(&c, spacing);
    let h = build_nets(&samples, k_min, k_max, &cfg.space).map_err(err("nets"))?;
    let mut checks = Vec::new();
    if samples.len() <= NET_CHECK_LIMIT {
        let rep = h.verify(&samples);
        checks.push(Check::new("net_invariants", rep.ok(), format!("{rep:?}")));
    }
    let family = make_family(h, cfg.inflation).map_err(err("family"))?;
    let flat = cfg.flatness();
    let mut summary = Summary {
        config: cfg.clone(),
        curve_name: match &cfg.curve {
            CurveSource::Generator(s) => s.name().to_string(),
            CurveSource::File { path } => path.display().to_string(),
        },
        vertices: c.vertices().len(),
        length: c.length(),
        diam,
        simple: c.is_simple(),
        k_min,
        k_max,
        sample_spacing: spacing,
        samples: samples.len(),
        balls: family.balls.len(),
        beta_max: 0.0,
        jones_sum: f64::NAN,
        ratio: f64::NAN,
        b_balls: 0,
        b0_excluded: 0,
        g_balls: 0,
        buckets: 0,
        eps1: flat.eps1,
        eps2: flat.eps2,
        checks,
    };
    let mut bundle = Bundle { stage, summary: summary.clone(), curve: c.clone(), family, betas: Vec::new(), classes: Vec::new(), buckets: Vec::new() };
    if stage == Stage::Nets {
        return Ok(bundle);
    }
    let family = &bundle.family;
    let map = beta_map(family, &c).map_err(err("beta map"))?;
    summary.jones_sum = jones_sum_from_map(family, &map, diam, cfg.p, cfg.c1()).map_err(err("jones sum"))?;
    summary.ratio = summary.jones_sum / c.length();
    summary.beta_max = map.iter().map(|(_, r)| r.beta).fold(0.0, f64::max);
    let betas: Vec<BetaRow> = map
        .iter()
        .map(|(id, r)| {
            let b = family.ball(*id).expect("ball of the family");
            BetaRow { ball_id: *id, level: b.level, center: b.center.clone(), radius: b.radius, beta: r.beta, exact: r.exact }
        })
        .collect();
    bundle.betas = betas;
    if stage == Stage::Betas {
        bundle.summary = summary;
        return Ok(bundle);
    }
    let lambda = cfg.lambda()?;
    let reports: Vec<BReport> = family
        .balls
        .par_iter()
        .map(|b| is_b_ball(&c, b, lambda, flat).map_err(err(format!("ball {}", b.id))))
        .collect::<Result<_, _>>()?;
    bundle.classes = family
        .balls
        .iter()
        .zip(&reports)
        .map(|(b, r)| {
            let cls = &r.classification;
            ClassRow {
                ball_id: b.id,
                lambda: cls.lambda,
                n_arcs: cls.lambda_set.len(),
                n_flat: cls.flat.len(),
                n_star: cls.star_flat.len(),
                n_dominant: cls.dominant.len(),
                beta_gamma: cls.beta_gamma,
                beta_lambda: cls.beta_lambda,
                beta_star: cls.beta_star,
                is_b: r.is_b,
                b0_excluded: r.b0_excluded,
            }
        })
        .collect();
    summary.b_balls = reports.iter().filter(|r| r.is_b).count();
    summary.b0_excluded = reports.iter().filter(|r| r.is_b && r.b0_excluded).count();
    if stage == Stage::Classify {
        bundle.summary = summary;
        return Ok(bundle);
    }
    let report_of: BTreeMap<BallId, &BReport> = family.balls.iter().map(|b| b.id).zip(&reports).collect();
    let stride = cfg.j as i32;
    let mut groups: BTreeMap<(i32, i32), Vec<BallId>> = BTreeMap::new();
    for (b, r) in family.balls.iter().zip(&reports) {
        if r.is_b && !r.b0_excluded {
            let beta = r.classification.beta_star;
            let m = (-beta.log2()).floor() as i32 + 1;
            groups.entry((m, b.level.rem_euclid(stride))).or_default().push(b.id);
        }
    }
    summary.g_balls = groups.values().map(Vec::len).sum();
    summary.buckets = groups.len();
    let params = cfg.core_params()?;
    let mut buckets = Vec::new();
    for ((m, j), ids) in groups {
        let forest = build_core_tree(family, &ids, params).map_err(err(format!("core tree M={m} j={j}")))?;
        buckets.push(process_bucket(cfg, &c, family, &forest, &report_of, m, j)?);
    }
    for b in &buckets {
        let tag = format!("M={} j={}", b.m, b.j);
        summary.checks.push(Check::new(format!("core_lemma[{tag}]"), b.core_lemma.ok(), format!("{:?}", b.core_lemma)));
        for cons in &b.conservation {
            summary.checks.push(Check::new(
                format!("conservation[{tag} root {}]", cons.root),
                cons.ok,
                format!("max step error {:e}", cons.max_step_error),
            ));
        }
        if let Some(bounds) = &b.bounds {
            summary.checks.push(Check::new(
                format!("mass_identity[{tag}]"),
                bounds.max_mass_error <= 1e-10,
                format!("max relative error {:e}", bounds.max_mass_error),
            ));
        }
    }
    bundle.summary = summary;
    bundle.buckets = buckets;
    Ok(bundle)
}

fn process_bucket(
    cfg: &ExperimentConfig,
    c: &Curve,
    family: &MultiresFamily,
    forest: &CoreForest,
    report_of: &BTreeMap<BallId, &BReport>,
    m: i32,
    j: i32,
) -> Result<Bucket, LabError> {
    let space = c.space();
    let lambda = cfg.lambda()?;
    let eps2 = cfg.flatness().eps2;
    let regions: Vec<_> = forest.nodes.iter().map(|n| n.core.region()).collect();
    let mut nodes = Vec::new();
    let mut subarcs: Vec<Option<Subarc>> = Vec::new();
    for (i, n) in forest.nodes.iter().enumerate() {
        let core = &n.core;
        let rep = report_of[&core.ball_id];
        let cls = &rep.classification;
        let star: Vec<_> = cls.star_arcs().copied().collect();
        let rem = remainder(forest, i, c);
        let core_diam = core.diam(space);
        let enclosing = core.enclosing_ratio(space);
        let mut node = NodeReport {
            ball_id: core.ball_id,
            level: core.level,
            parent: n.parent.map(|p| forest.nodes[p].core.ball_id),
            children: n.children.iter().map(|&ch| forest.nodes[ch].core.ball_id).collect(),
            ell_u: rem.ell_u,
            ell_r: rem.measure,
            core_diam,
            enclosing_ratio: enclosing,
            diam_h: None,
            fragment: None,
            fragment_error: None,
            subarc_ratio: None,
            subarc_efficient: None,
            subarc_error: None,
            child_classes: Vec::new(),
            non_n2_diam: 0.0,
        };
        let mut sub = None;
        match maximal_fragment(c, &star, &regions[i], &core.q_star) {
            Ok(h) => {
                node.diam_h = Some(h.diam);
                node.fragment = Some(fragment_bounds(&h, &core.q_star, core_diam, enclosing));
                match efficient_subarc(c, &h, &core.q_star) {
                    Ok(g) => {
                        node.subarc_ratio = Some(g.ratio);
                        node.subarc_efficient = Some(g.efficient());
                        sub = Some(g);
                    }
                    Err(e) => node.subarc_error = Some(e.to_string()),
                }
            }
            Err(e) => node.fragment_error = Some(e.to_string()),
        }
        subarcs.push(sub);
        nodes.push(node);
    }
    for (i, n) in forest.nodes.iter().enumerate() {
        let mut non_n2 = 0.0;
        for &ch in &n.children {
            let child = &forest.nodes[ch].core;
            let class = match &subarcs[i] {
                Some(g) => {
                    let a = c.point_at(g.arc.start());
                    let b = c.point_at(g.arc.end());
                    let line = Line::through(space, &a, &b).map_err(err("subarc line"))?;
                    let proj = norming_projection(space, &line);
                    let ball = family.ball(child.ball_id).expect("child ball");
                    let cc = ChildCore { ball, q_star: &child.q_star, core: &regions[ch] };
                    Some(classify_core(c, &g.arc, &proj, &cc, lambda, eps2).map_err(err("classify core"))?)
                }
                None => None,
            };
            if !class.map_or(false, |k| k.is_n2()) {
                non_n2 += child.diam(space);
            }
            nodes[i].child_classes.push(ChildClass {
                ball_id: child.ball_id,
                class: class.map_or("unclassified", |k| k.as_str()).to_string(),
            });
        }
        nodes[i].non_n2_diam = non_n2;
    }
    let cores: Vec<_> = forest.nodes.iter().map(|n| n.core.clone()).collect();
    let core_lemma = verify_core_lemma(&cores, space);
    let mut bucket = Bucket {
        m,
        j,
        cores: forest
            .nodes
            .iter()
            .map(|n| CoreJson {
                ball_id: n.core.ball_id,
                q_star: n.core.q_star.clone(),
                members: n.core.members.clone(),
                children: n.children.iter().map(|&ch| forest.nodes[ch].core.ball_id).collect(),
            })
            .collect(),
        nodes,
        core_lemma,
        weights: None,
        bounds: None,
        conservation: Vec::new(),
        weights_skipped: None,
    };
    if let Some(missing) = bucket.nodes.iter().find(|n| n.diam_h.is_none()) {
        bucket.weights_skipped = Some(format!("no fragment for ball {}", missing.ball_id));
        return Ok(bucket);
    }
    if let Some(empty) = bucket.nodes.iter().find(|n| !(n.ell_u > 0.0)) {
        bucket.weights_skipped = Some(format!("ℓ(U) = 0 for ball {}", empty.ball_id));
        return Ok(bucket);
    }
    let tree = weight_tree(forest, &bucket.nodes, &regions);
    bucket.weights = Some(q_hypothesis_scan(&tree).map_err(err("q scan"))?);
    bucket.bounds = Some(verify_bounds(&tree, cfg.q).map_err(err("bounds"))?);
    let weights = all_weights(&tree).map_err(err("weights"))?;
    bucket.conservation = tree.roots.iter().map(|&r| verify_conservation(&tree, &weights[r])).collect();
    Ok(bucket)
}

/// Weight tree mirroring the core forest, node for node.
pub fn weight_tree(forest: &CoreForest, nodes: &[NodeReport], regions: &[jones_core::region::Region]) -> WeightTree {
    let mut t = WeightTree::new();
    let mut index = vec![usize::MAX; forest.nodes.len()];
    let mut order: Vec<usize> = Vec::new();
    let mut stack: Vec<usize> = forest.roots.iter().rev().copied().collect();
    while let Some(n) = stack.pop() {
        order.push(n);
        stack.extend(forest.nodes[n].children.iter().rev());
    }
    for n in order {
        let parent = forest.nodes[n].parent.map(|p| index[p]);
        let r = &nodes[n];
        let i = t.add(parent, r.ball_id.to_string(), r.diam_h.unwrap_or(f64::NAN), r.ell_u);
        index[n] = i;
    }
    for (n, r) in nodes.iter().enumerate() {
        let i = index[n];
        t.set_remainder(i, r.ell_r);
        t.set_non_n2(i, r.non_n2_diam);
        t.set_q_star_diam(i, 2.0 * forest.nodes[n].core.q_star.radius);
        t.set_region(i, regions[n].clone());
    }
    t
}
