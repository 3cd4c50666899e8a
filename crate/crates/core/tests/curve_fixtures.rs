use jones_core::banach::{norming_projection, Line, NormedSpace};
use jones_core::curve::{
    arc_beta, arc_line_deviation, classify, classify_core, efficient_subarc, fragment_bounds, fragment_of, lambda_arcs,
    maximal_fragment, ArcRef, ChildCore, CoreClass, Curve, Flatness, Lambda, ParamInterval,
};
use jones_core::net::{Ball, BallId};
use jones_core::region::{ClosedBall, Region};
use jones_core::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn e2() -> NormedSpace {
    NormedSpace::euclidean(2)
}

fn polyline(v: &[[f64; 2]]) -> Curve {
    Curve::new(e2(), v.iter().map(|p| p.to_vec()).collect(), false).unwrap()
}

fn whole(c: &Curve) -> ArcRef {
    ArcRef::new(c, ParamInterval::new(0.0, 1.0))
}

#[test]
fn v_arc_beta_matches_oracle() {
    let c = polyline(&[[0.0, 1.0], [0.0, 0.0], [1.0, 0.0]]);
    let b = arc_beta(&c, ParamInterval::new(0.0, 1.0)).unwrap();
    let pts: Vec<Point> = c.vertices().to_vec();
    let oracle = jones_oracle::minimax_line_width(&pts, 2.0, 100_000) / jones_oracle::diameter(&pts, 2.0);
    assert!((b - oracle).abs() < 1e-6, "{b} vs {oracle}");
    assert!((b - 0.25).abs() < 1e-9);
}

#[test]
fn quarter_circle_beta_matches_oracle() {
    let n = 2000;
    let pts: Vec<Point> = (0..=n)
        .map(|i| {
            let t = std::f64::consts::FRAC_PI_2 * i as f64 / n as f64;
            vec![t.cos(), t.sin()]
        })
        .collect();
    let c = Curve::new(e2(), pts.clone(), false).unwrap();
    let b = arc_beta(&c, ParamInterval::new(0.0, 1.0)).unwrap();
    let oracle = jones_oracle::minimax_line_width(&pts, 2.0, 100_000) / jones_oracle::diameter(&pts, 2.0);
    assert!((b - oracle).abs() < 1e-6, "{b} vs {oracle}");
    // half the sagitta over the chord
    let closed = (1.0 - std::f64::consts::FRAC_PI_4.cos()) / 2.0 / 2f64.sqrt();
    assert!((b - closed).abs() < 1e-6);
}

#[test]
fn restricted_measure_against_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for &p in &[1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
        let s = NormedSpace::lp(2, p).unwrap();
        for _ in 0..20 {
            let a = vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let b = vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let ctr = vec![rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
            let r = rng.gen_range(0.1..1.0);
            let c = Curve::new(s.clone(), vec![a.clone(), b.clone()], false).unwrap();
            let got = c.restricted_measure(&Region::ball(ClosedBall::new(ctr.clone(), r)));
            let est = jones_oracle::segment_measure_in_ball(&a, &b, &ctr, r, p, 200_000);
            assert!((got - est).abs() < 1e-4 * c.length().max(1.0), "p={p}: {got} vs {est}");
        }
    }
}

fn zigzag(rng: &mut ChaCha8Rng, n: usize) -> Curve {
    let mut v = vec![vec![0.0, 0.0]];
    for i in 1..=n {
        v.push(vec![i as f64 * 0.1, rng.gen_range(-0.03..0.03)]);
    }
    Curve::new(e2(), v, false).unwrap()
}

#[test]
fn lambda_arcs_partition_and_cover() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..30 {
        let c = zigzag(&mut rng, 20);
        let ctr = vec![rng.gen_range(0.3..1.7), 0.0];
        let q = Ball::new(BallId { level: 4, index: 0 }, ctr, 2.0);
        for lambda in [Lambda::ONE, Lambda::FIVE] {
            let arcs = lambda_arcs(&c, &q, lambda);
            for w in arcs.windows(2) {
                assert!(w[0].interval.b < w[1].interval.a);
            }
            for iv in c.clip_ball(&q.scaled(lambda.value())) {
                assert!(arcs.iter().any(|a| a.interval.a <= iv.a && iv.b <= a.interval.b));
            }
        }
    }
}

#[test]
fn flat_arcs_are_star_flat_and_near_their_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..30 {
        let c = zigzag(&mut rng, 20);
        let q = Ball::new(BallId { level: 4, index: 0 }, vec![rng.gen_range(0.5..1.5), 0.0], 2.0);
        for eps2 in [0.05, Flatness::asymptotic(2.0).eps2] {
            let cls = classify(&c, &q, Lambda::ONE, eps2).unwrap();
            for &i in &cls.flat {
                assert!(cls.star_flat.contains(&i));
                let tau = cls.lambda_set[i];
                let dev = arc_line_deviation(&c, tau.interval).unwrap();
                assert!(dev <= 2.0 * eps2 * cls.beta_gamma * tau.diam + 1e-12);
            }
        }
    }
}

#[test]
fn straight_fragment_is_diametrical() {
    let c = polyline(&[[-10.0, 0.0], [10.0, 0.0]]);
    let q_star = ClosedBall::new(vec![0.0, 0.0], 1.0);
    let core = Region::ball(q_star.clone());
    let h = maximal_fragment(&c, &[whole(&c)], &core, &q_star).unwrap();
    assert!((h.diam - 2.0).abs() < 1e-12);
    let bounds = fragment_bounds(&h, &q_star, 2.0, 1.0);
    assert!(bounds.ok(), "{bounds:?}");
    let g = efficient_subarc(&c, &h, &q_star).unwrap();
    assert!(g.efficient() && g.inside && g.meets_quarter, "{g:?}");
}

#[test]
fn radial_spoke_hits_lower_regime() {
    let c = polyline(&[[10.0, 0.0], [0.0, 0.0]]);
    let q_star = ClosedBall::new(vec![0.0, 0.0], 1.0);
    let core = Region::ball(q_star.clone());
    let h = maximal_fragment(&c, &[whole(&c)], &core, &q_star).unwrap();
    let bounds = fragment_bounds(&h, &q_star, 2.0, 1.0);
    assert!((bounds.ratio_q_star - 0.5).abs() < 1e-12);
    assert!(bounds.ok());
    let g = efficient_subarc(&c, &h, &q_star).unwrap();
    assert!(g.efficient() && g.inside && g.meets_quarter);
}

#[test]
fn disconnected_fragment_gives_connected_subarc() {
    let h0 = 0.24;
    let x0 = (1.0 - h0 * h0 as f64).sqrt();
    let rho = 4e-6;
    let c = polyline(&[[-3.0, h0], [3.0, h0]]);
    let q_star = ClosedBall::new(vec![0.0, 0.0], 1.0);
    let bubble = ClosedBall::new(vec![x0 + 1.01 * rho, h0], rho);
    let core = Region::new(vec![q_star.clone(), bubble]);
    let h = fragment_of(&c, &whole(&c), &core).unwrap();
    assert_eq!(h.pieces.len(), 2);
    let g = efficient_subarc(&c, &h, &q_star).unwrap();
    let main = h.pieces[0];
    assert!(main.a <= g.arc.interval.a && g.arc.interval.b <= main.b);
    assert!(g.efficient() && g.inside && g.meets_quarter, "{g:?}");
}

#[test]
fn tie_break_prefers_earlier_arc() {
    let c = polyline(&[[-2.0, 0.0], [2.0, 0.0], [2.0, 5.0], [-2.0, 5.0], [-2.0, 0.1], [2.0, 0.1]]);
    let q_star = ClosedBall::new(vec![0.0, 0.05], 1.0);
    let core = Region::ball(q_star.clone());
    let first = ArcRef::new(&c, ParamInterval::new(0.0, c.vertex_param(1)));
    let second = ArcRef::new(&c, ParamInterval::new(c.vertex_param(4), 1.0));
    let h = maximal_fragment(&c, &[second, first], &core, &q_star).unwrap();
    assert_eq!(h.source_arc, first);
}

#[test]
fn curved_arc_is_rejected_by_sweep() {
    let c = polyline(&[[-1.0, 0.0], [0.0, 0.3], [1.0, 0.0]]);
    let q_star = ClosedBall::new(vec![0.0, 0.0], 1.0);
    let h = fragment_of(&c, &whole(&c), &Region::ball(q_star.clone())).unwrap();
    assert!(efficient_subarc(&c, &h, &q_star).is_err());
}

struct Child {
    ball: Ball,
    q_star: ClosedBall,
    core: Region,
}

fn child_at(x: f64) -> Child {
    let level = 6;
    let ball = Ball::new(BallId { level, index: 0 }, vec![x, 0.0], 4.0);
    let q_star = ClosedBall::new(vec![x, 0.0], 0.2 * 2f64.powi(-level));
    Child { core: Region::ball(q_star.clone()), ball, q_star }
}

fn class_of(c: &Curve, t: ArcRef, child: &Child) -> CoreClass {
    let s = e2();
    let line = Line::new(&s, vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
    let proj = norming_projection(&s, &line);
    let cc = ChildCore { ball: &child.ball, q_star: &child.q_star, core: &child.core };
    classify_core(c, &t, &proj, &cc, Lambda::ONE, 0.05).unwrap()
}

#[test]
fn core_classes() {
    let straight = polyline(&[[-1.0, 0.0], [1.0, 0.0]]);
    assert_eq!(class_of(&straight, whole(&straight), &child_at(0.3)), CoreClass::N2_1);

    // horizontal run, then a vertical arm coming down to end at the child center
    let tee = polyline(&[[-1.0, 0.0], [1.0, 0.0], [1.0, 0.7], [0.3, 0.7], [0.3, 0.0]]);
    let t = ArcRef::new(&tee, ParamInterval::new(0.0, tee.vertex_param(1)));
    assert_eq!(class_of(&tee, t, &child_at(0.3)), CoreClass::N1);

    let ending = polyline(&[[-1.0, 0.0], [0.3, 0.0]]);
    assert_eq!(class_of(&ending, whole(&ending), &child_at(0.3)), CoreClass::Unnecessary);

    let t_far = ArcRef::new(&straight, ParamInterval::new(0.0, 0.25));
    assert_eq!(class_of(&straight, t_far, &child_at(0.3)), CoreClass::NotAdjacent);
}

#[test]
fn offset_wide_arc_is_n2_2() {
    let child = child_at(0.3);
    let off = 0.5 * child.q_star.radius;
    let c = polyline(&[[-1.0, off], [1.0, off]]);
    assert_eq!(class_of(&c, whole(&c), &child), CoreClass::N2_2);
}
