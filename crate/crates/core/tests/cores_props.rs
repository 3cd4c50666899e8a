use jones_core::banach::NormedSpace;
use jones_core::cores::{
    build_core_tree, forest_from_cores, k_constant, remainder, scale_gap_check, verify_ball_chain, verify_core_lemma,
    ChainHypothesis, Core, CoreBuilder, CoreParams, MemberBall,
};
use jones_core::curve::Curve;
use jones_core::net::{build_nets, make_family, pow2, BallId};
use jones_core::region::ClosedBall;
use jones_core::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_samples(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    // a few clusters so that cores at several levels interact
    let mut pts = Vec::new();
    for _ in 0..4 {
        let c = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
        let spread: f64 = rng.gen_range(0.001..0.2);
        for _ in 0..n / 4 {
            pts.push(vec![c[0] + spread * rng.gen_range(-1.0..1.0), c[1] + spread * rng.gen_range(-1.0..1.0)]);
        }
    }
    pts
}

#[test]
fn core_lemma_on_random_hierarchies() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let s = NormedSpace::euclidean(2);
    for (j, c) in [(4, 0.2), (6, pow2(-12)), (19, pow2(-12))] {
        let params = CoreParams::new(j, c).unwrap();
        for _ in 0..3 {
            let pts = random_samples(&mut rng, 120);
            let h = build_nets(&pts, 0, 2 * j as i32 + 2, &s).unwrap();
            let fam = make_family(h, 4.0).unwrap();
            let builder = CoreBuilder::new(&fam.hierarchy, params);
            let cores: Vec<Core> =
                fam.balls.iter().filter(|b| b.level % j as i32 == 0).map(|b| builder.build(b).unwrap()).collect();
            let rep = verify_core_lemma(&cores, &s);
            assert!(rep.ok(), "J={j}: {rep:?}");
            for core in &cores {
                for (i, m) in core.members.iter().enumerate().skip(1) {
                    let touches_earlier = core.members[..i]
                        .iter()
                        .any(|e| e.round < m.round && e.closed().intersects(&s, &m.closed()));
                    assert!(touches_earlier);
                }
            }
        }
    }
}

#[test]
fn same_level_cores_one_step_apart() {
    let s = NormedSpace::euclidean(2);
    let h = build_nets(&[vec![0.0, 0.0], vec![1.0, 0.0]], 0, 8, &s).unwrap();
    let fam = make_family(h, 4.0).unwrap();
    let b = CoreBuilder::new(&fam.hierarchy, CoreParams::new(4, 0.2).unwrap());
    let cores: Vec<Core> = fam.balls_at(0).iter().map(|q| b.build(q).unwrap()).collect();
    assert_eq!(cores.len(), 2);
    assert!(cores[0].gap(&s, &cores[1]) >= 0.5);
    assert!(verify_core_lemma(&cores, &s).ok());
    assert!(verify_core_lemma(&cores[..1], &s).ok());
}

#[test]
fn scale_gap_with_full_stride() {
    let s = NormedSpace::euclidean(2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for inflation in [2.0, 4.0, 240.0] {
        let big_k = k_constant(inflation) as i32;
        for m_scale in 1..3 {
            let stride = big_k * m_scale;
            for _ in 0..200 {
                let k = rng.gen_range(-3..3);
                let r_star = pow2(-12 - k);
                let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let rad = r_star * rng.gen_range(0.99..1.0);
                let child = [rad * a.cos(), rad * a.sin()];
                let (diam_ok, containment_ok) = scale_gap_check(&s, &[0.0, 0.0], k, &child, k + stride, inflation, 5.0);
                assert!(diam_ok && containment_ok);
            }
        }
    }
}

fn chain(rng: &mut ChaCha8Rng, xi: f64, n: usize) -> (Vec<ClosedBall>, Vec<i32>) {
    let s = NormedSpace::euclidean(2);
    let mut balls = vec![ClosedBall::new(vec![0.0, 0.0], 1.0)];
    let mut levels = vec![0];
    let mut tries = 0;
    while balls.len() < n && tries < 10_000 {
        tries += 1;
        let i = rng.gen_range(0..balls.len());
        let k = levels[i] + rng.gen_range(1..3);
        let r = xi.powi(-k) * rng.gen_range(0.5..1.0);
        let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let d = (balls[i].radius + r) * rng.gen_range(0.0..1.0);
        let b = ClosedBall::new(vec![balls[i].center[0] + d * a.cos(), balls[i].center[1] + d * a.sin()], r);
        let separated = balls.iter().zip(&levels).all(|(o, &l)| l != k || o.gap(&s, &b) >= 3.0 * xi.powi(-k));
        if separated {
            balls.push(b);
            levels.push(k);
        }
    }
    (balls, levels)
}

#[test]
fn random_chains_are_contained() {
    let s = NormedSpace::euclidean(2);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for xi in [8.0, 16.0, 64.0] {
        for _ in 0..10 {
            let (balls, levels) = chain(&mut rng, xi, 30);
            let rep = verify_ball_chain(&s, &balls, &levels, xi, 1.0).unwrap();
            assert!(rep.ok(), "{rep:?}");
            assert_eq!(rep.min_index, Some(0));
        }
    }
}

#[test]
fn chain_violations_are_named() {
    let s = NormedSpace::euclidean(2);
    let far = [ClosedBall::new(vec![0.0, 0.0], 1.0), ClosedBall::new(vec![5.0, 0.0], 0.01)];
    assert_eq!(verify_ball_chain(&s, &far, &[0, 1], 16.0, 1.0).unwrap().violated, Some(ChainHypothesis::Chain));
    let fat = [ClosedBall::new(vec![0.0, 0.0], 1.0), ClosedBall::new(vec![1.0, 0.0], 0.5)];
    assert_eq!(verify_ball_chain(&s, &fat, &[0, 1], 16.0, 1.0).unwrap().violated, Some(ChainHypothesis::Decay));
    assert!(verify_ball_chain(&s, &fat, &[0, 1], 5.0, 1.0).is_err());
}

fn manual_core(id: BallId, center: Point, radius: f64) -> Core {
    let q_star = ClosedBall::new(center.clone(), radius);
    Core {
        ball_id: id,
        level: id.level,
        members: vec![MemberBall { center, radius, level: id.level, index: id.index, round: 0 }],
        q_star,
        params: CoreParams::new(4, 0.2).unwrap(),
    }
}

#[test]
fn remainder_of_middle_third() {
    let s = NormedSpace::euclidean(2);
    let c = Curve::new(s, vec![vec![-3.0, 0.0], vec![3.0, 0.0]], false).unwrap();
    let parent = manual_core(BallId { level: 0, index: 0 }, vec![0.0, 0.0], 1.5);
    let child = manual_core(BallId { level: 4, index: 0 }, vec![0.0, 0.0], 0.5);
    let forest = forest_from_cores(vec![parent, child], &s).unwrap();
    assert_eq!(forest.roots, vec![0]);
    assert_eq!(forest.nodes[0].children, vec![1]);
    let r = remainder(&forest, 0, &c);
    assert!((r.ell_u - 3.0).abs() < 1e-12);
    assert!((r.measure - 2.0 / 3.0 * r.ell_u).abs() < 1e-12);
    assert!(r.contains(&s, &[1.2, 0.0]) && !r.contains(&s, &[0.1, 0.0]));
    let leaf = remainder(&forest, 1, &c);
    assert!((leaf.measure - leaf.ell_u).abs() < 1e-15);
}

#[test]
fn disjoint_coarse_cores_are_two_roots() {
    let s = NormedSpace::euclidean(2);
    let pts: Vec<Point> = vec![vec![0.0, 0.0], vec![3.0, 0.0]];
    let h = build_nets(&pts, 0, 4, &s).unwrap();
    let fam = make_family(h, 4.0).unwrap();
    let ids: Vec<BallId> = fam.balls_at(0).iter().map(|b| b.id).collect();
    let forest = build_core_tree(&fam, &ids, CoreParams::new(4, 0.2).unwrap()).unwrap();
    assert_eq!(forest.roots.len(), 2);
    let single = build_core_tree(&fam, &ids[..1], CoreParams::new(4, 0.2).unwrap()).unwrap();
    assert_eq!(single.roots.len(), 1);
    assert!(single.nodes[0].children.is_empty());
}
