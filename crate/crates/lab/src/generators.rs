//! Deterministic polyline generators.

use std::f64::consts::{PI, TAU};

use jones_core::banach::NormedSpace;
use jones_core::curve::Curve;
use jones_core::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::LabError;

/// A named generator with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum CurveSpec {
    Segment {
        #[serde(default = "one")]
        length: f64,
    },
    Zigzag {
        #[serde(default = "eight")]
        n: usize,
        #[serde(default = "tenth")]
        amplitude: f64,
    },
    Koch {
        depth: u32,
        /// Bump angle in degrees.
        #[serde(default = "sixty")]
        angle: f64,
    },
    Circle {
        n: usize,
    },
    Spiral {
        turns: f64,
        n: usize,
    },
    PlusSign {
        #[serde(default = "one")]
        arm: f64,
    },
    RadialSpoke {
        #[serde(default = "one")]
        length: f64,
    },
    TJunction {
        #[serde(default = "one")]
        arm: f64,
    },
    RandomWalk {
        n: usize,
        seed: u64,
    },
}

fn one() -> f64 {
    1.0
}
fn eight() -> usize {
    8
}
fn tenth() -> f64 {
    0.1
}
fn sixty() -> f64 {
    60.0
}

impl CurveSpec {
    /// Parses `name` or `name:key=value,key=value`.
    pub fn parse(text: &str) -> Result<Self, LabError> {
        let (name, rest) = text.split_once(':').unwrap_or((text, ""));
        let mut map = serde_json::Map::new();
        map.insert("name".into(), serde_json::Value::String(name.trim().to_string()));
        for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| LabError::BadInput(format!("expected key=value in curve spec, got {kv:?}")))?;
            let v: serde_json::Value = serde_json::from_str(v.trim())
                .map_err(|_| LabError::BadInput(format!("value for {k} is not a number: {v:?}")))?;
            map.insert(k.trim().to_string(), v);
        }
        serde_json::from_value(serde_json::Value::Object(map))
            .map_err(|e| LabError::BadInput(format!("curve spec {text:?}: {e}")))
    }

    pub fn name(&self) -> &'static str {
        match self {
            CurveSpec::Segment { .. } => "segment",
            CurveSpec::Zigzag { .. } => "zigzag",
            CurveSpec::Koch { .. } => "koch",
            CurveSpec::Circle { .. } => "circle",
            CurveSpec::Spiral { .. } => "spiral",
            CurveSpec::PlusSign { .. } => "plus_sign",
            CurveSpec::RadialSpoke { .. } => "radial_spoke",
            CurveSpec::TJunction { .. } => "t_junction",
            CurveSpec::RandomWalk { .. } => "random_walk",
        }
    }

    /// Same generator at another depth, for generators that have one.
    pub fn with_depth(&self, depth: u32) -> Option<Self> {
        match self {
            CurveSpec::Koch { angle, .. } => Some(CurveSpec::Koch { depth, angle: *angle }),
            CurveSpec::Circle { .. } => Some(CurveSpec::Circle { n: 4usize << depth }),
            CurveSpec::Zigzag { amplitude, .. } => Some(CurveSpec::Zigzag { n: 1usize << depth, amplitude: *amplitude }),
            CurveSpec::Segment { length } => Some(CurveSpec::Segment { length: *length }),
            _ => None,
        }
    }
}

/// Planar generators embed into higher dimensions by padding with zeros.
pub fn generate(spec: &CurveSpec, space: &NormedSpace) -> Result<Curve, LabError> {
    if space.dim() < 2 {
        return Err(LabError::BadInput("generators need dimension at least 2".into()));
    }
    let (pts, closed) = planar(spec)?;
    let d = space.dim();
    let pts: Vec<Point> = pts
        .into_iter()
        .map(|[x, y]| {
            let mut v = vec![0.0; d];
            v[0] = x;
            v[1] = y;
            v
        })
        .collect();
    Curve::from_points_dedup(*space, pts, closed).map_err(|e| LabError::BadInput(e.to_string()))
}

fn planar(spec: &CurveSpec) -> Result<(Vec<[f64; 2]>, bool), LabError> {
    let bad = |m: String| Err(LabError::BadInput(m));
    Ok(match *spec {
        CurveSpec::Segment { length } => {
            if !(length > 0.0) {
                return bad(format!("segment length must be positive, got {length}"));
            }
            (vec![[0.0, 0.0], [length, 0.0]], false)
        }
        CurveSpec::Zigzag { n, amplitude } => {
            if n == 0 {
                return bad("zigzag needs n ≥ 1".into());
            }
            let pts = (0..=n)
                .map(|i| {
                    let y = if i % 2 == 1 { amplitude } else { 0.0 };
                    [i as f64 / n as f64, y]
                })
                .collect();
            (pts, false)
        }
        CurveSpec::Koch { depth, angle } => {
            if !(angle > 0.0 && angle < 90.0) {
                return bad(format!("koch angle must lie in (0, 90) degrees, got {angle}"));
            }
            if depth > 10 {
                return bad(format!("koch depth {depth} is above 10"));
            }
            (koch(depth, angle.to_radians()), false)
        }
        CurveSpec::Circle { n } => {
            if n < 3 {
                return bad("circle needs n ≥ 3".into());
            }
            let pts = (0..n).map(|i| {
                let t = TAU * i as f64 / n as f64;
                [t.cos(), t.sin()]
            });
            (pts.collect(), true)
        }
        CurveSpec::Spiral { turns, n } => {
            if n < 2 || !(turns > 0.0) {
                return bad("spiral needs n ≥ 2 and positive turns".into());
            }
            let pts = (0..n)
                .map(|i| {
                    let u = i as f64 / (n - 1) as f64;
                    let t = TAU * turns * u;
                    let r = 0.1 + 0.9 * u;
                    [r * t.cos(), r * t.sin()]
                })
                .collect();
            (pts, false)
        }
        CurveSpec::PlusSign { arm } => {
            let a = arm;
            // through the crossing along x, around a loop, back through it along y
            let pts = vec![[-a, 0.0], [a, 0.0], [3.0 * a, 0.0], [3.0 * a, 3.0 * a], [0.0, 3.0 * a], [0.0, a], [0.0, -a]];
            (pts, false)
        }
        CurveSpec::RadialSpoke { length } => (vec![[length, 0.0], [0.0, 0.0]], false),
        CurveSpec::TJunction { arm } => {
            let a = arm;
            // horizontal bar, then a stem coming down onto the bar's midpoint
            (vec![[-a, 0.0], [a, 0.0], [a, a], [0.0, a], [0.0, 0.0]], false)
        }
        CurveSpec::RandomWalk { n, seed } => {
            if n < 1 {
                return bad("random_walk needs n ≥ 1".into());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut p = [0.0, 0.0];
            let mut pts = vec![p];
            for _ in 0..n {
                let t: f64 = rng.gen_range(0.0..TAU);
                let step = 1.0 / n as f64;
                p = [p[0] + step * t.cos(), p[1] + step * t.sin()];
                pts.push(p);
            }
            (pts, false)
        }
    })
}

/// Generalized Koch curve on [0, 1]: each segment becomes four of length
/// 1/(2(1 + cos θ)) times its own, with the bump at angle θ.
fn koch(depth: u32, theta: f64) -> Vec<[f64; 2]> {
    let s = 1.0 / (2.0 * (1.0 + theta.cos()));
    let mut pts = vec![[0.0, 0.0], [1.0, 0.0]];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(4 * pts.len());
        next.push(pts[0]);
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let d = [b[0] - a[0], b[1] - a[1]];
            let p1 = [a[0] + s * d[0], a[1] + s * d[1]];
            let p3 = [b[0] - s * d[0], b[1] - s * d[1]];
            let (c, sn) = (theta.cos(), theta.sin());
            let v = [s * (c * d[0] - sn * d[1]), s * (sn * d[0] + c * d[1])];
            let p2 = [p1[0] + v[0], p1[1] + v[1]];
            next.extend([p1, p2, p3, b]);
        }
        pts = next;
    }
    pts
}

/// Length of the generalized Koch curve at `depth`: (4s)^depth.
pub fn koch_length(depth: u32, angle_deg: f64) -> f64 {
    let s = 1.0 / (2.0 * (1.0 + angle_deg.to_radians().cos()));
    (4.0 * s).powi(depth as i32)
}

/// Angle of the circle generator's sagitta at `n` sides, for cross-checks.
pub fn circle_half_angle(n: usize) -> f64 {
    PI / n as f64
}
