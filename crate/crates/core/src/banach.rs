//! Finite-dimensional ℓ_p spaces: norms, duality maps, lines, J-projections.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{GeomError, Result};
use crate::search::golden_min;
use crate::tol::REL_TOL;
use crate::Point;

/// Norm selector. Only ℓ_p norms are supported; `p = f64::INFINITY` is the max norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Norm {
    Lp(f64),
}

/// Dimension plus norm: the ambient geometry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormedSpace {
    dim: usize,
    norm: Norm,
}

impl NormedSpace {
    pub fn lp(dim: usize, p: f64) -> Result<Self> {
        if dim == 0 {
            return Err(GeomError::Degenerate("dimension must be positive".into()));
        }
        if !(p >= 1.0) {
            return Err(GeomError::InvalidExponent(p));
        }
        Ok(Self { dim, norm: Norm::Lp(p) })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self { dim, norm: Norm::Lp(2.0) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm_kind(&self) -> Norm {
        self.norm
    }

    pub fn p(&self) -> f64 {
        let Norm::Lp(p) = self.norm;
        p
    }

    /// Hölder conjugate of `p`.
    pub fn dual_exponent(&self) -> f64 {
        let p = self.p();
        if p == 1.0 {
            f64::INFINITY
        } else if p.is_infinite() {
            1.0
        } else {
            p / (p - 1.0)
        }
    }

    pub fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(GeomError::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    /// Norm of `x`; the caller guarantees the dimension.
    pub fn norm(&self, x: &[f64]) -> f64 {
        lp_norm(x, self.p())
    }

    /// Norm of `x` with a dimension check.
    pub fn norm_eval(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.norm(x))
    }

    pub fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        let p = self.p();
        if p == 2.0 {
            return a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        }
        lp_norm_iter(a.iter().zip(b).map(|(x, y)| x - y), p)
    }

    /// Norm of a functional in the dual space ℓ_q.
    pub fn dual_norm(&self, g: &[f64]) -> f64 {
        lp_norm(g, self.dual_exponent())
    }
}

fn lp_norm(x: &[f64], p: f64) -> f64 {
    lp_norm_iter(x.iter().copied(), p)
}

fn lp_norm_iter<I: Iterator<Item = f64> + Clone>(x: I, p: f64) -> f64 {
    if p == 2.0 {
        x.map(|v| v * v).sum::<f64>().sqrt()
    } else if p == 1.0 {
        x.map(f64::abs).sum()
    } else if p.is_infinite() {
        x.fold(0.0, |m, v| m.max(v.abs()))
    } else {
        // scale by the max coordinate to avoid overflow in |x_i|^p
        let m = x.clone().fold(0.0_f64, |m, v| m.max(v.abs()));
        if m == 0.0 {
            return 0.0;
        }
        m * x.map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Exponent {
    Num(f64),
    Word(String),
}

#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    norm: String,
    p: Exponent,
    dim: usize,
}

impl Serialize for NormedSpace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let p = self.p();
        let p = if p.is_infinite() { Exponent::Word("inf".into()) } else { Exponent::Num(p) };
        SpaceRepr { norm: "lp".into(), p, dim: self.dim }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NormedSpace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let r = SpaceRepr::deserialize(d)?;
        if r.norm != "lp" {
            return Err(D::Error::custom(format!("unknown norm `{}`", r.norm)));
        }
        let p = match r.p {
            Exponent::Num(p) => p,
            Exponent::Word(w) if matches!(w.as_str(), "inf" | "infinity" | "Infinity") => f64::INFINITY,
            Exponent::Word(w) => w.parse().map_err(D::Error::custom)?,
        };
        NormedSpace::lp(r.dim, p).map_err(D::Error::custom)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a + t·b`
pub fn axpy(a: &[f64], t: f64, b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + t * y).collect()
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Normalized duality map J(x) of a smooth ℓ_p space (1 < p < ∞).
///
/// Satisfies |J(x)|_* = |x| and ⟨J(x), x⟩ = |x|². J(0) = 0.
pub fn duality_map(space: &NormedSpace, x: &[f64]) -> Result<Point> {
    space.check_dim(x)?;
    let p = space.p();
    if p == 1.0 || p.is_infinite() {
        return Err(GeomError::Unsupported(format!("duality map is not single-valued for p = {p}")));
    }
    let n = space.norm(x);
    if n == 0.0 {
        return Ok(vec![0.0; x.len()]);
    }
    // |x|^{2-p} |x_i|^{p-1} = |x| (|x_i|/|x|)^{p-1}
    Ok(x.iter().map(|&v| sign(v) * n * (v.abs() / n).powf(p - 1.0)).collect())
}

/// A unit-norm functional g with ⟨g, v⟩ = |v|, defined for every p.
///
/// For smooth norms this is J(v)/|v|. For ℓ_1 it is the sign vector and for
/// ℓ_∞ it picks the first coordinate of maximal modulus.
pub fn norming_functional(space: &NormedSpace, v: &[f64]) -> Point {
    let p = space.p();
    let n = space.norm(v);
    if n == 0.0 {
        return vec![0.0; v.len()];
    }
    if p == 1.0 {
        v.iter().map(|&x| sign(x)).collect()
    } else if p.is_infinite() {
        let mut best = 0;
        for (i, x) in v.iter().enumerate() {
            if x.abs() > v[best].abs() {
                best = i;
            }
        }
        let mut g = vec![0.0; v.len()];
        g[best] = sign(v[best]);
        g
    } else {
        v.iter().map(|&x| sign(x) * (x.abs() / n).powf(p - 1.0)).collect()
    }
}

/// A line `base + t·dir` with `|dir| = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub base: Point,
    pub dir: Point,
}

impl Line {
    pub fn new(space: &NormedSpace, base: Point, dir: Point) -> Result<Self> {
        space.check_dim(&base)?;
        space.check_dim(&dir)?;
        let n = space.norm(&dir);
        if (n - 1.0).abs() > REL_TOL {
            return Err(GeomError::NonUnitDirection(n));
        }
        Ok(Self { base, dir })
    }

    /// Line through `base` in direction `v`, normalizing `v`.
    pub fn from_direction(space: &NormedSpace, base: Point, v: &[f64]) -> Result<Self> {
        space.check_dim(&base)?;
        space.check_dim(v)?;
        let n = space.norm(v);
        if n == 0.0 || !n.is_finite() {
            return Err(GeomError::Degenerate("zero direction".into()));
        }
        Ok(Self { base, dir: v.iter().map(|x| x / n).collect() })
    }

    pub fn through(space: &NormedSpace, a: &[f64], b: &[f64]) -> Result<Self> {
        Self::from_direction(space, a.to_vec(), &sub(b, a))
    }

    pub fn point_at(&self, t: f64) -> Point {
        axpy(&self.base, t, &self.dir)
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }
}

/// A norm-one linear projection Π onto a line: Π(x) = base + ⟨g, x − base⟩·dir.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JProjection {
    pub line: Line,
    pub functional: Point,
    pub s_param: f64,
}

impl JProjection {
    /// Signed coordinate of Π(x) along the line.
    pub fn coordinate(&self, x: &[f64]) -> f64 {
        self.functional.iter().zip(x.iter().zip(&self.line.base)).map(|(g, (a, b))| g * (a - b)).sum()
    }

    pub fn project(&self, x: &[f64]) -> Point {
        self.line.point_at(self.coordinate(x))
    }
}

fn is_axis_aligned(dir: &[f64]) -> bool {
    dir.iter().filter(|v| v.abs() > REL_TOL).count() == 1
}

/// J-projection onto `line`.
///
/// Smooth ℓ_p uses g = J(dir) and ignores `s_param`. In ℓ_1² along a coordinate
/// axis the one-parameter family indexed by `|s_param| ≤ 1/2` is used: for the
/// x-axis Π(x, y) = (x − s/(1−|s|)·y, 0). Off the axes the norming functional of
/// ℓ_1² is unique and `s_param` has no effect.
pub fn j_projection(space: &NormedSpace, line: &Line, s_param: f64) -> Result<JProjection> {
    space.check_dim(&line.base)?;
    space.check_dim(&line.dir)?;
    let n = space.norm(&line.dir);
    if (n - 1.0).abs() > REL_TOL {
        return Err(GeomError::NonUnitDirection(n));
    }
    let p = space.p();
    if p.is_infinite() {
        return Err(GeomError::Unsupported("J-projection in ℓ_∞".into()));
    }
    if p == 1.0 {
        if space.dim() != 2 {
            return Err(GeomError::Unsupported(format!("J-projection in ℓ_1 with d = {}", space.dim())));
        }
        if !(s_param.abs() <= 0.5) {
            return Err(GeomError::Precondition(format!("|s| must be at most 1/2, got {s_param}")));
        }
        let v = &line.dir;
        let functional = if is_axis_aligned(v) {
            let k = s_param / (1.0 - s_param.abs());
            // axis direction v, with v⊥ = (−v_2, v_1)
            vec![v[0] + k * v[1], v[1] - k * v[0]]
        } else {
            v.iter().map(|&x| sign(x)).collect()
        };
        return Ok(JProjection { line: line.clone(), functional, s_param });
    }
    let functional = duality_map(space, &line.dir)?;
    Ok(JProjection { line: line.clone(), functional, s_param: 0.0 })
}

/// Norm-one projection built from [`norming_functional`]; defined for every p.
///
/// Agrees with [`j_projection`] (s = 0) whenever that one is defined away from
/// the ℓ_1 axes.
pub fn norming_projection(space: &NormedSpace, line: &Line) -> JProjection {
    JProjection { line: line.clone(), functional: norming_functional(space, &line.dir), s_param: 0.0 }
}

pub fn project(proj: &JProjection, x: &[f64]) -> Result<Point> {
    if x.len() != proj.line.dim() {
        return Err(GeomError::DimensionMismatch { expected: proj.line.dim(), got: x.len() });
    }
    Ok(proj.project(x))
}

/// min_t |x − (base + t·dir)|.
///
/// In the plane this is |⟨n, x − base⟩| / |n|_* for n ⟂ dir; otherwise a
/// golden-section search on the convex function of t.
pub fn dist_to_line(space: &NormedSpace, x: &[f64], line: &Line) -> f64 {
    let r = space.dist(x, &line.base);
    if r == 0.0 {
        return 0.0;
    }
    if x.len() == 2 {
        let n = [-line.dir[1], line.dir[0]];
        let v = ((x[0] - line.base[0]) * n[0] + (x[1] - line.base[1]) * n[1]).abs();
        return (v / space.dual_norm(&n)).min(r);
    }
    let bound = 4.0 * r + 1.0;
    let d = x.len();
    let mut buf = vec![0.0; d];
    let mut f = |t: f64| {
        for i in 0..d {
            buf[i] = x[i] - line.base[i] - t * line.dir[i];
        }
        space.norm(&buf)
    };
    let tol = 1e-15 * r.max(1e-300);
    let (_, v) = golden_min(&mut f, -bound, bound, tol, 400);
    v.min(r)
}

/// Shadow ratio |Π(u) − Π(v)| / |u − v| of `line` under `proj`, with u, v = base, base + dir.
pub fn antislope(line: &Line, proj: &JProjection) -> f64 {
    dot(&proj.functional, &line.dir).abs().min(1.0)
}

/// Antislope measured with an explicit pair of distinct points on the line.
pub fn antislope_between(space: &NormedSpace, proj: &JProjection, u: &[f64], v: &[f64]) -> Result<f64> {
    let d = space.dist(u, v);
    if d == 0.0 {
        return Err(GeomError::Degenerate("coincident points".into()));
    }
    let shadow = space.dist(&proj.project(u), &proj.project(v));
    Ok((shadow / d).min(1.0))
}

/// Result of the counting check on a δ-separated set near two lines.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountReport {
    /// max_v |v − Π_i v| / δ over both projections.
    pub alpha: f64,
    /// Largest #(V ∩ B(x, rδ)) − (1 + 3r) over the tested centers and radii.
    pub max_excess: f64,
    /// The two projections order V compatibly.
    pub order_ok: bool,
    /// |Π v₁ − Π v₂| ≤ |v₁ − v₂| ≤ (1+3α)|Π v₁ − Π v₂| for all pairs.
    pub sandwich_ok: bool,
}

impl CountReport {
    pub fn ok(&self) -> bool {
        self.max_excess <= 0.0 && self.order_ok && self.sandwich_ok
    }
}

/// Checks the ordering, sandwich and local-finiteness statements for a δ-separated
/// set `v` lying within αδ (α < 1/6) of both projections. Ball counts are tested at
/// every point of `v` and every midpoint of two points, at each radius where the
/// count jumps.
pub fn verify_counting(space: &NormedSpace, v: &[Point], delta: f64, p1: &JProjection, p2: &JProjection) -> Result<CountReport> {
    if !(delta > 0.0) {
        return Err(GeomError::Precondition(format!("δ must be positive, got {delta}")));
    }
    for x in v {
        space.check_dim(x)?;
    }
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if space.dist(&v[i], &v[j]) < delta {
                return Err(GeomError::Precondition("V is not δ-separated".into()));
            }
        }
    }
    let alpha = v
        .iter()
        .flat_map(|x| [space.dist(x, &p1.project(x)), space.dist(x, &p2.project(x))])
        .fold(0.0, f64::max)
        / delta;
    if !(alpha < 1.0 / 6.0) {
        return Err(GeomError::Precondition(format!("α = {alpha} is not below 1/6")));
    }
    let slack = 1e-12 * delta;
    let c1: Vec<f64> = v.iter().map(|x| p1.coordinate(x)).collect();
    let c2: Vec<f64> = v.iter().map(|x| p2.coordinate(x)).collect();
    let mut orientation = 0.0;
    let mut order_ok = true;
    let mut sandwich_ok = true;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let (a, b) = (c1[j] - c1[i], c2[j] - c2[i]);
            if orientation == 0.0 {
                orientation = sign(a * b);
            }
            if a * b * orientation < 0.0 {
                order_ok = false;
            }
            let d = space.dist(&v[i], &v[j]);
            for shadow in [a.abs(), b.abs()] {
                if shadow > d + slack || d > (1.0 + 3.0 * alpha) * shadow + slack {
                    sandwich_ok = false;
                }
            }
        }
    }
    let mut centers: Vec<Point> = v.to_vec();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            centers.push(v[i].iter().zip(&v[j]).map(|(a, b)| 0.5 * (a + b)).collect());
        }
    }
    let mut max_excess = f64::NEG_INFINITY;
    for x in &centers {
        let mut d: Vec<f64> = v.iter().map(|y| space.dist(x, y)).collect();
        d.sort_by(f64::total_cmp);
        for (n, &r) in d.iter().enumerate() {
            if d.get(n + 1).map_or(false, |&next| next == r) {
                continue;
            }
            max_excess = max_excess.max((n + 1) as f64 - (1.0 + 3.0 * r / delta));
        }
    }
    Ok(CountReport { alpha, max_excess, order_ok, sandwich_ok })
}
