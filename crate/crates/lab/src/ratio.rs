//! Jones sum over length across the depths of a generator family.

use jones_core::beta::{beta_map, jones_sum_from_map};
use jones_core::curve::Curve;
use jones_core::net::{build_nets, make_family};
use serde::Serialize;

use crate::config::{CurveSource, ExperimentConfig};
use crate::generators::{generate, CurveSpec};
use crate::pipeline::{sample_curve, sample_spacing};
use crate::LabError;

#[derive(Clone, Debug, Serialize)]
pub struct RatioRow {
    pub depth: u32,
    pub vertices: usize,
    pub length: f64,
    pub diam: f64,
    pub k_min: i32,
    pub k_max: i32,
    pub balls: usize,
    pub jones_sum: f64,
    pub ratio: f64,
    pub seconds: f64,
}

/// Finest level: one past the scale of the shortest edge.
pub fn finest_level(c: &Curve) -> i32 {
    let s = c.space();
    let shortest = c.path().windows(2).map(|w| s.dist(&w[0], &w[1])).fold(f64::INFINITY, f64::min);
    (1.0 / shortest).log2().ceil() as i32 + 1
}

/// Runs the β-map over the full family at each depth. The level range is
/// chosen per depth: k_min from the diameter, k_max from the shortest edge,
/// unless the config pins them.
pub fn tsp_ratio_table(base: &ExperimentConfig, depths: &[u32]) -> Result<Vec<RatioRow>, LabError> {
    let CurveSource::Generator(spec) = &base.curve else {
        return Err(LabError::BadInput("ratio table needs a generator curve".into()));
    };
    let mut rows = Vec::new();
    for &depth in depths {
        let start = std::time::Instant::now();
        let spec: CurveSpec = spec
            .with_depth(depth)
            .ok_or_else(|| LabError::BadInput(format!("generator {} has no depth parameter", spec.name())))?;
        let c = generate(&spec, &base.space)?;
        let diam = c.diam();
        let k_min = base.k_min.unwrap_or_else(|| (1.0 / diam).log2().floor() as i32);
        let k_max = base.k_max.unwrap_or_else(|| finest_level(&c)).max(k_min);
        let samples = sample_curve(&c, sample_spacing(k_max));
        let h = build_nets(&samples, k_min, k_max, &base.space).map_err(|e| LabError::Geometry(e.to_string()))?;
        let family = make_family(h, base.inflation).map_err(|e| LabError::Geometry(e.to_string()))?;
        let map = beta_map(&family, &c).map_err(|e| LabError::Geometry(e.to_string()))?;
        let sum = jones_sum_from_map(&family, &map, diam, base.p, base.c1)
            .map_err(|e| LabError::Geometry(e.to_string()))?;
        rows.push(RatioRow {
            depth,
            vertices: c.vertices().len(),
            length: c.length(),
            diam,
            k_min,
            k_max,
            balls: family.balls.len(),
            jones_sum: sum,
            ratio: sum / c.length(),
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    Ok(rows)
}
