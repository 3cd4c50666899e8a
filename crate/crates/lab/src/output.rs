//! CSV, JSON and SVG emission. Everything is written in a fixed order so that
//! the same run produces byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::pipeline::{Bucket, Bundle, Stage};
use crate::ratio::RatioRow;
use crate::LabError;

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), LabError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| LabError::BadInput(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), LabError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> LabError {
    LabError::Io(std::io::Error::new(std::io::ErrorKind::Other, e))
}

#[derive(Serialize)]
struct BetaCsv {
    ball_id: String,
    level: i32,
    x: f64,
    y: f64,
    radius: f64,
    beta: f64,
    exact: bool,
}

#[derive(Serialize)]
struct BucketCores<'a> {
    #[serde(rename = "M")]
    m: i32,
    j: i32,
    cores: &'a [crate::pipeline::CoreJson],
}

#[derive(Serialize)]
struct BucketWeights<'a> {
    #[serde(rename = "M")]
    m: i32,
    j: i32,
    skipped: &'a Option<String>,
    reports: &'a Option<Vec<jones_core::martingale::QReport>>,
    bounds: &'a Option<jones_core::martingale::BoundsReport>,
    conservation: &'a [jones_core::martingale::ConservationReport],
}

#[derive(Serialize)]
struct BucketNodes<'a> {
    #[serde(rename = "M")]
    m: i32,
    j: i32,
    core_lemma: &'a jones_core::cores::CoreLemmaReport,
    nodes: &'a [crate::pipeline::NodeReport],
}

/// Writes the files that exist for the stages the bundle went through.
pub fn write_bundle(bundle: &Bundle, dir: &Path) -> Result<Vec<String>, LabError> {
    fs::create_dir_all(dir)?;
    let mut written = vec!["report.json".to_string()];
    write_json(&dir.join("report.json"), &bundle.summary)?;
    if !bundle.betas.is_empty() {
        let rows: Vec<BetaCsv> = bundle
            .betas
            .iter()
            .map(|b| BetaCsv {
                ball_id: b.ball_id.to_string(),
                level: b.level,
                x: b.center[0],
                y: b.center.get(1).copied().unwrap_or(0.0),
                radius: b.radius,
                beta: b.beta,
                exact: b.exact,
            })
            .collect();
        write_csv(&dir.join("beta_map.csv"), &rows)?;
        fs::write(dir.join("beta_scale.svg"), beta_scatter_svg(bundle))?;
        written.extend(["beta_map.csv".to_string(), "beta_scale.svg".to_string()]);
    }
    if !bundle.classes.is_empty() {
        write_csv(&dir.join("classification.csv"), &bundle.classes)?;
        written.push("classification.csv".into());
    }
    if bundle.stage == Stage::Full {
        write_buckets(&bundle.buckets, dir)?;
        written.extend(["cores.json".to_string(), "nodes.json".to_string(), "weights.json".to_string()]);
    }
    Ok(written)
}

fn write_buckets(buckets: &[Bucket], dir: &Path) -> Result<(), LabError> {
    let cores: Vec<BucketCores> = buckets.iter().map(|b| BucketCores { m: b.m, j: b.j, cores: &b.cores }).collect();
    write_json(&dir.join("cores.json"), &cores)?;
    let nodes: Vec<BucketNodes> =
        buckets.iter().map(|b| BucketNodes { m: b.m, j: b.j, core_lemma: &b.core_lemma, nodes: &b.nodes }).collect();
    write_json(&dir.join("nodes.json"), &nodes)?;
    let weights: Vec<BucketWeights> = buckets
        .iter()
        .map(|b| BucketWeights {
            m: b.m,
            j: b.j,
            skipped: &b.weights_skipped,
            reports: &b.weights,
            bounds: &b.bounds,
            conservation: &b.conservation,
        })
        .collect();
    write_json(&dir.join("weights.json"), &weights)
}

pub fn write_ratio_table(rows: &[RatioRow], dir: &Path) -> Result<(), LabError> {
    fs::create_dir_all(dir)?;
    write_csv(&dir.join("ratio_table.csv"), rows)?;
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.depth as f64, r.ratio)).collect();
    fs::write(dir.join("ratio_depth.svg"), line_svg(&pts, "depth", "S / length"))?;
    Ok(())
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(pts: &[(f64, f64)]) -> Self {
        let mut f = Frame { x0: f64::INFINITY, x1: f64::NEG_INFINITY, y0: 0.0, y1: f64::NEG_INFINITY };
        for &(x, y) in pts {
            f.x0 = f.x0.min(x);
            f.x1 = f.x1.max(x);
            f.y0 = f.y0.min(y);
            f.y1 = f.y1.max(y);
        }
        if !(f.x1 > f.x0) {
            f.x0 -= 0.5;
            f.x1 += 0.5;
        }
        if !(f.y1 > f.y0) {
            f.y1 = f.y0 + 1.0;
        }
        f
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let u = PAD + (x - self.x0) / (self.x1 - self.x0) * (W - 2.0 * PAD);
        let v = H - PAD - (y - self.y0) / (self.y1 - self.y0) * (H - 2.0 * PAD);
        (u, v)
    }
}

fn axes(out: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let (l, b) = (PAD, H - PAD);
    let _ = writeln!(out, r#"<path d="M{l} {PAD} V{b} H{}" stroke="black" fill="none"/>"#, W - PAD);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{xlabel}</text>"#, W / 2.0, H - 12.0);
    let _ = writeln!(out, r#"<text x="14" y="{}" transform="rotate(-90 14 {})" text-anchor="middle">{ylabel}</text>"#, H / 2.0, H / 2.0);
    let _ = writeln!(out, r#"<text x="{l}" y="{}" text-anchor="middle">{:.3}</text>"#, b + 16.0, f.x0);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{:.3}</text>"#, W - PAD, b + 16.0, f.x1);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{:.3}</text>"#, l - 4.0, b, f.y0);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{:.3}</text>"#, l - 4.0, PAD + 4.0, f.y1);
}

/// β against log₂ of the ball radius.
pub fn beta_scatter_svg(bundle: &Bundle) -> String {
    let pts: Vec<(f64, f64)> = bundle.betas.iter().map(|b| (b.radius.log2(), b.beta)).collect();
    let f = Frame::fit(&pts);
    let mut out = String::new();
    axes(&mut out, &f, "log2 radius", "beta");
    for &(x, y) in &pts {
        let (u, v) = f.map(x, y);
        let _ = writeln!(out, r#"<circle cx="{u:.2}" cy="{v:.2}" r="2" fill="steelblue" fill-opacity="0.5"/>"#);
    }
    out.push_str("</svg>\n");
    out
}

pub fn line_svg(pts: &[(f64, f64)], xlabel: &str, ylabel: &str) -> String {
    let f = Frame::fit(pts);
    let mut out = String::new();
    axes(&mut out, &f, xlabel, ylabel);
    let path: Vec<String> = pts
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            let (u, v) = f.map(x, y);
            format!("{}{u:.2} {v:.2}", if i == 0 { "M" } else { "L" })
        })
        .collect();
    let _ = writeln!(out, r#"<path d="{}" stroke="firebrick" fill="none" stroke-width="2"/>"#, path.join(" "));
    for &(x, y) in pts {
        let (u, v) = f.map(x, y);
        let _ = writeln!(out, r#"<circle cx="{u:.2}" cy="{v:.2}" r="3" fill="firebrick"/>"#);
    }
    out.push_str("</svg>\n");
    out
}
