use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jones_core::banach::NormedSpace;
use jones_lab::config::{CurveSource, ExperimentConfig, Profile, ProfileName};
use jones_lab::generators::CurveSpec;
use jones_lab::output::{write_bundle, write_ratio_table};
use jones_lab::pipeline::{run_until, Bundle, Stage};
use jones_lab::ratio::tsp_ratio_table;
use jones_lab::suites::{table, verify_all, Counts, Fault};
use jones_lab::LabError;

#[derive(Parser)]
#[command(name = "jones", version, about = "β-numbers, cores and martingale weights on polyline curves")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the net hierarchy and check its invariants.
    Net(Common),
    /// β over every ball of the family.
    BetaMap(Common),
    /// diam Γ + Σ β^p diam Q.
    JonesSum(Common),
    /// Arc classification and 𝓑 detection per ball.
    Classify(Common),
    /// Core trees per bucket with the core lemma checks.
    Cores(Common),
    /// Martingale weights and the q-hypothesis scan.
    Weights(Common),
    /// Run the property suites.
    Verify(VerifyArgs),
    /// Jones sum over length across generator depths.
    RatioTable(RatioArgs),
    /// Write every report and plot of a full run.
    Plot(Common),
}

#[derive(Args, Clone, Default)]
struct Common {
    /// JSON experiment config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Generator spec such as `koch:depth=4` (overrides the config's curve).
    #[arg(long)]
    curve: Option<String>,
    /// Exponent of the Jones sum.
    #[arg(long)]
    p: Option<f64>,
    /// ℓ_p exponent of the ambient norm (`inf` for the max norm).
    #[arg(long)]
    norm: Option<f64>,
    /// Ambient dimension.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    inflation: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Allow λ outside {1, 5}.
    #[arg(long)]
    unsafe_lambda: bool,
    /// paper or lab.
    #[arg(long)]
    profile: Option<String>,
    /// Level stride of the cores.
    #[arg(long = "J")]
    j: Option<u32>,
    #[arg(long)]
    k_min: Option<i32>,
    #[arg(long)]
    k_max: Option<i32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; nothing is written without it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restrict to these suites (repeatable).
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Use the full case counts.
    #[arg(long)]
    full: bool,
    /// Break a check on purpose (lipschitz).
    #[arg(long)]
    inject_fault: Option<String>,
}

#[derive(Args)]
struct RatioArgs {
    #[command(flatten)]
    common: Common,
    /// Depths, e.g. `3..6` or `1,2,4`.
    #[arg(long, default_value = "1..4")]
    depths: String,
}

fn config(c: &Common) -> Result<ExperimentConfig, LabError> {
    let mut cfg = match (&c.config, &c.curve) {
        (Some(path), _) => ExperimentConfig::load(path)?,
        (None, Some(_)) => ExperimentConfig::for_curve(CurveSpec::Segment { length: 1.0 }),
        (None, None) => return Err(LabError::BadInput("give --config or --curve".into())),
    };
    if let Some(spec) = &c.curve {
        cfg.curve = CurveSource::Generator(CurveSpec::parse(spec)?);
    }
    if c.norm.is_some() || c.dim.is_some() {
        let dim = c.dim.unwrap_or(cfg.space.dim());
        let p = c.norm.unwrap_or(cfg.space.p());
        cfg.space = NormedSpace::lp(dim, p).map_err(|e| LabError::BadInput(e.to_string()))?;
    }
    if let Some(p) = c.p {
        cfg.p = p;
    }
    if let Some(a) = c.inflation {
        cfg.inflation = a;
    }
    if let Some(l) = c.lambda {
        cfg.lambda = l;
    }
    cfg.unsafe_lambda |= c.unsafe_lambda;
    if let Some(p) = &c.profile {
        cfg.profile = match p.as_str() {
            "paper" => Profile::Named(ProfileName::Paper),
            "lab" => Profile::Named(ProfileName::Lab),
            other => return Err(LabError::BadInput(format!("unknown profile {other:?}; use paper or lab"))),
        };
    }
    if let Some(j) = c.j {
        cfg.j = j;
    }
    if c.k_min.is_some() {
        cfg.k_min = c.k_min;
    }
    if c.k_max.is_some() {
        cfg.k_max = c.k_max;
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if c.out.is_some() {
        cfg.out = c.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_depths(s: &str) -> Result<Vec<u32>, LabError> {
    let bad = || LabError::BadInput(format!("bad depth list {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        return if a <= b { Ok((a..=b).collect()) } else { Err(bad()) };
    }
    s.split(',').map(|d| d.trim().parse().map_err(|_| bad())).collect()
}

fn emit(bundle: &Bundle, cfg: &ExperimentConfig) -> Result<(), LabError> {
    if let Some(dir) = &cfg.out {
        let files = write_bundle(bundle, dir)?;
        println!("wrote {} to {}", files.join(", "), dir.display());
    }
    Ok(())
}

fn finish(bundle: &Bundle) -> Result<(), LabError> {
    let failed = bundle.failures();
    for f in &failed {
        println!("FAIL {}: {}", f.name, f.detail);
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(LabError::Violation(failed.len()))
    }
}

fn staged(c: &Common, stage: Stage, show: impl Fn(&Bundle)) -> Result<(), LabError> {
    let cfg = config(c)?;
    let bundle = run_until(&cfg, stage)?;
    show(&bundle);
    emit(&bundle, &cfg)?;
    finish(&bundle)
}

fn run(cli: Cli) -> Result<(), LabError> {
    match cli.cmd {
        Cmd::Net(c) => staged(&c, Stage::Nets, |b| {
            let s = &b.summary;
            println!("samples {} at spacing {:e}, levels {}..={}, balls {}", s.samples, s.sample_spacing, s.k_min, s.k_max, s.balls);
            for lvl in &b.family.hierarchy.levels {
                println!("  level {:>3}: {} points", lvl.k, lvl.points.len());
            }
            if s.checks.is_empty() {
                println!("net check skipped: more than {} samples", jones_lab::pipeline::NET_CHECK_LIMIT);
            }
        }),
        Cmd::BetaMap(c) => staged(&c, Stage::Betas, |b| {
            println!("{} balls, max β {:.6e}", b.betas.len(), b.summary.beta_max);
            let mut levels: Vec<i32> = b.betas.iter().map(|r| r.level).collect();
            levels.dedup();
            for k in levels {
                let row: Vec<f64> = b.betas.iter().filter(|r| r.level == k).map(|r| r.beta).collect();
                let mean = row.iter().sum::<f64>() / row.len() as f64;
                let max = row.iter().copied().fold(0.0, f64::max);
                println!("  level {k:>3}: {:>6} balls, mean β {mean:.4e}, max β {max:.4e}", row.len());
            }
        }),
        Cmd::JonesSum(c) => staged(&c, Stage::Betas, |b| {
            let s = &b.summary;
            println!("S = {:.12}  length = {:.12}  diam = {:.12}  S/length = {:.6}", s.jones_sum, s.length, s.diam, s.ratio);
        }),
        Cmd::Classify(c) => staged(&c, Stage::Classify, |b| {
            let s = &b.summary;
            println!("{} balls, {} in 𝓑 ({} excluded as 𝓑₀), ε₁ = {:e}, ε₂ = {:e}", s.balls, s.b_balls, s.b0_excluded, s.eps1, s.eps2);
        }),
        Cmd::Cores(c) => staged(&c, Stage::Full, |b| {
            println!("{} balls in 𝒢 over {} buckets", b.summary.g_balls, b.summary.buckets);
            for k in &b.buckets {
                let depth = k.nodes.iter().map(|n| n.level).max().unwrap_or(0) - k.nodes.iter().map(|n| n.level).min().unwrap_or(0);
                println!(
                    "  M={:<3} j={:<2} cores {:>4}  level span {:>3}  core lemma {}  max shape ratio {:.6}",
                    k.m,
                    k.j,
                    k.cores.len(),
                    depth,
                    if k.core_lemma.ok() { "ok" } else { "FAIL" },
                    k.core_lemma.max_shape_ratio
                );
            }
        }),
        Cmd::Weights(c) => staged(&c, Stage::Full, |b| {
            for k in &b.buckets {
                match (&k.weights, &k.weights_skipped) {
                    (Some(w), _) => {
                        let max = jones_core::martingale::max_ratio(w);
                        let y = k.bounds.as_ref().map_or(f64::NAN, |r| r.max_y);
                        println!("  M={:<3} j={:<2} roots {:>3}  max ratio {max:.6}  max Y {y:.4}", k.m, k.j, w.len());
                    }
                    (None, Some(why)) => println!("  M={:<3} j={:<2} skipped: {why}", k.m, k.j),
                    (None, None) => {}
                }
            }
        }),
        Cmd::Plot(c) => {
            let cfg = config(&c)?;
            if cfg.out.is_none() {
                return Err(LabError::BadInput("plot needs --out".into()));
            }
            let bundle = run_until(&cfg, Stage::Full)?;
            emit(&bundle, &cfg)?;
            finish(&bundle)
        }
        Cmd::Verify(v) => {
            let fault = v.inject_fault.as_deref().map(str::parse::<Fault>).transpose()?;
            let counts = if v.full { Counts::FULL } else { Counts::QUICK };
            let results = verify_all(v.seed, &v.suites, counts, fault)?;
            print!("{}", table(&results));
            let failed: Vec<_> = results.iter().filter(|r| !r.passed()).collect();
            for r in &failed {
                println!("violated: {}/{}", r.suite, r.property);
            }
            if failed.is_empty() {
                Ok(())
            } else {
                Err(LabError::Violation(failed.len()))
            }
        }
        Cmd::RatioTable(r) => {
            let cfg = config(&r.common)?;
            let rows = tsp_ratio_table(&cfg, &parse_depths(&r.depths)?)?;
            println!("{:>5} {:>8} {:>14} {:>4}..{:<4} {:>8} {:>16} {:>10} {:>8}", "depth", "vertices", "length", "kmin", "kmax", "balls", "S", "S/length", "secs");
            for row in &rows {
                println!(
                    "{:>5} {:>8} {:>14.10} {:>4}..{:<4} {:>8} {:>16.8} {:>10.6} {:>8.2}",
                    row.depth, row.vertices, row.length, row.k_min, row.k_max, row.balls, row.jones_sum, row.ratio, row.seconds
                );
            }
            if let Some(dir) = &cfg.out {
                write_ratio_table(&rows, dir)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
