//! Command-line wiring: manifest loading, grid overrides, report emission.
//!
//! Exit codes: 0 success, 1 a mathematical bound was violated (so CI can
//! tell "claim falsified numerically" from tool failure), 2 input error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremal;
use crate::maps::{AnalyticMap, LogharmonicMap, Variant};
use crate::render;
use crate::schwarz::{self, GridSpec, SupremumReport};
use crate::series::ComplexSeries;
use crate::starlike;
use crate::suite::{self, InstanceSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BOUND_VIOLATION: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

const NORM_BOUND: f64 = 11.0;
const BLOCH_BOUND: f64 = 8.0;
const HARMONIC_BOUND: f64 = 3.0;
const BOUND_SLACK: f64 = 1e-6;
const GROWTH_SLACK: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "logharm",
    about = "Numerical verification toolkit for logharmonic mappings",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Number of radial grid lines (packed toward the boundary).
    #[arg(long, default_value_t = 96)]
    grid_radii: usize,
    /// Number of angular samples per circle.
    #[arg(long, default_value_t = 384)]
    grid_angles: usize,
    /// Outer radius of the search region.
    #[arg(long, default_value_t = 1.0 - 1e-4)]
    r_max: f64,
    /// Golden-section refinement iterations.
    #[arg(long, default_value_t = 30)]
    refine_iters: usize,
}

impl GridArgs {
    fn grid(&self) -> GridSpec {
        GridSpec {
            radii_count: self.grid_radii,
            angles_count: self.grid_angles,
            r_max: self.r_max,
            refine_iters: self.refine_iters,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Disk-supremum norm of the logharmonic pre-Schwarzian.
    Norm {
        #[arg(long)]
        manifest: PathBuf,
        /// Series truncation order for derived quantities.
        #[arg(long, default_value_t = 64)]
        order: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Bloch seminorm sup (1-|z|^2)(|h'| + |g'|).
    Bloch {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value_t = 64)]
        order: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Norm of the harmonic pre-Schwarzian of log f.
    HarmonicNorm {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value_t = 64)]
        order: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Scan the sharpness envelope sup_r E(r,t) for a list of t values.
    VerifySharpness {
        /// Parameter values t in (0,1), comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 0.9, 0.99, 0.999, 0.9999])]
        t: Vec<f64>,
        /// Radial scan resolution per t.
        #[arg(long, default_value_t = 512)]
        resolution: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare |f(r)| against the growth bound for the equality families.
    VerifyGrowth {
        /// Dilatation parameters, comma separated (0 means omega = z).
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.25, 0.5, 0.75])]
        alpha: Vec<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Coefficient criterion, field scan, and argument oracle.
    Starlike {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value_t = 64)]
        order: usize,
        /// Circle radius for the argument-monotonicity oracle.
        #[arg(long, default_value_t = 0.7)]
        oracle_radius: f64,
        #[arg(long, default_value_t = 4096)]
        oracle_steps: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sample image curves and emit SVG (or CSV/JSON).
    Render {
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Render the starlike family member f_alpha instead of (or
        /// overriding) the manifest map.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = render::RENDER_R_MAX)]
        r_max: f64,
        /// Base angular sample count per circle.
        #[arg(long, default_value_t = 256)]
        grid_angles: usize,
        /// Number of concentric circles.
        #[arg(long, default_value_t = 6)]
        circles: usize,
        /// Number of radial rays.
        #[arg(long, default_value_t = 12)]
        rays: usize,
        #[arg(long, default_value_t = 64)]
        order: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Certify the 11/8/3 bounds on seeded random instances.
    RandomSuite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Explicit instance list (JSON) instead of seeded generation.
        #[arg(long, conflicts_with_all = ["seed", "count"])]
        instances: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

// ---------------------------------------------------------------------------
// Manifest loading

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    variant: String,
    h: MapSpec,
    #[serde(default)]
    omega: Option<MapSpec>,
    #[serde(default)]
    g: Option<MapSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapSpec {
    #[serde(default)]
    preset: Option<String>,
    #[serde(default)]
    params: Option<Params>,
    #[serde(default)]
    series: Option<Vec<[f64; 2]>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Params {
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    t: Option<f64>,
    #[serde(default)]
    c: Option<[f64; 2]>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidManifest(msg.into())
}

fn build_map(spec: &MapSpec) -> Result<AnalyticMap> {
    match (&spec.preset, &spec.series) {
        (Some(_), Some(_)) => Err(bad("a map is either a preset or a series, not both")),
        (None, None) => Err(bad("a map needs a \"preset\" or a \"series\"")),
        (None, Some(coeffs)) => {
            let coeffs: Vec<Complex64> = coeffs
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect();
            Ok(AnalyticMap::Series(ComplexSeries::new(coeffs)?))
        }
        (Some(name), None) => {
            let p = spec.params.as_ref();
            let alpha = || {
                p.and_then(|p| p.alpha)
                    .ok_or_else(|| bad(format!("preset {name} needs params.alpha")))
            };
            Ok(match name.to_ascii_uppercase().as_str() {
                "IDENTITY" => AnalyticMap::Identity,
                "KOEBE_LOG" => AnalyticMap::KoebeLog,
                "LOG1P" => AnalyticMap::Log1p,
                "QUAD" => AnalyticMap::Quad { alpha: alpha()? },
                "MOBIUS" => AnalyticMap::MobiusSub {
                    t: p.and_then(|p| p.t)
                        .ok_or_else(|| bad("preset MOBIUS needs params.t"))?,
                },
                "MOBIUS_PLUS" => AnalyticMap::MobiusAdd { alpha: alpha()? },
                "SCALEZ" => AnalyticMap::ScaleZ,
                "NEGZ" => AnalyticMap::NegZ,
                "CONST" => {
                    let [re, im] = p
                        .and_then(|p| p.c)
                        .ok_or_else(|| bad("preset CONST needs params.c = [re, im]"))?;
                    AnalyticMap::Const {
                        c: Complex64::new(re, im),
                    }
                }
                other => return Err(bad(format!("unknown preset {other}"))),
            })
        }
    }
}

fn parse_variant(s: &str) -> Result<Variant> {
    match s.to_ascii_lowercase().as_str() {
        "nonvanishing" => Ok(Variant::Nonvanishing),
        "origin_fixed" => Ok(Variant::OriginFixed),
        other => Err(bad(format!(
            "variant must be \"nonvanishing\" or \"origin_fixed\", got {other}"
        ))),
    }
}

/// Loads a mapping manifest; when a dilatation is given, g is derived at
/// the requested order.
pub fn load_manifest(path: &Path, order: usize) -> Result<LogharmonicMap> {
    let text = std::fs::read_to_string(path)?;
    let m: Manifest =
        serde_json::from_str(&text).map_err(|e| bad(format!("manifest parse error: {e}")))?;
    let variant = parse_variant(&m.variant)?;
    let h = build_map(&m.h)?;
    match (&m.omega, &m.g) {
        (Some(_), Some(_)) | (None, None) => {
            Err(bad("manifest needs exactly one of \"omega\" and \"g\""))
        }
        (Some(om), None) => {
            LogharmonicMap::from_dilatation(h, build_map(om)?, variant, order)
        }
        (None, Some(g)) => LogharmonicMap::new(h, build_map(g)?, variant),
    }
}

// ---------------------------------------------------------------------------
// Output plumbing

fn write_output(out: &OutArgs, content: &str) -> Result<()> {
    match &out.out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn profile_csv(report: &SupremumReport) -> String {
    let mut s = String::from("r,max\n");
    for &(r, m) in &report.radial_profile {
        let _ = writeln!(s, "{r},{m}");
    }
    s
}

fn emit_supremum(out: &OutArgs, report: &SupremumReport) -> Result<()> {
    let content = match out.format {
        Format::Json => to_json(report)?,
        Format::Csv => profile_csv(report),
        Format::Svg => return Err(bad("svg output only applies to render")),
    };
    write_output(out, &content)
}

fn bound_exit(value: f64, bound: f64, divergent: bool) -> i32 {
    if divergent || value > bound + BOUND_SLACK {
        EXIT_BOUND_VIOLATION
    } else {
        EXIT_OK
    }
}

// ---------------------------------------------------------------------------
// Subcommand bodies

fn run_norm(manifest: &Path, order: usize, grid: &GridSpec, out: &OutArgs) -> Result<i32> {
    let f = load_manifest(manifest, order)?;
    let report = schwarz::logharmonic_norm(&f, grid)?;
    emit_supremum(out, &report)?;
    Ok(bound_exit(report.value, NORM_BOUND, report.boundary_divergent))
}

fn run_bloch(manifest: &Path, order: usize, grid: &GridSpec, out: &OutArgs) -> Result<i32> {
    let f = load_manifest(manifest, order)?;
    let report = schwarz::bloch_seminorm(&f, grid)?;
    emit_supremum(out, &report)?;
    Ok(bound_exit(report.value, BLOCH_BOUND, report.boundary_divergent))
}

fn run_harmonic(manifest: &Path, order: usize, grid: &GridSpec, out: &OutArgs) -> Result<i32> {
    let f = load_manifest(manifest, order)?;
    let omega = f.dilatation()?;
    let report = schwarz::harmonic_norm(&f.h, &omega, grid)?;
    emit_supremum(out, &report)?;
    Ok(bound_exit(
        report.value,
        HARMONIC_BOUND,
        report.boundary_divergent,
    ))
}

fn run_sharpness(ts: &[f64], resolution: usize, out: &OutArgs) -> Result<i32> {
    if ts.iter().any(|&t| !(t > 0.0 && t < 1.0)) {
        return Err(bad("t values must lie in (0,1)"));
    }
    let scans: Vec<_> = ts
        .iter()
        .map(|&t| extremal::sharpness_scan(t, resolution))
        .collect();
    let content = match out.format {
        Format::Json => to_json(&scans)?,
        Format::Csv => {
            let mut s = String::from("t,r,E\n");
            for scan in &scans {
                for &(r, e) in &scan.samples {
                    let _ = writeln!(s, "{},{r},{e}", scan.t);
                }
            }
            s
        }
        Format::Svg => return Err(bad("svg output only applies to render")),
    };
    write_output(out, &content)?;
    let violated = scans.iter().any(|s| s.sup_e > NORM_BOUND + BOUND_SLACK);
    Ok(if violated { EXIT_BOUND_VIOLATION } else { EXIT_OK })
}

fn run_growth(alphas: &[f64], out: &OutArgs) -> Result<i32> {
    if alphas.iter().any(|&a| !(0.0..1.0).contains(&a)) {
        return Err(bad("alpha values must lie in [0,1)"));
    }
    let mut reports = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let f = extremal::growth_equality_family(alpha)?;
        let probes: Vec<Complex64> = (1..=9)
            .map(|k| Complex64::new(k as f64 / 10.0, 0.0))
            .collect();
        reports.push(extremal::growth_verify(&f, alpha, &probes)?);
    }
    let content = match out.format {
        Format::Json => to_json(&reports)?,
        Format::Csv => {
            let mut s = String::from("alpha,r,lhs,rhs_oracle\n");
            for rep in &reports {
                for i in 0..rep.r_samples.len() {
                    let _ = writeln!(
                        s,
                        "{},{},{},{}",
                        rep.alpha, rep.r_samples[i], rep.lhs[i], rep.rhs_oracle[i]
                    );
                }
            }
            s
        }
        Format::Svg => return Err(bad("svg output only applies to render")),
    };
    write_output(out, &content)?;
    let violated = reports.iter().any(|r| r.max_violation > GROWTH_SLACK);
    Ok(if violated { EXIT_BOUND_VIOLATION } else { EXIT_OK })
}

#[derive(Serialize)]
struct StarlikeOutput {
    report: starlike::StarlikeReport,
    oracle_radius: f64,
    oracle_steps: usize,
    oracle_discrepancy: f64,
}

fn run_starlike(
    manifest: &Path,
    order: usize,
    oracle_radius: f64,
    oracle_steps: usize,
    grid: &GridSpec,
    out: &OutArgs,
) -> Result<i32> {
    let f = load_manifest(manifest, order)?;
    let report = starlike::field_scan(&f, grid, order)?;
    let oracle_discrepancy =
        starlike::argument_monotonicity_oracle(&f, oracle_radius, oracle_steps)?;
    let output = StarlikeOutput {
        report,
        oracle_radius,
        oracle_steps,
        oracle_discrepancy,
    };
    match out.format {
        Format::Json => write_output(out, &to_json(&output)?)?,
        _ => return Err(bad("starlike reports are json only")),
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn run_render(
    manifest: Option<&Path>,
    alpha: Option<f64>,
    r_max: f64,
    grid_angles: usize,
    circles: usize,
    rays: usize,
    order: usize,
    out: &OutArgs,
) -> Result<i32> {
    let (f, meta) = match (alpha, manifest) {
        (Some(a), _) => {
            if !(0.0..=1.0).contains(&a) {
                return Err(bad("alpha must lie in [0,1]"));
            }
            (starlike::starlike_family(a, order)?, format!("f_alpha, alpha={a}"))
        }
        (None, Some(path)) => (
            load_manifest(path, order)?,
            std::fs::read_to_string(path)?,
        ),
        (None, None) => return Err(bad("render needs --manifest or --alpha")),
    };
    if circles == 0 {
        return Err(bad("need at least one circle"));
    }
    let radii: Vec<f64> = (1..=circles)
        .map(|k| r_max * k as f64 / circles as f64)
        .collect();
    let mut curves = render::sample_image(&f, &radii, grid_angles, rays)?;
    curves.meta = meta;
    let content = match out.format {
        Format::Svg => render::svg_string(&curves)?,
        Format::Csv => render::csv_string(&curves)?,
        Format::Json => to_json(&curves)?,
    };
    write_output(out, &content)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SuiteInstanceReport {
    spec: InstanceSpec,
    norm: f64,
    bloch: f64,
    harmonic: f64,
}

#[derive(Serialize)]
struct SuiteReport {
    seed: Option<u64>,
    count: usize,
    norm_bound: f64,
    bloch_bound: f64,
    harmonic_bound: f64,
    max_norm: f64,
    max_bloch: f64,
    max_harmonic: f64,
    violations: usize,
    instances: Vec<SuiteInstanceReport>,
}

fn run_suite(
    seed: u64,
    count: usize,
    instances: Option<&Path>,
    grid: &GridSpec,
    out: &OutArgs,
) -> Result<i32> {
    let (specs, seed_used) = match instances {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let specs: Vec<InstanceSpec> = serde_json::from_str(&text)
                .map_err(|e| bad(format!("instance list parse error: {e}")))?;
            (specs, None)
        }
        None => (suite::generate(seed, count), Some(seed)),
    };

    let mut reports = Vec::with_capacity(specs.len());
    let mut violations = 0usize;
    let (mut max_norm, mut max_bloch, mut max_harmonic) = (0.0f64, 0.0f64, 0.0f64);
    for spec in specs {
        let f = spec.build()?;
        let omega = f.dilatation()?;
        let norm = schwarz::logharmonic_norm(&f, grid)?;
        let bloch = schwarz::bloch_seminorm(&f, grid)?;
        let harmonic = schwarz::harmonic_norm(&f.h, &omega, grid)?;
        let bad_instance = norm.boundary_divergent
            || bloch.boundary_divergent
            || harmonic.boundary_divergent
            || norm.value > NORM_BOUND + BOUND_SLACK
            || bloch.value > BLOCH_BOUND + BOUND_SLACK
            || harmonic.value > HARMONIC_BOUND + BOUND_SLACK;
        if bad_instance {
            violations += 1;
        }
        max_norm = max_norm.max(norm.value);
        max_bloch = max_bloch.max(bloch.value);
        max_harmonic = max_harmonic.max(harmonic.value);
        reports.push(SuiteInstanceReport {
            spec,
            norm: norm.value,
            bloch: bloch.value,
            harmonic: harmonic.value,
        });
    }

    let report = SuiteReport {
        seed: seed_used,
        count: reports.len(),
        norm_bound: NORM_BOUND,
        bloch_bound: BLOCH_BOUND,
        harmonic_bound: HARMONIC_BOUND,
        max_norm,
        max_bloch,
        max_harmonic,
        violations,
        instances: reports,
    };
    let content = match out.format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut s = String::from("index,norm,bloch,harmonic\n");
            for (i, r) in report.instances.iter().enumerate() {
                let _ = writeln!(s, "{i},{},{},{}", r.norm, r.bloch, r.harmonic);
            }
            s
        }
        Format::Svg => return Err(bad("svg output only applies to render")),
    };
    write_output(out, &content)?;
    Ok(if violations > 0 {
        EXIT_BOUND_VIOLATION
    } else {
        EXIT_OK
    })
}

// ---------------------------------------------------------------------------

pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Norm {
            manifest,
            order,
            grid,
            out,
        } => run_norm(manifest, *order, &grid.grid(), out),
        Command::Bloch {
            manifest,
            order,
            grid,
            out,
        } => run_bloch(manifest, *order, &grid.grid(), out),
        Command::HarmonicNorm {
            manifest,
            order,
            grid,
            out,
        } => run_harmonic(manifest, *order, &grid.grid(), out),
        Command::VerifySharpness { t, resolution, out } => run_sharpness(t, *resolution, out),
        Command::VerifyGrowth { alpha, out } => run_growth(alpha, out),
        Command::Starlike {
            manifest,
            order,
            oracle_radius,
            oracle_steps,
            grid,
            out,
        } => run_starlike(manifest, *order, *oracle_radius, *oracle_steps, &grid.grid(), out),
        Command::Render {
            manifest,
            alpha,
            r_max,
            grid_angles,
            circles,
            rays,
            order,
            out,
        } => run_render(
            manifest.as_deref(),
            *alpha,
            *r_max,
            *grid_angles,
            *circles,
            *rays,
            *order,
            out,
        ),
        Command::RandomSuite {
            seed,
            count,
            instances,
            grid,
            out,
        } => run_suite(*seed, *count, instances.as_deref(), &grid.grid(), out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT_ERROR
        }
    }
}
