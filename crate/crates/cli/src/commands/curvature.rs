//! Curvature scan: Schouten frame values, deformed-side eigenvalues, scalar
//! curvature, and the functional with its cone margin, sampled on an even
//! radius ladder and written as CSV.

use clap::Args;
use sigma_yamabe::cones::SymmetricFunctional;
use sigma_yamabe::geometry::{ProfileKind, RadialMetric, RadialProfile, SchoutenSign};
use sigma_yamabe::report::{curvature_csv, curvature_table};

use super::cone::cone_from_parts;
use super::write_file;
use crate::CliError;

#[derive(Args)]
pub struct CurvatureArgs {
    /// Metric kind: euclidean, conformally-flat, warped, schwarzschild-type.
    #[arg(long)]
    kind: String,
    /// Metric dimension.
    #[arg(long)]
    n: usize,
    /// Decay parameter of a schwarzschild-type metric (> 1), or of a
    /// schwarzschild-log profile.
    #[arg(long)]
    mu: Option<f64>,
    /// Mass parameter of a schwarzschild-type metric or profile.
    #[arg(long)]
    m: Option<f64>,
    /// Profile name for conformally-flat factors and warpings: constant,
    /// zero, identity, sinh, cosh, exp, exp-alpha-sin, schwarzschild-log,
    /// hyperbolic-cap, spherical-cap, neg-log, bump.
    #[arg(long)]
    profile: Option<String>,
    /// Fiber Einstein sign of a warped product.
    #[arg(long)]
    fiber_curvature: Option<f64>,
    /// Oscillation amplitude of the exp-alpha-sin profile.
    #[arg(long)]
    alpha: Option<f64>,
    /// Constant profile value.
    #[arg(long)]
    value: Option<f64>,
    /// Cap radius, or the bump's half-width.
    #[arg(long)]
    radius: Option<f64>,
    /// Bump center.
    #[arg(long)]
    center: Option<f64>,
    /// Bump amplitude.
    #[arg(long)]
    amplitude: Option<f64>,
    /// Cone family of the reported functional.
    #[arg(long, default_value = "gamma-k")]
    family: String,
    /// Order of the elementary symmetric base.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Modification weight in (0, 1]; tau family only.
    #[arg(long)]
    tau: Option<f64>,
    /// Side of the Schouten tensor to report: plus-a or minus-a.
    #[arg(long, default_value = "plus-a")]
    sign: String,
    /// First sampled radius.
    #[arg(long)]
    r_min: f64,
    /// Last sampled radius.
    #[arg(long)]
    r_max: f64,
    /// Number of evenly spaced samples.
    #[arg(long, default_value_t = 101)]
    samples: usize,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    output: Option<String>,
}

fn require(name: &str, value: Option<f64>) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::Config(format!("--{name} is required here")))
}

fn profile_from_flags(args: &CurvatureArgs) -> Result<RadialProfile, CliError> {
    let name = args
        .profile
        .as_deref()
        .ok_or_else(|| CliError::Config("--profile is required for this metric kind".into()))?;
    let kind = match name {
        "constant" => ProfileKind::Constant {
            value: require("value", args.value)?,
        },
        "zero" => return Ok(RadialProfile::zero()),
        "identity" => ProfileKind::Identity,
        "sinh" => ProfileKind::Sinh,
        "cosh" => ProfileKind::Cosh,
        "exp" => ProfileKind::Exp,
        "exp-alpha-sin" => ProfileKind::ExpAlphaSin {
            alpha: require("alpha", args.alpha)?,
        },
        "schwarzschild-log" => ProfileKind::SchwarzschildLog {
            mu: require("mu", args.mu)?,
            m: require("m", args.m)?,
        },
        "hyperbolic-cap" => ProfileKind::HyperbolicCap {
            radius: require("radius", args.radius)?,
        },
        "spherical-cap" => ProfileKind::SphericalCap {
            radius: require("radius", args.radius)?,
        },
        "neg-log" => ProfileKind::NegLog,
        "bump" => ProfileKind::Bump {
            center: require("center", args.center)?,
            radius: require("radius", args.radius)?,
            amplitude: require("amplitude", args.amplitude)?,
        },
        other => {
            return Err(CliError::Config(format!("unknown profile {other:?}")));
        }
    };
    RadialProfile::closed(kind).map_err(|e| CliError::Config(format!("profile: {e}")))
}

fn metric_from_flags(args: &CurvatureArgs) -> Result<RadialMetric, CliError> {
    let build = match args.kind.as_str() {
        "euclidean" => RadialMetric::euclidean(args.n),
        "conformally-flat" => RadialMetric::conformally_flat(args.n, profile_from_flags(args)?),
        "warped" => RadialMetric::warped(
            args.n,
            profile_from_flags(args)?,
            require("fiber-curvature", args.fiber_curvature)?,
        ),
        "schwarzschild-type" => RadialMetric::schwarzschild_type(
            args.n,
            require("mu", args.mu)?,
            require("m", args.m)?,
        ),
        other => {
            return Err(CliError::Config(format!("unknown metric kind {other:?}")));
        }
    };
    build.map_err(|e| CliError::Config(format!("metric: {e}")))
}

pub fn run(args: CurvatureArgs) -> Result<(), CliError> {
    let metric = metric_from_flags(&args)?;
    let functional = SymmetricFunctional::normalized(cone_from_parts(
        &args.family,
        args.n,
        args.k,
        args.tau,
    )?);
    let sign = match args.sign.as_str() {
        "plus-a" => SchoutenSign::PlusA,
        "minus-a" => SchoutenSign::MinusA,
        other => {
            return Err(CliError::Config(format!(
                "unknown sign {other:?}; expected plus-a or minus-a"
            )));
        }
    };
    if !(args.r_max > args.r_min) {
        return Err(CliError::Config(format!(
            "the radius range needs r_max > r_min, got [{}, {}]",
            args.r_min, args.r_max
        )));
    }
    if args.samples < 2 {
        return Err(CliError::Config(format!(
            "a scan needs at least 2 samples, got {}",
            args.samples
        )));
    }
    let radii: Vec<f64> = (0..args.samples)
        .map(|i| {
            args.r_min + (args.r_max - args.r_min) * i as f64 / (args.samples - 1) as f64
        })
        .collect();
    let rows = curvature_table(&metric, &functional, sign, &radii)
        .map_err(|e| CliError::Config(format!("scan: {e}")))?;
    let csv = curvature_csv(&rows).map_err(|e| CliError::Config(format!("scan: {e}")))?;
    match args.output {
        Some(path) => write_file(std::path::Path::new(&path), &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}
