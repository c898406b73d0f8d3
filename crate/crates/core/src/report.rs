//! Report serialization: bit-exact float text, CSV tables, and JSON
//! mirrors of solver and staged-run results. Numbers cross into text as
//! 17-significant-digit scientific strings, so equal runs produce byte
//! identical files and readers recover the exact bits.

use crate::cones::SymmetricFunctional;
use crate::error::{Error, Result};
use crate::exhaustion::{Classification, ExhaustionReport, GrowthTrend, RunKind};
use crate::geometry::{RadialMetric, SchoutenSign};
use crate::solver::{RadialSolution, SolutionRow};
use serde::Serialize;

/// Scientific text form of `x` with 17 significant digits; parses back to
/// the same bits. Non-finite values use the spellings `f64::from_str`
/// accepts.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// CSV table of per-node solution diagnostics.
pub fn solution_csv(rows: &[SolutionRow]) -> String {
    let mut out = String::from("r,u,du,f_value,margin\n");
    for row in rows {
        out.push_str(&format_float(row.r));
        for v in [row.u, row.du, row.f_value, row.margin] {
            out.push(',');
            out.push_str(&format_float(v));
        }
        out.push('\n');
    }
    out
}

/// One radius of a curvature scan.
#[derive(Debug, Clone)]
pub struct CurvatureRow {
    pub r: f64,
    pub chi1: f64,
    pub chi2: f64,
    /// Deformed-frame eigenvalues on the requested side.
    pub lambda: Vec<f64>,
    /// Scalar curvature of the background at `r`.
    pub scalar: f64,
    /// `NaN` when the eigenvalues leave the closed cone.
    pub f_value: f64,
    pub margin: f64,
}

/// Evaluates the metric's curvature data and the functional at each radius.
pub fn curvature_table(
    metric: &RadialMetric,
    functional: &SymmetricFunctional,
    sign: SchoutenSign,
    radii: &[f64],
) -> Result<Vec<CurvatureRow>> {
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let sch = metric.schouten(r)?;
        let lambda = sch.eigenvalues_for(sign);
        let margin = functional.cone().margin(&lambda)?;
        let f_value = functional.value(&lambda).unwrap_or(f64::NAN);
        rows.push(CurvatureRow {
            r,
            chi1: sch.chi1,
            chi2: sch.chi2,
            lambda,
            scalar: metric.scalar_curvature(r)?,
            f_value,
            margin,
        });
    }
    Ok(rows)
}

/// CSV table of a curvature scan; all rows must share one dimension.
pub fn curvature_csv(rows: &[CurvatureRow]) -> Result<String> {
    let n = match rows.first() {
        Some(row) => row.lambda.len(),
        None => return Err(Error::InvalidParameter("empty curvature table".into())),
    };
    let mut out = String::from("r,chi1,chi2");
    for i in 1..=n {
        out.push_str(&format!(",lambda_{i}"));
    }
    out.push_str(",R,f_value,margin\n");
    for row in rows {
        if row.lambda.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: row.lambda.len(),
            });
        }
        out.push_str(&format_float(row.r));
        for v in [row.chi1, row.chi2] {
            out.push(',');
            out.push_str(&format_float(v));
        }
        for &v in &row.lambda {
            out.push(',');
            out.push_str(&format_float(v));
        }
        for v in [row.scalar, row.f_value, row.margin] {
            out.push(',');
            out.push_str(&format_float(v));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn classification_label(c: Classification) -> &'static str {
    match c {
        Classification::Case1InteriorLimit => "case1_interior_limit",
        Classification::Case2BoundaryLimit => "case2_boundary_limit",
        Classification::Undetermined => "undetermined",
    }
}

pub fn run_kind_label(k: RunKind) -> &'static str {
    match k {
        RunKind::Negative => "negative",
        RunKind::NegativeDegenerate => "negative_degenerate",
        RunKind::Positive => "positive",
    }
}

pub fn trend_label(t: GrowthTrend) -> &'static str {
    match t {
        GrowthTrend::Unbounded => "unbounded",
        GrowthTrend::Bounded => "bounded",
        GrowthTrend::Inconclusive => "inconclusive",
    }
}

/// JSON mirror of one Newton outcome.
#[derive(Debug, Clone, Serialize)]
pub struct SolveSummary {
    pub converged: bool,
    pub iterations: usize,
    pub backtracks: usize,
    pub nodes: usize,
    pub residual_sup: String,
    pub min_margin: String,
}

impl SolveSummary {
    pub fn new(solution: &RadialSolution) -> Self {
        SolveSummary {
            converged: solution.converged,
            iterations: solution.iterations,
            backtracks: solution.backtrack_total,
            nodes: solution.values.len(),
            residual_sup: format_float(solution.residual_sup),
            min_margin: format_float(solution.min_margin),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StageSummary {
    pub stage: usize,
    pub radius: String,
    pub nodes: usize,
    pub rhs_level: String,
    pub inf_core: String,
    pub min_u: String,
    pub max_u: String,
    pub cauchy_core: Option<String>,
    pub cauchy_slope_core: Option<String>,
    pub f_min: String,
    pub f_max: String,
    pub margin: String,
    pub iterations: usize,
    pub residual_sup: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BarrierSummary {
    pub stage: usize,
    pub label: String,
    pub passed: bool,
    pub vacuous: bool,
    pub exempt: bool,
    pub bound: String,
    pub clearance: String,
    pub tol: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalizedSummary {
    pub radius: String,
    pub decayed_level: String,
    pub normalized_inf: String,
    pub cauchy_core: Option<String>,
    pub identity_gap: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicitySummary {
    pub applies: bool,
    pub worst_increase: String,
    pub violations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeSummary {
    pub radius: String,
    pub length: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompletenessSummary {
    pub trend: String,
    pub probes: Vec<ProbeSummary>,
}

/// JSON mirror of a full staged run.
#[derive(Debug, Clone, Serialize)]
pub struct ExhaustionSummary {
    pub kind: String,
    pub classification: String,
    pub core_radius: String,
    pub background_floor: String,
    pub background_admissible: bool,
    pub truncated: bool,
    pub failure: Option<String>,
    pub epsilons: Vec<String>,
    pub stages: Vec<StageSummary>,
    pub normalized: Vec<NormalizedSummary>,
    pub barriers: Vec<BarrierSummary>,
    pub monotonicity: Option<MonotonicitySummary>,
    pub completeness: Option<CompletenessSummary>,
}

impl ExhaustionSummary {
    pub fn new(report: &ExhaustionReport) -> Self {
        ExhaustionSummary {
            kind: run_kind_label(report.kind).into(),
            classification: classification_label(report.classification).into(),
            core_radius: format_float(report.core_radius),
            background_floor: format_float(report.background_floor),
            background_admissible: report.background_admissible,
            truncated: report.truncated,
            failure: report.failure.clone(),
            epsilons: report.epsilons.iter().map(|&e| format_float(e)).collect(),
            stages: report
                .stages
                .iter()
                .enumerate()
                .map(|(i, s)| StageSummary {
                    stage: i + 1,
                    radius: format_float(s.radius),
                    nodes: s.nodes,
                    rhs_level: format_float(s.rhs_level),
                    inf_core: format_float(s.inf_core),
                    min_u: format_float(s.min_u),
                    max_u: format_float(s.max_u),
                    cauchy_core: s.cauchy_core.map(format_float),
                    cauchy_slope_core: s.cauchy_slope_core.map(format_float),
                    f_min: format_float(s.f_min),
                    f_max: format_float(s.f_max),
                    margin: format_float(s.margin),
                    iterations: s.iterations,
                    residual_sup: format_float(s.residual_sup),
                })
                .collect(),
            normalized: report
                .normalized
                .iter()
                .map(|s| NormalizedSummary {
                    radius: format_float(s.radius),
                    decayed_level: format_float(s.decayed_level),
                    normalized_inf: format_float(s.normalized_inf),
                    cauchy_core: s.cauchy_core.map(format_float),
                    identity_gap: format_float(s.identity_gap),
                })
                .collect(),
            barriers: report
                .barriers
                .iter()
                .map(|b| BarrierSummary {
                    stage: b.stage,
                    label: b.report.label.into(),
                    passed: b.report.passed,
                    vacuous: b.report.vacuous,
                    exempt: b.report.exempt,
                    bound: format_float(b.report.bound),
                    clearance: format_float(b.report.clearance),
                    tol: format_float(b.report.tol),
                })
                .collect(),
            monotonicity: report.monotonicity.map(|m| MonotonicitySummary {
                applies: m.applies,
                worst_increase: format_float(m.worst_increase),
                violations: m.violations,
            }),
            completeness: report.completeness.as_ref().map(|c| CompletenessSummary {
                trend: trend_label(c.trend).into(),
                probes: c
                    .probes
                    .iter()
                    .map(|&(r, l)| ProbeSummary {
                        radius: format_float(r),
                        length: format_float(l),
                    })
                    .collect(),
            }),
        }
    }
}

/// Pretty JSON with the struct's declared field order.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map_err(|e| Error::Output(format!("serialization failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::ConeSpec;
    use crate::exhaustion::{run_negative, ExhaustionPlan, Topology};
    use crate::geometry::{ProfileKind, RadialProfile};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn float_text_recovers_the_exact_bits() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let mantissa: f64 = rng.gen_range(-1.0..1.0);
            let exponent: i32 = rng.gen_range(-300..300);
            let x = mantissa * 10f64.powi(exponent);
            let back: f64 = format_float(x).parse().expect("scientific text parses");
            assert_eq!(
                back.to_bits(),
                x.to_bits(),
                "text {} dropped bits of {x:e}",
                format_float(x)
            );
        }
        for special in [f64::NAN, f64::INFINITY, f64::NEG_INFINITY, -0.0] {
            let back: f64 = format_float(special).parse().expect("special value parses");
            assert_eq!(
                back.to_bits(),
                special.to_bits(),
                "special value {special} must round-trip"
            );
        }
    }

    #[test]
    fn solution_csv_is_parseable_including_nan_rows() {
        let rows = vec![
            SolutionRow {
                r: 0.0,
                u: 1.5,
                du: 0.0,
                f_value: 1.0,
                margin: 0.3,
            },
            SolutionRow {
                r: 0.5,
                u: -2.0,
                du: 0.25,
                f_value: f64::NAN,
                margin: -0.1,
            },
        ];
        let text = solution_csv(&rows);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3, "header plus one line per row");
        assert_eq!(lines[0], "r,u,du,f_value,margin");
        for line in &lines[1..] {
            for field in line.split(',') {
                let _: f64 = field.parse().expect("every field parses as f64");
            }
        }
        assert!(
            lines[2].contains("nan"),
            "outside-cone functional values spell nan: {}",
            lines[2]
        );
        assert_eq!(text, solution_csv(&rows), "the encoding is deterministic");
    }

    #[test]
    fn curvature_table_reports_model_end_constants_and_boundary_margins() {
        let functional =
            SymmetricFunctional::normalized(ConeSpec::elementary(5, 2).unwrap());
        let sinh = RadialMetric::warped(
            5,
            RadialProfile::closed(ProfileKind::Sinh).unwrap(),
            1.0,
        )
        .unwrap();
        let radii: Vec<f64> = (1..=40).map(|i| 0.25 * i as f64).collect();
        let rows = curvature_table(&sinh, &functional, SchoutenSign::MinusA, &radii).unwrap();
        for row in &rows {
            assert!(
                (row.chi1 - 0.5).abs() <= 1e-12 && row.chi2.abs() <= 1e-12,
                "model end constants drift at r = {}: ({}, {})",
                row.r,
                row.chi1,
                row.chi2
            );
            assert!(
                (row.f_value - 1.0).abs() <= 1e-12,
                "the model end solves the unit equation, got {}",
                row.f_value
            );
            assert!(row.margin > 0.0, "interior eigenvalues carry a positive margin");
        }

        // Decay rate tuned to the cone's critical exponent: the eigenvalues
        // ride the cone boundary at every radius.
        let critical = RadialMetric::schwarzschild_type(5, 1.5, 1.0).unwrap();
        let rows =
            curvature_table(&critical, &functional, SchoutenSign::PlusA, &radii).unwrap();
        for row in &rows {
            assert!(
                row.margin.abs() <= 1e-9,
                "critical decay sits on the boundary, margin {} at r = {}",
                row.margin,
                row.r
            );
        }
        let text = curvature_csv(&rows).unwrap();
        assert!(
            text.starts_with("r,chi1,chi2,lambda_1,lambda_2,lambda_3,lambda_4,lambda_5,R,f_value,margin\n"),
            "header names every eigenvalue column"
        );
        assert!(
            matches!(curvature_csv(&[]), Err(Error::InvalidParameter(_))),
            "an empty table has no header dimension"
        );
    }

    #[test]
    fn staged_run_summary_serializes_deterministically() {
        let plan = ExhaustionPlan::geometric(
            RadialMetric::warped(
                5,
                RadialProfile::closed(ProfileKind::Cosh).unwrap(),
                -1.0,
            )
            .unwrap(),
            SymmetricFunctional::normalized(ConeSpec::elementary(5, 2).unwrap()),
            SchoutenSign::MinusA,
            RadialProfile::constant(1.0),
            Topology::CappedEnd,
            2.0,
            4,
            41,
        )
        .unwrap();
        let report = run_negative(&plan).unwrap();
        let summary = ExhaustionSummary::new(&report);
        let text = to_json(&summary).unwrap();
        assert_eq!(
            text,
            to_json(&ExhaustionSummary::new(&report)).unwrap(),
            "serialization is deterministic"
        );
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["classification"], "case1_interior_limit");
        assert_eq!(value["kind"], "negative");
        assert_eq!(value["stages"].as_array().unwrap().len(), 4);
        let first_radius: f64 = value["stages"][0]["radius"]
            .as_str()
            .unwrap()
            .parse()
            .unwrap();
        assert_eq!(first_radius, 2.0, "stage radii survive the string encoding");
        assert!(
            value["completeness"]["trend"] == "unbounded",
            "the cosh end accumulates radial length"
        );
    }
}
