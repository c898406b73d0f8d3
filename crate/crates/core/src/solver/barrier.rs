//! Maximum-principle audits for discrete solutions. Each check compares a
//! node vector against a closed-form bound and reports the worst signed
//! clearance instead of a bare boolean, so a failed audit carries its
//! violation size and a passed one its safety margin.

use crate::discretize::Grid;
use crate::error::{Error, Result};

/// Default audit tolerance, sized to absorb discretization error of the
/// solves the audits run on.
pub const BARRIER_TOL: f64 = 1e-8;

/// The bound to audit against.
#[derive(Debug, Clone)]
pub enum BarrierSpec<'a> {
    /// Lower bound `min(0, ln(background_floor / rhs_sup) / 2)` for
    /// negative-case solutions. `background_floor` is the infimum of the
    /// background curvature functional outside the core region; a nonpositive
    /// floor makes the bound vacuous. A minimum attained inside the core
    /// interval is exempt from the bound.
    NegativeLower {
        background_floor: f64,
        rhs_sup: f64,
        core: Option<(f64, f64)>,
    },
    /// Constant upper bound, for positive-case solutions held below their
    /// boundary level.
    UpperConstant { bound: f64 },
    /// Nodewise lower comparison, for positive-case solutions held above a
    /// linear-comparison log factor.
    LowerProfile { comparison: &'a [f64] },
}

/// Outcome of one audit.
#[derive(Debug, Clone, Copy)]
pub struct BarrierReport {
    pub label: &'static str,
    pub passed: bool,
    /// The bound carried no information (nonpositive background floor).
    pub vacuous: bool,
    /// The extremum sat inside the exempt core region.
    pub exempt: bool,
    pub bound: f64,
    /// Worst signed clearance; negative means the bound was crossed.
    pub clearance: f64,
    pub tol: f64,
}

/// Audits `values` on `grid` against `spec` with tolerance `tol`.
pub fn barrier_check(
    grid: &Grid,
    values: &[f64],
    spec: &BarrierSpec,
    tol: f64,
) -> Result<BarrierReport> {
    if values.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            got: values.len(),
        });
    }
    if !(tol >= 0.0) || !tol.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "audit tolerance must be finite and nonnegative, got {tol}"
        )));
    }
    match spec {
        BarrierSpec::NegativeLower {
            background_floor,
            rhs_sup,
            core,
        } => {
            let rhs_sup = *rhs_sup;
            if !(rhs_sup > 0.0) || !rhs_sup.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "right-hand side sup must be positive and finite, got {rhs_sup}"
                )));
            }
            if *background_floor <= 0.0 {
                return Ok(BarrierReport {
                    label: "negative-lower",
                    passed: true,
                    vacuous: true,
                    exempt: false,
                    bound: f64::NEG_INFINITY,
                    clearance: f64::INFINITY,
                    tol,
                });
            }
            let bound = (0.5 * (background_floor / rhs_sup).ln()).min(0.0);
            let (arg, min) = values
                .iter()
                .enumerate()
                .fold((0, f64::INFINITY), |acc, (i, &v)| {
                    if v < acc.1 {
                        (i, v)
                    } else {
                        acc
                    }
                });
            let clearance = min - bound;
            let exempt = match core {
                Some((lo, hi)) => {
                    let r = grid.node(arg);
                    r >= *lo && r <= *hi
                }
                None => false,
            };
            Ok(BarrierReport {
                label: "negative-lower",
                passed: exempt || clearance >= -tol,
                vacuous: false,
                exempt,
                bound,
                clearance,
                tol,
            })
        }
        BarrierSpec::UpperConstant { bound } => {
            let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let clearance = bound - max;
            Ok(BarrierReport {
                label: "upper-constant",
                passed: clearance >= -tol,
                vacuous: false,
                exempt: false,
                bound: *bound,
                clearance,
                tol,
            })
        }
        BarrierSpec::LowerProfile { comparison } => {
            if comparison.len() != values.len() {
                return Err(Error::DimensionMismatch {
                    expected: values.len(),
                    got: comparison.len(),
                });
            }
            let clearance = values
                .iter()
                .zip(comparison.iter())
                .map(|(v, c)| v - c)
                .fold(f64::INFINITY, f64::min);
            Ok(BarrierReport {
                label: "lower-profile",
                passed: clearance >= -tol,
                vacuous: false,
                exempt: false,
                bound: f64::NAN,
                clearance,
                tol,
            })
        }
    }
}
