//! Staged Dirichlet solves on a growing family of radial domains.
//!
//! A run fixes a background, a curvature functional, and data, then solves
//! the same boundary problem on each domain of an increasing radii schedule,
//! warm-starting every stage from the previous one. The per-stage records
//! track the solution's infimum on a fixed core, Cauchy differences between
//! consecutive stages, curvature levels, and admissibility margins; trend
//! tests on those traces separate an interior limit (bounded core trace,
//! shrinking differences) from a boundary limit (core trace diverging at a
//! logarithmic rate). Degenerate runs drive the right-hand side to zero on a
//! harmonic schedule under a scalar-curvature sign precondition, and
//! positive-sign runs compute their per-stage level from the background
//! curvature under a conformal ceiling.

use crate::cones::SymmetricFunctional;
use crate::discretize::{d1, Grid, LeftEnd};
use crate::error::{Error, Result};
use crate::geometry::{RadialMetric, SchoutenSign};
use crate::geometry::RadialProfile;
use crate::solver::{
    barrier_check, blend_to_boundary, conformal_laplacian_solve, conformal_log_profile,
    continuation_solve, newton_solve, BarrierReport, BarrierSpec, ContinuationPlan,
    DirichletProblem, NewtonOptions, RadialSolution, ADMISSIBILITY_FLOOR, BARRIER_TOL,
};

/// Per-stage drop of the core infimum that certifies a boundary limit.
pub const CASE2_DROP_PER_STAGE: f64 = 0.5;

/// Required shrink factor of the core Cauchy differences for an interior
/// limit: each difference at most this fraction of its predecessor.
pub const CASE1_SHRINK_FACTOR: f64 = 0.75;

/// Cauchy differences below this are converged at rounding level, where
/// shrink ratios are noise; they count as interior-limit evidence directly.
pub const CASE1_ABSOLUTE_FLOOR: f64 = 1e-9;

/// Allowed discrete violation of the nested-domain comparison ordering.
pub const MONOTONICITY_TOL: f64 = 1e-6;

/// Boundary-value ramp step for fresh-entry continuation.
const RAMP_STEP: f64 = 0.5;

/// Per-stage Newton tolerance. Stage grids grow into the thousands of nodes
/// and the attainable residual floor grows with the Jacobian's conditioning,
/// so the stage solves accept a few decades above rounding; this still sits
/// orders of magnitude under the discretization error of any stage.
const STAGE_TOL: f64 = 1e-8;

/// Slack for deciding whether a radius sits on the shared node lattice.
const LATTICE_TOL: f64 = 1e-9;

/// Shape of the exhausting domains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Topology {
    /// Balls about the symmetry axis, exhausting the whole space.
    Ball,
    /// A symmetric compact cap plus one end: domains `[0, R_j]`.
    CappedEnd,
    /// A fixed inner sphere plus one end: domains `[inner, R_j]` with
    /// Dirichlet data on both boundaries.
    Annulus { inner: f64 },
}

impl Topology {
    fn left_start(&self) -> f64 {
        match self {
            Topology::Ball | Topology::CappedEnd => 0.0,
            Topology::Annulus { inner } => *inner,
        }
    }

    fn left_end(&self) -> LeftEnd {
        match self {
            Topology::Ball | Topology::CappedEnd => LeftEnd::Symmetry,
            Topology::Annulus { .. } => LeftEnd::Dirichlet,
        }
    }
}

/// A full staged-run specification.
#[derive(Debug, Clone)]
pub struct ExhaustionPlan {
    pub background: RadialMetric,
    pub functional: SymmetricFunctional,
    pub sign: SchoutenSign,
    pub psi: RadialProfile,
    pub topology: Topology,
    /// Strictly increasing outer radii, each on the first stage's node
    /// lattice so later grids extend earlier ones node for node.
    pub radii: Vec<f64>,
    /// Core radius: stage traces are taken over `{r <= core_radius}`.
    pub core_radius: f64,
    /// Background admissibility with margin is not required inside this
    /// radius, and the lower-bound audit excuses minima attained there.
    pub exempt_radius: f64,
    /// Node count of the first stage; later stages keep its spacing.
    pub first_nodes: usize,
}

impl ExhaustionPlan {
    /// Doubling schedule `R_j = first_radius * 2^(j-1)` with the core and
    /// exempt radii both at the midpoint of the first domain.
    #[allow(clippy::too_many_arguments)]
    pub fn geometric(
        background: RadialMetric,
        functional: SymmetricFunctional,
        sign: SchoutenSign,
        psi: RadialProfile,
        topology: Topology,
        first_radius: f64,
        stages: usize,
        first_nodes: usize,
    ) -> Result<Self> {
        if stages == 0 {
            return Err(Error::InvalidParameter(
                "a schedule needs at least one stage".into(),
            ));
        }
        let radii = (0..stages)
            .map(|j| first_radius * (1u64 << j) as f64)
            .collect();
        let core = 0.5 * (topology.left_start() + first_radius);
        let plan = ExhaustionPlan {
            background,
            functional,
            sign,
            psi,
            topology,
            radii,
            core_radius: core,
            exempt_radius: core,
            first_nodes,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        let left = self.topology.left_start();
        if !left.is_finite() || left < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "inner radius must be finite and nonnegative, got {left}"
            )));
        }
        if self.radii.is_empty() {
            return Err(Error::InvalidParameter("no stage radii".into()));
        }
        let mut last = left;
        for &r in &self.radii {
            if !r.is_finite() || r <= last {
                return Err(Error::InvalidParameter(format!(
                    "stage radii must increase strictly from the inner radius, got {r} after {last}"
                )));
            }
            last = r;
        }
        if self.first_nodes < 5 {
            return Err(Error::InvalidParameter(format!(
                "the first stage needs at least 5 nodes, got {}",
                self.first_nodes
            )));
        }
        let h = self.spacing();
        for &r in &self.radii[1..] {
            let t = (r - left) / h;
            if (t - t.round()).abs() > LATTICE_TOL * t.max(1.0) {
                return Err(Error::InvalidParameter(format!(
                    "stage radius {r} does not sit on the shared node lattice of spacing {h}"
                )));
            }
        }
        if !(self.core_radius >= left && self.core_radius <= self.radii[0]) {
            return Err(Error::InvalidParameter(format!(
                "core radius {} must lie between the inner radius and the first stage radius",
                self.core_radius
            )));
        }
        if !self.exempt_radius.is_finite() || self.exempt_radius < left {
            return Err(Error::InvalidParameter(format!(
                "exempt radius {} must be finite and at least the inner radius",
                self.exempt_radius
            )));
        }
        if left < self.background.domain_start() {
            return Err(Error::InvalidParameter(format!(
                "domains start at {left} but the background needs r >= {}",
                self.background.domain_start()
            )));
        }
        Ok(())
    }

    fn spacing(&self) -> f64 {
        (self.radii[0] - self.topology.left_start()) / (self.first_nodes - 1) as f64
    }

    fn stage_nodes(&self, stage: usize) -> usize {
        let span = self.radii[stage] - self.topology.left_start();
        (span / self.spacing()).round() as usize + 1
    }

    fn stage_grid(&self, stage: usize) -> Result<Grid> {
        Grid::new(
            self.topology.left_start(),
            self.radii[stage],
            self.stage_nodes(stage),
            self.topology.left_end(),
        )
    }

    fn stage_base(&self, stage: usize, boundary: f64) -> Result<DirichletProblem> {
        let grid = self.stage_grid(stage)?;
        let left = match grid.left() {
            LeftEnd::Symmetry => None,
            LeftEnd::Dirichlet => Some(boundary),
        };
        DirichletProblem::new(
            self.background.clone(),
            self.functional.clone(),
            self.sign,
            &self.psi,
            grid,
            left,
            boundary,
        )
    }

    /// The stage's Dirichlet problem with `boundary` as its data and the
    /// right-hand side at its unscaled level; staged runs rescale that level
    /// per run kind. Negative and degenerate runs use boundary data 0.
    pub fn stage_problem(&self, stage: usize, boundary: f64) -> Result<DirichletProblem> {
        if stage >= self.radii.len() {
            return Err(Error::InvalidParameter(format!(
                "stage {stage} out of range for a {}-stage schedule",
                self.radii.len()
            )));
        }
        self.stage_base(stage, boundary)
    }

    /// Infimum of the background curvature functional outside the exempt
    /// radius, over the final domain; zero when the background leaves the
    /// cone somewhere out there.
    pub fn background_floor(&self) -> Result<f64> {
        let problem = self.stage_base(self.radii.len() - 1, 0.0)?;
        let values = problem.background_f_values()?;
        let mut floor = f64::INFINITY;
        let mut seen = false;
        for (i, &f) in values.iter().enumerate() {
            if problem.grid().node(i) > self.exempt_radius + LATTICE_TOL {
                floor = floor.min(f);
                seen = true;
            }
        }
        Ok(if seen { floor } else { 0.0 })
    }

    /// Whether the background eigenvalues are strictly admissible outside
    /// the exempt radius on the final domain.
    pub fn background_admissible(&self) -> Result<bool> {
        let problem = self.stage_base(self.radii.len() - 1, 0.0)?;
        let zeros = vec![0.0; problem.grid().len()];
        let rows = problem.solution_rows(&zeros)?;
        Ok(rows
            .iter()
            .all(|row| row.r <= self.exempt_radius + LATTICE_TOL || row.margin > 0.0))
    }

    /// Nonnegative scalar curvature of the background over the final
    /// domain, the entry ticket for degenerate runs.
    pub fn degenerate_precondition(&self) -> Result<()> {
        let grid = self.stage_grid(self.radii.len() - 1)?;
        let mut worst = f64::INFINITY;
        let mut scale = 0.0f64;
        for i in 0..grid.len() {
            let value = self.background.scalar_curvature(grid.node(i))?;
            worst = worst.min(value);
            scale = scale.max(value.abs());
        }
        if worst < -1e-9 * (1.0 + scale) {
            return Err(Error::Precondition(format!(
                "degenerate runs need nonnegative background scalar curvature, found {worst}"
            )));
        }
        Ok(())
    }
}

/// What a staged run solved at each stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    Negative,
    NegativeDegenerate,
    Positive,
}

/// Source of the lower-ordering audit profile for positive runs.
#[derive(Debug, Clone)]
pub enum PositiveComparison {
    /// No lower audit.
    None,
    /// Log factor of a conformal-Laplacian solve at the boundary value
    /// matching the run's ceiling, rebuilt on every stage grid.
    LinearSolve,
    /// Caller-supplied log-factor profile, sampled on each stage grid. A
    /// profile exceeding the ceiling is reported as an audit failure, not
    /// an error.
    Supplied(RadialProfile),
}

/// Diagnostics of one converged stage.
#[derive(Debug, Clone)]
pub struct StageRecord {
    pub radius: f64,
    pub nodes: usize,
    /// Multiplier on the data profile for this stage's right-hand side.
    pub rhs_level: f64,
    /// Infimum of the solution over the core `{r <= core_radius}`.
    pub inf_core: f64,
    pub min_u: f64,
    pub max_u: f64,
    /// Sup over the core of the change from the previous stage.
    pub cauchy_core: Option<f64>,
    /// Sup over the core of the slope change from the previous stage.
    pub cauchy_slope_core: Option<f64>,
    /// Range of the realized curvature values over the stage nodes.
    pub f_min: f64,
    pub f_max: f64,
    pub margin: f64,
    pub iterations: usize,
    pub residual_sup: f64,
    pub values: Vec<f64>,
}

/// Trend verdict of the staged traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Case1InteriorLimit,
    Case2BoundaryLimit,
    Undetermined,
}

/// One barrier audit, tagged with its 1-based stage.
#[derive(Debug, Clone, Copy)]
pub struct StageBarrier {
    pub stage: usize,
    pub report: BarrierReport,
}

/// Normalized-trace record for boundary-limit runs: the stage solution
/// shifted so its core infimum is zero.
#[derive(Debug, Clone)]
pub struct NormalizedStage {
    pub radius: f64,
    /// `exp(2 inf u_j)`: the curvature level the shifted stage solves at.
    pub decayed_level: f64,
    /// Core infimum of the shifted stage; zero exactly by construction.
    pub normalized_inf: f64,
    /// Sup over the core of the change between consecutive shifted stages.
    pub cauchy_core: Option<f64>,
    /// Relative gap in the scaling identity: the shifted stage's residual
    /// against the decayed right-hand side must equal the original residual
    /// times the decay factor.
    pub identity_gap: f64,
}

/// Nested-domain ordering check across consecutive stages.
#[derive(Debug, Clone, Copy)]
pub struct MonotonicityAudit {
    /// The ordering only binds when `(1, 0, ..., 0)` lies in the open cone.
    pub applies: bool,
    /// Largest increase from one stage to the next on shared nodes.
    pub worst_increase: f64,
    /// Shared nodes where the increase exceeds the tolerance.
    pub violations: usize,
}

/// Growth verdict of the radial length integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthTrend {
    Unbounded,
    Bounded,
    Inconclusive,
}

/// Radial length of the final conformal metric out to probe radii.
#[derive(Debug, Clone)]
pub struct CompletenessProxy {
    /// `(radius, cumulative length from the core radius)` per probe.
    pub probes: Vec<(f64, f64)>,
    pub trend: GrowthTrend,
}

/// Everything a staged run produced.
#[derive(Debug, Clone)]
pub struct ExhaustionReport {
    pub kind: RunKind,
    pub core_radius: f64,
    /// Infimum of the background curvature functional outside the exempt
    /// radius; the constant behind the lower-bound audit.
    pub background_floor: f64,
    pub background_admissible: bool,
    pub stages: Vec<StageRecord>,
    /// Per-stage curvature levels of positive runs, before data scaling.
    pub epsilons: Vec<f64>,
    /// A stage failed and the later stages were skipped.
    pub truncated: bool,
    pub failure: Option<String>,
    pub classification: Classification,
    /// Present for boundary-limit negative runs.
    pub normalized: Vec<NormalizedStage>,
    pub barriers: Vec<StageBarrier>,
    pub monotonicity: Option<MonotonicityAudit>,
    pub completeness: Option<CompletenessProxy>,
}

/// Applies the dichotomy trend tests to the core infimum trace and the
/// core Cauchy differences (`cauchy` carries one fewer entry). A boundary
/// limit needs the infimum to drop by [`CASE2_DROP_PER_STAGE`] over each of
/// the last three stage steps; an interior limit needs the last three
/// Cauchy differences to shrink by [`CASE1_SHRINK_FACTOR`] per step or sit
/// below [`CASE1_ABSOLUTE_FLOOR`].
pub fn classify(inf_core: &[f64], cauchy_core: &[f64]) -> Result<Classification> {
    if inf_core.len() < 4 {
        return Err(Error::Precondition(format!(
            "classification needs at least 4 stages, got {}",
            inf_core.len()
        )));
    }
    if cauchy_core.len() + 1 != inf_core.len() {
        return Err(Error::DimensionMismatch {
            expected: inf_core.len() - 1,
            got: cauchy_core.len(),
        });
    }
    let m = inf_core.len();
    if (m - 3..m).all(|i| inf_core[i - 1] - inf_core[i] >= CASE2_DROP_PER_STAGE) {
        return Ok(Classification::Case2BoundaryLimit);
    }
    let tail = &cauchy_core[cauchy_core.len() - 3..];
    let settled = tail[2] <= CASE1_ABSOLUTE_FLOOR;
    let shrinking = (0..2).all(|i| {
        tail[i + 1] <= CASE1_SHRINK_FACTOR * tail[i] || tail[i + 1] <= CASE1_ABSOLUTE_FLOOR
    });
    if settled || shrinking {
        Ok(Classification::Case1InteriorLimit)
    } else {
        Ok(Classification::Undetermined)
    }
}

/// Positive-run split on the per-stage curvature levels: levels collapsing
/// stage over stage indicate a boundary limit, levels bounded below an
/// interior one.
fn classify_positive(epsilons: &[f64]) -> Classification {
    if epsilons.len() < 4 {
        return Classification::Undetermined;
    }
    let ratios: Vec<f64> = epsilons
        .windows(2)
        .map(|w| w[1] / w[0])
        .collect();
    let tail = &ratios[ratios.len() - 3..];
    if tail.iter().all(|&q| q <= 0.5) {
        Classification::Case2BoundaryLimit
    } else if tail.iter().all(|&q| q >= 0.9) {
        Classification::Case1InteriorLimit
    } else {
        Classification::Undetermined
    }
}

/// Cumulative radial length of `exp(log_scale)` from the core radius to
/// each probe radius, by the trapezoid rule on the grid nodes. The trend
/// compares successive increments: on a doubling probe schedule, at least
/// linear growth keeps the final ratio near 2, an integrable tail decays it.
pub fn completeness_proxy(
    grid: &Grid,
    log_scale: &[f64],
    core_radius: f64,
    probes: &[f64],
) -> Result<CompletenessProxy> {
    if log_scale.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            got: log_scale.len(),
        });
    }
    let h = grid.spacing();
    let mut cumulative = vec![0.0; grid.len()];
    for i in 1..grid.len() {
        let step = 0.5 * h * ((log_scale[i - 1]).exp() + (log_scale[i]).exp());
        cumulative[i] = cumulative[i - 1] + step;
    }
    let index_of = |r: f64| -> Result<usize> {
        let t = (r - grid.r_min()) / h;
        let i = t.round();
        if (t - i).abs() > 1e-6 * t.max(1.0) || i < 0.0 || i as usize >= grid.len() {
            return Err(Error::InvalidParameter(format!(
                "probe radius {r} does not sit on the grid"
            )));
        }
        Ok(i as usize)
    };
    let base = cumulative[index_of(core_radius)?];
    let mut out = Vec::with_capacity(probes.len());
    for &p in probes {
        out.push((p, cumulative[index_of(p)?] - base));
    }
    let mut increments = Vec::new();
    for w in out.windows(2) {
        increments.push(w[1].1 - w[0].1);
    }
    let trend = match increments.last().zip(increments.len().checked_sub(2).map(|i| increments[i]))
    {
        Some((&last, prev)) if prev > 0.0 => {
            let q = last / prev;
            if q >= 1.5 {
                GrowthTrend::Unbounded
            } else if q <= 0.75 {
                GrowthTrend::Bounded
            } else {
                GrowthTrend::Inconclusive
            }
        }
        _ => GrowthTrend::Inconclusive,
    };
    Ok(CompletenessProxy { probes: out, trend })
}

fn admissible_start(problem: &DirichletProblem, u: &[f64]) -> bool {
    problem
        .min_margin(u)
        .map(|m| m > ADMISSIBILITY_FLOOR)
        .unwrap_or(false)
}

/// Fresh entry for stages where no warm start is admissible: a wide
/// negative-curvature cap in the conformal factor, with its pole outside
/// the domain, ramped to the stage data in bounded boundary steps.
fn cap_ramp_entry(problem: &DirichletProblem, opts: &NewtonOptions) -> Result<RadialSolution> {
    let grid = problem.grid();
    let pole = 1.05 * grid.r_max();
    let guess: Vec<f64> = (0..grid.len())
        .map(|i| {
            let r = grid.node(i);
            (2.0 * pole / (pole * pole - r * r)).ln()
        })
        .collect();
    let right_from = *guess.last().expect("grids are nonempty");
    let right_to = problem.right_value();
    let left_from = guess[0];
    let left_to = problem.left_value();
    let mut distance = (right_to - right_from).abs();
    if let Some(target) = left_to {
        distance = distance.max((target - left_from).abs());
    }
    let steps = ((distance / RAMP_STEP).ceil() as usize).max(1);
    let stages: Vec<(Option<f64>, f64)> = (0..=steps)
        .map(|s| {
            let t = s as f64 / steps as f64;
            let right = right_from + t * (right_to - right_from);
            let left = left_to.map(|target| left_from + t * (target - left_from));
            (left, right)
        })
        .collect();
    let plan = ContinuationPlan::Boundary { stages };
    let mut out = continuation_solve(problem, &guess, &plan, opts)?;
    let last = out.stages.pop().expect("the ramp has at least one stage");
    Ok(last.solution)
}

/// One stage solve: previous stage extended by its boundary value, then a
/// constant profile at the data level, then the cap-ramp entry; the first
/// admissible start is committed to.
fn solve_stage(
    problem: &DirichletProblem,
    prev: Option<&[f64]>,
    opts: &NewtonOptions,
) -> Result<RadialSolution> {
    let m = problem.grid().len();
    if let Some(p) = prev {
        let mut start = p.to_vec();
        let tail = *p.last().expect("stages are nonempty");
        start.resize(m, tail);
        let start = blend_to_boundary(problem, &start);
        if admissible_start(problem, &start) {
            return newton_solve(problem, &start, opts);
        }
    }
    let constant = blend_to_boundary(problem, &vec![problem.right_value(); m]);
    if admissible_start(problem, &constant) {
        return newton_solve(problem, &constant, opts);
    }
    cap_ramp_entry(problem, opts)
}

fn core_index(grid: &Grid, core_radius: f64) -> usize {
    let t = (core_radius - grid.r_min()) / grid.spacing() + 1e-9;
    (t.floor().max(0.0) as usize).min(grid.len() - 1)
}

fn sup_abs_diff(a: &[f64], b: &[f64], upto: usize) -> f64 {
    a.iter()
        .zip(b)
        .take(upto + 1)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

struct PositiveConfig {
    boundary_level: f64,
    comparison: PositiveComparison,
}

/// Solves with the plan's data on every stage domain and classifies the
/// run by its core traces. Stage failures truncate the report instead of
/// aborting it.
pub fn run_negative(plan: &ExhaustionPlan) -> Result<ExhaustionReport> {
    plan.validate()?;
    run_staged(plan, RunKind::Negative, None)
}

/// Negative-sign run with the right-hand side driven to zero on the
/// harmonic schedule `1/j`. Requires nonnegative background scalar
/// curvature; audits that every stage stays below zero.
pub fn run_negative_degenerate(plan: &ExhaustionPlan) -> Result<ExhaustionReport> {
    plan.validate()?;
    plan.degenerate_precondition()?;
    run_staged(plan, RunKind::NegativeDegenerate, None)
}

/// Positive-sign run under the conformal ceiling `boundary_level`: stage
/// `j` solves at the level `exp(-2 boundary_level) * min` of the background
/// curvature functional over its domain, with the ceiling as boundary data.
/// The `comparison` source adds a per-stage lower-ordering audit.
pub fn run_positive(
    plan: &ExhaustionPlan,
    boundary_level: f64,
    comparison: PositiveComparison,
) -> Result<ExhaustionReport> {
    plan.validate()?;
    if !boundary_level.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "the boundary level must be finite, got {boundary_level}"
        )));
    }
    if !plan.background_admissible()? {
        return Err(Error::Precondition(
            "positive runs need a background admissible outside the exempt radius".into(),
        ));
    }
    run_staged(
        plan,
        RunKind::Positive,
        Some(PositiveConfig {
            boundary_level,
            comparison,
        }),
    )
}

fn run_staged(
    plan: &ExhaustionPlan,
    kind: RunKind,
    positive: Option<PositiveConfig>,
) -> Result<ExhaustionReport> {
    let background_floor = plan.background_floor()?;
    let background_admissible = plan.background_admissible()?;
    let opts = NewtonOptions {
        tol: STAGE_TOL,
        ..NewtonOptions::default()
    };
    let boundary = positive.as_ref().map(|p| p.boundary_level).unwrap_or(0.0);

    let mut stages: Vec<StageRecord> = Vec::new();
    let mut barriers: Vec<StageBarrier> = Vec::new();
    let mut epsilons: Vec<f64> = Vec::new();
    let mut truncated = false;
    let mut failure = None;

    for stage_index in 0..plan.radii.len() {
        let base = plan.stage_base(stage_index, boundary)?;
        let (level, problem) = match kind {
            RunKind::Negative => (1.0, base),
            RunKind::NegativeDegenerate => {
                let level = 1.0 / (stage_index + 1) as f64;
                let scaled = base.with_scaled_rhs(level)?;
                (level, scaled)
            }
            RunKind::Positive => {
                let f0 = base.background_f_values()?;
                let min_f = f0.iter().copied().fold(f64::INFINITY, f64::min);
                let eps = (-2.0 * boundary).exp() * min_f;
                if !(eps > 0.0) {
                    return Err(Error::Precondition(format!(
                        "stage {} has no positive background curvature level, got {eps}",
                        stage_index + 1
                    )));
                }
                epsilons.push(eps);
                let level = eps / base.psi_sup();
                let scaled = base.with_scaled_rhs(level)?;
                (level, scaled)
            }
        };
        let grid = problem.grid().clone();
        let prev_values = stages.last().map(|s| s.values.clone());
        let solution = match solve_stage(&problem, prev_values.as_deref(), &opts) {
            Ok(s) if s.converged => s,
            Ok(s) => {
                truncated = true;
                failure = Some(format!(
                    "stage {} stopped unconverged at residual {:.3e}",
                    stage_index + 1,
                    s.residual_sup
                ));
                break;
            }
            Err(e) => {
                truncated = true;
                failure = Some(format!("stage {}: {e}", stage_index + 1));
                break;
            }
        };

        let rows = problem.solution_rows(&solution.values)?;
        let k_idx = core_index(&grid, plan.core_radius);
        let inf_core = solution.values[..=k_idx]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let (min_u, max_u) = solution
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        let (f_min, f_max) = rows
            .iter()
            .filter(|row| row.f_value.is_finite())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), row| {
                (lo.min(row.f_value), hi.max(row.f_value))
            });
        let (cauchy_core, cauchy_slope_core) = match (&prev_values, stages.last()) {
            (Some(pv), Some(prev_record)) => {
                let prev_grid = plan.stage_grid(stage_index - 1)?;
                debug_assert_eq!(prev_record.nodes, pv.len());
                let new_slopes = d1(&grid, &solution.values)?;
                let old_slopes = d1(&prev_grid, pv)?;
                (
                    Some(sup_abs_diff(&solution.values, pv, k_idx)),
                    Some(sup_abs_diff(&new_slopes, &old_slopes, k_idx)),
                )
            }
            _ => (None, None),
        };

        match kind {
            RunKind::Negative => {
                let spec = BarrierSpec::NegativeLower {
                    background_floor,
                    rhs_sup: problem.psi_sup(),
                    core: Some((grid.r_min(), plan.exempt_radius)),
                };
                barriers.push(StageBarrier {
                    stage: stage_index + 1,
                    report: barrier_check(&grid, &solution.values, &spec, BARRIER_TOL)?,
                });
            }
            RunKind::NegativeDegenerate => {
                let spec = BarrierSpec::UpperConstant { bound: 0.0 };
                barriers.push(StageBarrier {
                    stage: stage_index + 1,
                    report: barrier_check(&grid, &solution.values, &spec, BARRIER_TOL)?,
                });
            }
            RunKind::Positive => {
                let cfg = positive.as_ref().expect("positive runs carry a config");
                let spec = BarrierSpec::UpperConstant {
                    bound: cfg.boundary_level,
                };
                barriers.push(StageBarrier {
                    stage: stage_index + 1,
                    report: barrier_check(&grid, &solution.values, &spec, BARRIER_TOL)?,
                });
                let comparison = match &cfg.comparison {
                    PositiveComparison::None => None,
                    PositiveComparison::LinearSolve => {
                        let n = plan.background.dimension() as f64;
                        let phi_boundary = (0.5 * (n - 2.0) * cfg.boundary_level).exp();
                        let left = match grid.left() {
                            LeftEnd::Symmetry => None,
                            LeftEnd::Dirichlet => Some(phi_boundary),
                        };
                        let phi =
                            conformal_laplacian_solve(&plan.background, &grid, left, phi_boundary)?;
                        Some(conformal_log_profile(&grid, plan.background.dimension(), &phi)?)
                    }
                    PositiveComparison::Supplied(profile) => {
                        Some(profile.values_on(&grid.nodes())?)
                    }
                };
                if let Some(comparison) = comparison {
                    let spec = BarrierSpec::LowerProfile {
                        comparison: &comparison,
                    };
                    barriers.push(StageBarrier {
                        stage: stage_index + 1,
                        report: barrier_check(&grid, &solution.values, &spec, BARRIER_TOL)?,
                    });
                }
            }
        }

        stages.push(StageRecord {
            radius: plan.radii[stage_index],
            nodes: grid.len(),
            rhs_level: level,
            inf_core,
            min_u,
            max_u,
            cauchy_core,
            cauchy_slope_core,
            f_min,
            f_max,
            margin: solution.min_margin,
            iterations: solution.iterations,
            residual_sup: solution.residual_sup,
            values: solution.values,
        });
    }

    let infs: Vec<f64> = stages.iter().map(|s| s.inf_core).collect();
    let cauchys: Vec<f64> = stages.iter().filter_map(|s| s.cauchy_core).collect();
    let classification = match kind {
        RunKind::Positive => classify_positive(&epsilons[..stages.len().min(epsilons.len())]),
        _ => {
            if infs.len() >= 4 {
                classify(&infs, &cauchys)?
            } else {
                Classification::Undetermined
            }
        }
    };

    let normalized = if kind != RunKind::Positive
        && classification == Classification::Case2BoundaryLimit
    {
        normalized_stages(plan, kind, &stages, boundary)?
    } else {
        Vec::new()
    };

    let monotonicity = if kind != RunKind::Positive && stages.len() >= 2 {
        Some(monotonicity_audit(plan, &stages))
    } else {
        None
    };

    let completeness = match stages.last() {
        Some(last) if !truncated => {
            let grid = plan.stage_grid(stages.len() - 1)?;
            let shift = if normalized.is_empty() { 0.0 } else { last.inf_core };
            let mut log_scale: Vec<f64> = last.values.iter().map(|v| v - shift).collect();
            if let RadialMetric::ConformallyFlat { factor, .. } = &plan.background {
                for (i, ls) in log_scale.iter_mut().enumerate() {
                    *ls += factor.value(grid.node(i))?;
                }
            }
            Some(completeness_proxy(
                &grid,
                &log_scale,
                plan.core_radius,
                &plan.radii[..stages.len()],
            )?)
        }
        _ => None,
    };

    Ok(ExhaustionReport {
        kind,
        core_radius: plan.core_radius,
        background_floor,
        background_admissible,
        stages,
        epsilons,
        truncated,
        failure,
        classification,
        normalized,
        barriers,
        monotonicity,
        completeness,
    })
}

/// Shifted-stage records for boundary-limit runs, with the scaling-identity
/// audit: shifting a stage by its core infimum and decaying the right-hand
/// side by `exp(2 inf)` reproduces the stage residual times the decay
/// factor, up to rounding in the exponentials.
fn normalized_stages(
    plan: &ExhaustionPlan,
    kind: RunKind,
    stages: &[StageRecord],
    boundary: f64,
) -> Result<Vec<NormalizedStage>> {
    let mut out: Vec<NormalizedStage> = Vec::with_capacity(stages.len());
    let mut prev_hat: Option<Vec<f64>> = None;
    for (i, record) in stages.iter().enumerate() {
        let shift = record.inf_core;
        let decayed = (2.0 * shift).exp();
        let hat: Vec<f64> = record.values.iter().map(|v| v - shift).collect();
        let grid = plan.stage_grid(i)?;
        let k_idx = core_index(&grid, plan.core_radius);
        let normalized_inf = hat[..=k_idx].iter().copied().fold(f64::INFINITY, f64::min);

        let base = plan.stage_base(i, boundary)?;
        let original = if record.rhs_level == 1.0 {
            base.clone()
        } else {
            base.with_scaled_rhs(record.rhs_level)?
        };
        let shifted_problem = original
            .with_scaled_rhs(decayed)?
            .with_boundary(
                original.left_value().map(|v| v - shift),
                original.right_value() - shift,
            )?;
        let res_orig = original.residual(&record.values)?;
        let res_hat = shifted_problem.residual(&hat)?;
        let mut gap = 0.0f64;
        let mut scale = 0.0f64;
        for (a, b) in res_hat.iter().zip(&res_orig) {
            gap = gap.max((a - decayed * b).abs());
            scale = scale.max(b.abs());
        }
        let identity_gap = gap / (decayed * (1.0 + scale + original.psi_sup()));

        let cauchy_core = prev_hat
            .as_ref()
            .map(|ph| sup_abs_diff(&hat, ph, k_idx));
        out.push(NormalizedStage {
            radius: record.radius,
            decayed_level: decayed,
            normalized_inf,
            cauchy_core,
            identity_gap,
        });
        prev_hat = Some(hat);
    }
    debug_assert!(kind != RunKind::Positive);
    Ok(out)
}

fn monotonicity_audit(plan: &ExhaustionPlan, stages: &[StageRecord]) -> MonotonicityAudit {
    let n = plan.background.dimension();
    let mut e1 = vec![0.0; n];
    e1[0] = 1.0;
    let applies = plan
        .functional
        .cone()
        .margin(&e1)
        .map(|m| m > 0.0)
        .unwrap_or(false);
    let mut worst = f64::NEG_INFINITY;
    let mut violations = 0usize;
    for pair in stages.windows(2) {
        let shared = pair[0].values.len();
        for i in 0..shared {
            let increase = pair[1].values[i] - pair[0].values[i];
            worst = worst.max(increase);
            if increase > MONOTONICITY_TOL {
                violations += 1;
            }
        }
    }
    MonotonicityAudit {
        applies,
        worst_increase: if worst.is_finite() { worst } else { 0.0 },
        violations,
    }
}
