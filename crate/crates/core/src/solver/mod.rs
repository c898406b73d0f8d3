//! Damped Newton solver for the radial Dirichlet problem
//! `f(lambda(sign, g_u)) = psi` with `g_u = e^{2u} g` over a fixed radial
//! background `g`. The unknown is the node vector of `u`; equation rows use
//! compact three-point stencils, so the linearization is tridiagonal and one
//! Newton step costs one Thomas solve. Every accepted iterate keeps every
//! equation node strictly inside the admissible cone: the line search treats
//! admissibility as a hard wall and residual decrease as the merit, which is
//! what keeps the functional smooth along the whole iteration path.

pub mod barrier;
pub mod linear;

pub use barrier::{barrier_check, BarrierReport, BarrierSpec, BARRIER_TOL};
pub use linear::{conformal_laplacian_solve, conformal_log_profile};

use crate::cones::SymmetricFunctional;
use crate::discretize::{d1, d2, solve_banded, BandedSystem, Grid, LeftEnd};
use crate::error::{Error, Result};
use crate::geometry::{RadialMetric, RadialProfile, SchoutenSign};

/// Hard lower wall on the admissibility margin of accepted iterates.
pub const ADMISSIBILITY_FLOOR: f64 = 1e-12;

/// Default residual tolerance in the sup norm.
pub const NEWTON_TOL: f64 = 1e-10;

/// Default iteration cap.
pub const NEWTON_MAX_ITER: usize = 100;

/// Default cap on step halvings inside one line search.
pub const NEWTON_MAX_BACKTRACKS: usize = 40;

/// Per-node background data in the `+A` reference frame. One evaluation
/// covers both metric shapes: conformally flat backgrounds fold their factor
/// into `p0`, `q0`, `w0` and use the `1/r` slope, warped products carry their
/// curvature frame values in `ar`, `at` and the slope `Phi'/Phi`. With
/// `p = p0 + u'` and `q = q0 + u''` the frame values of the conformal change
/// are `rad = ar - q + p^2/2` and `tan = at - sl*p - p^2/2`, scaled by
/// `e^{-2(w0 + u)}`. On a flat symmetry axis both frame values collapse to
/// `-q` and the first derivative vanishes identically.
#[derive(Debug, Clone, Copy)]
struct NodeCoefs {
    ar: f64,
    at: f64,
    sl: f64,
    p0: f64,
    q0: f64,
    w0: f64,
    axis: bool,
}

impl NodeCoefs {
    fn rad_tan(&self, p: f64, q: f64) -> (f64, f64) {
        if self.axis {
            (self.ar - q, self.at - q)
        } else {
            (
                self.ar - q + 0.5 * p * p,
                self.at - self.sl * p - 0.5 * p * p,
            )
        }
    }

    /// `(d rad/dp, d rad/dq, d tan/dp, d tan/dq)` at the given `p`.
    fn partials(&self, p: f64) -> (f64, f64, f64, f64) {
        if self.axis {
            (0.0, -1.0, 0.0, -1.0)
        } else {
            (p, -1.0, -self.sl - p, 0.0)
        }
    }
}

/// Frame state of one node at one iterate.
#[derive(Debug, Clone, Copy)]
struct NodeState {
    p: f64,
    rad: f64,
    tan: f64,
    scale: f64,
}

/// One radial Dirichlet problem, prepared on a fixed grid. Background
/// curvature data and the right-hand side are sampled at construction, so
/// residual and Jacobian assembly never re-evaluate profiles.
#[derive(Debug, Clone)]
pub struct DirichletProblem {
    background: RadialMetric,
    functional: SymmetricFunctional,
    sign: SchoutenSign,
    grid: Grid,
    left_value: Option<f64>,
    right_value: f64,
    radii: Vec<f64>,
    psi: Vec<f64>,
    coefs: Vec<NodeCoefs>,
}

impl DirichletProblem {
    pub fn new(
        background: RadialMetric,
        functional: SymmetricFunctional,
        sign: SchoutenSign,
        psi: &RadialProfile,
        grid: Grid,
        left_value: Option<f64>,
        right_value: f64,
    ) -> Result<Self> {
        let n = background.dimension();
        if functional.cone().dimension() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: functional.cone().dimension(),
            });
        }
        match grid.left() {
            LeftEnd::Symmetry => {
                if left_value.is_some() {
                    return Err(Error::InvalidParameter(
                        "symmetry axis carries no Dirichlet data".into(),
                    ));
                }
                if !background.symmetric_at_zero() {
                    return Err(Error::InvalidParameter(format!(
                        "background {background} is not symmetric at r = 0"
                    )));
                }
            }
            LeftEnd::Dirichlet => match left_value {
                None => {
                    return Err(Error::InvalidParameter(
                        "Dirichlet left end needs boundary data".into(),
                    ))
                }
                Some(v) if !v.is_finite() => {
                    return Err(Error::InvalidParameter(format!(
                        "left boundary data must be finite, got {v}"
                    )))
                }
                Some(_) => {}
            },
        }
        if !right_value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "right boundary data must be finite, got {right_value}"
            )));
        }
        if matches!(background, RadialMetric::ConformallyFlat { .. })
            && grid.left() == LeftEnd::Dirichlet
            && grid.r_min() == 0.0
        {
            return Err(Error::InvalidParameter(
                "conformally flat backgrounds need r > 0 on Dirichlet grids".into(),
            ));
        }
        let radii = grid.nodes();
        let psi = psi.values_on(&radii)?;
        for (i, (&r, &p)) in radii.iter().zip(&psi).enumerate() {
            if !(p > 0.0) || !p.is_finite() {
                let _ = i;
                return Err(Error::Positivity { r, value: p });
            }
        }
        let coefs = build_coefs(&background, &grid, &radii)?;
        Ok(DirichletProblem {
            background,
            functional,
            sign,
            grid,
            left_value,
            right_value,
            radii,
            psi,
            coefs,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn background(&self) -> &RadialMetric {
        &self.background
    }

    pub fn functional(&self) -> &SymmetricFunctional {
        &self.functional
    }

    pub fn sign(&self) -> SchoutenSign {
        self.sign
    }

    pub fn left_value(&self) -> Option<f64> {
        self.left_value
    }

    pub fn right_value(&self) -> f64 {
        self.right_value
    }

    pub fn psi_values(&self) -> &[f64] {
        &self.psi
    }

    pub fn psi_sup(&self) -> f64 {
        self.psi.iter().copied().fold(0.0, f64::max)
    }

    /// Same problem with the right-hand side multiplied by `factor`.
    pub fn with_scaled_rhs(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "right-hand side factor must be positive and finite, got {factor}"
            )));
        }
        let mut out = self.clone();
        for p in &mut out.psi {
            *p *= factor;
        }
        Ok(out)
    }

    /// Same problem with new Dirichlet data. The left slot must match the
    /// grid shape: `None` on a symmetry axis, a value otherwise.
    pub fn with_boundary(&self, left_value: Option<f64>, right_value: f64) -> Result<Self> {
        match (self.grid.left(), left_value) {
            (LeftEnd::Symmetry, Some(_)) => {
                return Err(Error::InvalidParameter(
                    "symmetry axis carries no Dirichlet data".into(),
                ))
            }
            (LeftEnd::Dirichlet, None) => {
                return Err(Error::InvalidParameter(
                    "Dirichlet left end needs boundary data".into(),
                ))
            }
            (_, Some(v)) if !v.is_finite() => {
                return Err(Error::InvalidParameter(format!(
                    "left boundary data must be finite, got {v}"
                )))
            }
            _ => {}
        }
        if !right_value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "right boundary data must be finite, got {right_value}"
            )));
        }
        let mut out = self.clone();
        out.left_value = left_value;
        out.right_value = right_value;
        Ok(out)
    }

    /// Same problem with a new curvature functional of the same dimension.
    pub fn with_functional(&self, functional: SymmetricFunctional) -> Result<Self> {
        let n = self.background.dimension();
        if functional.cone().dimension() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: functional.cone().dimension(),
            });
        }
        let mut out = self.clone();
        out.functional = functional;
        Ok(out)
    }

    fn check_len(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.grid.len() {
            return Err(Error::DimensionMismatch {
                expected: self.grid.len(),
                got: u.len(),
            });
        }
        Ok(())
    }

    fn orientation(&self) -> f64 {
        match self.sign {
            SchoutenSign::PlusA => 1.0,
            SchoutenSign::MinusA => -1.0,
        }
    }

    /// Indices carrying equation rows; the remaining rows are Dirichlet.
    fn equation_nodes(&self) -> std::ops::Range<usize> {
        let start = match self.grid.left() {
            LeftEnd::Symmetry => 0,
            LeftEnd::Dirichlet => 1,
        };
        start..self.grid.len() - 1
    }

    fn state_from_derivs(&self, i: usize, b: f64, du: f64, ddu: f64) -> NodeState {
        let k = &self.coefs[i];
        let p = k.p0 + du;
        let q = k.q0 + ddu;
        let (rad, tan) = k.rad_tan(p, q);
        NodeState {
            p,
            rad,
            tan,
            scale: (-2.0 * (k.w0 + b)).exp(),
        }
    }

    fn node_state(&self, i: usize, u: &[f64]) -> NodeState {
        let h = self.grid.spacing();
        let (du, ddu) = if i == 0 {
            // Symmetry ghost u_{-1} = u_1.
            (0.0, 2.0 * (u[1] - u[0]) / (h * h))
        } else {
            (
                (u[i + 1] - u[i - 1]) / (2.0 * h),
                (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h),
            )
        };
        self.state_from_derivs(i, u[i], du, ddu)
    }

    fn lambda_into(&self, st: &NodeState, out: &mut Vec<f64>) {
        let n = self.background.dimension();
        let s = self.orientation() * st.scale;
        out.clear();
        out.push(s * st.rad);
        for _ in 1..n {
            out.push(s * st.tan);
        }
    }

    /// Residual vector: `u - data` on Dirichlet rows, `f(lambda) - psi` on
    /// equation rows. Fails with [`Error::Inadmissible`] if any equation node
    /// leaves the closed cone.
    pub fn residual(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check_len(u)?;
        let m = u.len();
        let mut out = vec![0.0; m];
        if let Some(xi) = self.left_value {
            out[0] = u[0] - xi;
        }
        out[m - 1] = u[m - 1] - self.right_value;
        let mut lam = Vec::with_capacity(self.background.dimension());
        for i in self.equation_nodes() {
            let st = self.node_state(i, u);
            self.lambda_into(&st, &mut lam);
            let f = self.functional.value_strict(&lam).map_err(|e| match e {
                Error::OutsideCone { min_sigma } => Error::Inadmissible {
                    node: i,
                    r: self.radii[i],
                    min_sigma,
                },
                other => other,
            })?;
            out[i] = f - self.psi[i];
        }
        Ok(out)
    }

    /// Smallest admissibility margin over the equation nodes. Non-finite
    /// eigenvalues report negative infinity, so overflowing trial iterates
    /// fail the admissibility wall instead of slipping through.
    pub fn min_margin(&self, u: &[f64]) -> Result<f64> {
        Ok(self.worst_equation_node(u)?.1)
    }

    fn worst_equation_node(&self, u: &[f64]) -> Result<(usize, f64)> {
        self.check_len(u)?;
        let mut lam = Vec::with_capacity(self.background.dimension());
        let mut worst = (0, f64::INFINITY);
        for i in self.equation_nodes() {
            let st = self.node_state(i, u);
            self.lambda_into(&st, &mut lam);
            let margin = if lam.iter().any(|x| !x.is_finite()) {
                f64::NEG_INFINITY
            } else {
                self.functional.cone().margin(&lam)?
            };
            if margin < worst.1 {
                worst = (i, margin);
            }
        }
        Ok(worst)
    }

    /// Tridiagonal Newton system at `u`: the Jacobian bands and `-residual`
    /// as the right-hand side.
    fn newton_system(&self, u: &[f64], residual: &[f64]) -> Result<BandedSystem> {
        let m = u.len();
        let h = self.grid.spacing();
        let h2 = h * h;
        let mut sys = BandedSystem::zeroed(m);
        for i in 0..m {
            sys.rhs[i] = -residual[i];
        }
        if self.grid.left() == LeftEnd::Dirichlet {
            sys.diag[0] = 1.0;
        }
        sys.diag[m - 1] = 1.0;
        let mut lam = Vec::with_capacity(self.background.dimension());
        for i in self.equation_nodes() {
            let st = self.node_state(i, u);
            self.lambda_into(&st, &mut lam);
            let g = self.functional.gradient_strict(&lam).map_err(|e| match e {
                Error::OutsideCone { min_sigma } => Error::Inadmissible {
                    node: i,
                    r: self.radii[i],
                    min_sigma,
                },
                other => other,
            })?;
            let gr = g[0];
            let gt: f64 = g[1..].iter().sum();
            let s = self.orientation() * st.scale;
            let lam_r = s * st.rad;
            let lam_t = s * st.tan;
            let (drp, drq, dtp, dtq) = self.coefs[i].partials(st.p);
            let entry = |dp: f64, dq: f64, diagonal: bool| {
                let extra = if diagonal { -2.0 } else { 0.0 };
                let dlr = s * (drp * dp + drq * dq) + extra * lam_r;
                let dlt = s * (dtp * dp + dtq * dq) + extra * lam_t;
                gr * dlr + gt * dlt
            };
            if i == 0 {
                sys.diag[0] = entry(0.0, -2.0 / h2, true);
                sys.sup[0] = entry(0.0, 2.0 / h2, false);
            } else {
                sys.sub[i - 1] = entry(-0.5 / h, 1.0 / h2, false);
                sys.diag[i] = entry(0.0, -2.0 / h2, true);
                sys.sup[i] = entry(0.5 / h, 1.0 / h2, false);
            }
        }
        Ok(sys)
    }

    /// Functional values of the unmodified background at every node; nodes
    /// outside the closed cone contribute zero. This is the data behind
    /// degenerate-limit schedules and lower-barrier floors.
    pub fn background_f_values(&self) -> Result<Vec<f64>> {
        let mut lam = Vec::with_capacity(self.background.dimension());
        let mut out = Vec::with_capacity(self.grid.len());
        for i in 0..self.grid.len() {
            let st = self.state_from_derivs(i, 0.0, 0.0, 0.0);
            self.lambda_into(&st, &mut lam);
            let f = match self.functional.value(&lam) {
                Ok(v) => v,
                Err(Error::OutsideCone { .. }) => 0.0,
                Err(other) => return Err(other),
            };
            out.push(f);
        }
        Ok(out)
    }

    /// Per-node diagnostics of a solution vector, using the full-grid
    /// one-sided stencils so boundary rows report curvature too. Nodes whose
    /// eigenvalues leave the closed cone report `NaN` as the functional value
    /// with their (negative) margin.
    pub fn solution_rows(&self, u: &[f64]) -> Result<Vec<SolutionRow>> {
        self.check_len(u)?;
        let du = d1(&self.grid, u)?;
        let ddu = d2(&self.grid, u)?;
        let mut lam = Vec::with_capacity(self.background.dimension());
        let mut rows = Vec::with_capacity(u.len());
        for i in 0..u.len() {
            let st = self.state_from_derivs(i, u[i], du[i], ddu[i]);
            self.lambda_into(&st, &mut lam);
            let margin = if lam.iter().any(|x| !x.is_finite()) {
                f64::NEG_INFINITY
            } else {
                self.functional.cone().margin(&lam)?
            };
            let f_value = self.functional.value(&lam).unwrap_or(f64::NAN);
            rows.push(SolutionRow {
                r: self.radii[i],
                u: u[i],
                du: du[i],
                f_value,
                margin,
            });
        }
        Ok(rows)
    }
}

fn build_coefs(background: &RadialMetric, grid: &Grid, radii: &[f64]) -> Result<Vec<NodeCoefs>> {
    let mut coefs = Vec::with_capacity(radii.len());
    match background {
        RadialMetric::ConformallyFlat { factor, .. } => {
            for (i, &r) in radii.iter().enumerate() {
                let (w0, dw0, ddw0) = factor.eval(r)?;
                let axis = i == 0 && grid.left() == LeftEnd::Symmetry;
                coefs.push(NodeCoefs {
                    ar: 0.0,
                    at: 0.0,
                    sl: if axis { 0.0 } else { 1.0 / r },
                    p0: dw0,
                    q0: ddw0,
                    w0,
                    axis,
                });
            }
        }
        RadialMetric::WarpedProduct { warping, .. } => {
            for &r in radii {
                let minus = background.schouten(r)?;
                let plus = minus.negated();
                let (phi, dphi, _) = warping.eval(r)?;
                coefs.push(NodeCoefs {
                    ar: plus.chi1 - plus.chi2,
                    at: plus.chi1,
                    sl: dphi / phi,
                    p0: 0.0,
                    q0: 0.0,
                    w0: 0.0,
                    axis: false,
                });
            }
        }
    }
    Ok(coefs)
}

/// One diagnostic row of [`DirichletProblem::solution_rows`].
#[derive(Debug, Clone, Copy)]
pub struct SolutionRow {
    pub r: f64,
    pub u: f64,
    pub du: f64,
    pub f_value: f64,
    pub margin: f64,
}

/// Newton iteration controls.
#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub max_backtracks: usize,
    pub margin_floor: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: NEWTON_TOL,
            max_iter: NEWTON_MAX_ITER,
            max_backtracks: NEWTON_MAX_BACKTRACKS,
            margin_floor: ADMISSIBILITY_FLOOR,
        }
    }
}

/// Outcome of one Newton run. `converged` distinguishes success from an
/// exhausted iteration budget; the iterate is returned either way so callers
/// can inspect or continue it.
#[derive(Debug, Clone)]
pub struct RadialSolution {
    pub values: Vec<f64>,
    pub residual_sup: f64,
    pub iterations: usize,
    pub converged: bool,
    pub min_margin: f64,
    pub backtrack_total: usize,
}

pub(crate) fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
}

/// Damped Newton iteration. Dirichlet rows are imposed exactly on the start
/// iterate; a start outside the admissibility wall is an error recommending
/// continuation; a line search that cannot find an admissible decreasing step
/// within the backtrack budget is a stall error. Running out of iterations is
/// not an error: the best iterate is returned with `converged = false`.
pub fn newton_solve(
    problem: &DirichletProblem,
    guess: &[f64],
    opts: &NewtonOptions,
) -> Result<RadialSolution> {
    problem.check_len(guess)?;
    let mut u = guess.to_vec();
    let m = u.len();
    if let Some(xi) = problem.left_value {
        u[0] = xi;
    }
    u[m - 1] = problem.right_value;

    let (node, margin) = problem.worst_equation_node(&u)?;
    if !(margin > opts.margin_floor) {
        return Err(Error::InadmissibleStart {
            node,
            r: problem.radii[node],
            min_sigma: margin,
        });
    }
    let mut residual = problem.residual(&u)?;
    let mut sup = sup_norm(&residual);
    let mut min_margin = margin;
    let mut backtrack_total = 0;

    for iteration in 0..opts.max_iter {
        if sup <= opts.tol {
            return Ok(RadialSolution {
                values: u,
                residual_sup: sup,
                iterations: iteration,
                converged: true,
                min_margin,
                backtrack_total,
            });
        }
        let system = problem.newton_system(&u, &residual)?;
        let delta = solve_banded(&system)?;
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..=opts.max_backtracks {
            let trial: Vec<f64> = u
                .iter()
                .zip(&delta)
                .map(|(ui, di)| ui + step * di)
                .collect();
            let trial_margin = problem.min_margin(&trial)?;
            if trial_margin > opts.margin_floor {
                let trial_residual = problem.residual(&trial)?;
                let trial_sup = sup_norm(&trial_residual);
                // A trial already inside the tolerance is accepted even
                // without strict decrease, so convergence cannot be blocked
                // by a flat tail.
                if trial_sup < sup || trial_sup <= opts.tol {
                    u = trial;
                    residual = trial_residual;
                    sup = trial_sup;
                    min_margin = trial_margin;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
            backtrack_total += 1;
        }
        if !accepted {
            return Err(Error::StepStall {
                iteration,
                residual: sup,
            });
        }
    }
    Ok(RadialSolution {
        converged: sup <= opts.tol,
        values: u,
        residual_sup: sup,
        iterations: opts.max_iter,
        min_margin,
        backtrack_total,
    })
}

/// A staged deformation of one problem, solved with warm starts.
#[derive(Debug, Clone)]
pub enum ContinuationPlan {
    /// Multiply the right-hand side by each factor in turn. The schedule
    /// stops, without error, before any stage whose scaled right-hand side
    /// falls below `floor` in the sup norm.
    RhsFactors { factors: Vec<f64>, floor: f64 },
    /// Dirichlet data per stage.
    Boundary { stages: Vec<(Option<f64>, f64)> },
    /// Outer trace-deformation parameter per stage; requires a functional
    /// with a trace modification.
    OuterTau { taus: Vec<f64> },
}

/// One solved stage of a continuation schedule.
#[derive(Debug, Clone)]
pub struct ContinuationStage {
    /// Stage parameter: the RHS factor, the right boundary value, or `tau`.
    pub parameter: f64,
    pub solution: RadialSolution,
}

#[derive(Debug, Clone)]
pub struct ContinuationResult {
    pub stages: Vec<ContinuationStage>,
    /// Whether an `RhsFactors` schedule stopped early at its floor.
    pub stopped_at_floor: bool,
}

impl ContinuationResult {
    pub fn last(&self) -> &RadialSolution {
        &self.stages.last().expect("continuation ran no stages").solution
    }
}

/// Adjusts a warm start to the stage's Dirichlet data with an affine ramp.
/// Imposing changed data on a single node would add a spike of order
/// `delta / h^2` to one second difference and leave the admissible cone; an
/// affine adjustment has zero second difference. On symmetry grids it is a
/// constant shift, which rescales the eigenvalues and keeps the margin
/// exactly.
pub(crate) fn blend_to_boundary(problem: &DirichletProblem, u: &[f64]) -> Vec<f64> {
    let m = u.len();
    let r0 = problem.grid.r_min();
    let span = problem.grid.r_max() - r0;
    let delta_right = problem.right_value - u[m - 1];
    let delta_left = match problem.left_value {
        Some(xi) => xi - u[0],
        None => delta_right,
    };
    (0..m)
        .map(|i| {
            let t = (problem.grid.node(i) - r0) / span;
            u[i] + delta_left * (1.0 - t) + delta_right * t
        })
        .collect()
}

/// Runs a continuation schedule from `guess`, reusing each converged stage as
/// the next start, blended to the stage's boundary data. Stage failures
/// propagate as their Newton error.
pub fn continuation_solve(
    problem: &DirichletProblem,
    guess: &[f64],
    plan: &ContinuationPlan,
    opts: &NewtonOptions,
) -> Result<ContinuationResult> {
    let mut staged: Vec<(f64, DirichletProblem)> = Vec::new();
    let mut stopped_at_floor = false;
    match plan {
        ContinuationPlan::RhsFactors { factors, floor } => {
            if factors.is_empty() {
                return Err(Error::InvalidParameter("empty continuation schedule".into()));
            }
            for &factor in factors {
                let stage = problem.with_scaled_rhs(factor)?;
                if stage.psi_sup() < *floor {
                    stopped_at_floor = true;
                    break;
                }
                staged.push((factor, stage));
            }
            if staged.is_empty() {
                return Err(Error::InvalidParameter(
                    "every continuation stage sits below the right-hand side floor".into(),
                ));
            }
        }
        ContinuationPlan::Boundary { stages } => {
            if stages.is_empty() {
                return Err(Error::InvalidParameter("empty continuation schedule".into()));
            }
            for &(left, right) in stages {
                staged.push((right, problem.with_boundary(left, right)?));
            }
        }
        ContinuationPlan::OuterTau { taus } => {
            if taus.is_empty() {
                return Err(Error::InvalidParameter("empty continuation schedule".into()));
            }
            for &tau in taus {
                let functional = problem.functional.with_outer_tau(tau)?;
                staged.push((tau, problem.with_functional(functional)?));
            }
        }
    }

    let mut u = guess.to_vec();
    let mut stages = Vec::with_capacity(staged.len());
    for (parameter, stage_problem) in staged {
        let start = blend_to_boundary(&stage_problem, &u);
        let solution = newton_solve(&stage_problem, &start, opts)?;
        u = solution.values.clone();
        stages.push(ContinuationStage { parameter, solution });
    }
    Ok(ContinuationResult { stages, stopped_at_floor })
}
