//! Radial metrics and their curvature eigenvalues in closed form.
//!
//! Two metric shapes cover everything here:
//!
//! * warped products `dr^2 + Phi(r)^2 h` over an Einstein fiber with
//!   `Ric_h = (n-2) k h`, `k` in {-1, 0, 1};
//! * conformally flat metrics `e^{2 w} delta` with a radial factor `w`.
//!
//! Both produce Schouten endomorphisms with one radial eigenvalue and an
//! `(n-1)`-fold tangential eigenvalue. The pair `(chi1, chi2)` below is the
//! tangential value and the defect `chi1 - chi2 = radial value`, stated in a
//! reference frame; multiplying by the frame scale gives the eigenvalues of
//! `g^{-1} A_g` (or its negative, per the sign tag). Keeping the frame values
//! and the scale separate is what makes limit geometry readable: warped ends
//! like sinh, cosh, exp all sit at `(chi1, chi2) = (1/2, 0)`.

pub mod profile;

pub use profile::{ProfileKind, RadialProfile, SampledProfile};

use crate::cones::ConeSpec;
use crate::error::{Error, Result};
use std::fmt;

/// Which tensor the assembled eigenvalues describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchoutenSign {
    PlusA,
    MinusA,
}

impl SchoutenSign {
    pub fn flipped(self) -> Self {
        match self {
            SchoutenSign::PlusA => SchoutenSign::MinusA,
            SchoutenSign::MinusA => SchoutenSign::PlusA,
        }
    }
}

/// Schouten eigenvalue data at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchoutenEigenvalues {
    pub n: usize,
    /// Tangential frame value.
    pub chi1: f64,
    /// Defect: the radial frame value is `chi1 - chi2`.
    pub chi2: f64,
    /// Multiplies the frame vector to give metric eigenvalues.
    pub frame_scale: f64,
    /// Tensor side the frame values describe.
    pub sign: SchoutenSign,
}

impl SchoutenEigenvalues {
    /// `(chi1 - chi2, chi1, ..., chi1)` before frame scaling.
    pub fn frame_vector(&self) -> Vec<f64> {
        let mut v = vec![self.chi1; self.n];
        v[0] = self.chi1 - self.chi2;
        v
    }

    /// Eigenvalues of the tagged tensor.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.frame_vector()
            .into_iter()
            .map(|x| self.frame_scale * x)
            .collect()
    }

    pub fn negated(&self) -> Self {
        SchoutenEigenvalues {
            chi1: -self.chi1,
            chi2: -self.chi2,
            sign: self.sign.flipped(),
            ..*self
        }
    }

    /// Eigenvalues of the requested tensor side.
    pub fn eigenvalues_for(&self, sign: SchoutenSign) -> Vec<f64> {
        if sign == self.sign {
            self.eigenvalues()
        } else {
            self.negated().eigenvalues()
        }
    }

    /// Scalar curvature recovered from the trace,
    /// `R = 2 (n - 1) sigma_1(lambda(g^{-1} A))`.
    pub fn scalar_curvature(&self) -> f64 {
        let lam = self.eigenvalues_for(SchoutenSign::PlusA);
        2.0 * (self.n - 1) as f64 * lam.iter().sum::<f64>()
    }
}

/// Ricci eigenvalue data at one radius: a radial value and an `(n-1)`-fold
/// tangential value, both of `g^{-1} Ric`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicciValues {
    pub n: usize,
    pub radial: f64,
    pub tangential: f64,
    pub scalar: f64,
}

impl RicciValues {
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v = vec![self.tangential; self.n];
        v[0] = self.radial;
        v
    }
}

/// A radial background metric.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialMetric {
    /// `e^{2 factor(r)} delta` on a ball or annulus in flat space.
    ConformallyFlat { n: usize, factor: RadialProfile },
    /// `dr^2 + warping(r)^2 h` with `Ric_h = (n-2) fiber h`.
    WarpedProduct { n: usize, warping: RadialProfile, fiber: f64 },
}

impl RadialMetric {
    pub fn conformally_flat(n: usize, factor: RadialProfile) -> Result<Self> {
        check_dimension(n)?;
        Ok(RadialMetric::ConformallyFlat { n, factor })
    }

    pub fn euclidean(n: usize) -> Result<Self> {
        Self::conformally_flat(n, RadialProfile::zero())
    }

    pub fn warped(n: usize, warping: RadialProfile, fiber: f64) -> Result<Self> {
        check_dimension(n)?;
        if !fiber.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "fiber Einstein sign must be finite, got {fiber}"
            )));
        }
        Ok(RadialMetric::WarpedProduct { n, warping, fiber })
    }

    /// Conformally flat metric whose factor decays like `r^{-(mu-1)}` in the
    /// `v`-form, the model for asymptotically flat ends with one degenerate
    /// cone direction. Requires `mu > 1`.
    pub fn schwarzschild_type(n: usize, mu: f64, m: f64) -> Result<Self> {
        check_dimension(n)?;
        let factor = RadialProfile::closed(ProfileKind::SchwarzschildLog { mu, m })?;
        Ok(RadialMetric::ConformallyFlat { n, factor })
    }

    pub fn dimension(&self) -> usize {
        match self {
            RadialMetric::ConformallyFlat { n, .. } | RadialMetric::WarpedProduct { n, .. } => *n,
        }
    }

    /// Left edge of the usable radial domain.
    pub fn domain_start(&self) -> f64 {
        match self {
            RadialMetric::ConformallyFlat { factor, .. } => factor.domain_start().max(0.0),
            RadialMetric::WarpedProduct { warping, .. } => warping.domain_start().max(0.0),
        }
    }

    /// Whether `r = 0` is a smooth symmetry axis for this metric.
    pub fn symmetric_at_zero(&self) -> bool {
        match self {
            RadialMetric::ConformallyFlat { factor, .. } => factor.symmetric_at_zero(),
            // An even warping doubles smoothly across r = 0, so the reflection
            // ghost node is exact there; the curvature formulas stay regular
            // because the warping's first derivative vanishes.
            RadialMetric::WarpedProduct { warping, .. } => warping.symmetric_at_zero(),
        }
    }

    /// Schouten eigenvalue data at `r`, in the natural sign convention of the
    /// metric shape: `-A` frame values for warped products (hyperbolic-type
    /// ends then sit at positive constants), `+A` for conformally flat
    /// metrics. Use [`SchoutenEigenvalues::eigenvalues_for`] to fix a side.
    pub fn schouten(&self, r: f64) -> Result<SchoutenEigenvalues> {
        match self {
            RadialMetric::WarpedProduct { n, warping, fiber } => {
                let (phi, dphi, ddphi) = warping.eval(r)?;
                if phi <= 0.0 {
                    return Err(Error::Positivity { r, value: phi });
                }
                let chi1 = (dphi * dphi - fiber) / (2.0 * phi * phi);
                let chi2 = -ddphi / phi + 2.0 * chi1;
                Ok(SchoutenEigenvalues {
                    n: *n,
                    chi1,
                    chi2,
                    frame_scale: 1.0,
                    sign: SchoutenSign::MinusA,
                })
            }
            RadialMetric::ConformallyFlat { n, factor } => {
                flat_schouten(*n, factor.eval(r)?, r, factor.symmetric_at_zero())
            }
        }
    }

    /// Ricci eigenvalues and scalar curvature at `r`. Closed form for warped
    /// products; recovered from the Schouten trace identity
    /// `Ric = (n-2) A + tr_g(A) g` for conformally flat metrics.
    pub fn ricci(&self, r: f64) -> Result<RicciValues> {
        match self {
            RadialMetric::WarpedProduct { n, warping, fiber } => {
                let (phi, dphi, ddphi) = warping.eval(r)?;
                if phi <= 0.0 {
                    return Err(Error::Positivity { r, value: phi });
                }
                let nf = *n as f64;
                let radial = -(nf - 1.0) * ddphi / phi;
                let tangential =
                    -ddphi / phi + (nf - 2.0) * (fiber - dphi * dphi) / (phi * phi);
                let scalar = radial + (nf - 1.0) * tangential;
                Ok(RicciValues { n: *n, radial, tangential, scalar })
            }
            RadialMetric::ConformallyFlat { n, .. } => {
                let a = self.schouten(r)?;
                let lam = a.eigenvalues_for(SchoutenSign::PlusA);
                let trace: f64 = lam.iter().sum();
                let nf = *n as f64;
                let radial = (nf - 2.0) * lam[0] + trace;
                let tangential = (nf - 2.0) * lam[1] + trace;
                Ok(RicciValues {
                    n: *n,
                    radial,
                    tangential,
                    scalar: 2.0 * (nf - 1.0) * trace,
                })
            }
        }
    }

    pub fn scalar_curvature(&self, r: f64) -> Result<f64> {
        Ok(self.ricci(r)?.scalar)
    }

    /// Schouten eigenvalue data of `e^{2u} g` at `r`, tagged `+A`. The frame
    /// scale absorbs both the base factor and `u`, so
    /// `eigenvalues()` are the eigenvalues of the new metric's endomorphism.
    pub fn conformal_change(&self, u: &RadialProfile, r: f64) -> Result<SchoutenEigenvalues> {
        match self {
            RadialMetric::ConformallyFlat { n, factor } => {
                let (w0, dw0, ddw0) = factor.eval(r)?;
                let (w1, dw1, ddw1) = u.eval(r)?;
                let even = factor.symmetric_at_zero() && u.symmetric_at_zero();
                flat_schouten(*n, (w0 + w1, dw0 + dw1, ddw0 + ddw1), r, even)
            }
            RadialMetric::WarpedProduct { n, warping, .. } => {
                let (phi, dphi, _) = warping.eval(r)?;
                if phi <= 0.0 {
                    return Err(Error::Positivity { r, value: phi });
                }
                let base = self.schouten(r)?.negated(); // +A frame values
                let base_tan = base.chi1;
                let base_rad = base.chi1 - base.chi2;
                let (u0, du, ddu) = u.eval(r)?;
                let rad = base_rad - ddu + 0.5 * du * du;
                let tan = base_tan - (dphi / phi) * du - 0.5 * du * du;
                Ok(SchoutenEigenvalues {
                    n: *n,
                    chi1: tan,
                    chi2: tan - rad,
                    frame_scale: (-2.0 * u0).exp(),
                    sign: SchoutenSign::PlusA,
                })
            }
        }
    }
}

impl fmt::Display for RadialMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialMetric::ConformallyFlat { n, factor } => {
                write!(f, "conformally-flat(n={n}, factor={factor})")
            }
            RadialMetric::WarpedProduct { n, warping, fiber } => {
                write!(f, "warped(n={n}, warping={warping}, fiber={fiber})")
            }
        }
    }
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "metric dimension must be at least 3, got {n}"
        )));
    }
    Ok(())
}

/// Frame values of `A` for `e^{2w} delta` from `(w, w', w'')`. On a symmetry
/// axis `w'/r` is replaced by its limit `w''(0)`.
fn flat_schouten(
    n: usize,
    (w, dw, ddw): (f64, f64, f64),
    r: f64,
    symmetric: bool,
) -> Result<SchoutenEigenvalues> {
    if r < 0.0 {
        return Err(Error::InvalidParameter(format!("negative radius {r}")));
    }
    let (chi1, chi2) = if r == 0.0 {
        if !symmetric {
            return Err(Error::InvalidParameter(
                "conformal factor is not symmetric at the axis, r = 0 is singular".into(),
            ));
        }
        (-ddw, 0.0)
    } else {
        let slope = dw / r;
        (-slope - 0.5 * dw * dw, ddw - slope - dw * dw)
    };
    Ok(SchoutenEigenvalues {
        n,
        chi1,
        chi2,
        frame_scale: (-2.0 * w).exp(),
        sign: SchoutenSign::PlusA,
    })
}

/// Asymptotic-end admissibility check for a warped product: on the sampled
/// range the tangential frame value must stay above `eps` and the curvature
/// ratio `2 Phi Phi'' / (Phi'^2 - fiber)` must stay above `-mu + 1 + delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct EndConditionReport {
    pub passed: bool,
    pub chi1_threshold: f64,
    pub ratio_threshold: f64,
    pub min_chi1: f64,
    /// Smallest sampled ratio; meaningful only where `chi1 > 0`.
    pub min_ratio: f64,
    pub first_violation: Option<f64>,
}

pub fn check_end_conditions(
    metric: &RadialMetric,
    mu: f64,
    r_range: (f64, f64),
    eps: f64,
    delta: f64,
    samples: usize,
) -> Result<EndConditionReport> {
    let (n, warping, fiber) = match metric {
        RadialMetric::WarpedProduct { n, warping, fiber } => (*n, warping, *fiber),
        RadialMetric::ConformallyFlat { .. } => {
            return Err(Error::InvalidParameter(
                "end conditions are defined for warped products".into(),
            ))
        }
    };
    let _ = n;
    if samples < 2 || !(r_range.1 > r_range.0) || !(eps > 0.0) || !(delta > 0.0) {
        return Err(Error::InvalidParameter(
            "end-condition check needs samples >= 2, r1 > r0, eps > 0, delta > 0".into(),
        ));
    }
    let ratio_threshold = -mu + 1.0 + delta;
    let mut min_chi1 = f64::INFINITY;
    let mut min_ratio = f64::INFINITY;
    let mut first_violation = None;
    for i in 0..samples {
        let r = r_range.0 + (r_range.1 - r_range.0) * i as f64 / (samples - 1) as f64;
        let (phi, dphi, ddphi) = warping.eval(r)?;
        if phi <= 0.0 {
            return Err(Error::Positivity { r, value: phi });
        }
        let chi1 = (dphi * dphi - fiber) / (2.0 * phi * phi);
        min_chi1 = min_chi1.min(chi1);
        let mut violated = chi1 < eps;
        if chi1 > 0.0 {
            // Denominator 2 Phi^2 chi1 is positive exactly where chi1 is.
            let ratio = 2.0 * phi * ddphi / (dphi * dphi - fiber);
            min_ratio = min_ratio.min(ratio);
            violated |= ratio < ratio_threshold;
        }
        if violated && first_violation.is_none() {
            first_violation = Some(r);
        }
    }
    Ok(EndConditionReport {
        passed: first_violation.is_none(),
        chi1_threshold: eps,
        ratio_threshold,
        min_chi1,
        min_ratio,
        first_violation,
    })
}

/// Weighted decay diagnostics for a radial profile on a probe set.
///
/// Sups are `sup r^{tau+j} |d^j u|` for `j = 0, 1`. The fitted exponent is
/// the least-squares slope of `ln|u|` against `ln r`, negated, so a profile
/// behaving like `r^{-a}` reports `a`. The integral norm, present when `p`
/// is finite, is the order-2 weighted Sobolev sum
/// `sum_j (int (r^{tau+j} |d^j u|)^p dr/r)^{1/p}` over the probed interval
/// (fiber volume constant omitted).
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub tau: f64,
    pub p: Option<f64>,
    pub weighted_sup: [f64; 2],
    pub fitted_exponent: Option<f64>,
    pub integral_norm: Option<f64>,
    pub probe_range: (f64, f64),
}

pub fn decay_report(
    u: &RadialProfile,
    tau: f64,
    p: Option<f64>,
    probes: &[f64],
) -> Result<DecayReport> {
    if probes.len() < 2 {
        return Err(Error::InvalidParameter("decay report needs at least 2 probes".into()));
    }
    if probes.windows(2).any(|w| !(w[1] > w[0])) || probes[0] <= 0.0 {
        return Err(Error::InvalidParameter(
            "decay probes must be positive and strictly increasing".into(),
        ));
    }
    if let Some(p) = p {
        if !(p >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "integral exponent must satisfy p >= 1, got {p}"
            )));
        }
    }
    let evals: Vec<(f64, f64, f64)> = probes
        .iter()
        .map(|&r| u.eval(r))
        .collect::<Result<_>>()?;

    let mut weighted_sup = [0.0f64; 2];
    for (&r, &(v, d1, _)) in probes.iter().zip(&evals) {
        weighted_sup[0] = weighted_sup[0].max(r.powf(tau) * v.abs());
        weighted_sup[1] = weighted_sup[1].max(r.powf(tau + 1.0) * d1.abs());
    }

    // Log-log least squares on non-vanishing samples.
    let pts: Vec<(f64, f64)> = probes
        .iter()
        .zip(&evals)
        .filter(|(_, (v, _, _))| v.abs() > 1e-300)
        .map(|(&r, &(v, _, _))| (r.ln(), v.abs().ln()))
        .collect();
    let fitted_exponent = if pts.len() >= 2 {
        let m = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let denom = m * sxx - sx * sx;
        if denom.abs() < 1e-300 {
            None
        } else {
            Some(-(m * sxy - sx * sy) / denom)
        }
    } else {
        None
    };

    let integral_norm = p.map(|p| {
        let mut total = 0.0;
        for j in 0..3usize {
            let integrand: Vec<f64> = probes
                .iter()
                .zip(&evals)
                .map(|(&r, &(v, d1, d2))| {
                    let dj = [v, d1, d2][j].abs();
                    (r.powf(tau + j as f64) * dj).powf(p) / r
                })
                .collect();
            let mut int = 0.0;
            for i in 0..probes.len() - 1 {
                int += 0.5 * (integrand[i] + integrand[i + 1]) * (probes[i + 1] - probes[i]);
            }
            total += int.powf(1.0 / p);
        }
        total
    });

    Ok(DecayReport {
        tau,
        p,
        weighted_sup,
        fitted_exponent,
        integral_norm,
        probe_range: (probes[0], *probes.last().unwrap()),
    })
}

/// Sampled smallness report for a compactly supported conformal perturbation
/// of a conformally flat background: the perturbation's C^2 size, a sampled
/// estimate of how strongly eigenvalues respond to it, and whether the
/// perturbed eigenvalues stay interior to a chosen larger cone. Reported
/// evidence, not a proof.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationReport {
    pub c2_norm: f64,
    /// Max sampled eigenvalue shift per unit of C^2 norm.
    pub lipschitz_estimate: f64,
    /// `lipschitz_estimate * c2_norm`, a conservative shift bound.
    pub margin_shift_bound: f64,
    /// Smallest unperturbed margin in the larger cone over the samples.
    pub margin_before: f64,
    /// Smallest perturbed margin in the larger cone over the samples.
    pub margin_after: f64,
    pub interior_preserved: bool,
}

pub fn perturbation_report(
    base: &RadialMetric,
    bump: &RadialProfile,
    enlarged: &ConeSpec,
    probes: &[f64],
) -> Result<PerturbationReport> {
    if !matches!(base, RadialMetric::ConformallyFlat { .. }) {
        return Err(Error::InvalidParameter(
            "perturbation report is defined for conformally flat backgrounds".into(),
        ));
    }
    if probes.is_empty() {
        return Err(Error::InvalidParameter("perturbation report needs probes".into()));
    }
    let mut c2 = 0.0f64;
    for &r in probes {
        let (v, d1, d2) = bump.eval(r)?;
        c2 = c2.max(v.abs() + d1.abs() + d2.abs());
    }
    let mut lipschitz: f64 = 0.0;
    let mut margin_before = f64::INFINITY;
    let mut margin_after = f64::INFINITY;
    for &r in probes {
        let lam0 = base.schouten(r)?.eigenvalues();
        margin_before = margin_before.min(enlarged.margin(&lam0)?);
        for s in [0.5, 1.0] {
            let scaled = RadialProfile::scaled(s, bump.clone())?;
            let lam = base.conformal_change(&scaled, r)?.eigenvalues();
            if c2 > 0.0 {
                let shift = lam
                    .iter()
                    .zip(&lam0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                lipschitz = lipschitz.max(shift / (s * c2));
            }
            if s == 1.0 {
                margin_after = margin_after.min(enlarged.margin(&lam)?);
            }
        }
    }
    Ok(PerturbationReport {
        c2_norm: c2,
        lipschitz_estimate: lipschitz,
        margin_shift_bound: lipschitz * c2,
        margin_before,
        margin_after,
        interior_preserved: margin_after > crate::cones::BOUNDARY_TOL,
    })
}
