//! Radial profile catalog: the closed-form warping and conformal factors the
//! rest of the library is exercised on, a natural cubic spline for sampled
//! data, and structural sum/scale combinators. Every profile knows its own
//! first and second derivative, so curvature formulas downstream never
//! differentiate numerically unless the data itself is sampled.

use crate::discretize::{solve_banded, BandedSystem};
use crate::error::{Error, Result};
use std::fmt;

/// Closed-form catalog entry.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    /// Constant value.
    Constant { value: f64 },
    /// `r` itself, the flat warping over a unit-sphere fiber.
    Identity,
    /// `sinh r`.
    Sinh,
    /// `cosh r`.
    Cosh,
    /// `e^r`.
    Exp,
    /// `e^{alpha sin r}`, a bounded oscillating end.
    ExpAlphaSin { alpha: f64 },
    /// `(2/(mu-1)) ln(1 + (m/2) r^{-(mu-1)})`, the conformal log-factor of a
    /// Schwarzschild-type metric with decay rate `mu - 1`.
    SchwarzschildLog { mu: f64, m: f64 },
    /// `ln(2R/(R^2 - r^2))` on `r < R`: Poincare ball of curvature -1.
    HyperbolicCap { radius: f64 },
    /// `ln(2R/(R^2 + r^2))`: round sphere of curvature +1.
    SphericalCap { radius: f64 },
    /// `-ln r`, the cylinder factor.
    NegLog,
    /// Compactly supported smooth bump
    /// `A exp(1 - 1/(1 - t^2))` with `t = (r - center)/radius`.
    Bump { center: f64, radius: f64, amplitude: f64 },
}

impl ProfileKind {
    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            ProfileKind::Constant { value } if !value.is_finite() => {
                bad(format!("constant profile value must be finite, got {value}"))
            }
            ProfileKind::ExpAlphaSin { alpha } if !alpha.is_finite() => {
                bad(format!("oscillation amplitude must be finite, got {alpha}"))
            }
            ProfileKind::SchwarzschildLog { mu, m } if !(mu > 1.0) || !m.is_finite() => bad(
                format!("schwarzschild-log needs mu > 1 and finite m, got mu = {mu}, m = {m}"),
            ),
            ProfileKind::HyperbolicCap { radius } | ProfileKind::SphericalCap { radius }
                if !(radius > 0.0) =>
            {
                bad(format!("cap radius must be positive, got {radius}"))
            }
            ProfileKind::Bump { center, radius, amplitude }
                if !(radius > 0.0) || center < 0.0 || !amplitude.is_finite() =>
            {
                bad(format!(
                    "bump needs radius > 0, center >= 0, finite amplitude; \
                     got center = {center}, radius = {radius}, amplitude = {amplitude}"
                ))
            }
            _ => Ok(()),
        }
    }

    /// Left edge of the open domain of definition.
    fn domain_start(&self) -> f64 {
        match *self {
            ProfileKind::NegLog => 0.0,
            ProfileKind::SchwarzschildLog { mu, m } if m < 0.0 => {
                (-m / 2.0).powf(1.0 / (mu - 1.0))
            }
            _ => f64::NEG_INFINITY,
        }
    }

    fn domain_end(&self) -> f64 {
        match *self {
            ProfileKind::HyperbolicCap { radius } => radius,
            _ => f64::INFINITY,
        }
    }

    /// Value with first and second derivative.
    fn eval(&self, r: f64) -> (f64, f64, f64) {
        match *self {
            ProfileKind::Constant { value } => (value, 0.0, 0.0),
            ProfileKind::Identity => (r, 1.0, 0.0),
            ProfileKind::Sinh => (r.sinh(), r.cosh(), r.sinh()),
            ProfileKind::Cosh => (r.cosh(), r.sinh(), r.cosh()),
            ProfileKind::Exp => {
                let e = r.exp();
                (e, e, e)
            }
            ProfileKind::ExpAlphaSin { alpha } => {
                let v = (alpha * r.sin()).exp();
                let c = alpha * r.cos();
                (v, c * v, v * (c * c - alpha * r.sin()))
            }
            ProfileKind::SchwarzschildLog { mu, m } => {
                let p = mu - 1.0;
                let q = 1.0 + 0.5 * m * r.powf(-p);
                let v = (2.0 / p) * q.ln();
                let d1 = -m * r.powf(-p - 1.0) / q;
                let d2 = m * (p + 1.0) * r.powf(-p - 2.0) / q
                    - 0.5 * p * m * m * r.powf(-2.0 * p - 2.0) / (q * q);
                (v, d1, d2)
            }
            ProfileKind::HyperbolicCap { radius } => {
                let den = radius * radius - r * r;
                let v = (2.0 * radius / den).ln();
                (v, 2.0 * r / den, (2.0 * radius * radius + 2.0 * r * r) / (den * den))
            }
            ProfileKind::SphericalCap { radius } => {
                let den = radius * radius + r * r;
                let v = (2.0 * radius / den).ln();
                (v, -2.0 * r / den, -2.0 * (radius * radius - r * r) / (den * den))
            }
            ProfileKind::NegLog => (-r.ln(), -1.0 / r, 1.0 / (r * r)),
            ProfileKind::Bump { center, radius, amplitude } => {
                let t = (r - center) / radius;
                if t.abs() >= 1.0 {
                    return (0.0, 0.0, 0.0);
                }
                let den = 1.0 - t * t;
                let v = amplitude * (1.0 - 1.0 / den).exp();
                let g = -2.0 * t / (den * den);
                let gp = -2.0 / (den * den) - 8.0 * t * t / (den * den * den);
                (v, v * g / radius, v * (g * g + gp) / (radius * radius))
            }
        }
    }

    /// Whether the profile extends evenly through `r = 0`, which is what the
    /// symmetry-axis stencils assume.
    fn symmetric_at_zero(&self) -> bool {
        match *self {
            ProfileKind::Constant { .. } => true,
            ProfileKind::Cosh => true,
            ProfileKind::HyperbolicCap { .. } | ProfileKind::SphericalCap { .. } => true,
            ProfileKind::Bump { center, radius, .. } => center == 0.0 || center - radius >= 0.0,
            _ => false,
        }
    }
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileKind::Constant { value } => write!(f, "constant({value})"),
            ProfileKind::Identity => write!(f, "identity"),
            ProfileKind::Sinh => write!(f, "sinh"),
            ProfileKind::Cosh => write!(f, "cosh"),
            ProfileKind::Exp => write!(f, "exp"),
            ProfileKind::ExpAlphaSin { alpha } => write!(f, "exp-alpha-sin(alpha={alpha})"),
            ProfileKind::SchwarzschildLog { mu, m } => {
                write!(f, "schwarzschild-log(mu={mu}, m={m})")
            }
            ProfileKind::HyperbolicCap { radius } => write!(f, "hyperbolic-cap(radius={radius})"),
            ProfileKind::SphericalCap { radius } => write!(f, "spherical-cap(radius={radius})"),
            ProfileKind::NegLog => write!(f, "neg-log"),
            ProfileKind::Bump { center, radius, amplitude } => {
                write!(f, "bump(center={center}, radius={radius}, amplitude={amplitude})")
            }
        }
    }
}

/// Natural cubic spline through sampled values. Evaluation outside the
/// sampled interval is an error; the curvature formulas have no business
/// extrapolating data.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    radii: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl SampledProfile {
    pub fn new(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() < 3 {
            return Err(Error::InvalidParameter(format!(
                "sampled profile needs at least 3 points, got {}",
                radii.len()
            )));
        }
        if radii.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: radii.len(),
                got: values.len(),
            });
        }
        if radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "sampled profile radii must be strictly increasing".into(),
            ));
        }
        if radii.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "sampled profile data must be finite".into(),
            ));
        }
        let n = radii.len();
        // Natural end conditions: zero second derivative at both ends.
        let mut sys = BandedSystem::zeroed(n);
        sys.diag[0] = 1.0;
        sys.diag[n - 1] = 1.0;
        for i in 1..n - 1 {
            let h0 = radii[i] - radii[i - 1];
            let h1 = radii[i + 1] - radii[i];
            sys.sub[i - 1] = h0;
            sys.diag[i] = 2.0 * (h0 + h1);
            sys.sup[i] = h1;
            sys.rhs[i] = 6.0
                * ((values[i + 1] - values[i]) / h1 - (values[i] - values[i - 1]) / h0);
        }
        let second = solve_banded(&sys)?;
        Ok(SampledProfile { radii, values, second })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn segment(&self, r: f64) -> Result<usize> {
        let n = self.radii.len();
        let slack = 1e-9 * (self.radii[n - 1] - self.radii[0]);
        if !r.is_finite() || r < self.radii[0] - slack || r > self.radii[n - 1] + slack {
            return Err(Error::InvalidParameter(format!(
                "sampled profile evaluated at r = {r} outside [{}, {}]",
                self.radii[0],
                self.radii[n - 1]
            )));
        }
        let i = match self
            .radii
            .binary_search_by(|x| x.partial_cmp(&r).unwrap())
        {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        Ok(i.min(n - 2))
    }

    fn eval(&self, r: f64) -> Result<(f64, f64, f64)> {
        let i = self.segment(r)?;
        let h = self.radii[i + 1] - self.radii[i];
        let t = r - self.radii[i];
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let b = (self.values[i + 1] - self.values[i]) / h - h * (2.0 * m0 + m1) / 6.0;
        let d = (m1 - m0) / (6.0 * h);
        let v = self.values[i] + b * t + 0.5 * m0 * t * t + d * t * t * t;
        let d1 = b + m0 * t + 3.0 * d * t * t;
        let d2 = m0 + 6.0 * d * t;
        Ok((v, d1, d2))
    }
}

/// A radial profile: closed form, sampled, or a structural combination.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialProfile {
    ClosedForm(ProfileKind),
    Sampled(SampledProfile),
    /// Pointwise sum of profiles.
    Sum(Vec<RadialProfile>),
    /// Pointwise multiple of a profile.
    Scaled { factor: f64, inner: Box<RadialProfile> },
}

impl RadialProfile {
    pub fn closed(kind: ProfileKind) -> Result<Self> {
        kind.validate()?;
        Ok(RadialProfile::ClosedForm(kind))
    }

    pub fn constant(value: f64) -> Self {
        RadialProfile::ClosedForm(ProfileKind::Constant { value })
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn sum(terms: Vec<RadialProfile>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter("empty profile sum".into()));
        }
        Ok(RadialProfile::Sum(terms))
    }

    pub fn scaled(factor: f64, inner: RadialProfile) -> Result<Self> {
        if !factor.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "profile scale factor must be finite, got {factor}"
            )));
        }
        Ok(RadialProfile::Scaled { factor, inner: Box::new(inner) })
    }

    /// Left edge of the domain. Closed-form singular edges are open
    /// (evaluation at them fails); sampled edges are closed.
    pub fn domain_start(&self) -> f64 {
        match self {
            RadialProfile::ClosedForm(k) => k.domain_start(),
            RadialProfile::Sampled(s) => s.radii()[0],
            RadialProfile::Sum(terms) => terms
                .iter()
                .map(|t| t.domain_start())
                .fold(f64::NEG_INFINITY, f64::max),
            RadialProfile::Scaled { inner, .. } => inner.domain_start(),
        }
    }

    /// Right edge of the domain, `inf` when unbounded.
    pub fn domain_end(&self) -> f64 {
        match self {
            RadialProfile::ClosedForm(k) => k.domain_end(),
            RadialProfile::Sampled(s) => *s.radii().last().unwrap(),
            RadialProfile::Sum(terms) => terms
                .iter()
                .map(|t| t.domain_end())
                .fold(f64::INFINITY, f64::min),
            RadialProfile::Scaled { inner, .. } => inner.domain_end(),
        }
    }

    pub fn symmetric_at_zero(&self) -> bool {
        match self {
            RadialProfile::ClosedForm(k) => k.symmetric_at_zero(),
            RadialProfile::Sampled(_) => false,
            RadialProfile::Sum(terms) => terms.iter().all(|t| t.symmetric_at_zero()),
            RadialProfile::Scaled { inner, .. } => inner.symmetric_at_zero(),
        }
    }

    /// Value with first and second derivative at `r`. Closed forms guard
    /// their open singular edges here; sampled profiles carry their own
    /// interval check with slack proportional to the sampled span.
    pub fn eval(&self, r: f64) -> Result<(f64, f64, f64)> {
        if !r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "profile {self} evaluated at non-finite r = {r}"
            )));
        }
        match self {
            RadialProfile::ClosedForm(k) => {
                if r <= k.domain_start() || r >= k.domain_end() {
                    return Err(Error::InvalidParameter(format!(
                        "profile {self} evaluated at r = {r} outside its open domain"
                    )));
                }
                Ok(k.eval(r))
            }
            RadialProfile::Sampled(s) => s.eval(r),
            RadialProfile::Sum(terms) => {
                let mut acc = (0.0, 0.0, 0.0);
                for t in terms {
                    let (v, d1, d2) = t.eval(r)?;
                    acc.0 += v;
                    acc.1 += d1;
                    acc.2 += d2;
                }
                Ok(acc)
            }
            RadialProfile::Scaled { factor, inner } => {
                let (v, d1, d2) = inner.eval(r)?;
                Ok((factor * v, factor * d1, factor * d2))
            }
        }
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        Ok(self.eval(r)?.0)
    }

    pub fn d1(&self, r: f64) -> Result<f64> {
        Ok(self.eval(r)?.1)
    }

    pub fn d2(&self, r: f64) -> Result<f64> {
        Ok(self.eval(r)?.2)
    }

    /// Values on a node list, failing on the first domain violation.
    pub fn values_on(&self, radii: &[f64]) -> Result<Vec<f64>> {
        radii.iter().map(|&r| self.value(r)).collect()
    }
}

/// Display is used in report labels, so it stays short and structural.
impl fmt::Display for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialProfile::ClosedForm(k) => write!(f, "{k}"),
            RadialProfile::Sampled(s) => write!(f, "sampled({} points)", s.radii().len()),
            RadialProfile::Sum(terms) => {
                write!(f, "sum(")?;
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            RadialProfile::Scaled { factor, inner } => write!(f, "{factor} * {inner}"),
        }
    }
}
