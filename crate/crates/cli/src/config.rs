//! Experiment configuration: a JSON document whose sections mirror the
//! library's constructors. Parsing is strict (unknown fields are errors),
//! values round-trip through serialize/parse unchanged, and every numeric
//! field is validated against the owning constructor before any solve runs.

use serde::{Deserialize, Serialize};
use sigma_yamabe::cones::{ConeSpec, SymmetricFunctional};
use sigma_yamabe::discretize::{Grid, LeftEnd};
use sigma_yamabe::exhaustion::{ExhaustionPlan, PositiveComparison, Topology};
use sigma_yamabe::geometry::{ProfileKind, RadialMetric, RadialProfile, SchoutenSign};
use sigma_yamabe::solver::{DirichletProblem, NewtonOptions};

use crate::CliError;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub cone: ConeSection,
    #[serde(default)]
    pub functional: FunctionalSection,
    pub metric: MetricSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exhaustion: Option<ExhaustionSection>,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSection {
    pub family: ConeFamilySpec,
    pub n: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeFamilySpec {
    #[serde(rename = "gamma-k")]
    GammaK,
    #[serde(rename = "tau")]
    Tau,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalSection {
    #[serde(default = "default_true")]
    pub normalize: bool,
}

fn default_true() -> bool {
    true
}

impl Default for FunctionalSection {
    fn default() -> Self {
        FunctionalSection { normalize: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum MetricSection {
    #[serde(rename = "euclidean")]
    Euclidean { n: usize },
    #[serde(rename = "conformally-flat")]
    ConformallyFlat { n: usize, factor: ProfileSpec },
    #[serde(rename = "warped")]
    Warped {
        n: usize,
        profile: ProfileSpec,
        fiber_curvature: f64,
    },
    #[serde(rename = "schwarzschild-type")]
    SchwarzschildType { n: usize, mu: f64, m: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum ProfileSpec {
    #[serde(rename = "constant")]
    Constant { value: f64 },
    #[serde(rename = "zero")]
    Zero,
    #[serde(rename = "sinh")]
    Sinh,
    #[serde(rename = "cosh")]
    Cosh,
    #[serde(rename = "exp")]
    Exp,
    #[serde(rename = "exp-alpha-sin")]
    ExpAlphaSin { alpha: f64 },
    #[serde(rename = "schwarzschild-log")]
    SchwarzschildLog { mu: f64, m: f64 },
    #[serde(rename = "hyperbolic-cap")]
    HyperbolicCap { radius: f64 },
    #[serde(rename = "spherical-cap")]
    SphericalCap { radius: f64 },
    #[serde(rename = "neg-log")]
    NegLog,
    #[serde(rename = "identity")]
    Identity,
    #[serde(rename = "bump")]
    Bump {
        center: f64,
        radius: f64,
        amplitude: f64,
    },
    #[serde(rename = "sum")]
    Sum { terms: Vec<ProfileSpec> },
    #[serde(rename = "scaled")]
    Scaled { factor: f64, inner: Box<ProfileSpec> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignSpec {
    #[serde(rename = "plus-a")]
    PlusA,
    #[serde(rename = "minus-a")]
    MinusA,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub sign: SignSpec,
    pub psi: ProfileSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundarySpec>,
    /// Start profile for the Newton iteration; affine between the boundary
    /// data when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guess: Option<ProfileSpec>,
    /// Known solution to report the sup error against.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ProfileSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<f64>,
    pub right: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunSpec {
    #[serde(rename = "negative")]
    Negative,
    #[serde(rename = "negative-degenerate")]
    NegativeDegenerate,
    #[serde(rename = "positive")]
    Positive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum TopologySpec {
    #[serde(rename = "ball")]
    Ball,
    #[serde(rename = "capped-end")]
    CappedEnd,
    #[serde(rename = "annulus")]
    Annulus { inner: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ComparisonSpec {
    #[default]
    #[serde(rename = "none")]
    None,
    #[serde(rename = "linear-solve")]
    LinearSolve,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExhaustionSection {
    pub run: RunSpec,
    pub topology: TopologySpec,
    /// Strictly increasing outer radii of the staged domains.
    pub radii: Vec<f64>,
    pub first_nodes: usize,
    /// Core-trace radius; midpoint of the first domain when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core_radius: Option<f64>,
    /// Barrier exemption radius; defaults to the core radius.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exempt_radius: Option<f64>,
    /// Conformal ceiling for positive runs; rejected elsewhere.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_level: Option<f64>,
    #[serde(default)]
    pub comparison: ComparisonSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Run directory name under the output root; the config file stem when
    /// absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<String>,
    #[serde(default = "default_formats")]
    pub formats: Vec<String>,
}

fn default_formats() -> Vec<String> {
    vec!["csv".into(), "json".into()]
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            directory: None,
            formats: default_formats(),
        }
    }
}

impl ProfileSpec {
    pub fn build(&self) -> Result<RadialProfile, CliError> {
        let closed = |kind: ProfileKind| {
            RadialProfile::closed(kind).map_err(|e| invalid(format!("profile: {e}")))
        };
        match self {
            ProfileSpec::Constant { value } => Ok(RadialProfile::constant(*value)),
            ProfileSpec::Zero => Ok(RadialProfile::zero()),
            ProfileSpec::Sinh => closed(ProfileKind::Sinh),
            ProfileSpec::Cosh => closed(ProfileKind::Cosh),
            ProfileSpec::Exp => closed(ProfileKind::Exp),
            ProfileSpec::ExpAlphaSin { alpha } => closed(ProfileKind::ExpAlphaSin { alpha: *alpha }),
            ProfileSpec::SchwarzschildLog { mu, m } => {
                closed(ProfileKind::SchwarzschildLog { mu: *mu, m: *m })
            }
            ProfileSpec::HyperbolicCap { radius } => {
                closed(ProfileKind::HyperbolicCap { radius: *radius })
            }
            ProfileSpec::SphericalCap { radius } => {
                closed(ProfileKind::SphericalCap { radius: *radius })
            }
            ProfileSpec::NegLog => closed(ProfileKind::NegLog),
            ProfileSpec::Identity => closed(ProfileKind::Identity),
            ProfileSpec::Bump {
                center,
                radius,
                amplitude,
            } => closed(ProfileKind::Bump {
                center: *center,
                radius: *radius,
                amplitude: *amplitude,
            }),
            ProfileSpec::Sum { terms } => {
                let built: Result<Vec<_>, _> = terms.iter().map(|t| t.build()).collect();
                RadialProfile::sum(built?).map_err(|e| invalid(format!("profile: {e}")))
            }
            ProfileSpec::Scaled { factor, inner } => {
                RadialProfile::scaled(*factor, inner.build()?)
                    .map_err(|e| invalid(format!("profile: {e}")))
            }
        }
    }
}

impl SignSpec {
    pub fn build(&self) -> SchoutenSign {
        match self {
            SignSpec::PlusA => SchoutenSign::PlusA,
            SignSpec::MinusA => SchoutenSign::MinusA,
        }
    }
}

impl TopologySpec {
    pub fn build(&self) -> Topology {
        match *self {
            TopologySpec::Ball => Topology::Ball,
            TopologySpec::CappedEnd => Topology::CappedEnd,
            TopologySpec::Annulus { inner } => Topology::Annulus { inner },
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| invalid(format!("config parse: {e}")))
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        serde_json::to_string_pretty(self)
            .map_err(|e| invalid(format!("config serialize: {e}")))
    }

    pub fn cone_spec(&self) -> Result<ConeSpec, CliError> {
        let base = ConeSpec::elementary(self.cone.n, self.cone.k)
            .map_err(|e| invalid(format!("cone: {e}")))?;
        match (self.cone.family, self.cone.tau) {
            (ConeFamilySpec::GammaK, None) => Ok(base),
            (ConeFamilySpec::GammaK, Some(_)) => {
                Err(invalid("cone: tau given without the tau family"))
            }
            (ConeFamilySpec::Tau, Some(tau)) => {
                ConeSpec::tau_modified(base, tau).map_err(|e| invalid(format!("cone: {e}")))
            }
            (ConeFamilySpec::Tau, None) => Err(invalid("cone: the tau family needs a tau value")),
        }
    }

    pub fn functional(&self) -> Result<SymmetricFunctional, CliError> {
        let cone = self.cone_spec()?;
        Ok(if self.functional.normalize {
            SymmetricFunctional::normalized(cone)
        } else {
            SymmetricFunctional::with_scale(cone, 1.0)
        })
    }

    pub fn metric(&self) -> Result<RadialMetric, CliError> {
        let build = match &self.metric {
            MetricSection::Euclidean { n } => RadialMetric::euclidean(*n),
            MetricSection::ConformallyFlat { n, factor } => {
                RadialMetric::conformally_flat(*n, factor.build()?)
            }
            MetricSection::Warped {
                n,
                profile,
                fiber_curvature,
            } => RadialMetric::warped(*n, profile.build()?, *fiber_curvature),
            MetricSection::SchwarzschildType { n, mu, m } => {
                RadialMetric::schwarzschild_type(*n, *mu, *m)
            }
        };
        let metric = build.map_err(|e| invalid(format!("metric: {e}")))?;
        if metric.dimension() != self.cone.n {
            return Err(invalid(format!(
                "metric dimension {} disagrees with cone dimension {}",
                metric.dimension(),
                self.cone.n
            )));
        }
        Ok(metric)
    }

    fn problem_section(&self) -> Result<&ProblemSection, CliError> {
        self.problem
            .as_ref()
            .ok_or_else(|| invalid("this command needs a problem section"))
    }

    /// Builds the Dirichlet problem and the Newton options of a solve run.
    pub fn dirichlet_problem(&self) -> Result<(DirichletProblem, NewtonOptions), CliError> {
        let section = self.problem_section()?;
        let [r_min, r_max] = section
            .domain
            .ok_or_else(|| invalid("problem: a solve needs a domain"))?;
        let nodes = section
            .grid_nodes
            .ok_or_else(|| invalid("problem: a solve needs grid_nodes"))?;
        let boundary = section
            .boundary
            .as_ref()
            .ok_or_else(|| invalid("problem: a solve needs boundary data"))?;
        let left_end = if r_min == 0.0 {
            LeftEnd::Symmetry
        } else {
            LeftEnd::Dirichlet
        };
        let grid = Grid::new(r_min, r_max, nodes, left_end)
            .map_err(|e| invalid(format!("problem: {e}")))?;
        let problem = DirichletProblem::new(
            self.metric()?,
            self.functional()?,
            section.sign.build(),
            &section.psi.build()?,
            grid,
            boundary.left,
            boundary.right,
        )
        .map_err(|e| invalid(format!("problem: {e}")))?;
        let mut opts = NewtonOptions::default();
        if let Some(tol) = section.tolerance {
            if !(tol > 0.0) || !tol.is_finite() {
                return Err(invalid(format!(
                    "problem: tolerance must be positive and finite, got {tol}"
                )));
            }
            opts.tol = tol;
        }
        if let Some(iters) = section.max_iterations {
            if iters == 0 {
                return Err(invalid("problem: max_iterations must be positive"));
            }
            opts.max_iter = iters;
        }
        Ok((problem, opts))
    }

    fn exhaustion_section(&self) -> Result<&ExhaustionSection, CliError> {
        self.exhaustion
            .as_ref()
            .ok_or_else(|| invalid("this command needs an exhaustion section"))
    }

    /// Builds the staged-run plan plus its kind-specific parameters.
    pub fn exhaustion_plan(
        &self,
    ) -> Result<(ExhaustionPlan, RunSpec, f64, PositiveComparison), CliError> {
        let section = self.exhaustion_section()?;
        let problem = self.problem_section()?;
        let topology = section.topology.build();
        let first = *section
            .radii
            .first()
            .ok_or_else(|| invalid("exhaustion: no stage radii"))?;
        let left = match topology {
            Topology::Annulus { inner } => inner,
            _ => 0.0,
        };
        let core = section.core_radius.unwrap_or(0.5 * (left + first));
        let exempt = section.exempt_radius.unwrap_or(core);
        let plan = ExhaustionPlan {
            background: self.metric()?,
            functional: self.functional()?,
            sign: problem.sign.build(),
            psi: problem.psi.build()?,
            topology,
            radii: section.radii.clone(),
            core_radius: core,
            exempt_radius: exempt,
            first_nodes: section.first_nodes,
        };
        plan.validate().map_err(|e| invalid(format!("exhaustion: {e}")))?;
        let boundary_level = match (section.run, section.boundary_level) {
            (RunSpec::Positive, Some(level)) => level,
            (RunSpec::Positive, None) => {
                return Err(invalid("exhaustion: positive runs need a boundary_level"))
            }
            (_, Some(_)) => {
                return Err(invalid(
                    "exhaustion: boundary_level applies to positive runs only",
                ))
            }
            (_, None) => 0.0,
        };
        let comparison = match section.comparison {
            ComparisonSpec::None => PositiveComparison::None,
            ComparisonSpec::LinearSolve => PositiveComparison::LinearSolve,
        };
        Ok((plan, section.run, boundary_level, comparison))
    }

    /// Output formats after validation; only `csv` and `json` exist.
    pub fn formats(&self) -> Result<Vec<String>, CliError> {
        for f in &self.output.formats {
            if f != "csv" && f != "json" {
                return Err(invalid(format!("output: unknown format {f:?}")));
            }
        }
        Ok(self.output.formats.clone())
    }
}
