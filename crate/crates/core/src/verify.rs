//! Bundled verification checks behind the command-line `verify` tool: a
//! named pass/fail list over the library's closed-form oracles plus small
//! reproductions of the staged constructions. Every check is deterministic;
//! sampling checks carry a fixed seed.

use crate::cones::{sigma_k, ConeSpec, SymmetricFunctional};
use crate::discretize::{Grid, LeftEnd};
use crate::error::{Error, Result};
use crate::exhaustion::{
    run_negative, run_negative_degenerate, run_positive, ExhaustionPlan, PositiveComparison,
    Topology,
};
use crate::geometry::{
    check_end_conditions, ProfileKind, RadialMetric, RadialProfile, SchoutenSign,
};
use crate::solver::{newton_solve, DirichletProblem, NewtonOptions};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        CheckResult { name, passed, detail }
    }
}

/// Selectors accepted by [`run_suite`]; `paper` runs everything.
pub const SUITES: &[&str] = &["paper", "cones", "geometry", "solver", "exhaustion"];

/// Seed of [`run_suite`]'s randomized sampling check, exposed so reports can
/// cite it next to the results.
pub const SUITE_SEED: u64 = 77;

/// Sample count per cone in [`run_suite`]'s randomized sampling check.
pub const SUITE_SAMPLES: usize = 10_000;

/// Critical-ratio table: the closed form `(n - k) / k` against the bisection
/// variant, over every supported elementary cone.
pub fn check_mu_table() -> CheckResult {
    let mut worst_gap = 0.0f64;
    let mut cones = 0;
    let mut exact = true;
    for n in 3..=10 {
        for k in 1..=n {
            let cone = match ConeSpec::elementary(n, k) {
                Ok(c) => c,
                Err(e) => {
                    return CheckResult::new(
                        "mu-closed-form",
                        false,
                        format!("cone ({n}, {k}) rejected: {e}"),
                    )
                }
            };
            cones += 1;
            let want = (n - k) as f64 / k as f64;
            exact &= cone.mu_plus() == want;
            worst_gap = worst_gap.max((cone.mu_plus_bisection() - want).abs());
        }
    }
    CheckResult::new(
        "mu-closed-form",
        exact && worst_gap <= 1e-10,
        format!("{cones} cones, closed form exact: {exact}, worst bisection gap {worst_gap:.3e}"),
    )
}

/// Arithmetic-mean bound on seeded random admissible samples: zero
/// violations expected across the quadratic-range cones.
pub fn check_mean_bound(seed: u64, samples_per_cone: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0usize;
    let mut total = 0usize;
    for &(n, k) in &[(4, 1), (4, 2), (5, 1), (5, 2), (6, 1), (6, 2)] {
        let functional = SymmetricFunctional::normalized(
            ConeSpec::elementary(n, k).expect("dimensions are in range"),
        );
        let mut accepted = 0usize;
        let mut attempts = 0usize;
        while accepted < samples_per_cone {
            attempts += 1;
            if attempts > 500 * samples_per_cone {
                return CheckResult::new(
                    "mean-bound-sampling",
                    false,
                    format!("cone ({n}, {k}): rejection sampling starved at {accepted} samples"),
                );
            }
            let lambda: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..3.0)).collect();
            match functional.cone().margin(&lambda) {
                Ok(m) if m > 1e-6 => {}
                _ => continue,
            }
            accepted += 1;
            total += 1;
            match functional.check_mean_bound(&lambda) {
                Ok(true) => {}
                _ => violations += 1,
            }
        }
    }
    CheckResult::new(
        "mean-bound-sampling",
        violations == 0,
        format!("{total} admissible samples, {violations} violations, seed {seed}"),
    )
}

fn model_end_cases() -> Vec<(RadialMetric, &'static str)> {
    let build = |kind: ProfileKind, fiber: f64| {
        RadialMetric::warped(5, RadialProfile::closed(kind).unwrap(), fiber).unwrap()
    };
    vec![
        (build(ProfileKind::Sinh, 1.0), "sinh over unit sphere"),
        (build(ProfileKind::Cosh, -1.0), "cosh over hyperbolic fiber"),
        (build(ProfileKind::Exp, 0.0), "exp over flat fiber"),
    ]
}

/// Model-end constants on a supplied case list; the public check runs it on
/// the three hyperbolic-space charts.
pub fn model_end_constants_on(cases: &[(RadialMetric, &'static str)]) -> CheckResult {
    let mut worst = 0.0f64;
    let mut culprit = "";
    for (metric, label) in cases {
        for i in 0..40 {
            let r = 0.25 + 9.75 * i as f64 / 39.0;
            let s = match metric.schouten(r) {
                Ok(s) => s,
                Err(e) => {
                    return CheckResult::new(
                        "model-end-constants",
                        false,
                        format!("{label} failed to evaluate at r = {r}: {e}"),
                    )
                }
            };
            let dev = (s.chi1 - 0.5).abs().max(s.chi2.abs());
            if dev > worst {
                worst = dev;
                culprit = label;
            }
        }
    }
    CheckResult::new(
        "model-end-constants",
        worst <= 1e-12,
        format!("worst deviation from (1/2, 0): {worst:.3e} ({culprit})"),
    )
}

pub fn check_model_end_constants() -> CheckResult {
    model_end_constants_on(&model_end_cases())
}

/// Boundary certificate for critically decaying factors: eigenvalues ride
/// the cone boundary and the defect ratio is pinned by the decay rate.
pub fn check_critical_decay() -> CheckResult {
    let mut worst_sigma = 0.0f64;
    let mut worst_ratio = 0.0f64;
    let mut metrics = 0;
    for &(n, k) in &[(4usize, 1usize), (5, 1), (5, 2), (6, 1), (6, 2)] {
        let mu = (n - k) as f64 / k as f64;
        for m in [0.5, 1.0, 2.0] {
            let metric = RadialMetric::schwarzschild_type(n, mu, m)
                .expect("mu exceeds 1 for every listed pair");
            metrics += 1;
            for i in 0..200 {
                let r = 0.5 + 19.5 * i as f64 / 199.0;
                let s = metric.schouten(r).expect("radius is inside the domain");
                let lambda = s.eigenvalues_for(SchoutenSign::PlusA);
                let norm = lambda.iter().map(|l| l * l).sum::<f64>().sqrt();
                let sig = sigma_k(&lambda, k).expect("degree is in range");
                worst_sigma = worst_sigma.max(sig.abs() / norm.powi(k as i32));
                worst_ratio = worst_ratio.max((s.chi2 / s.chi1 - (mu + 1.0)).abs());
            }
        }
    }
    CheckResult::new(
        "critical-decay-boundary",
        worst_sigma <= 1e-9 && worst_ratio <= 1e-10,
        format!(
            "{metrics} metrics at 200 radii: worst normalized sigma_k {worst_sigma:.3e}, \
             worst defect-ratio gap {worst_ratio:.3e}"
        ),
    )
}

/// Admissible-end conditions for the bounded oscillating warping.
pub fn check_oscillating_end() -> CheckResult {
    let metric = RadialMetric::warped(
        5,
        RadialProfile::closed(ProfileKind::ExpAlphaSin { alpha: 0.1 }).unwrap(),
        -1.0,
    )
    .unwrap();
    match check_end_conditions(&metric, 1.5, (0.0, 100.0), 0.1, 0.1, 2001) {
        Ok(report) => CheckResult::new(
            "oscillating-end-conditions",
            report.passed,
            format!(
                "min chi1 {:.6} (threshold {}), min ratio {:.6} (threshold {})",
                report.min_chi1, report.chi1_threshold, report.min_ratio, report.ratio_threshold
            ),
        ),
        Err(e) => CheckResult::new(
            "oscillating-end-conditions",
            false,
            format!("evaluation failed: {e}"),
        ),
    }
}

fn cap_solve_error(nodes: usize, r_max: f64, spherical: bool) -> Result<(f64, f64)> {
    let kind = if spherical {
        ProfileKind::SphericalCap { radius: 1.0 }
    } else {
        ProfileKind::HyperbolicCap { radius: 1.0 }
    };
    let cap = RadialProfile::closed(kind)?;
    let grid = Grid::new(0.0, r_max, nodes, LeftEnd::Symmetry)?;
    let h = grid.spacing();
    let radii = grid.nodes();
    let exact = cap.values_on(&radii)?;
    let bump = RadialProfile::closed(ProfileKind::Bump {
        center: 0.4,
        radius: 0.3,
        amplitude: 1e-3,
    })?;
    let guess: Vec<f64> = exact
        .iter()
        .zip(bump.values_on(&radii)?)
        .map(|(e, b)| e + b)
        .collect();
    let problem = DirichletProblem::new(
        RadialMetric::euclidean(4)?,
        SymmetricFunctional::normalized(ConeSpec::elementary(4, 2)?),
        if spherical {
            SchoutenSign::PlusA
        } else {
            SchoutenSign::MinusA
        },
        &RadialProfile::constant(1.0),
        grid,
        None,
        *exact.last().expect("grids are nonempty"),
    )?;
    let sol = newton_solve(&problem, &guess, &NewtonOptions::default())?;
    if !sol.converged {
        return Err(Error::Precondition(format!(
            "cap solve at {nodes} nodes stopped at residual {:.3e}",
            sol.residual_sup
        )));
    }
    let err = sol
        .values
        .iter()
        .zip(&exact)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok((h, err))
}

/// Manufactured-solution convergence: both cap families recovered at the
/// fine grid with second-order error decay under refinement.
pub fn check_manufactured_convergence() -> CheckResult {
    let mut details = Vec::new();
    let mut passed = true;
    for (spherical, r_max, label) in [(false, 0.8, "hyperbolic"), (true, 0.7, "spherical")] {
        let coarse = cap_solve_error(400, r_max, spherical);
        let fine = cap_solve_error(800, r_max, spherical);
        match (coarse, fine) {
            (Ok((h1, e1)), Ok((h2, e2))) => {
                let order = (e1 / e2).ln() / (h1 / h2).ln();
                let ok = e1 <= 5e-5 && (1.8..=2.2).contains(&order);
                passed &= ok;
                details.push(format!(
                    "{label}: error {e1:.3e} at 400 nodes, order {order:.3}"
                ));
            }
            (a, b) => {
                passed = false;
                let err = a.err().or(b.err()).expect("one side failed");
                details.push(format!("{label}: solve failed: {err}"));
            }
        }
    }
    CheckResult::new("manufactured-convergence", passed, details.join("; "))
}

/// Barrier audits across the three run kinds on small schedules.
pub fn check_barrier_audits() -> CheckResult {
    let functional = |n: usize, k: usize| {
        SymmetricFunctional::normalized(ConeSpec::elementary(n, k).expect("valid cone"))
    };
    let one = RadialProfile::constant(1.0);

    let runs: [(&str, Result<crate::exhaustion::ExhaustionReport>); 3] = [
        (
            "negative cosh end",
            ExhaustionPlan::geometric(
                RadialMetric::warped(
                    5,
                    RadialProfile::closed(ProfileKind::Cosh).unwrap(),
                    -1.0,
                )
                .unwrap(),
                functional(5, 2),
                SchoutenSign::MinusA,
                one.clone(),
                Topology::CappedEnd,
                2.0,
                4,
                41,
            )
            .and_then(|plan| run_negative(&plan)),
        ),
        (
            "degenerate flat balls",
            ExhaustionPlan::geometric(
                RadialMetric::euclidean(4).unwrap(),
                functional(4, 1),
                SchoutenSign::MinusA,
                one.clone(),
                Topology::Ball,
                2.0,
                4,
                41,
            )
            .and_then(|plan| run_negative_degenerate(&plan)),
        ),
        (
            "positive cylinder annulus",
            ExhaustionPlan::geometric(
                RadialMetric::conformally_flat(
                    5,
                    RadialProfile::closed(ProfileKind::NegLog).unwrap(),
                )
                .unwrap(),
                functional(5, 1),
                SchoutenSign::PlusA,
                one,
                Topology::Annulus { inner: 0.5 },
                2.0,
                4,
                61,
            )
            .and_then(|plan| run_positive(&plan, 0.8, PositiveComparison::LinearSolve)),
        ),
    ];

    let mut passed = true;
    let mut details = Vec::new();
    for (label, outcome) in runs {
        match outcome {
            Ok(report) => {
                let failures = report.barriers.iter().filter(|b| !b.report.passed).count();
                passed &= failures == 0 && !report.truncated;
                details.push(format!(
                    "{label}: {} audits, {failures} failures, truncated {}",
                    report.barriers.len(),
                    report.truncated
                ));
            }
            Err(e) => {
                passed = false;
                details.push(format!("{label}: run failed: {e}"));
            }
        }
    }
    CheckResult::new("barrier-audits", passed, details.join("; "))
}

/// Runs one named suite; `paper` concatenates every check.
pub fn run_suite(selector: &str) -> Result<Vec<CheckResult>> {
    let cones = || vec![check_mu_table(), check_mean_bound(SUITE_SEED, SUITE_SAMPLES)];
    let geometry = || {
        vec![
            check_model_end_constants(),
            check_critical_decay(),
            check_oscillating_end(),
        ]
    };
    let solver = || vec![check_manufactured_convergence()];
    let exhaustion = || vec![check_barrier_audits()];
    match selector {
        "paper" => {
            let mut all = cones();
            all.extend(geometry());
            all.extend(solver());
            all.extend(exhaustion());
            Ok(all)
        }
        "cones" => Ok(cones()),
        "geometry" => Ok(geometry()),
        "solver" => Ok(solver()),
        "exhaustion" => Ok(exhaustion()),
        other => Err(Error::InvalidParameter(format!(
            "unknown suite '{other}'; expected one of {SUITES:?}"
        ))),
    }
}
