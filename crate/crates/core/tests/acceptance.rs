//! Acceptance gate for the workspace: nine numbered criteria, each one test,
//! each printing a single pass/fail line. Every tolerance is pinned here next
//! to its assertion. Failures carry the first few violations verbatim.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sigma_yamabe::cones::{
    sigma_k, tau_for_trace_parameter, ConeSpec, SymmetricFunctional,
};
use sigma_yamabe::discretize::{Grid, LeftEnd};
use sigma_yamabe::exhaustion::{
    run_negative, run_negative_degenerate, run_positive, Classification, ExhaustionPlan,
    PositiveComparison, Topology,
};
use sigma_yamabe::geometry::{
    check_end_conditions, ProfileKind, RadialMetric, RadialProfile, SchoutenSign,
};
use sigma_yamabe::solver::{
    conformal_laplacian_solve, conformal_log_profile, continuation_solve, newton_solve,
    ContinuationPlan, DirichletProblem, NewtonOptions, BARRIER_TOL,
};

/// Prints the criterion's verdict line, then fails the test on violations.
fn conclude(criterion: &str, violations: Vec<String>) {
    let passed = violations.is_empty();
    println!(
        "acceptance {criterion}: {}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(
        passed,
        "{criterion}: {} violation(s): {}",
        violations.len(),
        violations
            .iter()
            .take(5)
            .cloned()
            .collect::<Vec<_>>()
            .join("; ")
    );
}

fn functional(n: usize, k: usize) -> SymmetricFunctional {
    SymmetricFunctional::normalized(ConeSpec::elementary(n, k).unwrap())
}

fn one() -> RadialProfile {
    RadialProfile::constant(1.0)
}

#[test]
fn criterion_1_cone_width_closed_form_and_bisection() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 3..=10 {
        for k in 1..=n {
            let cone = ConeSpec::elementary(n, k).unwrap();
            let want = (n - k) as f64 / k as f64;
            if cone.mu_plus() != want {
                bad.push(format!("({n}, {k}): closed form {} != {want}", cone.mu_plus()));
            }
            let gap = (cone.mu_plus_bisection() - want).abs();
            if gap > 1e-10 {
                bad.push(format!("({n}, {k}): bisection gap {gap:.3e}"));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 1.0 {
        bad.push(format!("runtime {elapsed:.2}s exceeds 1s"));
    }
    conclude("1/9 (cone width table)", bad);
}

#[test]
fn criterion_2_critical_decay_rides_the_cone_boundary() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for &(n, k) in &[(4usize, 1usize), (5, 1), (5, 2), (6, 1), (6, 2)] {
        let mu = (n - k) as f64 / k as f64;
        for m in [0.5, 1.0, 2.0] {
            let metric = RadialMetric::schwarzschild_type(n, mu, m).unwrap();
            for i in 0..200 {
                let r = 0.5 + 19.5 * i as f64 / 199.0;
                let s = metric.schouten(r).unwrap();
                let lambda = s.eigenvalues_for(SchoutenSign::PlusA);
                let norm = lambda.iter().map(|l| l * l).sum::<f64>().sqrt();
                let sig = sigma_k(&lambda, k).unwrap().abs() / norm.powi(k as i32);
                if sig > 1e-9 {
                    bad.push(format!(
                        "(n={n}, k={k}, m={m}) r={r:.3}: normalized sigma_k {sig:.3e}"
                    ));
                }
                let ratio_gap = (s.chi2 / s.chi1 - (mu + 1.0)).abs();
                if ratio_gap > 1e-10 {
                    bad.push(format!(
                        "(n={n}, k={k}, m={m}) r={r:.3}: defect ratio gap {ratio_gap:.3e}"
                    ));
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 1.0 {
        bad.push(format!("runtime {elapsed:.2}s exceeds 1s"));
    }
    conclude("2/9 (critical decay boundary certificate)", bad);
}

#[test]
fn criterion_3_model_end_constants_and_oscillating_admissibility() {
    let mut bad = Vec::new();
    let cases = [
        (ProfileKind::Sinh, 1.0, "sinh"),
        (ProfileKind::Exp, 0.0, "exp"),
        (ProfileKind::Cosh, -1.0, "cosh"),
    ];
    for (kind, fiber, label) in cases {
        let metric =
            RadialMetric::warped(5, RadialProfile::closed(kind).unwrap(), fiber).unwrap();
        for i in 0..200 {
            let r = 0.25 + 11.75 * i as f64 / 199.0;
            let s = metric.schouten(r).unwrap();
            let dev = (s.chi1 - 0.5).abs().max(s.chi2.abs());
            if dev > 1e-12 {
                bad.push(format!("{label} at r={r:.3}: deviation {dev:.3e}"))
            }
        }
    }
    let oscillating = RadialMetric::warped(
        5,
        RadialProfile::closed(ProfileKind::ExpAlphaSin { alpha: 0.1 }).unwrap(),
        -1.0,
    )
    .unwrap();
    match check_end_conditions(&oscillating, 1.5, (0.0, 100.0), 0.1, 0.1, 2001) {
        Ok(report) => {
            if !report.passed {
                bad.push(format!(
                    "oscillating end fails: min chi1 {}, min ratio {}",
                    report.min_chi1, report.min_ratio
                ));
            }
        }
        Err(e) => bad.push(format!("end-condition check errored: {e}")),
    }
    conclude("3/9 (model end constants)", bad);
}

#[test]
fn criterion_4_mean_bound_holds_on_random_admissible_samples() {
    let mut bad = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(20260822);
    for &(n, k) in &[(4, 1), (4, 2), (5, 1), (5, 2), (6, 1), (6, 2)] {
        let f = functional(n, k);
        let mut accepted = 0usize;
        let mut attempts = 0usize;
        while accepted < 10_000 {
            attempts += 1;
            if attempts > 5_000_000 {
                bad.push(format!("cone ({n}, {k}): sampling starved at {accepted}"));
                break;
            }
            let lambda: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..3.0)).collect();
            match f.cone().margin(&lambda) {
                Ok(m) if m > 1e-6 => {}
                _ => continue,
            }
            accepted += 1;
            if !matches!(f.check_mean_bound(&lambda), Ok(true)) {
                bad.push(format!("cone ({n}, {k}): violation at {lambda:?}"));
            }
        }
    }
    conclude("4/9 (arithmetic mean bound, 10^4 samples per cone)", bad);
}

fn cap_error(nodes: usize, r_max: f64, spherical: bool, bad: &mut Vec<String>) -> Option<(f64, f64)> {
    let kind = if spherical {
        ProfileKind::SphericalCap { radius: 1.0 }
    } else {
        ProfileKind::HyperbolicCap { radius: 1.0 }
    };
    let cap = RadialProfile::closed(kind).unwrap();
    let grid = Grid::new(0.0, r_max, nodes, LeftEnd::Symmetry).unwrap();
    let h = grid.spacing();
    let radii = grid.nodes();
    let exact = cap.values_on(&radii).unwrap();
    let bump = RadialProfile::closed(ProfileKind::Bump {
        center: 0.4,
        radius: 0.3,
        amplitude: 1e-3,
    })
    .unwrap();
    let guess: Vec<f64> = exact
        .iter()
        .zip(bump.values_on(&radii).unwrap())
        .map(|(e, b)| e + b)
        .collect();
    let sign = if spherical {
        SchoutenSign::PlusA
    } else {
        SchoutenSign::MinusA
    };
    let problem = DirichletProblem::new(
        RadialMetric::euclidean(4).unwrap(),
        functional(4, 2),
        sign,
        &one(),
        grid,
        None,
        *exact.last().unwrap(),
    )
    .unwrap();
    let clock = Instant::now();
    let sol = match newton_solve(&problem, &guess, &NewtonOptions::default()) {
        Ok(s) => s,
        Err(e) => {
            bad.push(format!("{nodes}-node solve failed: {e}"));
            return None;
        }
    };
    let solve_time = clock.elapsed().as_secs_f64();
    if solve_time >= 10.0 {
        bad.push(format!("{nodes}-node solve took {solve_time:.2}s"));
    }
    if !sol.converged {
        bad.push(format!(
            "{nodes}-node solve stalled at residual {:.3e}",
            sol.residual_sup
        ));
        return None;
    }
    let err = sol
        .values
        .iter()
        .zip(&exact)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Some((h, err))
}

#[test]
fn criterion_5_manufactured_caps_converge_at_second_order() {
    let mut bad = Vec::new();
    for (spherical, r_max, label) in [(false, 0.8, "hyperbolic"), (true, 0.7, "spherical")] {
        let coarse = cap_error(400, r_max, spherical, &mut bad);
        let fine = cap_error(800, r_max, spherical, &mut bad);
        if let (Some((h1, e1)), Some((h2, e2))) = (coarse, fine) {
            if e1 > 5e-5 {
                bad.push(format!("{label} cap: error {e1:.3e} at 400 nodes"));
            }
            let order = (e1 / e2).ln() / (h1 / h2).ln();
            if !(1.8..=2.2).contains(&order) {
                bad.push(format!("{label} cap: observed order {order:.3}"));
            }
        }
    }
    conclude("5/9 (manufactured cap recovery)", bad);
}

#[test]
fn criterion_6_exhaustion_dichotomy_splits_the_two_run_shapes() {
    let start = Instant::now();
    let mut bad = Vec::new();

    let bounded = ExhaustionPlan::geometric(
        RadialMetric::warped(5, RadialProfile::closed(ProfileKind::Cosh).unwrap(), -1.0)
            .unwrap(),
        functional(5, 2),
        SchoutenSign::MinusA,
        one(),
        Topology::CappedEnd,
        2.0,
        5,
        81,
    )
    .unwrap();
    match run_negative(&bounded) {
        Ok(report) => {
            if report.classification != Classification::Case1InteriorLimit {
                bad.push(format!(
                    "bounded run classified {:?}",
                    report.classification
                ));
            }
            for stage in &report.stages {
                let sup = stage.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
                if sup > 1e-9 {
                    bad.push(format!("bounded run sup {sup:.3e} at R {}", stage.radius));
                }
            }
        }
        Err(e) => bad.push(format!("bounded run failed: {e}")),
    }

    let collapsing = ExhaustionPlan::geometric(
        RadialMetric::euclidean(4).unwrap(),
        functional(4, 1),
        SchoutenSign::MinusA,
        one(),
        Topology::Ball,
        2.0,
        6,
        41,
    )
    .unwrap();
    match run_negative(&collapsing) {
        Ok(report) => {
            if report.classification != Classification::Case2BoundaryLimit {
                bad.push(format!(
                    "collapsing run classified {:?}",
                    report.classification
                ));
            }
            for stage in &report.stages {
                let drift = (stage.inf_core - (2.0 / stage.radius).ln()).abs();
                if drift > 0.7 {
                    bad.push(format!(
                        "core infimum drift {drift:.3} at R {}",
                        stage.radius
                    ));
                }
            }
            let levels: Vec<f64> =
                report.normalized.iter().map(|s| s.decayed_level).collect();
            for pair in levels.windows(2) {
                if pair[1] >= pair[0] {
                    bad.push(format!("levels fail to decrease: {} -> {}", pair[0], pair[1]));
                }
            }
            // The decay factor per radius doubling settles near 4; the first
            // doublings are still transient, so the band binds the last three.
            for i in 3..levels.len() {
                let q = levels[i - 1] / levels[i];
                if !(3.4..=4.7).contains(&q) {
                    bad.push(format!("late decay ratio {q:.3} leaves [3.4, 4.7]"));
                }
            }
        }
        Err(e) => bad.push(format!("collapsing run failed: {e}")),
    }

    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 120.0 {
        bad.push(format!("runtime {elapsed:.1}s exceeds 2min"));
    }
    conclude("6/9 (exhaustion dichotomy)", bad);
}

#[test]
fn criterion_7_barrier_audits_hold_across_all_run_kinds() {
    let mut bad = Vec::new();

    let negative_runs = [
        (
            "bounded",
            ExhaustionPlan::geometric(
                RadialMetric::warped(
                    5,
                    RadialProfile::closed(ProfileKind::Cosh).unwrap(),
                    -1.0,
                )
                .unwrap(),
                functional(5, 2),
                SchoutenSign::MinusA,
                one(),
                Topology::CappedEnd,
                2.0,
                5,
                81,
            )
            .unwrap(),
        ),
        (
            "collapsing",
            ExhaustionPlan::geometric(
                RadialMetric::euclidean(4).unwrap(),
                functional(4, 1),
                SchoutenSign::MinusA,
                one(),
                Topology::Ball,
                2.0,
                6,
                41,
            )
            .unwrap(),
        ),
    ];
    for (label, plan) in negative_runs {
        match run_negative(&plan) {
            Ok(report) => {
                for audit in &report.barriers {
                    if !audit.report.passed {
                        bad.push(format!(
                            "{label} run: {} audit fails at stage {} (clearance {:.3e})",
                            audit.report.label, audit.stage, audit.report.clearance
                        ));
                    }
                }
            }
            Err(e) => bad.push(format!("{label} run failed: {e}")),
        }
    }

    let ceiling = 0.8;
    let positive = ExhaustionPlan::geometric(
        RadialMetric::conformally_flat(5, RadialProfile::closed(ProfileKind::NegLog).unwrap())
            .unwrap(),
        functional(5, 1),
        SchoutenSign::PlusA,
        one(),
        Topology::Annulus { inner: 0.5 },
        2.0,
        4,
        61,
    )
    .unwrap();
    match run_positive(&positive, ceiling, PositiveComparison::LinearSolve) {
        Ok(report) => {
            for audit in &report.barriers {
                if !audit.report.passed {
                    bad.push(format!(
                        "positive run: {} audit fails at stage {}",
                        audit.report.label, audit.stage
                    ));
                }
            }
            for stage in &report.stages {
                if stage.max_u > ceiling + BARRIER_TOL {
                    bad.push(format!(
                        "positive run exceeds its ceiling: {} at R {}",
                        stage.max_u, stage.radius
                    ));
                }
            }
        }
        Err(e) => bad.push(format!("positive run failed: {e}")),
    }

    let degenerate = ExhaustionPlan::geometric(
        RadialMetric::euclidean(4).unwrap(),
        functional(4, 1),
        SchoutenSign::MinusA,
        one(),
        Topology::Ball,
        2.0,
        4,
        41,
    )
    .unwrap();
    match run_negative_degenerate(&degenerate) {
        Ok(report) => {
            for audit in &report.barriers {
                if !audit.report.passed {
                    bad.push(format!(
                        "degenerate run: audit fails at stage {}",
                        audit.stage
                    ));
                }
            }
            for stage in &report.stages {
                if stage.max_u > 1e-10 {
                    bad.push(format!(
                        "degenerate run exceeds the zero ceiling by {:.3e}",
                        stage.max_u
                    ));
                }
            }
        }
        Err(e) => bad.push(format!("degenerate run failed: {e}")),
    }

    conclude("7/9 (barrier audits)", bad);
}

#[test]
fn criterion_8_vanishing_level_continuation_matches_the_linear_oracle() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let n = 5usize;
    let mu = 3.0;
    let level = 0.3;
    let metric = RadialMetric::schwarzschild_type(n, mu, 1.0).unwrap();
    let (r0, r1) = (3.0, 96.0);
    let grid = Grid::new(r0, r1, 16_001, LeftEnd::Dirichlet).unwrap();
    let h = grid.spacing();
    let w = RadialProfile::closed(ProfileKind::SchwarzschildLog { mu, m: 1.0 }).unwrap();
    let w0 = w.value(r0).unwrap();
    let w1 = w.value(r1).unwrap();

    // Dirichlet data tilted so the total conformal factor drops by a fixed
    // positive amount across the annulus; the gap fixes a one-parameter
    // family of constant-curvature factors, and the member matching the data
    // at both ends is an exact solution at its own curvature level. That
    // level seeds the vanishing schedule: a short fine-stepped ramp first,
    // then quarter-decade stages down past 1e-11.
    let tilt = 0.05;
    let data0 = level - w0 + w1 + tilt;
    let data1 = level;
    let v0 = data0 + w0;
    let ratio = (v0 - (data1 + w1)).exp();
    let a2 = (ratio - 1.0) / (r1 * r1 - ratio * r0 * r0);
    let a = a2.sqrt();
    let c = v0 - (2.0 * a / (1.0 + a2 * r0 * r0)).ln();
    let eps1 = (-2.0 * c).exp();
    let arch: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&r| (2.0 * a / (1.0 + a2 * r * r)).ln() + c - w.value(r).unwrap())
        .collect();
    let mut factors: Vec<f64> = (0..=4)
        .map(|j| eps1 * 10f64.powf(-0.05 * j as f64))
        .collect();
    let mut eps = *factors.last().unwrap();
    while eps > 1e-11 {
        eps *= 10f64.powf(-0.25);
        factors.push(eps);
    }

    let problem = DirichletProblem::new(
        metric.clone(),
        functional(n, 1),
        SchoutenSign::PlusA,
        &one(),
        grid.clone(),
        Some(data0),
        data1,
    )
    .unwrap();
    let plan = ContinuationPlan::RhsFactors { factors, floor: 0.0 };
    let opts = NewtonOptions { tol: 3e-9, ..NewtonOptions::default() };
    let u = match continuation_solve(&problem, &arch, &plan, &opts) {
        Ok(result) => {
            for stage in &result.stages {
                if !stage.solution.converged {
                    bad.push(format!(
                        "stage {:.3e} stalled at residual {:.3e}",
                        stage.parameter, stage.solution.residual_sup
                    ));
                }
            }
            result.last().values.clone()
        }
        Err(e) => {
            bad.push(format!("continuation failed: {e}"));
            conclude("8/9 (linear oracle agreement)", bad);
            return;
        }
    };

    let phi_left = (0.5 * (n as f64 - 2.0) * data0).exp();
    let phi_right = (0.5 * (n as f64 - 2.0) * data1).exp();
    let phi = conformal_laplacian_solve(&metric, &grid, Some(phi_left), phi_right).unwrap();
    let linear = conformal_log_profile(&grid, n, &phi).unwrap();
    let gap = u
        .iter()
        .zip(&linear)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let scale = linear.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let rel = gap / scale;
    if rel > 1e-4 {
        bad.push(format!("relative sup gap {rel:.3e} exceeds 1e-4"));
    }

    // Log-log fit of the factor's deviation from its far-field constant over
    // [16, 64]; the slope recovers the background's decay rate mu - 1. The
    // constant is the outer data plus the background log-factor left there.
    let far_constant = data1 + w1;
    let mut points = Vec::new();
    for i in 0..12 {
        let r = 16.0 * (64.0f64 / 16.0).powf(i as f64 / 11.0);
        let idx = ((r - r0) / h).round() as usize;
        let node_r = r0 + idx as f64 * h;
        let d = far_constant - u[idx];
        if d <= 0.0 {
            bad.push(format!("no deviation to fit at r = {node_r:.3}"));
            continue;
        }
        points.push((node_r.ln(), d.ln()));
    }
    if points.len() >= 2 {
        let m = points.len() as f64;
        let sx: f64 = points.iter().map(|p| p.0).sum();
        let sy: f64 = points.iter().map(|p| p.1).sum();
        let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
        let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        let fitted = -slope;
        let target = mu - 1.0;
        if (fitted - target).abs() > 0.1 * target {
            bad.push(format!(
                "fitted decay exponent {fitted:.3} strays from {target} by over 10%"
            ));
        }
    }

    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 60.0 {
        bad.push(format!("runtime {elapsed:.1}s exceeds 1min"));
    }
    conclude("8/9 (linear oracle agreement)", bad);
}

#[test]
fn criterion_9_trace_modified_functional_matches_ricci_scaling() {
    let mut bad = Vec::new();
    let samples: [(RadialMetric, SchoutenSign, &[f64]); 4] = [
        (
            RadialMetric::warped(4, RadialProfile::closed(ProfileKind::Sinh).unwrap(), 1.0)
                .unwrap(),
            SchoutenSign::MinusA,
            &[0.7, 2.0],
        ),
        (
            RadialMetric::warped(5, RadialProfile::closed(ProfileKind::Cosh).unwrap(), -1.0)
                .unwrap(),
            SchoutenSign::MinusA,
            &[0.5, 1.5, 3.0],
        ),
        (
            RadialMetric::warped(
                6,
                RadialProfile::closed(ProfileKind::ExpAlphaSin { alpha: 0.1 }).unwrap(),
                -1.0,
            )
            .unwrap(),
            SchoutenSign::MinusA,
            &[1.0, 10.0],
        ),
        (
            RadialMetric::schwarzschild_type(5, 1.2, 1.0).unwrap(),
            SchoutenSign::PlusA,
            &[0.8, 2.0, 5.0],
        ),
    ];
    for (metric, sign, radii) in samples {
        let n = metric.dimension();
        let tau0 = tau_for_trace_parameter(n, 0.0).unwrap();
        let factor = tau0 / (n as f64 - 2.0);
        for k in 1..=2 {
            let base = functional(n, k);
            let deformed = SymmetricFunctional::with_scale(
                ConeSpec::tau_modified(base.cone().clone(), tau0).unwrap(),
                base.scale(),
            );
            for &r in radii {
                let s = metric.schouten(r).unwrap();
                let lambda = s.eigenvalues_for(sign);
                let ric = metric.ricci(r).unwrap();
                let mut ric_lambda = ric.eigenvalues();
                if sign == SchoutenSign::MinusA {
                    for v in &mut ric_lambda {
                        *v = -*v;
                    }
                }
                let lhs = match deformed.value_strict(&lambda) {
                    Ok(v) => v,
                    Err(e) => {
                        bad.push(format!("{metric} at r={r}, k={k}: deformed side: {e}"));
                        continue;
                    }
                };
                let rhs = match base.value_strict(&ric_lambda) {
                    Ok(v) => factor * v,
                    Err(e) => {
                        bad.push(format!("{metric} at r={r}, k={k}: Ricci side: {e}"));
                        continue;
                    }
                };
                if (lhs - rhs).abs() > 1e-10 {
                    bad.push(format!(
                        "{metric} at r={r}, k={k}: {lhs:.12e} vs {rhs:.12e}"
                    ));
                }
            }
        }
    }
    conclude("9/9 (trace-modified Ricci identity)", bad);
}
