//! Elementary symmetric cones, trace-modified deformations, and the concave
//! 1-homogeneous curvature functionals built on them.
//!
//! Conventions used throughout:
//!
//! * `sigma_k` is the k-th elementary symmetric polynomial, `sigma_0 = 1`.
//! * The open cone `Gamma_k^+` is where `sigma_1, ..., sigma_k` are all
//!   positive; `Gamma_n^+` is the positive orthant and `Gamma_1^+` the
//!   half-space `sigma_1 > 0`.
//! * A trace modification with parameter `tau` in `(0, 1]` replaces a vector
//!   `lambda` by `tau * lambda + (1 - tau) * sigma_1(lambda) * e` before
//!   asking the base cone; `tau = 1` is the identity.
//! * Membership tests are scale-free: vectors are normalized to unit
//!   Euclidean norm before classification, and the boundary band is
//!   `[-BOUNDARY_TOL, BOUNDARY_TOL]` on the smallest deformed `sigma_j`.
//! * The canonical functional on a degree-`k` cone is `sigma_k^{1/k}` of the
//!   deformed vector, scaled so a normalized instance has `f(e/2) = 1`.

use crate::error::{Error, Result};

/// Half-width of the boundary band on the smallest deformed `sigma_j` after
/// unit normalization. Vectors inside the band classify as boundary.
pub const BOUNDARY_TOL: f64 = 1e-10;

/// Bisection width tolerance for the degenerate-ray parameter `mu`.
pub const MU_BISECTION_TOL: f64 = 1e-12;

/// Iteration cap for the `mu` bisection; `(n - 1) / 2^200` is far below the
/// width tolerance, so this only guards against logic errors.
pub const MU_BISECTION_MAX_ITER: usize = 200;

/// Slack granted when checking the arithmetic-mean bound, absolute plus
/// relative to the bound itself.
pub const MEAN_BOUND_SLACK: f64 = 1e-12;

/// `sigma_k(lambda)` via the one-pass recurrence on the coefficients of
/// `prod_i (1 + lambda_i x)`. Stable for the dimensions used here and exact
/// for `k = 0` (returns 1).
pub fn sigma_k(lambda: &[f64], k: usize) -> Result<f64> {
    if k > lambda.len() {
        return Err(Error::InvalidParameter(format!(
            "sigma_{k} undefined for {} eigenvalues",
            lambda.len()
        )));
    }
    Ok(sigma_all(lambda, k)[k])
}

/// All of `sigma_0, ..., sigma_kmax` in one pass. `kmax` is clamped to the
/// vector length by the callers.
fn sigma_all(lambda: &[f64], kmax: usize) -> Vec<f64> {
    let mut e = vec![0.0; kmax + 1];
    e[0] = 1.0;
    for (i, &l) in lambda.iter().enumerate() {
        let top = kmax.min(i + 1);
        for j in (1..=top).rev() {
            e[j] += l * e[j - 1];
        }
    }
    e
}

/// Gradient of `sigma_k`: entry `i` is `sigma_{k-1}` of `lambda` with entry
/// `i` removed. Recomputed per entry rather than divided out, which keeps the
/// result finite for repeated or zero eigenvalues.
pub fn sigma_k_gradient(lambda: &[f64], k: usize) -> Result<Vec<f64>> {
    if k == 0 || k > lambda.len() {
        return Err(Error::InvalidParameter(format!(
            "sigma_{k} gradient undefined for {} eigenvalues",
            lambda.len()
        )));
    }
    let mut reduced = Vec::with_capacity(lambda.len() - 1);
    let mut grad = Vec::with_capacity(lambda.len());
    for i in 0..lambda.len() {
        reduced.clear();
        reduced.extend(lambda.iter().take(i));
        reduced.extend(lambda.iter().skip(i + 1));
        grad.push(sigma_all(&reduced, k - 1)[k - 1]);
    }
    Ok(grad)
}

fn sigma1(lambda: &[f64]) -> f64 {
    lambda.iter().sum()
}

fn euclid_norm(lambda: &[f64]) -> f64 {
    lambda.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Where a vector sits relative to a closed cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConeFamily {
    /// `Gamma_k^+` in dimension `n`.
    ElementarySymmetric { k: usize },
    /// Trace modification of an inner cone.
    TauModified { base: Box<ConeSpec>, tau: f64 },
}

/// A Garding cone: dimension plus family. Invariants are enforced at
/// construction, so a `ConeSpec` value is always valid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec {
    n: usize,
    family: ConeFamily,
}

impl ConeSpec {
    /// `Gamma_k^+` in dimension `n`. Requires `n >= 3` and `1 <= k <= n`.
    pub fn elementary(n: usize, k: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "cone dimension must be at least 3, got {n}"
            )));
        }
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!(
                "sigma_k order must satisfy 1 <= k <= n, got k = {k}, n = {n}"
            )));
        }
        Ok(ConeSpec {
            n,
            family: ConeFamily::ElementarySymmetric { k },
        })
    }

    /// Trace modification of `base` with `tau` in `(0, 1]`.
    pub fn tau_modified(base: ConeSpec, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau <= 1.0) || !tau.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "tau must lie in (0, 1], got {tau}"
            )));
        }
        Ok(ConeSpec {
            n: base.n,
            family: ConeFamily::TauModified {
                base: Box::new(base),
                tau,
            },
        })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Order of the innermost elementary symmetric cone.
    pub fn degree(&self) -> usize {
        match &self.family {
            ConeFamily::ElementarySymmetric { k } => *k,
            ConeFamily::TauModified { base, .. } => base.degree(),
        }
    }

    pub fn family(&self) -> &ConeFamily {
        &self.family
    }

    fn check_dimension(&self, lambda: &[f64]) -> Result<()> {
        if lambda.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: lambda.len(),
            });
        }
        Ok(())
    }

    /// The vector handed to the innermost elementary cone after applying the
    /// whole deformation chain. Identity for an elementary cone.
    pub fn deformed(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        self.check_dimension(lambda)?;
        Ok(self.deformed_unchecked(lambda))
    }

    fn deformed_unchecked(&self, lambda: &[f64]) -> Vec<f64> {
        match &self.family {
            ConeFamily::ElementarySymmetric { .. } => lambda.to_vec(),
            ConeFamily::TauModified { base, tau } => {
                let s = (1.0 - tau) * sigma1(lambda);
                let step: Vec<f64> = lambda.iter().map(|&l| tau * l + s).collect();
                base.deformed_unchecked(&step)
            }
        }
    }

    /// Smallest of `sigma_1, ..., sigma_degree` of the deformed vector after
    /// normalizing `lambda` to unit Euclidean norm. Positive in the interior,
    /// negative outside, zero on the boundary; the zero vector reports 0.
    pub fn margin(&self, lambda: &[f64]) -> Result<f64> {
        self.check_dimension(lambda)?;
        Ok(self.margin_unchecked(lambda))
    }

    fn margin_unchecked(&self, lambda: &[f64]) -> f64 {
        let norm = euclid_norm(lambda);
        if norm == 0.0 {
            return 0.0;
        }
        let unit: Vec<f64> = lambda.iter().map(|&l| l / norm).collect();
        let deformed = self.deformed_unchecked(&unit);
        let sigmas = sigma_all(&deformed, self.degree());
        sigmas[1..]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Scale-free membership classification with the boundary band
    /// [`BOUNDARY_TOL`].
    pub fn contains(&self, lambda: &[f64]) -> Result<Containment> {
        let margin = self.margin(lambda)?;
        Ok(if margin > BOUNDARY_TOL {
            Containment::Interior
        } else if margin < -BOUNDARY_TOL {
            Containment::Exterior
        } else {
            Containment::Boundary
        })
    }

    /// Strict interiority of the raw (unnormalized) deformed vector. Used by
    /// the `mu` bisection, where a sign test is wanted rather than a band.
    fn strictly_interior_raw(&self, lambda: &[f64]) -> bool {
        let deformed = self.deformed_unchecked(lambda);
        let sigmas = sigma_all(&deformed, self.degree());
        sigmas[1..].iter().all(|&s| s > 0.0)
    }

    /// Degenerate-ray parameter: the largest `mu` with
    /// `(-mu, 1, ..., 1)` still in the closed cone. Closed form
    /// `(n - k) / k` for `Gamma_k^+`, bisection otherwise.
    pub fn mu_plus(&self) -> f64 {
        match &self.family {
            ConeFamily::ElementarySymmetric { k } => (self.n - k) as f64 / *k as f64,
            ConeFamily::TauModified { .. } => self.mu_plus_bisection(),
        }
    }

    /// Bisection for the degenerate-ray parameter, available for every
    /// family as an independent route to [`ConeSpec::mu_plus`]. Bracket is
    /// `[0, n - 1]`: the ray start `(0, 1, ..., 1)` is interior unless the
    /// cone is the positive orthant, and `sigma_1` vanishes at `mu = n - 1`.
    pub fn mu_plus_bisection(&self) -> f64 {
        let ray = |mu: f64| {
            let mut v = vec![1.0; self.n];
            v[0] = -mu;
            v
        };
        if !self.strictly_interior_raw(&ray(0.0)) {
            return 0.0;
        }
        let mut lo = 0.0;
        let mut hi = (self.n - 1) as f64;
        let mut iter = 0;
        while hi - lo > MU_BISECTION_TOL && iter < MU_BISECTION_MAX_ITER {
            let mid = 0.5 * (lo + hi);
            if self.strictly_interior_raw(&ray(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
            iter += 1;
        }
        0.5 * (lo + hi)
    }
}

/// Trace-modification parameter realizing a linear trace combination with
/// weight `t < 1`; `t = 0` gives the Ricci endpoint `(n - 2) / (n - 1)`.
pub fn tau_for_trace_parameter(n: usize, t: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "dimension must be at least 3, got {n}"
        )));
    }
    if !(t < 1.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "trace parameter must satisfy t < 1, got {t}"
        )));
    }
    Ok(1.0 / (1.0 + (1.0 - t) / (n - 2) as f64))
}

/// A concave 1-homogeneous curvature functional: `scale * sigma_k^{1/k}` of
/// the deformed vector. `scale` is carried explicitly so deformed and base
/// functionals can share one normalization when an identity requires it.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricFunctional {
    cone: ConeSpec,
    scale: f64,
}

impl SymmetricFunctional {
    /// Functional with `f(e/2) = 1`.
    pub fn normalized(cone: ConeSpec) -> Self {
        let raw = Self::with_scale(cone, 1.0);
        let half_e = vec![0.5; raw.cone.n];
        let scale = 1.0 / raw.canonical_value(&half_e);
        Self { cone: raw.cone, scale }
    }

    pub fn with_scale(cone: ConeSpec, scale: f64) -> Self {
        Self { cone, scale }
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Same cone family, new `tau` on the outermost modification, scale kept.
    /// Errors if the cone has no trace modification to retune.
    pub fn with_outer_tau(&self, tau: f64) -> Result<Self> {
        match self.cone.family() {
            ConeFamily::TauModified { base, .. } => {
                let cone = ConeSpec::tau_modified((**base).clone(), tau)?;
                Ok(Self { cone, scale: self.scale })
            }
            ConeFamily::ElementarySymmetric { .. } => Err(Error::InvalidParameter(
                "functional has no trace modification to retune".into(),
            )),
        }
    }

    /// `sigma_k^{1/k}` of the deformed vector, no scale, no admissibility
    /// guard. Callers classify first.
    fn canonical_value(&self, lambda: &[f64]) -> f64 {
        let k = self.cone.degree();
        let deformed = self.cone.deformed_unchecked(lambda);
        let s = sigma_all(&deformed, k)[k];
        if k == 1 {
            s
        } else {
            s.powf(1.0 / k as f64)
        }
    }

    /// Functional value. Zero on the boundary band, error outside the cone.
    pub fn value(&self, lambda: &[f64]) -> Result<f64> {
        let margin = self.cone.margin(lambda)?;
        if margin < -BOUNDARY_TOL {
            return Err(Error::OutsideCone { min_sigma: margin });
        }
        if margin <= BOUNDARY_TOL {
            return Ok(0.0);
        }
        Ok(self.scale * self.canonical_value(lambda))
    }

    /// Gradient of the functional at an interior point. The chain rule walks
    /// the deformation stack: each trace step contributes
    /// `tau * g + (1 - tau) * (sum g) * e`.
    pub fn gradient(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        let margin = self.cone.margin(lambda)?;
        if margin <= BOUNDARY_TOL {
            return Err(Error::OutsideCone { min_sigma: margin });
        }
        self.gradient_strict(lambda)
    }

    /// Value under a strict sign test on the raw deformed `sigma_j`, with no
    /// boundary band. Iterative solvers use this: an iterate can sit inside
    /// the cone but within the classification band, and must still evaluate
    /// smoothly rather than flatten to zero.
    pub fn value_strict(&self, lambda: &[f64]) -> Result<f64> {
        let k = self.cone.degree();
        let deformed = self.cone.deformed(lambda)?;
        let sigmas = sigma_all(&deformed, k);
        let min = sigmas[1..].iter().copied().fold(f64::INFINITY, f64::min);
        if min <= 0.0 {
            return Err(Error::OutsideCone { min_sigma: min });
        }
        let s = sigmas[k];
        Ok(self.scale * if k == 1 { s } else { s.powf(1.0 / k as f64) })
    }

    /// Gradient counterpart of [`SymmetricFunctional::value_strict`].
    pub fn gradient_strict(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        self.cone.check_dimension(lambda)?;
        let mut g = Self::canonical_gradient(&self.cone, lambda)?;
        for gi in &mut g {
            *gi *= self.scale;
        }
        Ok(g)
    }

    fn canonical_gradient(cone: &ConeSpec, lambda: &[f64]) -> Result<Vec<f64>> {
        match cone.family() {
            ConeFamily::ElementarySymmetric { k } => {
                let k = *k;
                let s = sigma_all(lambda, k)[k];
                if s <= 0.0 {
                    return Err(Error::OutsideCone { min_sigma: s });
                }
                let grad = sigma_k_gradient(lambda, k)?;
                let outer = s.powf(1.0 / k as f64 - 1.0) / k as f64;
                Ok(grad.into_iter().map(|g| outer * g).collect())
            }
            ConeFamily::TauModified { base, tau } => {
                let shift = (1.0 - tau) * sigma1(lambda);
                let step: Vec<f64> = lambda.iter().map(|&l| tau * l + shift).collect();
                let inner = Self::canonical_gradient(base, &step)?;
                let total: f64 = inner.iter().sum();
                Ok(inner
                    .into_iter()
                    .map(|g| tau * g + (1.0 - tau) * total)
                    .collect())
            }
        }
    }

    /// `f(e)`, the value on the diagonal direction. Finite and positive for
    /// every valid cone.
    pub fn value_at_diagonal(&self) -> f64 {
        let e = vec![1.0; self.cone.n];
        self.scale * self.canonical_value(&e)
    }

    /// Arithmetic-mean bound `f(lambda) <= f(e) sigma_1(lambda) / n` with
    /// [`MEAN_BOUND_SLACK`]. Errors outside the closed cone, where the bound
    /// is not asserted.
    pub fn check_mean_bound(&self, lambda: &[f64]) -> Result<bool> {
        let value = self.value(lambda)?;
        let bound = self.value_at_diagonal() * sigma1(lambda) / self.cone.n as f64;
        Ok(value <= bound + MEAN_BOUND_SLACK * (1.0 + bound.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Subset-enumeration sigma_k, the independent oracle for the recurrence.
    fn sigma_k_brute(lambda: &[f64], k: usize) -> f64 {
        fn rec(lambda: &[f64], k: usize, start: usize, acc: f64, out: &mut f64) {
            if k == 0 {
                *out += acc;
                return;
            }
            for i in start..lambda.len() {
                rec(lambda, k - 1, i + 1, acc * lambda[i], out);
            }
        }
        let mut out = 0.0;
        rec(lambda, k, 0, 1.0, &mut out);
        out
    }

    #[test]
    fn sigma_k_matches_subset_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 3..=8 {
            for _ in 0..50 {
                let lambda: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
                for k in 0..=n {
                    let fast = sigma_k(&lambda, k).unwrap();
                    let slow = sigma_k_brute(&lambda, k);
                    assert!(
                        (fast - slow).abs() <= 1e-12 * (1.0 + slow.abs()),
                        "sigma_{k} mismatch at n = {n}: {fast} vs {slow}"
                    );
                }
            }
        }
    }

    #[test]
    fn sigma_k_known_values() {
        assert_eq!(sigma_k(&[1.0, 1.0, 1.0], 2).unwrap(), 3.0);
        assert_eq!(sigma_k(&[1.0, 1.0, 1.0], 0).unwrap(), 1.0);
        // C(4,2) pairs of ones minus 1.5 * 4 mixed pairs.
        let v = [-1.5, 1.0, 1.0, 1.0, 1.0];
        assert_eq!(sigma_k(&v, 2).unwrap(), 0.0);
        assert!(sigma_k(&[1.0, 2.0], 3).is_err(), "k beyond length must fail");
    }

    #[test]
    fn sigma_gradient_known_values_and_zeros() {
        assert_eq!(sigma_k_gradient(&[1.0, 1.0, 1.0], 2).unwrap(), vec![2.0, 2.0, 2.0]);
        assert_eq!(sigma_k_gradient(&[2.0, 3.0], 2).unwrap(), vec![3.0, 2.0]);
        // Entries with a zero eigenvalue still get finite sub-gradients.
        let g = sigma_k_gradient(&[0.0, 1.0, 2.0], 3).unwrap();
        assert_eq!(g, vec![2.0, 0.0, 0.0]);
    }

    #[test]
    fn sigma_gradient_agrees_with_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in [3usize, 5, 7] {
            for k in 1..=n {
                let lambda: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
                let grad = sigma_k_gradient(&lambda, k).unwrap();
                for i in 0..n {
                    let mut err = [0.0; 2];
                    for (which, h) in [1e-4, 5e-5].iter().enumerate() {
                        let mut lp = lambda.clone();
                        let mut lm = lambda.clone();
                        lp[i] += h;
                        lm[i] -= h;
                        let fd = (sigma_k(&lp, k).unwrap() - sigma_k(&lm, k).unwrap()) / (2.0 * h);
                        err[which] = (fd - grad[i]).abs();
                    }
                    // Central differences are second order, so halving h
                    // shrinks the error by about 4; allow a loose factor and
                    // absolute floor for entries where the error is rounding.
                    assert!(
                        err[1] <= err[0] / 2.0 + 1e-9,
                        "entry {i} of grad sigma_{k} (n = {n}) not converging: {err:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn containment_basic_vectors() {
        let g2 = ConeSpec::elementary(4, 2).unwrap();
        assert_eq!(g2.contains(&[1.0, 1.0, 1.0, 1.0]).unwrap(), Containment::Interior);
        assert_eq!(g2.contains(&[1.0, 0.0, 0.0, 0.0]).unwrap(), Containment::Boundary);
        assert_eq!(g2.contains(&[-1.0, -1.0, -1.0, -1.0]).unwrap(), Containment::Exterior);
        let g1 = ConeSpec::elementary(4, 1).unwrap();
        assert_eq!(g1.contains(&[1.0, 0.0, 0.0, 0.0]).unwrap(), Containment::Interior);
        assert_eq!(g1.contains(&[0.0; 4]).unwrap(), Containment::Boundary, "vertex is boundary");
    }

    #[test]
    fn containment_is_permutation_and_scale_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let cone = ConeSpec::elementary(5, 2).unwrap();
        for _ in 0..200 {
            let lambda: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..2.0)).collect();
            let class = cone.contains(&lambda).unwrap();
            let mut perm = lambda.clone();
            perm.reverse();
            perm.swap(0, 2);
            assert_eq!(cone.contains(&perm).unwrap(), class, "permutation changed class");
            for s in [1e-3, 7.0, 1e3] {
                let scaled: Vec<f64> = lambda.iter().map(|&l| s * l).collect();
                assert_eq!(cone.contains(&scaled).unwrap(), class, "scaling by {s} changed class");
            }
        }
    }

    #[test]
    fn cone_nesting_on_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let n = 6;
        let cones: Vec<ConeSpec> = (1..=n).map(|k| ConeSpec::elementary(n, k).unwrap()).collect();
        for _ in 0..300 {
            let lambda: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..2.0)).collect();
            for k in 2..=n {
                if cones[k - 1].contains(&lambda).unwrap() == Containment::Interior {
                    assert_eq!(
                        cones[k - 2].contains(&lambda).unwrap(),
                        Containment::Interior,
                        "Gamma_{k} interior point left Gamma_{}",
                        k - 1
                    );
                }
            }
        }
    }

    #[test]
    fn tau_one_is_the_base_cone() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let base = ConeSpec::elementary(5, 2).unwrap();
        let modified = ConeSpec::tau_modified(base.clone(), 1.0).unwrap();
        let f_base = SymmetricFunctional::normalized(base.clone());
        let f_mod = SymmetricFunctional::normalized(modified.clone());
        for _ in 0..100 {
            let lambda: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..2.0)).collect();
            assert_eq!(base.contains(&lambda).unwrap(), modified.contains(&lambda).unwrap());
            if base.contains(&lambda).unwrap() == Containment::Interior {
                let a = f_base.value(&lambda).unwrap();
                let b = f_mod.value(&lambda).unwrap();
                assert!((a - b).abs() <= 1e-14 * (1.0 + a.abs()));
            }
        }
    }

    #[test]
    fn mu_plus_closed_form_and_bisection_agree() {
        for n in 3..=10 {
            for k in 1..=n {
                let cone = ConeSpec::elementary(n, k).unwrap();
                let exact = (n - k) as f64 / k as f64;
                assert_eq!(cone.mu_plus(), exact, "closed form for n = {n}, k = {k}");
                assert!(
                    (cone.mu_plus_bisection() - exact).abs() <= 1e-10,
                    "bisection drifted for n = {n}, k = {k}"
                );
            }
        }
    }

    #[test]
    fn mu_plus_for_trace_modified_orthant() {
        // For the positive orthant base, the deformed radial entry vanishes
        // at mu = (n - 1)(1 - tau), which is the exact degenerate parameter.
        for n in [4usize, 5, 8] {
            for tau in [0.3, 0.5, 2.0 / 3.0, 0.9] {
                let base = ConeSpec::elementary(n, n).unwrap();
                let cone = ConeSpec::tau_modified(base, tau).unwrap();
                let exact = (n - 1) as f64 * (1.0 - tau);
                assert!(
                    (cone.mu_plus() - exact).abs() <= 1e-10,
                    "n = {n}, tau = {tau}: {} vs {exact}",
                    cone.mu_plus()
                );
            }
        }
        // The Ricci-endpoint parameter lands exactly on mu = 1.
        let n = 4;
        let tau0 = tau_for_trace_parameter(n, 0.0).unwrap();
        let cone = ConeSpec::tau_modified(ConeSpec::elementary(n, n).unwrap(), tau0).unwrap();
        assert!((cone.mu_plus() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn boundary_ray_classifies_as_boundary() {
        let cones = [
            ConeSpec::elementary(4, 1).unwrap(),
            ConeSpec::elementary(5, 2).unwrap(),
            ConeSpec::elementary(6, 3).unwrap(),
            ConeSpec::tau_modified(ConeSpec::elementary(5, 5).unwrap(), 0.7).unwrap(),
            ConeSpec::tau_modified(ConeSpec::elementary(6, 2).unwrap(), 0.85).unwrap(),
        ];
        for cone in &cones {
            let mu = cone.mu_plus_bisection();
            let mut ray = vec![1.0; cone.dimension()];
            ray[0] = -mu;
            assert_eq!(
                cone.contains(&ray).unwrap(),
                Containment::Boundary,
                "(-mu, 1, ..., 1) must sit on the boundary, cone {cone:?}"
            );
        }
    }

    #[test]
    fn tau_for_trace_parameter_values() {
        assert!((tau_for_trace_parameter(4, 0.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((tau_for_trace_parameter(5, -1.0).unwrap() - 0.6).abs() < 1e-15);
        assert!(tau_for_trace_parameter(5, 1.0).is_err());
        assert!(tau_for_trace_parameter(5, 1.5).is_err());
    }

    #[test]
    fn normalization_hits_one_at_half_diagonal() {
        // sigma_1 in n = 3: f(e/2) = 3/2, so scale = 2/3.
        let f1 = SymmetricFunctional::normalized(ConeSpec::elementary(3, 1).unwrap());
        assert!((f1.scale() - 2.0 / 3.0).abs() < 1e-15);
        // sigma_2^{1/2} in n = 4: f(e/2) = sqrt(6)/2, so scale = 2/sqrt(6).
        let f2 = SymmetricFunctional::normalized(ConeSpec::elementary(4, 2).unwrap());
        assert!((f2.scale() - 2.0 / 6.0f64.sqrt()).abs() < 1e-15);
        for f in [&f1, &f2] {
            let half_e = vec![0.5; f.cone().dimension()];
            assert!((f.value(&half_e).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn value_is_one_homogeneous_and_zero_on_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let f = SymmetricFunctional::normalized(ConeSpec::elementary(5, 2).unwrap());
        for _ in 0..200 {
            let lambda: Vec<f64> = (0..5).map(|_| rng.gen_range(0.05..2.0)).collect();
            let base = f.value(&lambda).unwrap();
            for s in [1e-3, 1.0, 1e3] {
                let scaled: Vec<f64> = lambda.iter().map(|&l| s * l).collect();
                let v = f.value(&scaled).unwrap();
                assert!(
                    (v - s * base).abs() <= 1e-12 * (1.0 + s * base),
                    "homogeneity failed at s = {s}: {v} vs {}",
                    s * base
                );
            }
        }
        let mu = f.cone().mu_plus();
        let mut ray = vec![1.0; 5];
        ray[0] = -mu;
        assert_eq!(f.value(&ray).unwrap(), 0.0, "boundary evaluates to exactly zero");
        assert!(f.value(&[-1.0, -1.0, 0.0, 0.0, 0.0]).is_err(), "exterior evaluation must fail");
    }

    #[test]
    fn functional_gradient_is_positive_and_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let functionals = [
            SymmetricFunctional::normalized(ConeSpec::elementary(5, 2).unwrap()),
            SymmetricFunctional::normalized(
                ConeSpec::tau_modified(ConeSpec::elementary(5, 5).unwrap(), 0.75).unwrap(),
            ),
        ];
        for f in &functionals {
            for _ in 0..50 {
                let lambda: Vec<f64> = (0..5).map(|_| rng.gen_range(0.1..2.0)).collect();
                let grad = f.gradient(&lambda).unwrap();
                assert!(grad.iter().all(|&g| g > 0.0), "monotone in the cone");
                for i in 0..5 {
                    let h = 1e-6;
                    let mut lp = lambda.clone();
                    let mut lm = lambda.clone();
                    lp[i] += h;
                    lm[i] -= h;
                    let fd = (f.value(&lp).unwrap() - f.value(&lm).unwrap()) / (2.0 * h);
                    assert!(
                        (fd - grad[i]).abs() <= 1e-5 * (1.0 + grad[i].abs()),
                        "gradient entry {i} mismatch: {fd} vs {}",
                        grad[i]
                    );
                }
            }
        }
    }

    #[test]
    fn mean_bound_saturates_on_the_diagonal() {
        let f = SymmetricFunctional::normalized(ConeSpec::elementary(5, 2).unwrap());
        for c in [0.25, 1.0, 10.0] {
            let diag = vec![c; 5];
            assert!(f.check_mean_bound(&diag).unwrap());
            // Equality case: value equals f(e) sigma_1 / n exactly up to rounding.
            let v = f.value(&diag).unwrap();
            let bound = f.value_at_diagonal() * (5.0 * c) / 5.0;
            assert!((v - bound).abs() <= 1e-12 * (1.0 + bound));
        }
        assert!(f.check_mean_bound(&[3.0, 1.0, 1.0, 1.0, 1.0]).unwrap());
    }

    #[test]
    fn trace_deformation_identity_against_ricci_combination() {
        // With tau0 = (n-2)/(n-1) and shared scale, the deformed functional
        // of lambda equals tau0/(n-2) times the base functional of
        // (n-2) lambda + sigma_1(lambda) e.
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for n in [4usize, 5, 6] {
            let tau0 = tau_for_trace_parameter(n, 0.0).unwrap();
            let base = SymmetricFunctional::normalized(ConeSpec::elementary(n, 2).unwrap());
            let deformed = SymmetricFunctional::with_scale(
                ConeSpec::tau_modified(base.cone().clone(), tau0).unwrap(),
                base.scale(),
            );
            for _ in 0..100 {
                let lambda: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.5)).collect();
                let s1: f64 = lambda.iter().sum();
                let ric: Vec<f64> = lambda.iter().map(|&l| (n - 2) as f64 * l + s1).collect();
                let lhs = deformed.value(&lambda).unwrap();
                let rhs = tau0 / (n - 2) as f64 * base.value(&ric).unwrap();
                assert!(
                    (lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()),
                    "identity failed at n = {n}: {lhs} vs {rhs}"
                );
            }
        }
    }
}
