//! Linear comparison solve: the conformal Laplacian `-Delta_g + c_n R_g`
//! with `c_n = (n-2)/(4(n-1))`, radially reduced on a background metric.
//! Positive solutions are the comparison profiles for positive-case runs and
//! the degenerate scalar-curvature limit: `(2/(n-2)) ln Phi` is the conformal
//! log factor whose metric carries the factor `Phi^{4/(n-2)}`.

use crate::discretize::{solve_banded, BandedSystem, Grid, LeftEnd};
use crate::error::{Error, Result};
use crate::geometry::RadialMetric;

/// Solves `-Delta_g Phi + c_n R_g Phi = 0` with Dirichlet data on the grid.
/// For conformally flat backgrounds the equation is multiplied through by the
/// positive factor `e^{2 w0}`, which leaves the zero set unchanged and keeps
/// the rows polynomial in the node values. A symmetry axis uses the ghost
/// reflection; the angular part of the Laplacian collapses there onto the
/// second derivative with multiplicity `n` (flat) or 1 (warped product, where
/// the warping slope vanishes at the axis). The solution must come out
/// strictly positive, otherwise [`Error::Positivity`] reports the first
/// crossing.
pub fn conformal_laplacian_solve(
    background: &RadialMetric,
    grid: &Grid,
    left_value: Option<f64>,
    right_value: f64,
) -> Result<Vec<f64>> {
    let n = background.dimension() as f64;
    let cn = (n - 2.0) / (4.0 * (n - 1.0));
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
        LeftEnd::Dirichlet => {
            if left_value.is_none() {
                return Err(Error::InvalidParameter(
                    "Dirichlet left end needs boundary data".into(),
                ));
            }
        }
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
    let m = radii.len();
    let h = grid.spacing();
    let h2 = h * h;
    let mut sys = BandedSystem::zeroed(m);

    // Drift and potential per node: -(Phi'' + beta Phi') + v Phi = 0.
    let mut beta = vec![0.0; m];
    let mut v = vec![0.0; m];
    for (i, &r) in radii.iter().enumerate() {
        if i == 0 && grid.left() == LeftEnd::Symmetry {
            continue;
        }
        let scalar = background.scalar_curvature(r)?;
        match background {
            RadialMetric::ConformallyFlat { factor, .. } => {
                let (w0, dw0, _) = factor.eval(r)?;
                beta[i] = (n - 1.0) / r + (n - 2.0) * dw0;
                v[i] = cn * scalar * (2.0 * w0).exp();
            }
            RadialMetric::WarpedProduct { warping, .. } => {
                let (phi, dphi, _) = warping.eval(r)?;
                if phi <= 0.0 {
                    return Err(Error::Positivity { r, value: phi });
                }
                beta[i] = (n - 1.0) * dphi / phi;
                v[i] = cn * scalar;
            }
        }
    }

    match grid.left() {
        LeftEnd::Dirichlet => {
            sys.diag[0] = 1.0;
            sys.rhs[0] = left_value.unwrap();
        }
        LeftEnd::Symmetry => {
            let r0 = radii[0];
            let scalar = background.scalar_curvature(r0)?;
            let (mult, v0) = match background {
                RadialMetric::ConformallyFlat { factor, .. } => {
                    let (w0, _, _) = factor.eval(r0)?;
                    (n, cn * scalar * (2.0 * w0).exp())
                }
                RadialMetric::WarpedProduct { .. } => (1.0, cn * scalar),
            };
            sys.diag[0] = 2.0 * mult / h2 + v0;
            sys.sup[0] = -2.0 * mult / h2;
            sys.rhs[0] = 0.0;
        }
    }
    for i in 1..m - 1 {
        sys.sub[i - 1] = -1.0 / h2 + beta[i] / (2.0 * h);
        sys.diag[i] = 2.0 / h2 + v[i];
        sys.sup[i] = -1.0 / h2 - beta[i] / (2.0 * h);
        sys.rhs[i] = 0.0;
    }
    sys.diag[m - 1] = 1.0;
    sys.sub[m - 2] = 0.0;
    sys.rhs[m - 1] = right_value;

    let phi = solve_banded(&sys)?;
    for (i, &value) in phi.iter().enumerate() {
        if !(value > 0.0) {
            return Err(Error::Positivity { r: radii[i], value });
        }
    }
    Ok(phi)
}

/// `(2/(n-2)) ln Phi` per node: the conformal log factor of a positive
/// conformal-Laplacian profile.
pub fn conformal_log_profile(grid: &Grid, n: usize, phi: &[f64]) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "dimension must be at least 3, got {n}"
        )));
    }
    if phi.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            got: phi.len(),
        });
    }
    let power = 2.0 / (n as f64 - 2.0);
    phi.iter()
        .enumerate()
        .map(|(i, &value)| {
            if !(value > 0.0) {
                return Err(Error::Positivity { r: grid.node(i), value });
            }
            Ok(power * value.ln())
        })
        .collect()
}
