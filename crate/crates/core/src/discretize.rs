//! Uniform radial grids, second-order difference stencils, and the
//! tridiagonal solve. The left end is either a Dirichlet boundary or a
//! symmetry axis at `r = 0`; a symmetry axis reflects values through a ghost
//! node (`u_{-1} = u_1`), which makes the first derivative vanish there
//! exactly and keeps the second-derivative stencil second order for even
//! profiles.

use crate::error::{Error, Result};

/// Behavior of the left grid end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeftEnd {
    /// Plain boundary node carrying Dirichlet data.
    Dirichlet,
    /// Symmetry axis; requires the grid to start at `r = 0`.
    Symmetry,
}

/// Uniform grid on `[r_min, r_max]` with at least 5 nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    r_min: f64,
    r_max: f64,
    nodes: usize,
    left: LeftEnd,
}

impl Grid {
    pub fn new(r_min: f64, r_max: f64, nodes: usize, left: LeftEnd) -> Result<Self> {
        if !(r_max > r_min) || !r_min.is_finite() || !r_max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid needs r_max > r_min, got [{r_min}, {r_max}]"
            )));
        }
        if nodes < 5 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 5 nodes, got {nodes}"
            )));
        }
        if left == LeftEnd::Symmetry && r_min != 0.0 {
            return Err(Error::InvalidParameter(format!(
                "symmetry axis requires r_min = 0, got {r_min}"
            )));
        }
        if left == LeftEnd::Dirichlet && r_min < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "radial grid cannot start below zero, got {r_min}"
            )));
        }
        Ok(Grid { r_min, r_max, nodes, left })
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn len(&self) -> usize {
        self.nodes
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn left(&self) -> LeftEnd {
        self.left
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.nodes - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.r_min + self.spacing() * i as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.nodes).map(|i| self.node(i)).collect()
    }

    fn check_values(&self, values: &[f64]) -> Result<()> {
        if values.len() != self.nodes {
            return Err(Error::DimensionMismatch {
                expected: self.nodes,
                got: values.len(),
            });
        }
        Ok(())
    }
}

/// First derivative, second order everywhere: central stencils inside,
/// one-sided three-point stencils at Dirichlet ends, exact zero on a
/// symmetry axis.
pub fn d1(grid: &Grid, values: &[f64]) -> Result<Vec<f64>> {
    grid.check_values(values)?;
    let h = grid.spacing();
    let m = values.len();
    let mut out = vec![0.0; m];
    for i in 1..m - 1 {
        out[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    }
    out[0] = match grid.left() {
        LeftEnd::Symmetry => 0.0,
        LeftEnd::Dirichlet => (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h),
    };
    out[m - 1] = (3.0 * values[m - 1] - 4.0 * values[m - 2] + values[m - 3]) / (2.0 * h);
    Ok(out)
}

/// Second derivative, second order everywhere: central stencils inside,
/// one-sided four-point stencils at Dirichlet ends, ghost reflection on a
/// symmetry axis.
pub fn d2(grid: &Grid, values: &[f64]) -> Result<Vec<f64>> {
    grid.check_values(values)?;
    let h2 = grid.spacing() * grid.spacing();
    let m = values.len();
    let mut out = vec![0.0; m];
    for i in 1..m - 1 {
        out[i] = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / h2;
    }
    out[0] = match grid.left() {
        LeftEnd::Symmetry => 2.0 * (values[1] - values[0]) / h2,
        LeftEnd::Dirichlet => {
            (2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]) / h2
        }
    };
    out[m - 1] =
        (2.0 * values[m - 1] - 5.0 * values[m - 2] + 4.0 * values[m - 3] - values[m - 4]) / h2;
    Ok(out)
}

/// Tridiagonal system `sub[i-1] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`.
/// `sub` and `sup` have one entry less than `diag`.
#[derive(Debug, Clone)]
pub struct BandedSystem {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl BandedSystem {
    pub fn zeroed(n: usize) -> Self {
        BandedSystem {
            sub: vec![0.0; n.saturating_sub(1)],
            diag: vec![0.0; n],
            sup: vec![0.0; n.saturating_sub(1)],
            rhs: vec![0.0; n],
        }
    }

    /// Matrix-vector product, for residual checks.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.sub[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.sup[i] * x[i + 1];
            }
            out[i] = v;
        }
        out
    }

    /// Largest absolute row sum, a cheap matrix norm for residual contracts.
    pub fn row_sum_norm(&self) -> f64 {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i].abs();
                if i > 0 {
                    v += self.sub[i - 1].abs();
                }
                if i + 1 < n {
                    v += self.sup[i].abs();
                }
                v
            })
            .fold(0.0, f64::max)
    }
}

/// Thomas elimination with a vanishing-pivot guard. The guard compares each
/// pivot against the row's off-diagonal mass scaled down to rounding level,
/// so structurally singular systems are reported instead of producing
/// infinities.
pub fn solve_banded(system: &BandedSystem) -> Result<Vec<f64>> {
    let n = system.diag.len();
    if n == 0 {
        return Err(Error::InvalidParameter("empty tridiagonal system".into()));
    }
    if system.sub.len() != n - 1 || system.sup.len() != n - 1 || system.rhs.len() != n {
        return Err(Error::InvalidParameter(
            "tridiagonal band lengths are inconsistent".into(),
        ));
    }
    let scale = system.row_sum_norm().max(f64::MIN_POSITIVE);
    let tiny = 1e-14 * scale;

    let mut c = vec![0.0; n - 1];
    let mut d = vec![0.0; n];
    let mut pivot = system.diag[0];
    if pivot.abs() <= tiny {
        return Err(Error::SingularSystem { row: 0 });
    }
    if n > 1 {
        c[0] = system.sup[0] / pivot;
    }
    d[0] = system.rhs[0] / pivot;
    for i in 1..n {
        pivot = system.diag[i] - system.sub[i - 1] * c[i - 1];
        if pivot.abs() <= tiny {
            return Err(Error::SingularSystem { row: i });
        }
        if i < n - 1 {
            c[i] = system.sup[i] / pivot;
        }
        d[i] = (system.rhs[i] - system.sub[i - 1] * d[i - 1]) / pivot;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}
