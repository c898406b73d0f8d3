//! Numerical machinery for fully nonlinear conformal curvature equations in
//! radial symmetry.
//!
//! The library is organized around one pipeline:
//!
//! * [`cones`] defines elementary symmetric cones, their trace-modified
//!   deformations, and the concave 1-homogeneous functionals `f = sigma_k^{1/k}`
//!   evaluated on Schouten eigenvalues.
//! * [`geometry`] supplies exact eigenvalue formulas for warped-product and
//!   conformally flat radial metrics, asymptotic end conditions, and weighted
//!   decay reports.
//! * [`discretize`] holds the uniform-grid stencils and the tridiagonal solve
//!   everything else is built on.
//! * [`solver`] solves the Dirichlet problem `f(lambda(+/- A)) = psi` with a
//!   damped Newton iteration that never leaves the admissible cone, plus the
//!   linear conformal-Laplacian comparison solve.
//! * [`exhaustion`] nests Dirichlet stages over growing radii and classifies
//!   the limit behavior (interior limit versus escaping normalization).
//! * [`verify`] bundles the cross-checks the command line exposes.
//!
//! All floating point work is `f64`. Grids are uniform; eigenvector order is
//! radial entry first, then the `n - 1` equal tangential entries.

pub mod cones;
pub mod discretize;
pub mod error;
pub mod exhaustion;
pub mod geometry;
pub mod report;
pub mod solver;
pub mod verify;

pub use error::Error;
