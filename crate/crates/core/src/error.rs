//! Shared error type. Every fallible operation in the library funnels into
//! [`Error`] so callers can match on the failure class instead of parsing
//! strings.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Construction parameters violate a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An eigenvalue vector has the wrong length for the cone dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Evaluation was requested outside the closed cone.
    #[error("eigenvalue vector outside the closed cone (min deformed sigma_j = {min_sigma:.3e})")]
    OutsideCone { min_sigma: f64 },

    /// A grid-sampled field left the admissible cone at a node.
    #[error("inadmissible state at node {node} (r = {r:.6}): min deformed sigma_j = {min_sigma:.3e}")]
    Inadmissible { node: usize, r: f64, min_sigma: f64 },

    /// A profile that must stay positive touched zero or went negative.
    #[error("positivity failure at r = {r:.6}: value = {value:.6e}")]
    Positivity { r: f64, value: f64 },

    /// Tridiagonal elimination hit a vanishing pivot.
    #[error("singular tridiagonal system at row {row}")]
    SingularSystem { row: usize },

    /// Newton could not find any admissible decreasing step from the current
    /// iterate; callers should move to a continuation schedule.
    #[error(
        "no admissible decreasing step at iteration {iteration} (residual {residual:.3e}); \
         try a continuation schedule with a closer start"
    )]
    StepStall { iteration: usize, residual: f64 },

    /// The initial guess itself is outside the cone, so the iteration cannot
    /// start; callers should move to a continuation schedule.
    #[error(
        "initial guess inadmissible at node {node} (r = {r:.6}, min deformed sigma_j = {min_sigma:.3e}); \
         try a continuation schedule from an admissible profile"
    )]
    InadmissibleStart { node: usize, r: f64, min_sigma: f64 },

    /// A run precondition checked on data (not on parameters) failed.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Report or file output failed.
    #[error("output error: {0}")]
    Output(String),
}

pub type Result<T> = std::result::Result<T, Error>;
