//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by constructors, evolution, and verification harnesses.
#[derive(Debug, Error)]
pub enum Error {
    /// θ = 0 requested where the defect must be nontrivial (ω = 1 reduces to
    /// the homogeneous walk and the defect-family formulas degenerate).
    #[error("degenerate defect: theta = 0 makes omega = 1, the homogeneous walk")]
    DegenerateDefect,

    /// An input lies outside a formula's domain (z = 0, λ = 0, and similar).
    #[error("domain error: {0}")]
    Domain(&'static str),

    /// The valid interior of a window was consumed by truncation.
    #[error("window exhausted: the valid interior vanished at step {step}")]
    WindowExhausted { step: usize },

    /// The six amplitude-ratio formulas disagree, so no geometric eigenvector
    /// exists for the given parameters.
    #[error("amplitude ratios disagree (spread {spread:.3e}); equality conditions violated")]
    RatioMismatch { spread: f64 },

    /// A ratio or prefactor is an indeterminate form, e.g. at λ = 1 where the
    /// system determinant vanishes identically in z.
    #[error("amplitude ratios undefined: {0}")]
    RatioUndefined(&'static str),

    /// Family parameters violate a constructor's contract.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A truncated-series check was requested outside its convergence region.
    #[error("tail divergent: geometric rate {rate} is not < 1, truncation bound inapplicable")]
    TailDivergent { rate: f64 },

    /// Root refinement failed to reach the requested residual.
    #[error("root finder did not converge within {0} iterations")]
    NoConvergence(usize),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
