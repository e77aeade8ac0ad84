//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    /// Scale parameter was zero, negative, or not finite.
    #[error("scale parameter must be a positive finite number, got {0}")]
    InvalidScale(f64),
    /// Shape parameter was not finite.
    #[error("shape parameter must be finite, got {0}")]
    InvalidShape(f64),
    /// Probability argument outside `[0, 1]`.
    #[error("probability must lie in [0, 1], got {0}")]
    InvalidProbability(f64),
    /// Quantile requested at p = 1 for an unbounded distribution.
    #[error("quantile at p = 1 is unbounded when the shape is non-negative")]
    UnboundedQuantile,
    /// Threshold at or past the support endpoint leaves no tail.
    #[error("threshold {threshold} is at or beyond the support endpoint {endpoint}")]
    EmptyTail { threshold: f64, endpoint: f64 },
    /// Residual CV needs a finite second moment (shape < 1/2).
    #[error("residual CV is undefined for shape {0} >= 0.5 (infinite second moment)")]
    CvUndefined(f64),
    /// Coefficient of variation must be positive.
    #[error("coefficient of variation must be a positive finite number, got {0}")]
    InvalidCv(f64),
    /// Asymptotic normality of the residual CV holds only for shape < 1/4.
    #[error("asymptotic results require shape < 0.25, got {0}")]
    ShapeOutOfDomain(f64),
    /// Sample was empty or contained non-finite values.
    #[error("sample must be non-empty with all values finite")]
    InvalidSample,
    /// Too few exceedances above a threshold.
    #[error("need at least {needed} exceedances above {threshold}, found {found}")]
    InsufficientTail {
        threshold: f64,
        needed: usize,
        found: usize,
    },
    /// All exceedances equal the threshold, so the mean excess is zero.
    #[error("all exceedances above {threshold} are equal to it; residual CV is degenerate")]
    DegenerateTail { threshold: f64 },
    /// Maximum-likelihood fitting could not proceed.
    #[error("cannot fit: {0}")]
    FitFailure(&'static str),
    /// A monotone transform was applied outside its domain.
    #[error("transform domain violated: {0}")]
    TransformDomain(&'static str),
    /// Threshold grid construction failed.
    #[error("invalid threshold grid: {0}")]
    InvalidGrid(&'static str),
    /// Catch-all for malformed arguments.
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
