//! Monotone maps exchanging heavy and light tails.
//!
//! The residual-CV machinery needs a finite fourth moment (`xi < 1/4`), so
//! heavy-tailed data must be transformed first. Two maps are provided:
//!
//! * `x -> -1/x`, which flips the sign of the extreme value index
//!   asymptotically for any distribution in a maximum domain of attraction;
//! * the exact stabilizing map `z = -1/(x + c) + 1/c = x/(c(x + c))` with
//!   `c = psi/xi`, which sends GPD(`xi`, `psi`) precisely to
//!   GPD(`-xi`, `xi^2/psi`).
//!
//! Both maps are strictly increasing on their domains, so order statistics,
//! exceedance counts, and ranks are preserved.

use alloc::vec::Vec;

use crate::error::Error;
use crate::gpd::{self, GpdParams, XI_ZERO_CUTOFF};
use crate::sample::SampleData;
use crate::Result;

/// The constant of the stabilizing transform, optionally carrying the
/// parameters it was derived from.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StabilizeSpec {
    c: f64,
    source_params: Option<GpdParams>,
}

impl StabilizeSpec {
    /// Spec from an explicit positive constant.
    pub fn with_constant(c: f64) -> Result<Self> {
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::TransformDomain(
                "transform constant must be positive (negative constants require source parameters)",
            ));
        }
        Ok(Self {
            c,
            source_params: None,
        })
    }

    /// Spec derived from GPD parameters as `c = psi/xi`.
    ///
    /// For positive shape this gives `c > 0`; for negative shape it gives
    /// `c = -sigma`, the boundary of the monotonicity condition. A zero
    /// shape has no stabilizing transform.
    pub fn from_params(params: GpdParams) -> Result<Self> {
        if params.xi().abs() < XI_ZERO_CUTOFF {
            return Err(Error::TransformDomain(
                "shape must be nonzero to derive the transform constant",
            ));
        }
        Ok(Self {
            c: params.psi() / params.xi(),
            source_params: Some(params),
        })
    }

    /// Spec derived from a maximum-likelihood fit of `sample`; the fitted
    /// shape must be positive (there is nothing to stabilize otherwise).
    pub fn from_fit(sample: &SampleData) -> Result<Self> {
        let fit = gpd::mle_fit(sample)?;
        if fit.params.xi() <= 0.0 {
            return Err(Error::TransformDomain(
                "fitted shape must be positive to derive the transform constant",
            ));
        }
        Self::from_params(fit.params)
    }

    /// The transform constant.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Parameters the constant was derived from, if any.
    pub fn source_params(&self) -> Option<GpdParams> {
        self.source_params
    }
}

/// Maps every value to `-1/x`. Requires strictly positive input; the
/// output is negative, sorted, and applying the map twice recovers the
/// input.
pub fn negate_reciprocal(sample: &SampleData) -> Result<SampleData> {
    if sample.min() <= 0.0 {
        return Err(Error::TransformDomain(
            "all values must be strictly positive",
        ));
    }
    let mapped: Vec<f64> = sample.values().iter().map(|&x| -1.0 / x).collect();
    Ok(SampleData::from_sorted(mapped))
}

/// The stabilizing transform `z = x/(c(x + c))`.
///
/// Requires non-negative input and, for a negative constant, every value
/// strictly below `-c` so the map stays monotone.
pub fn stabilize(sample: &SampleData, spec: &StabilizeSpec) -> Result<SampleData> {
    let c = spec.c;
    if sample.min() < 0.0 {
        return Err(Error::TransformDomain("all values must be >= 0"));
    }
    if c < 0.0 && sample.max() >= -c {
        return Err(Error::TransformDomain(
            "a value at or beyond -c breaks monotonicity",
        ));
    }
    let mapped: Vec<f64> = sample.values().iter().map(|&x| x / (c * (x + c))).collect();
    Ok(SampleData::from_sorted(mapped))
}

/// Inverse of [`stabilize`]: `x = c^2 z / (1 - c z)`.
///
/// For `c > 0` the input must lie in `[0, 1/c)`.
pub fn inverse_stabilize(sample: &SampleData, spec: &StabilizeSpec) -> Result<SampleData> {
    let c = spec.c;
    if sample.min() < 0.0 {
        return Err(Error::TransformDomain("all values must be >= 0"));
    }
    if c > 0.0 && sample.max() >= 1.0 / c {
        return Err(Error::TransformDomain("values must lie strictly below 1/c"));
    }
    let mapped: Vec<f64> = sample
        .values()
        .iter()
        .map(|&z| c * c * z / (1.0 - c * z))
        .collect();
    Ok(SampleData::from_sorted(mapped))
}
