//! Validated sample container and empirical-distribution helpers.

use alloc::vec::Vec;

use crate::error::Error;
use crate::Result;

/// An ordered sample of finite observations.
///
/// Values are kept sorted ascending; construction rejects empty input and
/// non-finite entries, so every downstream routine can assume both.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SampleData {
    values: Vec<f64>,
}

impl SampleData {
    /// Validates and sorts `values` into a sample.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSample);
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Self { values })
    }

    /// Wraps values that are already sorted ascending and finite.
    pub(crate) fn from_sorted(values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty());
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        Self { values }
    }

    /// The observations, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of observations.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API completeness.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Smallest observation.
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    /// Largest observation.
    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Arithmetic mean.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// New sample with `delta` added to every observation.
    pub fn offset_by(&self, delta: f64) -> SampleData {
        SampleData::from_sorted(self.values.iter().map(|v| v + delta).collect())
    }

    /// The exceedances of `t`: values `>= t` (inclusive) or `> t` (strict).
    pub fn tail_from(&self, t: f64, inclusive: bool) -> &[f64] {
        let idx = if inclusive {
            self.values.partition_point(|&v| v < t)
        } else {
            self.values.partition_point(|&v| v <= t)
        };
        &self.values[idx..]
    }

    /// Number of exceedances of `t` under the chosen convention.
    pub fn count_tail(&self, t: f64, inclusive: bool) -> usize {
        self.tail_from(t, inclusive).len()
    }
}

/// Kolmogorov-Smirnov distance between the empirical distribution of
/// `sample` and the model distribution function `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &SampleData, cdf: F) -> f64 {
    let n = sample.len() as f64;
    let mut sup = 0.0_f64;
    for (i, &x) in sample.values().iter().enumerate() {
        let f = cdf(x);
        sup = sup.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    sup
}
