//! Empirical residual statistics over thresholds.
//!
//! For a threshold `t`, the residual sample is the set of excesses
//! `x_j - t` over the exceedances of `t`. Its coefficient of variation
//! (standard deviation over mean, n-1 denominator) is constant in `t`
//! under a GPD, which is what the CV-plot diagnoses: plot the residual CV
//! at every order-statistic threshold and look for a flat stretch.
//!
//! Exceedances can be selected inclusively (`x_j >= t`, the convention of
//! the reference implementation and the default everywhere in this crate)
//! or strictly (`x_j > t`); the two differ only when observations tie the
//! threshold exactly.

use alloc::vec::Vec;

use crate::error::Error;
use crate::gpd;
use crate::math;
use crate::sample::SampleData;
use crate::Result;

/// Empirical quantile definitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum QuantileMethod {
    /// `inf { x : F_n(x) >= p }` — always an order statistic.
    LowerStep,
    /// Linear interpolation at `h = (n-1)p + 1` between adjacent order
    /// statistics (the R default, type 7).
    Interpolated,
}

/// Residual coefficient of variation of `sample` over threshold `t`.
///
/// Requires at least two exceedances with a positive mean excess. The
/// standard deviation uses the n-1 denominator.
pub fn residual_cv(sample: &SampleData, t: f64, inclusive: bool) -> Result<f64> {
    let tail = sample.tail_from(t, inclusive);
    if tail.len() < 2 {
        return Err(Error::InsufficientTail {
            threshold: t,
            needed: 2,
            found: tail.len(),
        });
    }
    let n = tail.len() as f64;
    let mean = tail.iter().map(|x| x - t).sum::<f64>() / n;
    if mean <= 0.0 {
        return Err(Error::DegenerateTail { threshold: t });
    }
    let ss: f64 = tail
        .iter()
        .map(|x| {
            let d = (x - t) - mean;
            d * d
        })
        .sum();
    Ok(math::sqrt(ss / (n - 1.0)) / mean)
}

/// One point of a CV-plot.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CvPoint {
    /// Threshold (an order statistic of the sample).
    pub threshold: f64,
    /// Number of exceedances under the chosen convention.
    pub n_exceed: usize,
    /// Residual CV at this threshold.
    pub cv: f64,
    /// Lower edge of the pointwise confidence band, when available.
    pub band_low: Option<f64>,
    /// Upper edge of the pointwise confidence band, when available.
    pub band_high: Option<f64>,
}

/// Residual CV evaluated at every order-statistic threshold.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CvPlot {
    /// Plot points, thresholds ascending and exceedance counts strictly
    /// decreasing.
    pub points: Vec<CvPoint>,
    /// The constant `c_xi` reference line when a shape was supplied.
    pub reference_cv: Option<f64>,
    /// Confidence level the bands were built for.
    pub level: f64,
}

/// One point of a mean-excess plot.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MePoint {
    /// Threshold (an order statistic of the sample).
    pub threshold: f64,
    /// Number of exceedances (inclusive convention).
    pub n_exceed: usize,
    /// Mean excess over the threshold.
    pub mean_excess: f64,
}

/// Builds the CV-plot of `sample` over every distinct order-statistic
/// threshold that keeps at least `min_tail` exceedances.
///
/// When `xi_ref` is given with `xi_ref < 0.25`, each point carries the
/// pointwise asymptotic band `c_xi ± z_(1+level)/2 · sigma_xi / sqrt(n(t))`
/// and the plot records `c_xi` as its reference line. For
/// `0.25 <= xi_ref < 0.5` the reference line is still available but the
/// bands are not (outside the asymptotic-normality domain).
pub fn cv_plot(
    sample: &SampleData,
    min_tail: usize,
    xi_ref: Option<f64>,
    level: f64,
    inclusive: bool,
) -> Result<CvPlot> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidProbability(level));
    }
    if min_tail < 2 {
        return Err(Error::InvalidArgument("min_tail must be at least 2"));
    }
    if sample.len() <= min_tail {
        return Err(Error::InsufficientTail {
            threshold: sample.min(),
            needed: min_tail + 1,
            found: sample.len(),
        });
    }

    let reference_cv = xi_ref.and_then(|x| gpd::cv_of_xi(x).ok());
    let band = match xi_ref {
        Some(x) if x < 0.25 => Some((
            gpd::cv_of_xi(x)?,
            gpd::asymptotic_sd(x)?,
            math::normal_quantile(0.5 * (1.0 + level)),
        )),
        _ => None,
    };

    let v = sample.values();
    let n = v.len();
    let (suf_sum, suf_sq) = suffix_sums(v);

    let mut points = Vec::new();
    for k in 0..n {
        if k > 0 && v[k] == v[k - 1] {
            continue;
        }
        let t = v[k];
        // First retained index: ties are contiguous, so the inclusive tail
        // starts at k; the strict tail starts past the tie block.
        let i0 = if inclusive {
            k
        } else {
            k + v[k..].partition_point(|&x| x <= t)
        };
        let cnt = n - i0;
        if cnt < min_tail || cnt < 2 {
            break;
        }
        let cntf = cnt as f64;
        let s1 = suf_sum[i0] - cntf * t;
        let mean = s1 / cntf;
        if mean <= 0.0 {
            continue;
        }
        let s2 = suf_sq[i0] - 2.0 * t * suf_sum[i0] + cntf * t * t;
        let var = ((s2 - s1 * s1 / cntf) / (cntf - 1.0)).max(0.0);
        let cv = math::sqrt(var) / mean;
        let (band_low, band_high) = match band {
            Some((c, sd, z)) => {
                let half = z * sd / math::sqrt(cntf);
                (Some(c - half), Some(c + half))
            }
            None => (None, None),
        };
        points.push(CvPoint {
            threshold: t,
            n_exceed: cnt,
            cv,
            band_low,
            band_high,
        });
    }

    Ok(CvPlot {
        points,
        reference_cv,
        level,
    })
}

/// Mean excess at every distinct order-statistic threshold keeping at
/// least `min_tail` exceedances (inclusive convention).
pub fn mean_excess_plot(sample: &SampleData, min_tail: usize) -> Result<Vec<MePoint>> {
    if min_tail < 1 {
        return Err(Error::InvalidArgument("min_tail must be at least 1"));
    }
    if sample.len() <= min_tail {
        return Err(Error::InsufficientTail {
            threshold: sample.min(),
            needed: min_tail + 1,
            found: sample.len(),
        });
    }
    let v = sample.values();
    let n = v.len();
    let (suf_sum, _) = suffix_sums(v);
    let mut points = Vec::new();
    for k in 0..n {
        if k > 0 && v[k] == v[k - 1] {
            continue;
        }
        let t = v[k];
        let cnt = n - k;
        if cnt < min_tail {
            break;
        }
        let mean = (suf_sum[k] - cnt as f64 * t) / cnt as f64;
        points.push(MePoint {
            threshold: t,
            n_exceed: cnt,
            mean_excess: mean,
        });
    }
    Ok(points)
}

/// Empirical quantile of `sample` at probability `p`.
pub fn empirical_quantile(sample: &SampleData, p: f64, method: QuantileMethod) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let v = sample.values();
    let n = v.len();
    match method {
        QuantileMethod::LowerStep => {
            // inf { x : F_n(x) >= p } = x_(ceil(n p)), with p = 0 giving the minimum.
            let k = math::ceil(n as f64 * p) as usize;
            Ok(v[k.max(1) - 1])
        }
        QuantileMethod::Interpolated => {
            let h = (n as f64 - 1.0) * p;
            let lo = math::floor(h) as usize;
            let hi = (lo + 1).min(n - 1);
            Ok(v[lo] + (h - lo as f64) * (v[hi] - v[lo]))
        }
    }
}

fn suffix_sums(v: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = v.len();
    let mut sum = alloc::vec![0.0; n + 1];
    let mut sq = alloc::vec![0.0; n + 1];
    for i in (0..n).rev() {
        sum[i] = sum[i + 1] + v[i];
        sq[i] = sq[i + 1] + v[i] * v[i];
    }
    (sum, sq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(values: &[f64]) -> SampleData {
        SampleData::new(values.to_vec()).unwrap()
    }

    #[test]
    fn cv_hand_computed_values() {
        let s = sample(&[1.0, 2.0, 3.0, 4.0]);
        // Excesses over 0: mean 2.5, sd sqrt(5/3).
        let cv = residual_cv(&s, 0.0, true).unwrap();
        assert!((cv - (5.0_f64 / 3.0).sqrt() / 2.5).abs() < 1e-12);
        assert!((cv - 0.51640).abs() < 1e-5);
        // Excesses over 2 inclusive: {0, 1, 2}, mean 1, sd 1.
        let cv2 = residual_cv(&s, 2.0, true).unwrap();
        assert!((cv2 - 1.0).abs() < 1e-12);
        // Scale invariance.
        let s10 = sample(&[10.0, 20.0, 30.0, 40.0]);
        assert!((residual_cv(&s10, 0.0, true).unwrap() - cv).abs() < 1e-12);
    }

    #[test]
    fn cv_convention_and_errors() {
        let s = sample(&[1.0, 2.0, 3.0, 4.0]);
        // Strict at 2 keeps {3, 4} only.
        let strict = residual_cv(&s, 2.0, false).unwrap();
        assert!((strict - (0.5_f64).sqrt() / 1.5).abs() < 1e-12);
        assert!(matches!(
            residual_cv(&s, 4.0, true),
            Err(Error::InsufficientTail { found: 1, .. })
        ));
        let tied = sample(&[1.0, 5.0, 5.0, 5.0]);
        assert!(matches!(
            residual_cv(&tied, 5.0, true),
            Err(Error::DegenerateTail { .. })
        ));
    }

    #[test]
    fn quantile_methods() {
        let s = sample(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(
            empirical_quantile(&s, 0.5, QuantileMethod::LowerStep).unwrap(),
            2.0
        );
        assert_eq!(
            empirical_quantile(&s, 0.5, QuantileMethod::Interpolated).unwrap(),
            2.5
        );
        for m in [QuantileMethod::LowerStep, QuantileMethod::Interpolated] {
            assert_eq!(empirical_quantile(&s, 0.0, m).unwrap(), 1.0);
            assert_eq!(empirical_quantile(&s, 1.0, m).unwrap(), 4.0);
        }
        assert!(empirical_quantile(&s, -0.1, QuantileMethod::LowerStep).is_err());
        assert!(empirical_quantile(&s, 1.1, QuantileMethod::Interpolated).is_err());
    }

    #[test]
    fn cv_plot_points_match_direct_computation() {
        let s = sample(&[0.4, 1.0, 1.7, 2.0, 3.1, 4.0, 5.5, 6.1, 7.9, 9.0]);
        let plot = cv_plot(&s, 3, None, 0.9, true).unwrap();
        assert!(!plot.points.is_empty());
        let mut prev = usize::MAX;
        for pt in &plot.points {
            assert!(pt.n_exceed < prev);
            prev = pt.n_exceed;
            assert_eq!(pt.n_exceed, s.count_tail(pt.threshold, true));
            let direct = residual_cv(&s, pt.threshold, true).unwrap();
            assert!(
                (pt.cv - direct).abs() < 1e-9,
                "suffix-sum cv {} vs direct {}",
                pt.cv,
                direct
            );
            assert!(pt.band_low.is_none());
        }
    }

    #[test]
    fn cv_plot_band_construction() {
        // 101 points: the second threshold keeps exactly 100 exceedances.
        let values: Vec<f64> = (0..101).map(|i| i as f64).collect();
        let s = SampleData::new(values).unwrap();
        let plot = cv_plot(&s, 8, Some(0.0), 0.90, true).unwrap();
        assert_eq!(plot.reference_cv, Some(1.0));
        let pt = plot.points.iter().find(|p| p.n_exceed == 100).unwrap();
        let z = 1.644_853_626_951_472_2;
        assert!((pt.band_low.unwrap() - (1.0 - z / 10.0)).abs() < 1e-9);
        assert!((pt.band_high.unwrap() - (1.0 + z / 10.0)).abs() < 1e-9);
        assert!((pt.band_low.unwrap() - 0.83551).abs() < 1e-5);
        assert!((pt.band_high.unwrap() - 1.16449).abs() < 1e-5);
    }

    #[test]
    fn cv_plot_out_of_domain_reference_drops_bands() {
        let values: Vec<f64> = (0..50).map(|i| 1.0 + i as f64).collect();
        let s = SampleData::new(values).unwrap();
        let plot = cv_plot(&s, 8, Some(0.3), 0.90, true).unwrap();
        assert!(plot.reference_cv.is_some());
        assert!(plot.points.iter().all(|p| p.band_low.is_none()));
        // Shape past 0.5 has no reference CV either.
        let plot2 = cv_plot(&s, 8, Some(0.6), 0.90, true).unwrap();
        assert!(plot2.reference_cv.is_none());
    }

    #[test]
    fn cv_plot_insufficient_tail() {
        let s = sample(&[1.0, 2.0, 3.0]);
        assert!(matches!(
            cv_plot(&s, 3, None, 0.9, true),
            Err(Error::InsufficientTail { .. })
        ));
    }

    #[test]
    fn mean_excess_values() {
        let s = sample(&[1.0, 2.0, 3.0, 4.0]);
        let plot = mean_excess_plot(&s, 2).unwrap();
        let at2 = plot
            .iter()
            .find(|p| p.threshold == 2.0)
            .expect("threshold 2 present");
        assert!((at2.mean_excess - 1.0).abs() < 1e-12);
        // Linearity under scaling.
        let s3 = sample(&[3.0, 6.0, 9.0, 12.0]);
        let plot3 = mean_excess_plot(&s3, 2).unwrap();
        let at6 = plot3.iter().find(|p| p.threshold == 6.0).unwrap();
        assert!((at6.mean_excess - 3.0).abs() < 1e-12);
    }
}
