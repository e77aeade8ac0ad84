//! Closed-form generalized Pareto machinery.
//!
//! The distribution function used throughout is
//!
//! ```text
//! F(x) = 1 - (1 + xi*x/psi)^(-1/xi),    psi > 0,
//! ```
//!
//! with shape `xi` and scale `psi`. For `xi >= 0` the support is `x > 0`;
//! for `xi < 0` it is `0 < x < psi/|xi|`. The limit `xi = 0` is the
//! exponential distribution, and all closed forms here dispatch to the
//! exponential branch when `|xi|` falls below [`XI_ZERO_CUTOFF`] because the
//! general expressions become 0/0 there.
//!
//! Two facts carry the rest of the crate:
//!
//! * thresholding is closed: excesses over `t` are again GPD with the same
//!   shape and scale `psi + xi*t`;
//! * the residual coefficient of variation is the constant
//!   `c_xi = sqrt(1/(1 - 2*xi))` whenever `xi < 1/2`, a bijection in `xi`.
//!
//! The asymptotic variance `sigma_xi^2` and the covariance function of the
//! empirical residual-CV process (valid for `xi < 1/4`) are also provided,
//! together with maximum-likelihood fitting.

use alloc::vec::Vec;

use crate::error::Error;
use crate::math;
use crate::rng::UniformSource;
use crate::sample::SampleData;
use crate::Result;

/// Shapes closer to zero than this use the exponential-limit formulas.
pub const XI_ZERO_CUTOFF: f64 = 1e-8;

/// Shape and scale of a generalized Pareto distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GpdParams {
    xi: f64,
    psi: f64,
}

impl GpdParams {
    /// Validated parameters; `psi` must be positive and finite, `xi` finite.
    pub fn new(xi: f64, psi: f64) -> Result<Self> {
        if !xi.is_finite() {
            return Err(Error::InvalidShape(xi));
        }
        if !psi.is_finite() || psi <= 0.0 {
            return Err(Error::InvalidScale(psi));
        }
        Ok(Self { xi, psi })
    }

    /// Shape parameter.
    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Scale parameter.
    pub fn psi(&self) -> f64 {
        self.psi
    }

    /// Upper endpoint of the support: `psi/|xi|` for negative shape,
    /// `+inf` otherwise.
    pub fn support_end(&self) -> f64 {
        if self.xi < 0.0 {
            self.psi / -self.xi
        } else {
            f64::INFINITY
        }
    }

    fn is_exponential(&self) -> bool {
        self.xi.abs() < XI_ZERO_CUTOFF
    }

    /// Distribution function. Zero below the support, one at or past the
    /// upper endpoint when the shape is negative.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if self.is_exponential() {
            return -math::expm1(-x / self.psi);
        }
        let z = self.xi * x / self.psi;
        if 1.0 + z <= 0.0 {
            return 1.0;
        }
        -math::expm1(-math::log1p(z) / self.xi)
    }

    /// Quantile function, the inverse of [`GpdParams::cdf`].
    ///
    /// `p = 1` yields the support endpoint for negative shape and an
    /// [`Error::UnboundedQuantile`] otherwise.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        if p == 1.0 {
            return if self.xi < 0.0 {
                Ok(self.support_end())
            } else {
                Err(Error::UnboundedQuantile)
            };
        }
        if self.is_exponential() {
            return Ok(-self.psi * math::log1p(-p));
        }
        // x = psi*((1-p)^(-xi) - 1)/xi, written via expm1/log1p for accuracy.
        Ok(self.psi * math::expm1(-self.xi * math::log1p(-p)) / self.xi)
    }

    /// `n` inverse-CDF draws from `rng`, returned as a sorted sample.
    pub fn sample<R: UniformSource + ?Sized>(&self, n: usize, rng: &mut R) -> Result<SampleData> {
        if n == 0 {
            return Err(Error::InvalidArgument("sample size must be at least 1"));
        }
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            let u = rng.next_f64();
            values.push(self.quantile(u).expect("uniform draw lies in [0, 1)"));
        }
        SampleData::new(values)
    }

    /// Parameters of the residual distribution over threshold `t`:
    /// the shape is invariant and the scale becomes `psi + xi*t`.
    pub fn residual_params(&self, t: f64) -> Result<GpdParams> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidArgument("threshold must be finite and >= 0"));
        }
        let scale = self.psi + self.xi * t;
        if scale <= 0.0 {
            return Err(Error::EmptyTail {
                threshold: t,
                endpoint: self.support_end(),
            });
        }
        GpdParams::new(self.xi, scale)
    }

    /// Log-likelihood of `sample`; `-inf` when any observation falls
    /// outside the support.
    pub fn log_likelihood(&self, sample: &SampleData) -> f64 {
        log_likelihood_raw(self.xi, self.psi, sample)
    }
}

fn log_likelihood_raw(xi: f64, psi: f64, sample: &SampleData) -> f64 {
    let n = sample.len() as f64;
    if sample.min() < 0.0 {
        return f64::NEG_INFINITY;
    }
    if xi.abs() < XI_ZERO_CUTOFF {
        let sum: f64 = sample.values().iter().sum();
        return -n * math::ln(psi) - sum / psi;
    }
    let k = 1.0 / xi + 1.0;
    let mut acc = -n * math::ln(psi);
    for &x in sample.values() {
        let z = xi * x / psi;
        if 1.0 + z <= 0.0 {
            return f64::NEG_INFINITY;
        }
        acc -= k * math::log1p(z);
    }
    acc
}

/// Residual coefficient of variation of a GPD with shape `xi`:
/// `c_xi = sqrt(1/(1 - 2*xi))`, defined for `xi < 1/2`.
pub fn cv_of_xi(xi: f64) -> Result<f64> {
    if !xi.is_finite() {
        return Err(Error::InvalidShape(xi));
    }
    if xi >= 0.5 {
        return Err(Error::CvUndefined(xi));
    }
    Ok(math::sqrt(1.0 / (1.0 - 2.0 * xi)))
}

/// Shape implied by a residual CV: `xi = (cv^2 - 1)/(2*cv^2)`, the exact
/// inverse of [`cv_of_xi`] on `cv > 0`.
pub fn xi_of_cv(cv: f64) -> Result<f64> {
    if !cv.is_finite() || cv <= 0.0 {
        return Err(Error::InvalidCv(cv));
    }
    Ok((cv * cv - 1.0) / (2.0 * cv * cv))
}

/// Asymptotic standard deviation `sigma_xi` of the empirical residual CV,
/// defined for `xi < 1/4`:
///
/// ```text
/// sigma_xi^2 = (1-xi)^2 (6 xi^2 - xi + 1) / ((1-2xi)^2 (1-3xi) (1-4xi))
/// ```
pub fn asymptotic_sd(xi: f64) -> Result<f64> {
    if !xi.is_finite() {
        return Err(Error::InvalidShape(xi));
    }
    if xi >= 0.25 {
        return Err(Error::ShapeOutOfDomain(xi));
    }
    let a = 1.0 - xi;
    let b = 1.0 - 2.0 * xi;
    let num = a * a * (6.0 * xi * xi - xi + 1.0);
    let den = b * b * (1.0 - 3.0 * xi) * (1.0 - 4.0 * xi);
    Ok(math::sqrt(num / den))
}

/// Covariance function of the limiting Gaussian process of
/// `sqrt(n)(cv_n(t) - c_xi)`, for thresholds `s`, `t` and `xi < 1/4`.
///
/// For `xi = 0` this is `exp(min(s,t)/psi)`; the general form is evaluated
/// with the arguments ordered so that `s <= t`, making the result symmetric.
/// `rho(0,0)` equals `sigma_xi^2`.
pub fn cv_covariance(xi: f64, psi: f64, s: f64, t: f64) -> Result<f64> {
    if !xi.is_finite() {
        return Err(Error::InvalidShape(xi));
    }
    if xi >= 0.25 {
        return Err(Error::ShapeOutOfDomain(xi));
    }
    if !psi.is_finite() || psi <= 0.0 {
        return Err(Error::InvalidScale(psi));
    }
    if !s.is_finite() || !t.is_finite() || s < 0.0 || t < 0.0 {
        return Err(Error::InvalidArgument("thresholds must be finite and >= 0"));
    }
    let (s, t) = if s <= t { (s, t) } else { (t, s) };
    if xi.abs() < XI_ZERO_CUTOFF {
        return Ok(math::exp(s / psi));
    }
    if psi + xi * t <= 0.0 {
        return Err(Error::EmptyTail {
            threshold: t,
            endpoint: psi / -xi,
        });
    }

    let xi2 = xi * xi;
    let xi3 = xi2 * xi;
    let xi4 = xi3 * xi;
    let psi2 = psi * psi;
    let t2 = t * t;
    let st = s * t;

    let pre = math::powf((psi + xi * s) / psi, 1.0 / xi);
    let a = 1.0 - xi;
    let num = 6.0 * xi4 * t2 + 12.0 * psi * xi3 * t + 8.0 * xi3 * st - 9.0 * xi3 * t2
        + 6.0 * psi2 * xi2
        + 8.0 * psi * xi2 * s
        - 10.0 * psi * xi2 * t
        - 2.0 * xi2 * st
        + 3.0 * xi2 * t2
        - psi2 * xi
        - 2.0 * psi * xi * s
        + 4.0 * psi * xi * t
        + psi2;
    let b = 1.0 - 2.0 * xi;
    let ps = psi + xi * s;
    let den = (1.0 - 3.0 * xi) * b * b * (1.0 - 4.0 * xi) * ps * ps;
    Ok(pre * a * a * num / den)
}

// ---------------------------------------------------------------------------
// Maximum likelihood
// ---------------------------------------------------------------------------

/// Outcome of [`mle_fit`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FitResult {
    /// Fitted parameters.
    pub params: GpdParams,
    /// Standard errors for `(xi, psi)` from the inverse observed
    /// information; present when the fit converged, `xi > -0.5`, and the
    /// numerical Hessian was positive definite.
    pub std_errors: Option<(f64, f64)>,
    /// Log-likelihood at the optimum.
    pub log_likelihood: f64,
    /// Whether the optimizer met its tolerances.
    pub converged: bool,
}

/// Fits a GPD to `sample` by maximum likelihood over `(xi, log psi)`.
///
/// Multi-start Nelder-Mead seeded from the CV-based shape estimate plus a
/// grid of offsets; the search is confined to `xi > -1`, where the
/// likelihood is bounded.
pub fn mle_fit(sample: &SampleData) -> Result<FitResult> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::FitFailure("need at least two observations"));
    }
    if sample.min() < 0.0 {
        return Err(Error::FitFailure("observations must be >= 0"));
    }
    if sample.max() <= sample.min() {
        return Err(Error::FitFailure("degenerate sample: all values equal"));
    }

    let max_x = sample.max();
    let mean = sample.mean();
    let sd = {
        let ss: f64 = sample
            .values()
            .iter()
            .map(|&x| (x - mean) * (x - mean))
            .sum();
        math::sqrt(ss / (n as f64 - 1.0))
    };
    let xi_cv = xi_of_cv(sd / mean).unwrap_or(0.0);

    let objective = |v: &[f64; 2]| -> f64 {
        let (xi, ln_psi) = (v[0], v[1]);
        if !(-1.0 + 1e-9..=20.0).contains(&xi) || !(-300.0..=300.0).contains(&ln_psi) {
            return f64::INFINITY;
        }
        let ll = log_likelihood_raw(xi, math::exp(ln_psi), sample);
        if ll.is_finite() {
            -ll
        } else {
            f64::INFINITY
        }
    };

    let mut starts: Vec<[f64; 2]> = Vec::new();
    for offset in [-0.4, -0.2, 0.0, 0.2, 0.4] {
        let xi0 = (xi_cv + offset).clamp(-0.95, 5.0);
        let mut psi0 = if xi0 < 0.99 { mean * (1.0 - xi0) } else { mean };
        if xi0 < 0.0 {
            // Keep the whole sample inside the support at the start point.
            psi0 = psi0.max(1.05 * -xi0 * max_x);
        }
        starts.push([xi0, math::ln(psi0)]);
    }
    starts.push([0.0, math::ln(mean)]);

    let mut best: Option<(NmOutcome, [f64; 2])> = None;
    for start in starts {
        let out = nelder_mead(&objective, start, 0.1, 400, 1e-11, 1e-9);
        if out.f_min.is_finite() {
            match &best {
                Some((b, _)) if b.f_min <= out.f_min => {}
                _ => best = Some((out.clone(), out.x_min)),
            }
        }
    }
    let (out, x) = best.ok_or(Error::FitFailure("likelihood not finite at any start"))?;

    let xi_hat = x[0];
    let psi_hat = math::exp(x[1]);
    let params = GpdParams::new(xi_hat, psi_hat)?;
    let log_likelihood = -out.f_min;

    let std_errors = if xi_hat > -0.5 {
        hessian_std_errors(&objective, x, psi_hat)
    } else {
        None
    };

    Ok(FitResult {
        params,
        std_errors,
        log_likelihood,
        converged: out.converged,
    })
}

/// Standard errors via a central-difference Hessian of the negative
/// log-likelihood in `(xi, ln psi)`, mapped back to `(xi, psi)` by the
/// delta method.
fn hessian_std_errors<F: Fn(&[f64; 2]) -> f64>(
    f: &F,
    x: [f64; 2],
    psi_hat: f64,
) -> Option<(f64, f64)> {
    let mut h = [1e-4 * x[0].abs().max(0.1), 1e-4 * x[1].abs().max(0.1)];
    for _ in 0..10 {
        let eval = |dx: f64, dy: f64| f(&[x[0] + dx, x[1] + dy]);
        let f0 = eval(0.0, 0.0);
        let fs = [
            eval(h[0], 0.0),
            eval(-h[0], 0.0),
            eval(0.0, h[1]),
            eval(0.0, -h[1]),
            eval(h[0], h[1]),
            eval(h[0], -h[1]),
            eval(-h[0], h[1]),
            eval(-h[0], -h[1]),
        ];
        if fs.iter().any(|v| !v.is_finite()) {
            h[0] *= 0.5;
            h[1] *= 0.5;
            continue;
        }
        let h11 = (fs[0] - 2.0 * f0 + fs[1]) / (h[0] * h[0]);
        let h22 = (fs[2] - 2.0 * f0 + fs[3]) / (h[1] * h[1]);
        let h12 = (fs[4] - fs[5] - fs[6] + fs[7]) / (4.0 * h[0] * h[1]);
        let det = h11 * h22 - h12 * h12;
        if h11 > 0.0 && det > 0.0 {
            let var_xi = h22 / det;
            let var_ln_psi = h11 / det;
            let se_xi = math::sqrt(var_xi);
            let se_psi = psi_hat * math::sqrt(var_ln_psi);
            if se_xi.is_finite() && se_psi.is_finite() {
                return Some((se_xi, se_psi));
            }
        }
        return None;
    }
    None
}

#[derive(Debug, Clone)]
struct NmOutcome {
    x_min: [f64; 2],
    f_min: f64,
    converged: bool,
}

/// Two-dimensional Nelder-Mead with standard coefficients.
fn nelder_mead<F: Fn(&[f64; 2]) -> f64>(
    f: &F,
    start: [f64; 2],
    step: f64,
    max_iter: usize,
    ftol: f64,
    xtol: f64,
) -> NmOutcome {
    let guard = |v: f64| if v.is_nan() { f64::INFINITY } else { v };
    let mut simplex = [
        start,
        [start[0] + step, start[1]],
        [start[0], start[1] + step],
    ];
    let mut fv = [
        guard(f(&simplex[0])),
        guard(f(&simplex[1])),
        guard(f(&simplex[2])),
    ];

    let mut converged = false;
    for _ in 0..max_iter {
        // Order vertices: best, middle, worst.
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| fv[a].total_cmp(&fv[b]));
        let (lo, mid, hi) = (idx[0], idx[1], idx[2]);

        let f_spread = (fv[hi] - fv[lo]).abs();
        let x_spread = (simplex[hi][0] - simplex[lo][0])
            .abs()
            .max((simplex[hi][1] - simplex[lo][1]).abs())
            .max((simplex[mid][0] - simplex[lo][0]).abs())
            .max((simplex[mid][1] - simplex[lo][1]).abs());
        if f_spread <= ftol * (fv[lo].abs() + ftol) && x_spread <= xtol {
            converged = true;
            break;
        }

        let centroid = [
            0.5 * (simplex[lo][0] + simplex[mid][0]),
            0.5 * (simplex[lo][1] + simplex[mid][1]),
        ];
        let reflect = [
            centroid[0] + (centroid[0] - simplex[hi][0]),
            centroid[1] + (centroid[1] - simplex[hi][1]),
        ];
        let fr = guard(f(&reflect));

        if fr < fv[lo] {
            let expand = [
                centroid[0] + 2.0 * (centroid[0] - simplex[hi][0]),
                centroid[1] + 2.0 * (centroid[1] - simplex[hi][1]),
            ];
            let fe = guard(f(&expand));
            if fe < fr {
                simplex[hi] = expand;
                fv[hi] = fe;
            } else {
                simplex[hi] = reflect;
                fv[hi] = fr;
            }
        } else if fr < fv[mid] {
            simplex[hi] = reflect;
            fv[hi] = fr;
        } else {
            let contract = [
                centroid[0] + 0.5 * (simplex[hi][0] - centroid[0]),
                centroid[1] + 0.5 * (simplex[hi][1] - centroid[1]),
            ];
            let fc = guard(f(&contract));
            if fc < fv[hi] {
                simplex[hi] = contract;
                fv[hi] = fc;
            } else {
                // Shrink towards the best vertex.
                for i in [mid, hi] {
                    simplex[i] = [
                        simplex[lo][0] + 0.5 * (simplex[i][0] - simplex[lo][0]),
                        simplex[lo][1] + 0.5 * (simplex[i][1] - simplex[lo][1]),
                    ];
                    fv[i] = guard(f(&simplex[i]));
                }
            }
        }
    }

    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| fv[a].total_cmp(&fv[b]));
    NmOutcome {
        x_min: simplex[idx[0]],
        f_min: fv[idx[0]],
        converged,
    }
}
