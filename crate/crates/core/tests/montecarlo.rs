//! Seeded Monte-Carlo checks of the distributional guarantees.

use evtail_core::gpd::{self, GpdParams};
use evtail_core::residual_cv::{cv_plot, residual_cv};
use evtail_core::rng::SplitMix64;
use evtail_core::transforms::{stabilize, StabilizeSpec};
use evtail_core::{ks_statistic, SampleData};

fn draw(xi: f64, psi: f64, n: usize, seed: u64) -> SampleData {
    GpdParams::new(xi, psi)
        .unwrap()
        .sample(n, &mut SplitMix64::new(seed))
        .unwrap()
}

#[test]
fn sampler_matches_exponential_cdf() {
    let params = GpdParams::new(0.0, 1.0).unwrap();
    let sample = draw(0.0, 1.0, 100_000, 2024);
    let d = ks_statistic(&sample, |x| params.cdf(x));
    assert!(d < 0.01, "KS distance {d}");
}

#[test]
fn sampler_matches_bounded_cdf() {
    let params = GpdParams::new(-0.5, 1.0).unwrap();
    let sample = draw(-0.5, 1.0, 100_000, 2025);
    let d = ks_statistic(&sample, |x| params.cdf(x));
    assert!(d < 0.01, "KS distance {d}");
}

#[test]
fn sampler_mean_matches_formula() {
    // GPD mean is psi/(1 - xi) for xi < 1.
    let sample = draw(0.5, 7.0, 100_000, 7);
    let mean = sample.mean();
    assert!((mean - 14.0).abs() / 14.0 < 0.05, "mean {mean}");
}

#[test]
fn residual_closure_of_exceedance_excesses() {
    // Excesses over t from a GPD(xi, psi) sample follow GPD(xi, psi + xi t).
    for &(xi, psi) in &[(-0.5, 2.0), (0.0, 2.0), (0.3, 2.0)] {
        let params = GpdParams::new(xi, psi).unwrap();
        let sample = draw(xi, psi, 1_000_000, 31 + xi.to_bits() % 100);
        for &t in &[0.5, 2.0] {
            let residual = params.residual_params(t).unwrap();
            let excesses: Vec<f64> = sample.tail_from(t, false).iter().map(|x| x - t).collect();
            assert!(excesses.len() > 10_000);
            let excess_sample = SampleData::new(excesses).unwrap();
            let d = ks_statistic(&excess_sample, |x| residual.cdf(x));
            assert!(d < 0.01, "xi={xi}, t={t}: KS {d}");
        }
    }
}

#[test]
fn stabilizing_map_is_distribution_exact() {
    // GPD(xi, psi) maps to GPD(-xi, xi^2/psi) under z = x/(c(x+c)), c = psi/xi.
    for &(xi, psi, seed) in &[(0.5, 7.0, 11), (0.2, 1.0, 12), (-0.3, 1.0, 13)] {
        let source = GpdParams::new(xi, psi).unwrap();
        let target = GpdParams::new(-xi, xi * xi / psi).unwrap();
        let spec = StabilizeSpec::from_params(source).unwrap();
        let sample = draw(xi, psi, 100_000, seed);
        let z = stabilize(&sample, &spec).unwrap();
        let d = ks_statistic(&z, |x| target.cdf(x));
        assert!(d < 0.01, "xi={xi}: KS {d}");

        // Roundtrip stays within 1e-12 relative.
        let back = evtail_core::transforms::inverse_stabilize(&z, &spec).unwrap();
        for (a, b) in sample.values().iter().zip(back.values()) {
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }
}

#[test]
fn stabilized_cv_recovers_flipped_shape() {
    // CV bridge: stabilize GPD(0.5, 7) with c = 14, estimate xi from the CV,
    // flip the sign, recover 0.5.
    let sample = draw(0.5, 7.0, 100_000, 99);
    let spec = StabilizeSpec::with_constant(14.0).unwrap();
    let z = stabilize(&sample, &spec).unwrap();
    let cv = residual_cv(&z, 0.0, true).unwrap();
    let xi_z = gpd::xi_of_cv(cv).unwrap();
    assert!((-xi_z - 0.5).abs() < 0.05, "recovered {}", -xi_z);
}

#[test]
fn mle_is_consistent_on_a_large_sample() {
    // 1e5 draws from GPD(0.2, 1): estimates land within three standard
    // errors of the truth.
    let sample = draw(0.2, 1.0, 100_000, 314);
    let fit = gpd::mle_fit(&sample).unwrap();
    assert!(fit.converged);
    let (se_xi, se_psi) = fit.std_errors.expect("standard errors available");
    assert!(
        (fit.params.xi() - 0.2).abs() < 3.0 * se_xi,
        "xi = {} with se {se_xi}",
        fit.params.xi()
    );
    assert!(
        (fit.params.psi() - 1.0).abs() < 3.0 * se_psi,
        "psi = {} with se {se_psi}",
        fit.params.psi()
    );
}

#[test]
fn mean_excess_is_flat_for_exponential_data() {
    // Memorylessness: the mean excess of an exponential sample stays near
    // psi at every threshold.
    let psi = 3.0;
    let sample = draw(0.0, psi, 100_000, 271);
    let points = evtail_core::residual_cv::mean_excess_plot(&sample, 2000).unwrap();
    for pt in &points {
        assert!(
            (pt.mean_excess - psi).abs() < 0.25 * psi,
            "mean excess {} at threshold {} (n = {})",
            pt.mean_excess,
            pt.threshold,
            pt.n_exceed
        );
    }
}

#[test]
fn deviation_statistic_has_unit_variance_under_exponential() {
    // D_0(0) = sqrt(n) (cv - 1) is asymptotically N(0, 1).
    let replicates = 500;
    let n = 5000;
    let mut values = Vec::with_capacity(replicates);
    let params = GpdParams::new(0.0, 1.0).unwrap();
    for i in 0..replicates {
        let sample = params
            .sample(n, &mut SplitMix64::substream(505, i as u64))
            .unwrap();
        values.push(evtail_core::threshold_test::deviation_statistic(&sample, 0.0, 0.0).unwrap());
    }
    let mean = values.iter().sum::<f64>() / replicates as f64;
    let var =
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (replicates as f64 - 1.0);
    assert!((var - 1.0).abs() < 0.15, "variance {var}");
}

#[test]
fn cv_process_variance_matches_sigma() {
    // Variance of sqrt(n)(cv - c_xi) approaches sigma_xi^2.
    for &(xi, seed) in &[(-0.5, 61), (0.0, 62), (0.2, 63)] {
        let params = GpdParams::new(xi, 1.0).unwrap();
        let c = gpd::cv_of_xi(xi).unwrap();
        let sigma2 = {
            let sd = gpd::asymptotic_sd(xi).unwrap();
            sd * sd
        };
        let replicates = 200;
        let n = 20_000;
        let mut devs = Vec::with_capacity(replicates);
        for i in 0..replicates {
            let sample = params
                .sample(n, &mut SplitMix64::substream(seed, i as u64))
                .unwrap();
            let cv = residual_cv(&sample, 0.0, true).unwrap();
            devs.push((n as f64).sqrt() * (cv - c));
        }
        let mean = devs.iter().sum::<f64>() / replicates as f64;
        let var =
            devs.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (replicates as f64 - 1.0);
        assert!(
            (var - sigma2).abs() / sigma2 < 0.15,
            "xi={xi}: var {var} vs sigma^2 {sigma2}"
        );
    }
}

#[test]
fn cv_plot_band_coverage_is_calibrated() {
    // Pointwise 90% bands on correlated points: aggregate coverage over
    // replicates stays well above the loose 0.75 floor.
    for &(xi, seed) in &[(-0.5, 71u64), (0.0, 72), (0.2, 73)] {
        let params = GpdParams::new(xi, 1.0).unwrap();
        let mut inside = 0usize;
        let mut total = 0usize;
        for i in 0..50 {
            let sample = params
                .sample(10_000, &mut SplitMix64::substream(seed, i))
                .unwrap();
            let plot = cv_plot(&sample, 100, Some(xi), 0.90, true).unwrap();
            for pt in &plot.points {
                total += 1;
                if pt.cv >= pt.band_low.unwrap() && pt.cv <= pt.band_high.unwrap() {
                    inside += 1;
                }
            }
        }
        let frac = inside as f64 / total as f64;
        assert!(frac >= 0.75, "xi={xi}: coverage {frac}");
    }
}
