//! Command implementations: each returns the JSON payload plus CSV and
//! optional SVG renderings of the same result.

use evtail_core::gpd::{self, GpdParams};
use evtail_core::residual_cv::{cv_plot, mean_excess_plot, QuantileMethod};
use evtail_core::rng::SplitMix64;
use evtail_core::threshold_test::{
    simulate_p_value, threshold_select, tm_statistic, SelectConfig, ThresholdGrid, TmMode,
};
use evtail_core::transforms::{inverse_stabilize, negate_reciprocal, stabilize, StabilizeSpec};
use evtail_core::SampleData;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::ingest::ingest;
use crate::svg::{render, PlotSpec};
use crate::{
    CvPlotArgs, FitArgs, MePlotArgs, PreprocessOpts, QuantileMethodArg, SelectArgs, SimulateArgs,
    TestArgs, TransformArgs, TransformKind, XAxis,
};

pub struct CommandOutput {
    pub payload: serde_json::Value,
    pub csv: String,
    pub svg: Option<String>,
}

struct Prepared {
    sample: SampleData,
    /// Constant actually used by a stabilizing transform.
    c_used: Option<f64>,
    /// Whether the transform flips the sign of the extreme value index.
    sign_flipped: bool,
}

/// Threshold first (excesses in original units), transform second.
fn preprocess(sample: SampleData, pre: &PreprocessOpts) -> CliResult<Prepared> {
    let sample = match pre.threshold {
        None => sample,
        Some(u) => {
            let excesses: Vec<f64> = sample.tail_from(u, false).iter().map(|x| x - u).collect();
            if excesses.len() < 2 {
                return Err(CliError::Domain(evtail_core::Error::InsufficientTail {
                    threshold: u,
                    needed: 2,
                    found: excesses.len(),
                }));
            }
            SampleData::new(excesses)?
        }
    };
    apply_transform(sample, pre.transform, pre.c)
}

fn apply_transform(sample: SampleData, kind: TransformKind, c: Option<f64>) -> CliResult<Prepared> {
    match kind {
        TransformKind::None => Ok(Prepared {
            sample,
            c_used: None,
            sign_flipped: false,
        }),
        TransformKind::NegReciprocal => Ok(Prepared {
            sample: negate_reciprocal(&sample)?,
            c_used: None,
            sign_flipped: true,
        }),
        TransformKind::Stabilize => {
            let spec = match c {
                Some(c) => StabilizeSpec::with_constant(c)?,
                None => StabilizeSpec::from_fit(&sample)?,
            };
            Ok(Prepared {
                sample: stabilize(&sample, &spec)?,
                c_used: Some(spec.c()),
                sign_flipped: true,
            })
        }
        TransformKind::InverseStabilize => {
            let c = c.ok_or_else(|| {
                CliError::Usage("--c is required for the inverse-stabilize transform".into())
            })?;
            let spec = StabilizeSpec::with_constant(c)?;
            Ok(Prepared {
                sample: inverse_stabilize(&sample, &spec)?,
                c_used: Some(spec.c()),
                sign_flipped: true,
            })
        }
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl From<QuantileMethodArg> for QuantileMethod {
    fn from(value: QuantileMethodArg) -> Self {
        match value {
            QuantileMethodArg::LowerStep => QuantileMethod::LowerStep,
            QuantileMethodArg::Interpolated => QuantileMethod::Interpolated,
        }
    }
}

pub fn cvplot(args: &CvPlotArgs) -> CliResult<CommandOutput> {
    let raw = ingest(&args.input.input, args.input.column.as_deref())?;
    let prepared = preprocess(raw, &args.pre)?;
    let plot = cv_plot(
        &prepared.sample,
        args.ns,
        args.xi,
        args.level,
        args.inclusive,
    )?;

    let mut csv = String::from("threshold,n_exceed,cv,band_low,band_high\n");
    for p in &plot.points {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            p.threshold,
            p.n_exceed,
            p.cv,
            fmt_opt(p.band_low),
            fmt_opt(p.band_high)
        ));
    }

    let n = prepared.sample.len();
    let x_of = |n_exceed: usize, threshold: f64| match args.x_axis {
        XAxis::Threshold => threshold,
        XAxis::Removed => (n - n_exceed) as f64,
    };
    let series: Vec<(f64, f64)> = plot
        .points
        .iter()
        .map(|p| (x_of(p.n_exceed, p.threshold), p.cv))
        .collect();
    let band = |edge: fn(&evtail_core::CvPoint) -> Option<f64>| -> Option<Vec<(f64, f64)>> {
        let pts: Vec<(f64, f64)> = plot
            .points
            .iter()
            .filter_map(|p| edge(p).map(|b| (x_of(p.n_exceed, p.threshold), b)))
            .collect();
        (!pts.is_empty()).then_some(pts)
    };
    let svg = render(&PlotSpec {
        title: "CV-plot",
        x_label: match args.x_axis {
            XAxis::Threshold => "threshold",
            XAxis::Removed => "removed count k",
        },
        y_label: "residual CV",
        series,
        band_low: band(|p| p.band_low),
        band_high: band(|p| p.band_high),
        reference: plot.reference_cv,
    });

    Ok(CommandOutput {
        payload: json!({
            "n": n,
            "c_used": prepared.c_used,
            "plot": plot,
        }),
        csv,
        svg: Some(svg),
    })
}

pub fn meplot(args: &MePlotArgs) -> CliResult<CommandOutput> {
    let raw = ingest(&args.input.input, args.input.column.as_deref())?;
    let prepared = preprocess(raw, &args.pre)?;
    let points = mean_excess_plot(&prepared.sample, args.ns)?;

    let mut csv = String::from("threshold,n_exceed,mean_excess\n");
    for p in &points {
        csv.push_str(&format!(
            "{},{},{}\n",
            p.threshold, p.n_exceed, p.mean_excess
        ));
    }

    let n = prepared.sample.len();
    let series: Vec<(f64, f64)> = points
        .iter()
        .map(|p| {
            let x = match args.x_axis {
                XAxis::Threshold => p.threshold,
                XAxis::Removed => (n - p.n_exceed) as f64,
            };
            (x, p.mean_excess)
        })
        .collect();
    let svg = render(&PlotSpec {
        title: "ME-plot",
        x_label: match args.x_axis {
            XAxis::Threshold => "threshold",
            XAxis::Removed => "removed count k",
        },
        y_label: "mean excess",
        series,
        band_low: None,
        band_high: None,
        reference: None,
    });

    Ok(CommandOutput {
        payload: json!({ "n": n, "points": points }),
        csv,
        svg: Some(svg),
    })
}

pub fn fit(args: &FitArgs) -> CliResult<CommandOutput> {
    let raw = ingest(&args.input.input, args.input.column.as_deref())?;
    let prepared = preprocess(raw, &args.pre)?;
    let fit = gpd::mle_fit(&prepared.sample)?;

    let (se_xi, se_psi) = match fit.std_errors {
        Some((a, b)) => (Some(a), Some(b)),
        None => (None, None),
    };
    let csv = format!(
        "xi,psi,se_xi,se_psi,log_likelihood,converged,n_used,threshold\n{},{},{},{},{},{},{},{}\n",
        fit.params.xi(),
        fit.params.psi(),
        fmt_opt(se_xi),
        fmt_opt(se_psi),
        fit.log_likelihood,
        fit.converged,
        prepared.sample.len(),
        fmt_opt(args.pre.threshold),
    );

    Ok(CommandOutput {
        payload: json!({
            "n_used": prepared.sample.len(),
            "threshold": args.pre.threshold,
            "transform": args.pre.transform,
            "c_used": prepared.c_used,
            "fit": fit,
        }),
        csv,
        svg: None,
    })
}

pub fn test(args: &TestArgs) -> CliResult<CommandOutput> {
    let raw = ingest(&args.input.input, args.input.column.as_deref())?;
    let prepared = preprocess(raw, &args.pre)?;
    let grid = ThresholdGrid::build_with(
        &prepared.sample,
        args.m,
        args.ns,
        args.quantile_method.into(),
    )?;
    let mut outcome = tm_statistic(&prepared.sample, &grid, 0, args.xi)?;
    let mode = if args.xi.is_some() {
        TmMode::Simple
    } else {
        TmMode::Composite
    };
    let p_value = simulate_p_value(
        outcome.tm,
        prepared.sample.len(),
        grid.m(),
        grid.ratio(),
        outcome.xi_tilde,
        mode,
        args.sim.replicates,
        args.sim.seed,
    )?;
    outcome.p_value = Some(p_value);
    outcome.replicates = Some(args.sim.replicates);
    outcome.seed = Some(args.sim.seed);

    let csv = format!(
        "tm,p_value,cv_tilde,xi_tilde,m,ratio,n,replicates,seed\n{},{},{},{},{},{},{},{},{}\n",
        outcome.tm,
        p_value,
        outcome.cv_tilde,
        outcome.xi_tilde,
        grid.m(),
        grid.ratio(),
        prepared.sample.len(),
        args.sim.replicates,
        args.sim.seed,
    );

    Ok(CommandOutput {
        payload: json!({
            "n": prepared.sample.len(),
            "mode": mode,
            "grid": { "m": grid.m(), "ratio": grid.ratio(), "ns": grid.ns() },
            "c_used": prepared.c_used,
            "outcome": outcome,
        }),
        csv,
        svg: None,
    })
}

pub fn select(args: &SelectArgs) -> CliResult<CommandOutput> {
    let raw = ingest(&args.input.input, args.input.column.as_deref())?;
    let prepared = preprocess(raw, &args.pre)?;
    let config = SelectConfig {
        m: args.m,
        ns: args.ns,
        alpha: args.alpha,
        replicates: args.sim.replicates,
        seed: args.sim.seed,
        known_xi: args.xi,
        scan_all_stages: false,
        quantile_method: args.quantile_method.into(),
    };
    let result = threshold_select(&prepared.sample, &config)?;

    // The transforms flip the sign of the extreme value index, so report
    // the estimate back on the original scale as well.
    let final_xi_original = result
        .final_xi
        .filter(|_| prepared.sign_flipped)
        .map(|x| -x);

    let mut csv = String::from("stage,threshold,n_exceed,cv_tilde,xi_tilde,tm,p_value,rejected\n");
    for s in &result.steps {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            s.stage, s.threshold, s.n_exceed, s.cv_tilde, s.xi_tilde, s.tm, s.p_value, s.rejected
        ));
    }

    Ok(CommandOutput {
        payload: json!({
            "n": prepared.sample.len(),
            "c_used": prepared.c_used,
            "sign_flipped_by_transform": prepared.sign_flipped,
            "selection": result,
            "final_xi_original_scale": final_xi_original,
        }),
        csv,
        svg: None,
    })
}

pub fn transform(args: &TransformArgs) -> CliResult<CommandOutput> {
    let raw = ingest(&args.input.input, args.input.column.as_deref())?;
    let sample = match args.threshold {
        None => raw,
        Some(u) => {
            let excesses: Vec<f64> = raw.tail_from(u, false).iter().map(|x| x - u).collect();
            if excesses.is_empty() {
                return Err(CliError::Domain(evtail_core::Error::InsufficientTail {
                    threshold: u,
                    needed: 1,
                    found: 0,
                }));
            }
            SampleData::new(excesses)?
        }
    };
    let prepared = apply_transform(sample, args.transform, args.c)?;

    let mut csv = String::from("value\n");
    for v in prepared.sample.values() {
        csv.push_str(&format!("{v}\n"));
    }

    Ok(CommandOutput {
        payload: json!({
            "transform": args.transform,
            "c_used": prepared.c_used,
            "n": prepared.sample.len(),
            "values": prepared.sample.values(),
        }),
        csv,
        svg: None,
    })
}

pub fn simulate(args: &SimulateArgs) -> CliResult<CommandOutput> {
    let params = GpdParams::new(args.xi, args.psi)?;
    let sample = params.sample(args.n, &mut SplitMix64::new(args.seed))?;

    let mut csv = String::from("value\n");
    for v in sample.values() {
        csv.push_str(&format!("{v}\n"));
    }

    Ok(CommandOutput {
        payload: json!({
            "xi": args.xi,
            "psi": args.psi,
            "n": args.n,
            "seed": args.seed,
            "values": sample.values(),
        }),
        csv,
        svg: None,
    })
}
