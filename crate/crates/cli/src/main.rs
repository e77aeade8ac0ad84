//! `evtail`: tail modelling with the residual coefficient of variation.
//!
//! Subcommands cover the full peaks-over-threshold workflow: diagnostic
//! plots (`cvplot`, `meplot`), maximum-likelihood fitting (`fit`), the
//! multiple-threshold goodness-of-fit test (`test`), automatic threshold
//! selection (`select`), tail transforms (`transform`), and reproducible
//! sampling (`simulate`). Reports are emitted as JSON (default), CSV, or
//! — for the plots — standalone SVG.

mod error;
mod ingest;
mod run;
mod svg;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::run::CommandOutput;

#[derive(Parser)]
#[command(
    name = "evtail",
    version,
    about = "GPD tail modelling with the residual coefficient of variation",
    after_help = "\
Typical workflow on a heavy-tailed dataset:
  evtail fit --input losses.txt --threshold 10
  evtail test --input losses.txt --threshold 10 --transform stabilize --c 14 --xi -0.5
  evtail select --input losses.txt --transform neg-reciprocal --m 20 --seed 0
  evtail cvplot --input losses.txt --transform stabilize --c 1.524 --xi -0.6 \\
      --format svg --output cvplot.svg"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Residual CV over every order-statistic threshold, with bands
    Cvplot(CvPlotArgs),
    /// Mean excess over every order-statistic threshold
    Meplot(MePlotArgs),
    /// Fit a GPD to the sample (or its threshold excesses) by ML
    Fit(FitArgs),
    /// Multiple-threshold goodness-of-fit test with a simulated p-value
    Test(TestArgs),
    /// Automatic threshold selection over the geometric grid
    Select(SelectArgs),
    /// Apply a monotone tail transform and write the transformed sample
    Transform(TransformArgs),
    /// Draw a reproducible GPD sample
    Simulate(SimulateArgs),
}

#[derive(Args, Serialize)]
struct InputOpts {
    /// Input file: one decimal per line, or CSV when --column is given
    #[arg(long)]
    input: PathBuf,
    /// CSV column to read (header name, or 0-based index)
    #[arg(long)]
    column: Option<String>,
}

#[derive(Args, Serialize)]
struct OutputOpts {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct PreprocessOpts {
    /// Keep only the excesses over this threshold (original data units)
    #[arg(long)]
    threshold: Option<f64>,
    /// Transform applied after thresholding
    #[arg(long, value_enum, default_value_t = TransformKind::None)]
    transform: TransformKind,
    /// Constant of the stabilizing transform; fitted as psi/xi when omitted
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Args, Serialize)]
struct SimOpts {
    /// Monte-Carlo replicates for the p-value
    #[arg(long, default_value_t = 10_000)]
    replicates: u32,
    /// Random seed; EVTAIL_SEED supplies the default, the flag wins
    #[arg(long, env = "EVTAIL_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformKind {
    /// Use the data as-is
    None,
    /// x -> -1/x (flips the sign of the extreme value index)
    NegReciprocal,
    /// x -> x/(c(x+c)), the exact GPD-to-GPD map
    Stabilize,
    /// z -> c^2 z/(1-cz), inverse of stabilize
    InverseStabilize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum XAxis {
    /// Threshold in data units
    Threshold,
    /// Number of observations removed below the threshold
    Removed,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuantileMethodArg {
    LowerStep,
    Interpolated,
}

#[derive(Args, Serialize)]
pub struct CvPlotArgs {
    #[command(flatten)]
    input: InputOpts,
    #[command(flatten)]
    pre: PreprocessOpts,
    /// Reference shape for the c_xi line and the bands
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<f64>,
    /// Confidence level of the pointwise bands
    #[arg(long, default_value_t = 0.90)]
    level: f64,
    /// Smallest tail size kept in the plot
    #[arg(long, default_value_t = 8)]
    ns: usize,
    /// Exceedance convention: x >= t (true) or x > t (false)
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    inclusive: bool,
    /// X axis of the SVG rendering
    #[arg(long, value_enum, default_value_t = XAxis::Threshold)]
    x_axis: XAxis,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args, Serialize)]
pub struct MePlotArgs {
    #[command(flatten)]
    input: InputOpts,
    #[command(flatten)]
    pre: PreprocessOpts,
    /// Smallest tail size kept in the plot
    #[arg(long, default_value_t = 8)]
    ns: usize,
    /// X axis of the SVG rendering
    #[arg(long, value_enum, default_value_t = XAxis::Threshold)]
    x_axis: XAxis,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args, Serialize)]
pub struct FitArgs {
    #[command(flatten)]
    input: InputOpts,
    #[command(flatten)]
    pre: PreprocessOpts,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args, Serialize)]
pub struct TestArgs {
    #[command(flatten)]
    input: InputOpts,
    #[command(flatten)]
    pre: PreprocessOpts,
    /// Number of non-zero thresholds
    #[arg(long, default_value_t = 20)]
    m: usize,
    /// Minimal tail size defining the grid ratio
    #[arg(long, default_value_t = 8)]
    ns: usize,
    /// Fixed shape (simple null); estimated from the data when omitted
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<f64>,
    /// Empirical quantile rule for the grid
    #[arg(long, value_enum, default_value_t = QuantileMethodArg::Interpolated)]
    quantile_method: QuantileMethodArg,
    #[command(flatten)]
    sim: SimOpts,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args, Serialize)]
pub struct SelectArgs {
    #[command(flatten)]
    input: InputOpts,
    #[command(flatten)]
    pre: PreprocessOpts,
    /// Number of non-zero thresholds at stage 0
    #[arg(long, default_value_t = 20)]
    m: usize,
    /// Minimal tail size defining the grid ratio
    #[arg(long, default_value_t = 8)]
    ns: usize,
    /// Per-stage rejection level
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Known shape: test the simple null at every stage
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<f64>,
    /// Empirical quantile rule for the grid
    #[arg(long, value_enum, default_value_t = QuantileMethodArg::Interpolated)]
    quantile_method: QuantileMethodArg,
    #[command(flatten)]
    sim: SimOpts,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args, Serialize)]
pub struct TransformArgs {
    #[command(flatten)]
    input: InputOpts,
    /// Which transform to apply
    #[arg(long, value_enum)]
    transform: TransformKind,
    /// Constant of the (inverse-)stabilizing transform
    #[arg(long)]
    c: Option<f64>,
    /// Keep only the excesses over this threshold first
    #[arg(long)]
    threshold: Option<f64>,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args, Serialize)]
pub struct SimulateArgs {
    /// Shape parameter
    #[arg(long, allow_hyphen_values = true)]
    xi: f64,
    /// Scale parameter
    #[arg(long, default_value_t = 1.0)]
    psi: f64,
    /// Sample size
    #[arg(long)]
    n: usize,
    /// Random seed; EVTAIL_SEED supplies the default, the flag wins
    #[arg(long, env = "EVTAIL_SEED", default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputOpts,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(command: &Command) -> CliResult<()> {
    let started = Instant::now();
    let (name, config, output, out_opts) = match command {
        Command::Cvplot(a) => ("cvplot", to_config(a)?, run::cvplot(a)?, &a.out),
        Command::Meplot(a) => ("meplot", to_config(a)?, run::meplot(a)?, &a.out),
        Command::Fit(a) => ("fit", to_config(a)?, run::fit(a)?, &a.out),
        Command::Test(a) => ("test", to_config(a)?, run::test(a)?, &a.out),
        Command::Select(a) => ("select", to_config(a)?, run::select(a)?, &a.out),
        Command::Transform(a) => ("transform", to_config(a)?, run::transform(a)?, &a.out),
        Command::Simulate(a) => ("simulate", to_config(a)?, run::simulate(a)?, &a.out),
    };
    let rendered = render_output(name, config, output, out_opts, started)?;
    write_output(out_opts.output.as_deref(), &rendered)
}

fn to_config<T: Serialize>(args: &T) -> CliResult<serde_json::Value> {
    serde_json::to_value(args).map_err(|e| CliError::Usage(e.to_string()))
}

fn render_output(
    name: &str,
    config: serde_json::Value,
    output: CommandOutput,
    out: &OutputOpts,
    started: Instant,
) -> CliResult<String> {
    match out.format {
        Format::Csv => Ok(output.csv),
        Format::Svg => output.svg.ok_or_else(|| {
            CliError::Usage(format!(
                "svg output is only available for plots, not `{name}`"
            ))
        }),
        Format::Json => {
            let report = serde_json::json!({
                "command": name,
                "config": config,
                "library_version": env!("CARGO_PKG_VERSION"),
                "duration_seconds": started.elapsed().as_secs_f64(),
                "result": output.payload,
            });
            let mut text = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
    }
}

fn write_output(path: Option<&std::path::Path>, content: &str) -> CliResult<()> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|source| CliError::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
        Some(p) => std::fs::write(p, content).map_err(|source| CliError::Write {
            path: p.to_path_buf(),
            source,
        }),
    }
}
