//! Tail modelling with the residual coefficient of variation.
//!
//! The generalized Pareto distribution (GPD) is the canonical model for
//! excesses over a high threshold. Under a GPD the residual coefficient of
//! variation — the CV of the excesses over `t`, as a function of `t` — is
//! the constant `c_xi = sqrt(1/(1 - 2 xi))`, a one-to-one transform of the
//! shape `xi`. That single fact yields:
//!
//! * a diagnostic plot (the CV-plot) with pointwise asymptotic bands,
//!   flat exactly when a GPD fits ([`residual_cv`]);
//! * exact monotone transforms turning heavy tails into light ones so the
//!   moment-based machinery applies even without finite moments
//!   ([`transforms`]);
//! * a multiple-threshold goodness-of-fit statistic with simulated
//!   p-values, and on top of it an automatic threshold-selection
//!   algorithm ([`threshold_test`]).
//!
//! The crate is `no_std`-compatible (`alloc` required): disable the
//! default `std` feature and enable `libm`. The `parallel` feature (std
//! only) evaluates simulation replicates on a thread pool; results are
//! bit-identical to the serial path because every replicate draws from its
//! own deterministic substream.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("evtail-core needs either the `std` feature or the `libm` feature");

pub mod error;
pub mod gpd;
mod math;
pub mod residual_cv;
pub mod rng;
pub mod sample;
pub mod transforms;

pub use error::Error;
pub use gpd::{FitResult, GpdParams};
pub use math::normal_quantile;
pub use residual_cv::{CvPlot, CvPoint, MePoint, QuantileMethod};
pub use sample::{ks_statistic, SampleData};
pub use threshold_test::{
    SelectConfig, SelectionResult, SelectionStep, ThresholdGrid, TmMode, TmOutcome,
};
pub use transforms::StabilizeSpec;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;
