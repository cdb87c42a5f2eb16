//! Hybrid Bayesian estimation for the additive hazards model
//! `λ(t | z) = λ₀(t) + β′z`.
//!
//! β is estimated from a normal pseudo-posterior that combines the Lin–Ying
//! estimating equation with a normal prior, restricted to `β ≥ 0`. Given β,
//! the cumulative baseline hazard on a time grid gets an exact posterior under
//! a gamma-process prior: each increment is a finite mixture of gammas.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baseline;
pub mod data;
pub mod error;
pub mod fit;
pub mod hybrid;
pub mod io;
pub mod lin_ying;
pub mod numeric;
pub mod poly;
pub mod simulate;

pub use baseline::{estimate_baseline, increment_mean, increment_posterior, increment_variance, IntervalSummary};
pub use data::{
    grid_from_quantiles, validate_dataset, validate_dataset_with, AlphaFunction, BaselineIncrementPosterior,
    BetaPrior, GammaProcessPrior, Observation, SurvivalDataset, TimeGrid, ValidationOptions,
};
pub use error::{Error, Result};
pub use fit::{fit, FitOptions, FitResult};
pub use hybrid::{beta_mode, hpd_interval, pseudo_posterior, sigma_hat, HpdInterval, ModeRule, PseudoPosterior};
pub use lin_ying::{compute_statistics, ly_estimate, LYEstimate, LYStatistics};
pub use poly::PolyCoefficients;
pub use simulate::{run_baseline_experiment, run_beta_experiment, SimConfig};
