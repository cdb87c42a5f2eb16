//! Gamma-mixture posterior of the cumulative baseline-hazard increments.
//!
//! Given β̂, the likelihood of the level `a_j` on interval `j` is
//! `P_j(a_j) · exp(−a_j · E_j)`, with `P_j` the product polynomial over the
//! interval's uncensored subjects and `E_j` its exposure. Rewriting in terms
//! of the increment `Λ = a_j · w_j` (`w_j` the width) and multiplying by the
//! `Gamma(cα_j, c)` prior gives
//!
//! ```text
//! f(Λ) ∝ Σ_k d_k w_j^{−k} Λ^{k + cα_j − 1} e^{−c_j Λ},   c_j = E_j / w_j + c
//! ```
//!
//! so the posterior is a mixture of `Gamma(k + cα_j, c_j)` with weights
//! `e_k ∝ d_k w_j^{−k} c_j^{−k} Γ(k + cα_j)`. The common factor `1/Γ(cα_j)`
//! cancels on normalization and is left out.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::data::{BaselineIncrementPosterior, GammaProcessPrior, SurvivalDataset, TimeGrid};
use crate::error::{Error, Result};
use crate::numeric::{ln_gamma, log_sum_exp};
use crate::poly::PolyCoefficients;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSummary {
    /// 1-based interval index.
    pub j: usize,
    pub lower: f64,
    pub upper: f64,
    /// Observations with `t ∈ (s_{j−1}, s_j]`.
    pub n_j: usize,
    /// Uncensored observations in the interval (`N_j`).
    pub events: usize,
    /// Observations with `t > s_j`.
    pub m_j: usize,
    /// `Σ_{t ∈ interval} (t − s_{j−1}) + m_j (s_j − s_{j−1})`
    pub exposure: f64,
    pub width: f64,
}

/// Per-interval counts and exposures.
pub fn interval_summaries(ds: &SurvivalDataset, grid: &TimeGrid) -> Result<Vec<IntervalSummary>> {
    let m = grid.num_intervals();
    let mut out: Vec<IntervalSummary> = (1..=m)
        .map(|j| {
            let (lower, upper) = grid.bounds(j);
            IntervalSummary {
                j,
                lower,
                upper,
                n_j: 0,
                events: 0,
                m_j: 0,
                exposure: 0.0,
                width: upper - lower,
            }
        })
        .collect();
    // subjects that end in interval j are "later" for every interval before j
    let mut ending = vec![0usize; m + 1];
    for o in ds.observations() {
        let j = grid.interval_index(o.time)?;
        let s = &mut out[j - 1];
        s.n_j += 1;
        if o.event {
            s.events += 1;
        }
        s.exposure += o.time - s.lower;
        ending[j] += 1;
    }
    let mut later = 0usize;
    for j in (1..=m).rev() {
        let s = &mut out[j - 1];
        s.m_j = later;
        s.exposure += later as f64 * s.width;
        later += ending[j];
    }
    Ok(out)
}

/// Product polynomial of each interval over its uncensored subjects, with
/// roots `β′z`.
pub fn interval_polynomials(
    ds: &SurvivalDataset,
    grid: &TimeGrid,
    beta: &DVector<f64>,
) -> Result<Vec<PolyCoefficients>> {
    if beta.len() != ds.k() {
        return Err(Error::InvalidConfig(format!(
            "beta has length {} but the data have {} covariates",
            beta.len(),
            ds.k()
        )));
    }
    let mut polys = vec![PolyCoefficients::init(); grid.num_intervals()];
    for (row, o) in ds.observations().iter().enumerate() {
        if !o.event {
            continue;
        }
        let bz: f64 = o.covariates.iter().zip(beta.iter()).map(|(z, b)| z * b).sum();
        if bz < 0.0 {
            return Err(Error::NonNegativityViolation {
                row,
                what: format!("beta'z = {bz}; the baseline posterior needs beta'z >= 0"),
            });
        }
        let j = grid.interval_index(o.time)?;
        polys[j - 1] = polys[j - 1].multiply_in(bz);
    }
    Ok(polys)
}

pub fn increment_posterior(
    summary: &IntervalSummary,
    poly: &PolyCoefficients,
    prior: &GammaProcessPrior,
) -> Result<BaselineIncrementPosterior> {
    let j = summary.j;
    if j == 0 || j > prior.num_intervals() {
        return Err(Error::InvalidPrior(format!(
            "prior has {} intervals, interval {j} requested",
            prior.num_intervals()
        )));
    }
    let c = prior.c();
    let shape0 = c * prior.increment(j);
    let rate = summary.exposure / summary.width + c;
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::InvalidConfig(format!("non-positive rate c_j = {rate} in interval {j}")));
    }
    let degree = poly.degree();
    if shape0 <= 0.0 && (degree == 0 || poly.signs()[0] != 0) {
        // the k = 0 component would be Gamma(0, c_j), which is not a density
        return Err(Error::ImproperPosterior { interval: j });
    }

    let log_scale = summary.width.ln() + rate.ln();
    let shape_offsets: Vec<f64> = (0..=degree).map(|k| k as f64 + shape0).collect();
    let raw: Vec<f64> = poly
        .log_abs()
        .iter()
        .zip(&shape_offsets)
        .enumerate()
        .map(|(k, (&ld, &shape))| {
            if ld == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else {
                ld - k as f64 * log_scale + ln_gamma(shape)
            }
        })
        .collect();
    let norm = log_sum_exp(&raw);
    let log_weights: Vec<f64> = raw.iter().map(|&l| l - norm).collect();

    let (mean, variance) = mixture_moments(&log_weights, &shape_offsets, rate);
    Ok(BaselineIncrementPosterior {
        interval_index: j,
        log_weights,
        rate,
        shape_offsets,
        mean,
        variance,
    })
}

// Variance as within-component plus between-component spread, which equals
// E[Λ²] − E[Λ]² with E[Λ²] = Σ w_k a_k(a_k + 1)/c_j² but never goes negative.
fn mixture_moments(log_weights: &[f64], shapes: &[f64], rate: f64) -> (f64, f64) {
    let weights: Vec<f64> = log_weights.iter().map(|l| l.exp()).collect();
    let mean: f64 = weights.iter().zip(shapes).map(|(w, a)| w * a).sum::<f64>() / rate;
    let within: f64 = weights.iter().zip(shapes).map(|(w, a)| w * a).sum::<f64>() / (rate * rate);
    let between: f64 = weights
        .iter()
        .zip(shapes)
        .map(|(w, a)| {
            let dev = a / rate - mean;
            w * dev * dev
        })
        .sum();
    (mean, within + between)
}

/// Posterior mean `E[Λ₀ⱼ⁺ | data, β]`.
pub fn increment_mean(post: &BaselineIncrementPosterior) -> f64 {
    post.mean
}

/// Posterior variance `V[Λ₀ⱼ⁺ | data, β]`.
pub fn increment_variance(post: &BaselineIncrementPosterior) -> f64 {
    post.variance
}

/// Whether two priors sharing a tiny `c` give the same posterior mean to
/// 1e-6 relative.
pub fn alpha_insensitivity_check(
    summary: &IntervalSummary,
    poly: &PolyCoefficients,
    prior_a: &GammaProcessPrior,
    prior_b: &GammaProcessPrior,
) -> Result<bool> {
    if prior_a.c() != prior_b.c() || prior_a.c() > 1e-8 {
        return Err(Error::InvalidPrior(
            "both priors must share the same scale c <= 1e-8".into(),
        ));
    }
    let a = increment_posterior(summary, poly, prior_a)?.mean;
    let b = increment_posterior(summary, poly, prior_b)?.mean;
    let scale = a.abs().max(b.abs());
    Ok(scale == 0.0 || (a - b).abs() < 1e-6 * scale)
}

/// Posteriors for every interval of `grid` given a fitted β.
pub fn estimate_baseline(
    ds: &SurvivalDataset,
    grid: &TimeGrid,
    beta: &DVector<f64>,
    prior: &GammaProcessPrior,
) -> Result<Vec<BaselineIncrementPosterior>> {
    if prior.num_intervals() != grid.num_intervals() {
        return Err(Error::InvalidPrior(format!(
            "prior gives alpha at {} points but the grid has {} intervals",
            prior.num_intervals(),
            grid.num_intervals()
        )));
    }
    let summaries = interval_summaries(ds, grid)?;
    let polys = interval_polynomials(ds, grid, beta)?;
    summaries
        .iter()
        .zip(&polys)
        .map(|(s, p)| increment_posterior(s, p, prior))
        .collect()
}
