//! End-to-end fit of one dataset: hybrid β, HPD intervals and, optionally,
//! the baseline increment posteriors.

use std::fmt::Write as _;
use std::io::Write;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::baseline::estimate_baseline;
use crate::data::{AlphaFunction, BaselineIncrementPosterior, BetaPrior, GammaProcessPrior, SurvivalDataset, TimeGrid};
use crate::error::{Error, Result};
use crate::hybrid::{beta_mode_with, hpd_interval, pseudo_posterior, sigma_hat, significance_flag, HpdInterval, ModeRule};
use crate::lin_ying::ly_estimate;
use crate::numeric::format_sig;
use crate::simulate::GridSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AlphaSpec {
    /// `α(s₁) … α(s_m)` given directly; length must match the grid.
    AtCuts(Vec<f64>),
    Function(AlphaFunction),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineSpec {
    pub grid: GridSpec,
    pub t_final: Option<f64>,
    pub alpha: AlphaSpec,
    pub c: f64,
}

#[derive(Debug, Clone)]
pub struct FitOptions {
    /// `None` uses `μ_β = 1_k`, `C_β = 1000·I_k`.
    pub prior: Option<BetaPrior>,
    pub coverage: f64,
    pub mode_rule: ModeRule,
    pub baseline: Option<BaselineSpec>,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            prior: None,
            coverage: 0.95,
            mode_rule: ModeRule::Clamp,
            baseline: None,
        }
    }
}

/// Prior scale used when none is given.
pub const DEFAULT_OMEGA: f64 = 1000.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub covariate_names: Vec<String>,
    /// Hybrid estimate β̂ᴮ.
    pub beta_hat: Vec<f64>,
    pub hpd: Vec<HpdInterval>,
    pub sigma_hat: Vec<f64>,
    pub significant: Vec<bool>,
    /// Lin–Ying estimate and its standard errors `sqrt(diag D)`.
    pub ly_beta: Vec<f64>,
    pub ly_se: Vec<f64>,
    pub coverage: f64,
    pub grid: Option<TimeGrid>,
    pub baseline: Vec<BaselineIncrementPosterior>,
}

pub fn fit(ds: &SurvivalDataset, opts: &FitOptions) -> Result<FitResult> {
    let k = ds.k();
    let prior = match &opts.prior {
        Some(p) if p.k() != k => {
            return Err(Error::InvalidPrior(format!("prior has dimension {}, data has {k}", p.k())))
        }
        Some(p) => p.clone(),
        None => BetaPrior::default_for(k, DEFAULT_OMEGA)?,
    };
    let ly = ly_estimate(ds)?;
    let pp = pseudo_posterior(&ly, &prior)?;
    let beta = beta_mode_with(&pp, opts.mode_rule)?;
    let hpd = (0..k)
        .map(|c| hpd_interval(&pp, c, opts.coverage))
        .collect::<Result<Vec<_>>>()?;

    let (grid, baseline) = match &opts.baseline {
        Some(spec) => {
            let (grid, posts) = fit_baseline(ds, &beta, spec)?;
            (Some(grid), posts)
        }
        None => (None, Vec::new()),
    };

    Ok(FitResult {
        covariate_names: ds.covariate_names().to_vec(),
        beta_hat: beta.as_slice().to_vec(),
        sigma_hat: hpd.iter().map(sigma_hat).collect(),
        significant: hpd.iter().map(significance_flag).collect(),
        hpd,
        ly_beta: ly.m.as_slice().to_vec(),
        ly_se: (0..k).map(|i| ly.d[(i, i)].sqrt()).collect(),
        coverage: opts.coverage,
        grid,
        baseline,
    })
}

pub fn fit_baseline(
    ds: &SurvivalDataset,
    beta: &DVector<f64>,
    spec: &BaselineSpec,
) -> Result<(TimeGrid, Vec<BaselineIncrementPosterior>)> {
    let grid = spec.grid.build(ds, spec.t_final)?;
    let prior = match &spec.alpha {
        AlphaSpec::AtCuts(a) => GammaProcessPrior::new(a.clone(), spec.c)?,
        AlphaSpec::Function(f) => GammaProcessPrior::from_function(&grid, f, spec.c)?,
    };
    let posts = estimate_baseline(ds, &grid, beta, &prior)?;
    Ok((grid, posts))
}

impl FitResult {
    /// One row per covariate, full precision.
    pub fn write_coefficients_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            "covariate", "beta_hat", "hpd_lower", "hpd_upper", "sigma_hat", "significant", "ly_beta", "ly_se",
        ])?;
        for i in 0..self.beta_hat.len() {
            w.write_record([
                self.covariate_names[i].clone(),
                self.beta_hat[i].to_string(),
                self.hpd[i].lower.to_string(),
                self.hpd[i].upper.to_string(),
                self.sigma_hat[i].to_string(),
                u8::from(self.significant[i]).to_string(),
                self.ly_beta[i].to_string(),
                self.ly_se[i].to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// One row per grid interval, full precision.
    pub fn write_baseline_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["interval", "lower", "upper", "mean", "variance", "sd"])?;
        if let Some(grid) = &self.grid {
            for p in &self.baseline {
                let (lo, hi) = grid.bounds(p.interval_index);
                w.write_record([
                    p.interval_index.to_string(),
                    lo.to_string(),
                    hi.to_string(),
                    p.mean.to_string(),
                    p.variance.to_string(),
                    p.variance.sqrt().to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Aligned plain-text summary, 6 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let pct = format_sig(100.0 * self.coverage, 3);
        let _ = writeln!(
            out,
            "{:<20} {:>12} {:>12} {:>12} {:>12} {:>5} {:>12} {:>12}",
            "covariate", "beta_hat", "hpd_lower", "hpd_upper", "sigma_hat", "sig", "ly_beta", "ly_se"
        );
        for i in 0..self.beta_hat.len() {
            let _ = writeln!(
                out,
                "{:<20} {:>12} {:>12} {:>12} {:>12} {:>5} {:>12} {:>12}",
                self.covariate_names[i],
                format_sig(self.beta_hat[i], 6),
                format_sig(self.hpd[i].lower, 6),
                format_sig(self.hpd[i].upper, 6),
                format_sig(self.sigma_hat[i], 6),
                if self.significant[i] { "*" } else { "" },
                format_sig(self.ly_beta[i], 6),
                format_sig(self.ly_se[i], 6),
            );
        }
        let _ = writeln!(out, "HPD coverage {pct}%; * marks intervals excluding 0");
        if let Some(grid) = &self.grid {
            let _ = writeln!(out);
            let _ = writeln!(out, "{:>8} {:>12} {:>12} {:>12} {:>12}", "interval", "lower", "upper", "mean", "sd");
            for p in &self.baseline {
                let (lo, hi) = grid.bounds(p.interval_index);
                let _ = writeln!(
                    out,
                    "{:>8} {:>12} {:>12} {:>12} {:>12}",
                    p.interval_index,
                    format_sig(lo, 6),
                    format_sig(hi, 6),
                    format_sig(p.mean, 6),
                    format_sig(p.variance.sqrt(), 6),
                );
            }
        }
        out
    }
}
