//! Data generator and replicated Monte Carlo experiments.
//!
//! Replicate `r` draws from its own ChaCha8 stream, seeded with the
//! experiment seed and with the stream id set to `r`, so results do not
//! depend on thread count or scheduling. Aggregation runs serially in
//! replicate order.

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baseline::estimate_baseline;
use crate::data::{
    grid_from_quantiles, validate_dataset, AlphaFunction, BetaPrior, GammaProcessPrior, Observation,
    SurvivalDataset, TimeGrid,
};
use crate::error::{Error, Result};
use crate::hybrid::{beta_mode, hpd_interval, pseudo_posterior, sigma_hat};
use crate::lin_ying::ly_estimate;
use crate::numeric::{format_sig, mean_sd};

/// Piecewise-constant hazard: `levels[j]` applies on `(cuts[j−1], cuts[j]]`,
/// the last level on `(cuts.last(), ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseHazard {
    cuts: Vec<f64>,
    levels: Vec<f64>,
}

impl PiecewiseHazard {
    pub fn new(cuts: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        if levels.len() != cuts.len() + 1 {
            return Err(Error::InvalidConfig(format!(
                "{} cuts need {} levels, got {}",
                cuts.len(),
                cuts.len() + 1,
                levels.len()
            )));
        }
        let mut prev = 0.0;
        for &s in &cuts {
            if !(s > prev) || !s.is_finite() {
                return Err(Error::InvalidConfig("hazard cuts must be positive and increasing".into()));
            }
            prev = s;
        }
        if levels.iter().any(|&l| !(l >= 0.0) || !l.is_finite()) {
            return Err(Error::InvalidConfig("hazard levels must be finite and >= 0".into()));
        }
        Ok(Self { cuts, levels })
    }

    pub fn constant(level: f64) -> Result<Self> {
        Self::new(Vec::new(), vec![level])
    }

    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// `Λ₀(t) = ∫₀ᵗ λ₀(u) du`.
    pub fn cumulative(&self, t: f64) -> f64 {
        let mut total = 0.0;
        let mut lo = 0.0;
        for (j, &level) in self.levels.iter().enumerate() {
            let hi = self.cuts.get(j).copied().unwrap_or(f64::INFINITY);
            if t <= lo {
                break;
            }
            total += level * (t.min(hi) - lo);
            lo = hi;
        }
        total
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CovariateLaw {
    /// Independent χ²₁ components, drawn as squared standard normals.
    #[default]
    ChiSquared1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub replicates: usize,
    pub beta_true: Vec<f64>,
    pub baseline: PiecewiseHazard,
    /// Rate of the exponential censoring time; 0 disables censoring.
    pub censor_rate: f64,
    pub covariate_law: CovariateLaw,
    pub seed: u64,
}

impl SimConfig {
    /// `λ(t) = 1 + 0.5 z`, `z ~ χ²₁`, censoring `Exp(mean 2)`, `R = 1000`.
    pub fn reference(n: usize, seed: u64) -> Self {
        Self {
            n,
            replicates: 1000,
            beta_true: vec![0.5],
            baseline: PiecewiseHazard::constant(1.0).expect("valid constant hazard"),
            censor_rate: 0.5,
            covariate_law: CovariateLaw::ChiSquared1,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!("n must be >= 2, got {}", self.n)));
        }
        if self.replicates < 1 {
            return Err(Error::InvalidConfig("need at least one replicate".into()));
        }
        if self.beta_true.is_empty() || self.beta_true.iter().any(|&b| !(b >= 0.0) || !b.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "beta_true must be nonempty, finite and >= 0, got {:?}",
                self.beta_true
            )));
        }
        if !(self.baseline.levels.last().copied().unwrap_or(0.0) > 0.0) {
            return Err(Error::InvalidConfig("last baseline level must be positive".into()));
        }
        if !(self.censor_rate >= 0.0) || !self.censor_rate.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "censor_rate must be finite and >= 0, got {}",
                self.censor_rate
            )));
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.beta_true.len()
    }
}

/// Random stream for replicate `replicate` of an experiment seeded with `seed`.
pub fn replicate_rng(seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}

/// Inverse-transform draw from the additive hazard `λ₀(t) + β′z`: solve
/// `Λ(T) = E`, `E ~ Exp(1)`, one constant-hazard segment at a time.
pub fn draw_event_time<R: Rng + ?Sized>(z: &[f64], beta: &[f64], baseline: &PiecewiseHazard, rng: &mut R) -> f64 {
    let bz: f64 = z.iter().zip(beta).map(|(a, b)| a * b).sum();
    let mut remaining: f64 = Exp1.sample(rng);
    let mut lo = 0.0;
    for (j, &level) in baseline.levels.iter().enumerate() {
        let h = level + bz;
        match baseline.cuts.get(j) {
            Some(&hi) => {
                let mass = h * (hi - lo);
                if remaining <= mass && h > 0.0 {
                    return lo + remaining / h;
                }
                remaining -= mass;
                lo = hi;
            }
            None => {
                assert!(h > 0.0, "total hazard must be positive on the last segment");
                return lo + remaining / h;
            }
        }
    }
    unreachable!("levels always has a final unbounded segment")
}

fn draw_covariates<R: Rng + ?Sized>(law: CovariateLaw, k: usize, rng: &mut R) -> Vec<f64> {
    match law {
        CovariateLaw::ChiSquared1 => (0..k)
            .map(|_| {
                let x: f64 = StandardNormal.sample(rng);
                x * x
            })
            .collect(),
    }
}

/// `t = min(T*, C)`, `δ = 1(T* ≤ C)`.
pub fn draw_observation<R: Rng + ?Sized>(cfg: &SimConfig, rng: &mut R) -> Observation {
    let z = draw_covariates(cfg.covariate_law, cfg.k(), rng);
    let event_time = draw_event_time(&z, &cfg.beta_true, &cfg.baseline, rng);
    let censor_time = if cfg.censor_rate > 0.0 {
        let e: f64 = Exp1.sample(rng);
        e / cfg.censor_rate
    } else {
        f64::INFINITY
    };
    Observation::new(event_time.min(censor_time), event_time <= censor_time, z)
}

/// Dataset for one replicate.
pub fn generate_dataset(cfg: &SimConfig, replicate: u64) -> Result<SurvivalDataset> {
    let mut rng = replicate_rng(cfg.seed, replicate);
    let rows: Vec<Observation> = (0..cfg.n).map(|_| draw_observation(cfg, &mut rng)).collect();
    validate_dataset(rows.into_iter().map(|o| (o.time, o.event, o.covariates)))
}

/// Hybrid estimates of one replicate at every `(μ, ω)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateBeta {
    pub ly: Vec<f64>,
    /// `sqrt(diag D)`
    pub ly_se: Vec<f64>,
    /// `(β̂ᴮ, σ̂)` per cell, μ-major.
    pub cells: Vec<(Vec<f64>, Vec<f64>)>,
}

pub fn beta_replicate(
    ds: &SurvivalDataset,
    mu_grid: &[f64],
    omega_grid: &[f64],
    coverage: f64,
) -> Result<ReplicateBeta> {
    let k = ds.k();
    let ly = ly_estimate(ds)?;
    let mut cells = Vec::with_capacity(mu_grid.len() * omega_grid.len());
    for &mu in mu_grid {
        for &omega in omega_grid {
            let prior = BetaPrior::isotropic(vec![mu; k], omega)?;
            let pp = pseudo_posterior(&ly, &prior)?;
            let beta = beta_mode(&pp);
            let sigma = (0..k)
                .map(|c| hpd_interval(&pp, c, coverage).map(|h| sigma_hat(&h)))
                .collect::<Result<Vec<_>>>()?;
            cells.push((beta.as_slice().to_vec(), sigma));
        }
    }
    Ok(ReplicateBeta {
        ly: ly.m.as_slice().to_vec(),
        ly_se: (0..k).map(|i| ly.d[(i, i)].sqrt()).collect(),
        cells,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaCell {
    pub mu: f64,
    pub omega: f64,
    /// Monte Carlo mean of β̂ᴮ, per component.
    pub mean: Vec<f64>,
    /// Monte Carlo sd of β̂ᴮ.
    pub sd: Vec<f64>,
    /// Monte Carlo mean of the HPD-width σ̂.
    pub sigma_hat_mean: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaReport {
    pub n: usize,
    pub replicates: usize,
    pub dropped: usize,
    pub mu_grid: Vec<f64>,
    pub omega_grid: Vec<f64>,
    pub coverage: f64,
    /// μ-major: `cells[i * omega_grid.len() + j]`.
    pub cells: Vec<BetaCell>,
    pub ly_mean: Vec<f64>,
    pub ly_sd: Vec<f64>,
    /// Monte Carlo mean of `sqrt(diag D)`.
    pub ly_se_mean: Vec<f64>,
}

impl BetaReport {
    pub fn cell(&self, mu: f64, omega: f64) -> Option<&BetaCell> {
        self.cells.iter().find(|c| c.mu == mu && c.omega == omega)
    }
}

fn collect_replicates<T: Send>(
    replicates: usize,
    f: impl Fn(u64) -> Result<T> + Sync + Send,
) -> Result<(Vec<T>, usize)> {
    let results: Vec<Result<T>> = (0..replicates as u64).into_par_iter().map(f).collect();
    let mut ok = Vec::with_capacity(replicates);
    let mut dropped = 0;
    let mut last = None;
    for r in results {
        match r {
            Ok(v) => ok.push(v),
            Err(e) => {
                dropped += 1;
                last = Some(e);
            }
        }
    }
    if dropped * 100 > replicates {
        return Err(Error::TooManyDropped {
            dropped,
            replicates,
            last: last.map(|e| e.to_string()).unwrap_or_default(),
        });
    }
    if ok.is_empty() {
        return Err(last.unwrap_or(Error::InvalidConfig("no replicates".into())));
    }
    Ok((ok, dropped))
}

fn column(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = values.collect();
    mean_sd(&v)
}

/// Tables 1–2 style experiment. Every cell reuses the same replicate datasets.
pub fn run_beta_experiment(
    cfg: &SimConfig,
    mu_grid: &[f64],
    omega_grid: &[f64],
    coverage: f64,
) -> Result<BetaReport> {
    cfg.validate()?;
    if mu_grid.is_empty() || omega_grid.is_empty() {
        return Err(Error::InvalidConfig("empty hyperparameter grid".into()));
    }
    let (reps, dropped) = collect_replicates(cfg.replicates, |r| {
        let ds = generate_dataset(cfg, r)?;
        beta_replicate(&ds, mu_grid, omega_grid, coverage)
    })?;
    let k = cfg.k();
    let mut cells = Vec::new();
    for (i, &mu) in mu_grid.iter().enumerate() {
        for (j, &omega) in omega_grid.iter().enumerate() {
            let idx = i * omega_grid.len() + j;
            let mut mean = Vec::with_capacity(k);
            let mut sd = Vec::with_capacity(k);
            let mut sig = Vec::with_capacity(k);
            for c in 0..k {
                let (m, s) = column(reps.iter().map(|r| r.cells[idx].0[c]));
                mean.push(m);
                sd.push(s);
                sig.push(column(reps.iter().map(|r| r.cells[idx].1[c])).0);
            }
            cells.push(BetaCell {
                mu,
                omega,
                mean,
                sd,
                sigma_hat_mean: sig,
            });
        }
    }
    let (ly_mean, ly_sd): (Vec<f64>, Vec<f64>) = (0..k).map(|c| column(reps.iter().map(|r| r.ly[c]))).unzip();
    let ly_se_mean = (0..k).map(|c| column(reps.iter().map(|r| r.ly_se[c])).0).collect();
    Ok(BetaReport {
        n: cfg.n,
        replicates: cfg.replicates,
        dropped,
        mu_grid: mu_grid.to_vec(),
        omega_grid: omega_grid.to_vec(),
        coverage,
        cells,
        ly_mean,
        ly_sd,
        ly_se_mean,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GridSpec {
    /// Fixed interior cuts; `t_F` is the largest observed time.
    Cuts(Vec<f64>),
    /// Nearest-rank quantiles of the observed event times.
    Quantiles(Vec<f64>),
}

impl GridSpec {
    /// Grid for `ds`. Without an explicit `t_final` the grid ends at the
    /// largest observed time, extended past the last fixed cut when every
    /// observation falls before it.
    pub fn build(&self, ds: &SurvivalDataset, t_final: Option<f64>) -> Result<TimeGrid> {
        let max_time = ds.max_time();
        match self {
            GridSpec::Cuts(cuts) => {
                let t_final = t_final.unwrap_or_else(|| {
                    let last = cuts.last().copied().unwrap_or(0.0);
                    if max_time > last {
                        max_time
                    } else {
                        let prev = if cuts.len() >= 2 { cuts[cuts.len() - 2] } else { 0.0 };
                        last + (last - prev).max(f64::MIN_POSITIVE)
                    }
                });
                TimeGrid::new(cuts.clone(), t_final)
            }
            GridSpec::Quantiles(probs) => grid_from_quantiles(ds, probs, t_final.unwrap_or(max_time)),
        }
    }

    /// Number of intervals reported by the baseline experiment (the tail
    /// interval up to `t_F` is left out).
    pub fn reported_intervals(&self) -> usize {
        match self {
            GridSpec::Cuts(c) => c.len(),
            GridSpec::Quantiles(p) => p.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BetaSource {
    /// Re-estimate β per replicate with the hybrid estimator under
    /// `N(μ·1, ω·I)`.
    PerReplicate { mu: f64, omega: f64 },
    /// Use the same β for every replicate.
    Fixed(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineDesign {
    pub grid: GridSpec,
    pub alpha: AlphaFunction,
    pub c_grid: Vec<f64>,
    pub beta: BetaSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineRow {
    pub c: f64,
    pub interval: usize,
    /// True `Λ₀ⱼ⁺` under the generating hazard, averaged over replicates.
    pub true_increment: f64,
    /// Monte Carlo mean of the posterior mean.
    pub mean: f64,
    /// Monte Carlo sd of the posterior mean.
    pub sd: f64,
    /// Monte Carlo mean of the posterior sd.
    pub posterior_sd_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub n: usize,
    pub replicates: usize,
    pub dropped: usize,
    pub intervals: usize,
    pub c_grid: Vec<f64>,
    /// c-major: `rows[ci * intervals + (j − 1)]`.
    pub rows: Vec<BaselineRow>,
}

impl BaselineReport {
    pub fn row(&self, c: f64, interval: usize) -> Option<&BaselineRow> {
        self.rows.iter().find(|r| r.c == c && r.interval == interval)
    }
}

struct BaselineReplicate {
    truth: Vec<f64>,
    // [c][interval] -> (mean, sd)
    estimates: Vec<Vec<(f64, f64)>>,
}

fn baseline_replicate(cfg: &SimConfig, design: &BaselineDesign, r: u64) -> Result<BaselineReplicate> {
    let ds = generate_dataset(cfg, r)?;
    let beta = match &design.beta {
        BetaSource::PerReplicate { mu, omega } => {
            let ly = ly_estimate(&ds)?;
            let prior = BetaPrior::isotropic(vec![*mu; ds.k()], *omega)?;
            beta_mode(&pseudo_posterior(&ly, &prior)?)
        }
        BetaSource::Fixed(b) => DVector::from_column_slice(b),
    };
    let grid = design.grid.build(&ds, None)?;
    let reported = design.grid.reported_intervals();
    if grid.num_intervals() < reported {
        return Err(Error::DegenerateGrid(format!(
            "replicate {r}: grid has {} intervals, {reported} required",
            grid.num_intervals()
        )));
    }
    let truth = (1..=reported)
        .map(|j| {
            let (lo, hi) = grid.bounds(j);
            cfg.baseline.cumulative(hi) - cfg.baseline.cumulative(lo)
        })
        .collect();
    let mut estimates = Vec::with_capacity(design.c_grid.len());
    for &c in &design.c_grid {
        let prior = GammaProcessPrior::from_function(&grid, &design.alpha, c)?;
        let posts = estimate_baseline(&ds, &grid, &beta, &prior)?;
        estimates.push(
            posts
                .iter()
                .take(reported)
                .map(|p| (p.mean, p.variance.sqrt()))
                .collect(),
        );
    }
    Ok(BaselineReplicate { truth, estimates })
}

/// Tables 3–4 style experiment.
pub fn run_baseline_experiment(cfg: &SimConfig, design: &BaselineDesign) -> Result<BaselineReport> {
    cfg.validate()?;
    if design.c_grid.is_empty() || design.c_grid.iter().any(|&c| !(c > 0.0)) {
        return Err(Error::InvalidConfig("c grid must be nonempty and positive".into()));
    }
    if let BetaSource::Fixed(b) = &design.beta {
        if b.len() != cfg.k() {
            return Err(Error::InvalidConfig("fixed beta has the wrong dimension".into()));
        }
    }
    let (reps, dropped) = collect_replicates(cfg.replicates, |r| baseline_replicate(cfg, design, r))?;
    let intervals = design.grid.reported_intervals();
    let mut rows = Vec::new();
    for (ci, &c) in design.c_grid.iter().enumerate() {
        for j in 0..intervals {
            let (mean, sd) = column(reps.iter().map(|r| r.estimates[ci][j].0));
            rows.push(BaselineRow {
                c,
                interval: j + 1,
                true_increment: column(reps.iter().map(|r| r.truth[j])).0,
                mean,
                sd,
                posterior_sd_mean: column(reps.iter().map(|r| r.estimates[ci][j].1)).0,
            });
        }
    }
    Ok(BaselineReport {
        n: cfg.n,
        replicates: cfg.replicates,
        dropped,
        intervals,
        c_grid: design.c_grid.clone(),
        rows,
    })
}

impl BetaReport {
    /// One row per `(μ, ω, component)` cell, full precision.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["mu", "omega", "component", "mean", "sd", "sigma_hat_mean"])?;
        for cell in &self.cells {
            for c in 0..cell.mean.len() {
                w.write_record([
                    cell.mu.to_string(),
                    cell.omega.to_string(),
                    (c + 1).to_string(),
                    cell.mean[c].to_string(),
                    cell.sd[c].to_string(),
                    cell.sigma_hat_mean[c].to_string(),
                ])?;
            }
        }
        for c in 0..self.ly_mean.len() {
            w.write_record([
                "ly".to_string(),
                String::new(),
                (c + 1).to_string(),
                self.ly_mean[c].to_string(),
                self.ly_sd[c].to_string(),
                self.ly_se_mean[c].to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// μ down the rows, ω across; each cell shows the mean of β̂ᴮ over the
    /// Monte Carlo sd and, in brackets, the mean HPD-based σ̂. First
    /// component only.
    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "n = {}, replicates = {} ({} dropped), coverage = {}",
            self.n,
            self.replicates,
            self.dropped,
            self.coverage
        );
        let _ = write!(out, "{:>10}", "mu/omega");
        for &o in &self.omega_grid {
            let _ = write!(out, " {:>11}", format_sig(o, 6));
        }
        let _ = writeln!(out);
        for (i, &mu) in self.mu_grid.iter().enumerate() {
            let row = &self.cells[i * self.omega_grid.len()..(i + 1) * self.omega_grid.len()];
            let _ = write!(out, "{:>10}", format_sig(mu, 6));
            for c in row {
                let _ = write!(out, " {:>11}", format_sig(c.mean[0], 6));
            }
            let _ = writeln!(out);
            let _ = write!(out, "{:>10}", "");
            for c in row {
                let _ = write!(out, " {:>11}", format!("({})", format_sig(c.sd[0], 4)));
            }
            let _ = writeln!(out);
            let _ = write!(out, "{:>10}", "");
            for c in row {
                let _ = write!(out, " {:>11}", format!("[{}]", format_sig(c.sigma_hat_mean[0], 4)));
            }
            let _ = writeln!(out);
        }
        let _ = writeln!(
            out,
            "Lin-Ying: mean {} (sd {}), mean se {}",
            format_sig(self.ly_mean[0], 6),
            format_sig(self.ly_sd[0], 6),
            format_sig(self.ly_se_mean[0], 6)
        );
        let _ = writeln!(out, "(...) Monte Carlo sd; [...] mean HPD-based sigma_hat");
        out
    }
}

impl BaselineReport {
    /// One row per `(c, interval)`, full precision.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["c", "interval", "true_increment", "mean", "sd", "posterior_sd_mean"])?;
        for r in &self.rows {
            w.write_record([
                r.c.to_string(),
                r.interval.to_string(),
                r.true_increment.to_string(),
                r.mean.to_string(),
                r.sd.to_string(),
                r.posterior_sd_mean.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Intervals down the rows, `c` across; each cell shows the mean
    /// posterior mean with its Monte Carlo sd in parentheses.
    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "n = {}, replicates = {} ({} dropped)",
            self.n, self.replicates, self.dropped
        );
        let _ = write!(out, "{:>8} {:>10}", "interval", "true");
        for &c in &self.c_grid {
            let _ = write!(out, " {:>22}", format!("c = {}", format_sig(c, 3)));
        }
        let _ = writeln!(out);
        for j in 1..=self.intervals {
            let truth = self.row(self.c_grid[0], j).map(|r| r.true_increment).unwrap_or(f64::NAN);
            let _ = write!(out, "{:>8} {:>10}", j, format_sig(truth, 6));
            for &c in &self.c_grid {
                let cell = match self.row(c, j) {
                    Some(r) => format!("{} ({})", format_sig(r.mean, 6), format_sig(r.sd, 4)),
                    None => "-".to_string(),
                };
                let _ = write!(out, " {cell:>22}");
            }
            let _ = writeln!(out);
        }
        out
    }
}

/// Hyperparameter grids of the β tables.
pub const REFERENCE_MU_GRID: [f64; 7] = [0.0, 0.25, 0.5, 0.75, 1.0, 2.0, 10.0];
pub const REFERENCE_OMEGA_GRID: [f64; 7] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 1000.0];
/// Scales of the baseline tables.
pub const REFERENCE_C_GRID: [f64; 3] = [10.0, 1.0, 0.1];

/// Baseline design of the reference study: cuts at the true cumulative
/// hazard values, `α = (5, 6, 6.3, 6.31)` at the cuts, β re-estimated per
/// replicate under an effectively flat prior centred at 0.5.
pub fn reference_baseline_design() -> BaselineDesign {
    let cuts = vec![0.125, 0.3, 0.6, 1.15];
    let alpha = AlphaFunction::new(vec![(0.125, 5.0), (0.3, 6.0), (0.6, 6.3), (1.15, 6.31)])
        .expect("valid alpha knots");
    BaselineDesign {
        grid: GridSpec::Cuts(cuts),
        alpha,
        c_grid: REFERENCE_C_GRID.to_vec(),
        beta: BetaSource::PerReplicate {
            mu: 0.5,
            omega: 1e8,
        },
    }
}
