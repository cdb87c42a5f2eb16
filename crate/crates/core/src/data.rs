//! Domain types shared by every estimator: observations, the time grid and
//! the two priors.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One subject: follow-up time, event indicator and covariates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub time: f64,
    /// `true` when the event was observed, `false` when right-censored.
    pub event: bool,
    pub covariates: Vec<f64>,
}

impl Observation {
    pub fn new(time: f64, event: bool, covariates: Vec<f64>) -> Self {
        Self {
            time,
            event,
            covariates,
        }
    }
}

/// Controls the checks applied by [`validate_dataset_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ValidationOptions {
    /// Accept negative covariate values. Only the estimating-equation path
    /// is meaningful for such data; the baseline posterior needs `β′z ≥ 0`.
    pub allow_signed_covariates: bool,
}

/// A validated, right-censored sample. Row order is preserved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalDataset {
    observations: Vec<Observation>,
    k: usize,
    covariate_names: Vec<String>,
}

impl SurvivalDataset {
    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn n(&self) -> usize {
        self.observations.len()
    }

    /// Covariate dimension.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn covariate_names(&self) -> &[String] {
        &self.covariate_names
    }

    pub fn with_covariate_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.k {
            return Err(Error::DimensionMismatch {
                row: 0,
                expected: self.k,
                found: names.len(),
            });
        }
        self.covariate_names = names;
        Ok(self)
    }

    pub fn max_time(&self) -> f64 {
        self.observations
            .iter()
            .map(|o| o.time)
            .fold(0.0, f64::max)
    }

    pub fn event_count(&self) -> usize {
        self.observations.iter().filter(|o| o.event).count()
    }

    /// Sorted times of the uncensored observations.
    pub fn event_times(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self
            .observations
            .iter()
            .filter(|o| o.event)
            .map(|o| o.time)
            .collect();
        t.sort_by(f64::total_cmp);
        t
    }

    /// Whether any covariate is negative (only possible when validated with
    /// `allow_signed_covariates`).
    pub fn has_signed_covariates(&self) -> bool {
        self.observations
            .iter()
            .any(|o| o.covariates.iter().any(|&z| z < 0.0))
    }
}

/// Validates raw `(time, event, covariates)` triples.
pub fn validate_dataset<I>(raw: I) -> Result<SurvivalDataset>
where
    I: IntoIterator<Item = (f64, bool, Vec<f64>)>,
{
    validate_dataset_with(raw, ValidationOptions::default())
}

pub fn validate_dataset_with<I>(raw: I, opts: ValidationOptions) -> Result<SurvivalDataset>
where
    I: IntoIterator<Item = (f64, bool, Vec<f64>)>,
{
    let mut observations = Vec::new();
    let mut k = None;
    for (row, (time, event, covariates)) in raw.into_iter().enumerate() {
        if !time.is_finite() || time < 0.0 {
            return Err(Error::NonNegativityViolation {
                row,
                what: format!("time = {time}"),
            });
        }
        let expected = *k.get_or_insert(covariates.len());
        if covariates.len() != expected || expected == 0 {
            return Err(Error::DimensionMismatch {
                row,
                expected: expected.max(1),
                found: covariates.len(),
            });
        }
        for (i, &z) in covariates.iter().enumerate() {
            if !z.is_finite() || (z < 0.0 && !opts.allow_signed_covariates) {
                return Err(Error::NonNegativityViolation {
                    row,
                    what: format!("covariate {i} = {z}"),
                });
            }
        }
        observations.push(Observation::new(time, event, covariates));
    }
    if !observations.iter().any(|o| o.event) {
        return Err(Error::NoEvents);
    }
    let k = k.unwrap_or(0);
    let covariate_names = (1..=k).map(|i| format!("z{i}")).collect();
    Ok(SurvivalDataset {
        observations,
        k,
        covariate_names,
    })
}

/// Partition `0 = s₀ < s₁ < … < s_{m−1} < s_m = t_F` of the follow-up window.
///
/// Intervals are left-open and right-closed, `(s_{j−1}, s_j]`, and indexed
/// from 1. Time 0 belongs to interval 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    cuts: Vec<f64>,
    t_final: f64,
}

impl TimeGrid {
    /// `cuts` are the interior points `s₁ … s_{m−1}` (possibly empty).
    pub fn new(cuts: Vec<f64>, t_final: f64) -> Result<Self> {
        if !t_final.is_finite() || t_final <= 0.0 {
            return Err(Error::InvalidGrid(format!("t_final must be positive, got {t_final}")));
        }
        let mut prev = 0.0;
        for &s in &cuts {
            if !s.is_finite() || s <= prev {
                return Err(Error::InvalidGrid(format!(
                    "cuts must be positive and strictly increasing ({s} after {prev})"
                )));
            }
            prev = s;
        }
        if prev >= t_final {
            return Err(Error::InvalidGrid(format!(
                "last cut {prev} must be below t_final {t_final}"
            )));
        }
        Ok(Self { cuts, t_final })
    }

    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    /// Number of intervals `m`.
    pub fn num_intervals(&self) -> usize {
        self.cuts.len() + 1
    }

    /// Upper endpoints `s₁ … s_m`.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut b = self.cuts.clone();
        b.push(self.t_final);
        b
    }

    /// `(s_{j−1}, s_j)` for 1-based `j`.
    pub fn bounds(&self, j: usize) -> (f64, f64) {
        assert!(j >= 1 && j <= self.num_intervals(), "interval {j} out of range");
        let lo = if j == 1 { 0.0 } else { self.cuts[j - 2] };
        let hi = if j == self.num_intervals() {
            self.t_final
        } else {
            self.cuts[j - 1]
        };
        (lo, hi)
    }

    /// 1-based `j` with `s_{j−1} < t ≤ s_j`; `t = 0` maps to 1.
    pub fn interval_index(&self, t: f64) -> Result<usize> {
        if !(0.0..=self.t_final).contains(&t) {
            return Err(Error::OutOfRange {
                t,
                t_final: self.t_final,
            });
        }
        Ok(self.cuts.partition_point(|&s| s < t) + 1)
    }

    pub fn covers(&self, ds: &SurvivalDataset) -> bool {
        ds.max_time() <= self.t_final
    }
}

/// Grid whose cuts are nearest-rank empirical quantiles of the uncensored
/// times. Duplicate cuts collapse; cuts at 0 or at/after `t_final` are dropped.
pub fn grid_from_quantiles(ds: &SurvivalDataset, probs: &[f64], t_final: f64) -> Result<TimeGrid> {
    if probs.is_empty() {
        return Err(Error::InvalidGrid("no quantile probabilities given".into()));
    }
    let mut prev = 0.0;
    for &p in probs {
        if !(p > prev && p < 1.0) {
            return Err(Error::InvalidGrid(format!(
                "quantile probabilities must be strictly increasing in (0, 1), got {probs:?}"
            )));
        }
        prev = p;
    }
    if t_final < ds.max_time() {
        return Err(Error::InvalidGrid(format!(
            "t_final {t_final} is below the largest observed time {}",
            ds.max_time()
        )));
    }
    let times = ds.event_times();
    let distinct = {
        let mut d = times.clone();
        d.dedup();
        d.len()
    };
    if distinct < 2 {
        return Err(Error::DegenerateGrid(
            "fewer than two distinct uncensored times".into(),
        ));
    }
    let n = times.len();
    let mut cuts: Vec<f64> = Vec::with_capacity(probs.len());
    for &p in probs {
        let rank = ((p * n as f64).ceil() as usize).clamp(1, n);
        let q = times[rank - 1];
        if q > 0.0 && q < t_final && cuts.last().is_none_or(|&last| q > last) {
            cuts.push(q);
        }
    }
    if cuts.is_empty() {
        return Err(Error::DegenerateGrid(
            "all quantile cuts collapsed onto 0 or t_final".into(),
        ));
    }
    TimeGrid::new(cuts, t_final)
}

/// Truncated multivariate normal prior on β: `N_k(μ, C)` restricted to the
/// nonnegative orthant. The normalizing constant is never needed.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaPrior {
    mu: DVector<f64>,
    cov: DMatrix<f64>,
}

impl BetaPrior {
    pub fn new(mu: Vec<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let k = mu.len();
        if k == 0 || cov.nrows() != k || cov.ncols() != k {
            return Err(Error::InvalidPrior(format!(
                "mean has length {k} but covariance is {}x{}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mu.iter().chain(cov.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidPrior("non-finite hyperparameter".into()));
        }
        let scale = cov.amax().max(f64::MIN_POSITIVE);
        for i in 0..k {
            for j in 0..i {
                if (cov[(i, j)] - cov[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidPrior("covariance is not symmetric".into()));
                }
            }
        }
        if cov.clone().cholesky().is_none() {
            return Err(Error::InvalidPrior("covariance is not positive definite".into()));
        }
        Ok(Self {
            mu: DVector::from_vec(mu),
            cov,
        })
    }

    /// `μ_β = mu`, `C_β = ω·I`.
    pub fn isotropic(mu: Vec<f64>, omega: f64) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(Error::InvalidPrior(format!("omega must be positive, got {omega}")));
        }
        let k = mu.len();
        Self::new(mu, DMatrix::identity(k, k) * omega)
    }

    /// Default used when only the scale is given: `μ_β = 1_k`, `C_β = ω·I_k`.
    pub fn default_for(k: usize, omega: f64) -> Result<Self> {
        Self::isotropic(vec![1.0; k], omega)
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.mu
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn k(&self) -> usize {
        self.mu.len()
    }
}

/// Increasing function `α(t)` with `α(0) = 0`, given by knots and linear
/// interpolation. Past the last knot it continues with the last slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaFunction {
    knots: Vec<(f64, f64)>,
}

impl AlphaFunction {
    /// `knots` are `(t, α(t))` pairs with strictly increasing positive `t`
    /// and nondecreasing `α`; `(0, 0)` is implied.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidPrior("alpha function needs at least one knot".into()));
        }
        let (mut pt, mut pa) = (0.0, 0.0);
        for &(t, a) in &knots {
            if !(t > pt) || !(a >= pa) || !a.is_finite() || !t.is_finite() {
                return Err(Error::InvalidPrior(format!(
                    "alpha knots must have increasing t and nondecreasing alpha ({t}, {a})"
                )));
            }
            pt = t;
            pa = a;
        }
        Ok(Self { knots })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut prev = (0.0, 0.0);
        for &(kt, ka) in &self.knots {
            if t <= kt {
                return prev.1 + (ka - prev.1) * (t - prev.0) / (kt - prev.0);
            }
            prev = (kt, ka);
        }
        let n = self.knots.len();
        let before = if n >= 2 { self.knots[n - 2] } else { (0.0, 0.0) };
        let slope = (prev.1 - before.1) / (prev.0 - before.0);
        prev.1 + slope * (t - prev.0)
    }
}

/// Gamma-process prior `GP(c·α(t), c)` on the cumulative baseline hazard,
/// sampled at the grid boundaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaProcessPrior {
    /// `α(s₁) … α(s_m)`.
    alpha_at_cuts: Vec<f64>,
    c: f64,
}

impl GammaProcessPrior {
    pub fn new(alpha_at_cuts: Vec<f64>, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidPrior(format!("scale c must be positive, got {c}")));
        }
        if alpha_at_cuts.is_empty() {
            return Err(Error::InvalidPrior("alpha needs at least one value".into()));
        }
        let mut prev = 0.0;
        for &a in &alpha_at_cuts {
            if !a.is_finite() || a < prev {
                return Err(Error::InvalidPrior(format!(
                    "alpha must be nondecreasing from alpha(0) = 0, got {alpha_at_cuts:?}"
                )));
            }
            prev = a;
        }
        Ok(Self { alpha_at_cuts, c })
    }

    /// Samples `alpha` at every boundary of `grid`.
    pub fn from_function(grid: &TimeGrid, alpha: &AlphaFunction, c: f64) -> Result<Self> {
        Self::new(grid.boundaries().iter().map(|&s| alpha.eval(s)).collect(), c)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn alpha_at_cuts(&self) -> &[f64] {
        &self.alpha_at_cuts
    }

    pub fn num_intervals(&self) -> usize {
        self.alpha_at_cuts.len()
    }

    /// `α_j = α(s_j) − α(s_{j−1})` for 1-based `j`.
    pub fn increment(&self, j: usize) -> f64 {
        let hi = self.alpha_at_cuts[j - 1];
        let lo = if j == 1 { 0.0 } else { self.alpha_at_cuts[j - 2] };
        hi - lo
    }

    /// Same increments, different scale.
    pub fn with_c(&self, c: f64) -> Result<Self> {
        Self::new(self.alpha_at_cuts.clone(), c)
    }
}

/// Posterior of one cumulative-hazard increment `Λ₀ⱼ⁺`: a mixture of
/// `Gamma(k + cα_j, c_j)` laws, `k = 0..N_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineIncrementPosterior {
    pub interval_index: usize,
    /// Normalized mixture log-weights (`-inf` for components that vanish;
    /// serialized as `null`).
    #[serde(with = "log_weights_serde")]
    pub log_weights: Vec<f64>,
    /// Common rate `c_j`.
    pub rate: f64,
    /// Component shapes `k + c·α_j`.
    pub shape_offsets: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
}

mod log_weights_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|&l| (l != f64::NEG_INFINITY).then_some(l))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let v = Vec::<Option<f64>>::deserialize(d)?;
        Ok(v.into_iter().map(|l| l.unwrap_or(f64::NEG_INFINITY)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(rows: &[(f64, bool, &[f64])]) -> Result<SurvivalDataset> {
        validate_dataset(rows.iter().map(|(t, e, z)| (*t, *e, z.to_vec())))
    }

    #[test]
    fn minimal_valid_dataset() {
        let d = ds(&[(1.0, true, &[0.5])]).unwrap();
        assert_eq!(d.n(), 1);
        assert_eq!(d.k(), 1);
    }

    #[test]
    fn negative_covariate_rejected() {
        let err = ds(&[(1.0, true, &[-0.1])]).unwrap_err();
        assert!(matches!(err, Error::NonNegativityViolation { row: 0, .. }));
        let ok = validate_dataset_with(
            vec![(1.0, true, vec![-0.1])],
            ValidationOptions {
                allow_signed_covariates: true,
            },
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn negative_or_nan_time_rejected() {
        assert!(matches!(
            ds(&[(-1.0, true, &[0.5])]),
            Err(Error::NonNegativityViolation { .. })
        ));
        assert!(matches!(
            ds(&[(f64::NAN, true, &[0.5])]),
            Err(Error::NonNegativityViolation { .. })
        ));
    }

    #[test]
    fn all_censored_is_no_events() {
        assert_eq!(ds(&[(1.0, false, &[0.5])]).unwrap_err(), Error::NoEvents);
        assert_eq!(ds(&[]).unwrap_err(), Error::NoEvents);
    }

    #[test]
    fn ragged_covariates_rejected() {
        let err = ds(&[(1.0, true, &[0.5]), (2.0, true, &[0.5, 1.0])]).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                row: 1,
                expected: 1,
                found: 2
            }
        );
    }

    #[test]
    fn zero_time_accepted() {
        assert!(ds(&[(0.0, true, &[1.0])]).is_ok());
    }

    #[test]
    fn interval_index_convention() {
        let g = TimeGrid::new(vec![1.0, 2.0], 3.0).unwrap();
        assert_eq!(g.interval_index(1.5).unwrap(), 2);
        assert_eq!(g.interval_index(1.0).unwrap(), 1);
        assert_eq!(g.interval_index(0.0).unwrap(), 1);
        assert_eq!(g.interval_index(3.0).unwrap(), 3);
        assert!(matches!(g.interval_index(3.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(g.interval_index(-0.1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn grid_rejects_bad_cuts() {
        assert!(TimeGrid::new(vec![2.0, 1.0], 3.0).is_err());
        assert!(TimeGrid::new(vec![0.0, 1.0], 3.0).is_err());
        assert!(TimeGrid::new(vec![1.0, 3.0], 3.0).is_err());
        assert!(TimeGrid::new(vec![], 3.0).is_ok());
    }

    #[test]
    fn median_grid() {
        let d = ds(&[
            (1.0, true, &[1.0]),
            (2.0, true, &[1.0]),
            (3.0, true, &[1.0]),
            (4.0, true, &[1.0]),
            (5.0, true, &[1.0]),
        ])
        .unwrap();
        let g = grid_from_quantiles(&d, &[0.5], 5.0).unwrap();
        assert_eq!(g.cuts(), &[3.0]);
        assert_eq!(g.bounds(1), (0.0, 3.0));
        assert_eq!(g.bounds(2), (3.0, 5.0));
    }

    #[test]
    fn equal_event_times_degenerate() {
        let d = ds(&[(2.0, true, &[1.0]), (2.0, true, &[2.0]), (4.0, false, &[1.0])]).unwrap();
        assert!(matches!(
            grid_from_quantiles(&d, &[0.2, 0.4, 0.6, 0.8], 4.0),
            Err(Error::DegenerateGrid(_))
        ));
    }

    #[test]
    fn quantile_duplicates_collapse() {
        let d = ds(&[
            (1.0, true, &[1.0]),
            (1.0, true, &[1.0]),
            (1.0, true, &[1.0]),
            (2.0, true, &[1.0]),
            (3.0, true, &[1.0]),
        ])
        .unwrap();
        let g = grid_from_quantiles(&d, &[0.2, 0.4, 0.6, 0.8], 3.5).unwrap();
        assert_eq!(g.cuts(), &[1.0, 2.0]);
    }

    #[test]
    fn prior_validation() {
        assert!(BetaPrior::isotropic(vec![1.0], 0.0).is_err());
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.1, 1.0]);
        assert!(BetaPrior::new(vec![0.0, 0.0], asym).is_err());
        let indef = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(BetaPrior::new(vec![0.0, 0.0], indef).is_err());
        let p = BetaPrior::default_for(3, 2.0).unwrap();
        assert_eq!(p.mu().as_slice(), &[1.0, 1.0, 1.0]);
        assert_eq!(p.cov()[(1, 1)], 2.0);
    }

    #[test]
    fn gamma_prior_increments() {
        let p = GammaProcessPrior::new(vec![5.0, 6.0, 6.3, 6.31], 1.0).unwrap();
        let inc: Vec<f64> = (1..=4).map(|j| p.increment(j)).collect();
        let expected = [5.0, 1.0, 0.3, 0.01];
        for (a, b) in inc.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(GammaProcessPrior::new(vec![1.0, 0.5], 1.0).is_err());
        assert!(GammaProcessPrior::new(vec![1.0], 0.0).is_err());
    }

    #[test]
    fn alpha_function_interpolates_and_extends() {
        let a = AlphaFunction::new(vec![(0.125, 5.0), (0.3, 6.0), (0.6, 6.3), (1.15, 6.31)]).unwrap();
        assert!((a.eval(0.125) - 5.0).abs() < 1e-12);
        assert!((a.eval(0.0625) - 2.5).abs() < 1e-12);
        assert!((a.eval(1.15) - 6.31).abs() < 1e-12);
        assert!((a.eval(1.7) - 6.32).abs() < 1e-12);
        let g = TimeGrid::new(vec![0.125, 0.3, 0.6, 1.15], 1.7).unwrap();
        let p = GammaProcessPrior::from_function(&g, &a, 0.1).unwrap();
        assert_eq!(p.num_intervals(), 5);
        assert!((p.increment(5) - 0.01).abs() < 1e-12);
    }
}
