//! Truncated-normal pseudo-posterior for β: the hybrid point estimate,
//! per-component HPD intervals, and the interval-width sd estimator.
//!
//! The pseudo-posterior is `N_k(μ*, Σ*)` restricted to the nonnegative
//! orthant, with
//!
//! ```text
//! Σ* = (D⁻¹ + C⁻¹)⁻¹
//! μ* = Σ* (D⁻¹ m + C⁻¹ μ_β)
//! ```
//!
//! where `(m, D)` come from the Lin–Ying fit and `(μ_β, C)` from the prior.
//! Component intervals use the untruncated Gaussian marginal of each
//! coordinate, truncated at zero.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::data::BetaPrior;
use crate::error::{Error, Result};
use crate::lin_ying::LYEstimate;
use crate::numeric::{log_norm_sf, norm_cdf, norm_quantile, norm_sf};

#[derive(Debug, Clone, PartialEq)]
pub struct PseudoPosterior {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
    /// Always `true`: the support is the nonnegative orthant. The truncation
    /// is not folded into `mean`/`cov`.
    pub truncated_at_zero: bool,
}

impl PseudoPosterior {
    pub fn k(&self) -> usize {
        self.mean.len()
    }

    /// Mean and standard deviation of the untruncated marginal of `component`.
    pub fn marginal(&self, component: usize) -> (f64, f64) {
        (self.mean[component], self.cov[(component, component)].sqrt())
    }
}

/// How the orthant-restricted mode is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeRule {
    /// Unconstrained mode with negative components set to zero.
    #[default]
    Clamp,
    /// Exact maximizer of the truncated density over `β ≥ 0` (box QP).
    Qp,
}

/// Shortest interval `[lower, upper] ⊂ [0, ∞)` holding `coverage` of a
/// zero-truncated normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HpdInterval {
    pub lower: f64,
    pub upper: f64,
    pub coverage: f64,
}

pub fn pseudo_posterior(ly: &LYEstimate, prior: &BetaPrior) -> Result<PseudoPosterior> {
    let k = ly.m.len();
    if prior.k() != k {
        return Err(Error::InvalidPrior(format!(
            "prior has dimension {} but the data have {k} covariates",
            prior.k()
        )));
    }
    let d_chol = ly
        .d
        .clone()
        .cholesky()
        .ok_or_else(|| Error::SingularCovariance("sandwich covariance D is not positive definite".into()))?;
    let c_chol = prior
        .cov()
        .clone()
        .cholesky()
        .ok_or_else(|| Error::SingularCovariance("prior covariance is not positive definite".into()))?;
    let d_inv = d_chol.inverse();
    let c_inv = c_chol.inverse();
    let precision = &d_inv + &c_inv;
    let p_chol = precision
        .clone()
        .cholesky()
        .ok_or_else(|| Error::SingularCovariance("posterior precision is not positive definite".into()))?;
    let rhs = &d_inv * &ly.m + &c_inv * prior.mu();
    let mean = p_chol.solve(&rhs);
    let cov = p_chol.inverse();
    let cov = (&cov + cov.transpose()) * 0.5;
    Ok(PseudoPosterior {
        mean,
        cov,
        truncated_at_zero: true,
    })
}

/// Hybrid point estimate: the posterior mode, componentwise clamped at 0.
pub fn beta_mode(pp: &PseudoPosterior) -> DVector<f64> {
    pp.mean.map(|v| v.max(0.0))
}

pub fn beta_mode_with(pp: &PseudoPosterior, rule: ModeRule) -> Result<DVector<f64>> {
    match rule {
        ModeRule::Clamp => Ok(beta_mode(pp)),
        ModeRule::Qp => orthant_mode(pp),
    }
}

/// Maximizes `−½(β−μ*)′Σ*⁻¹(β−μ*)` over `β ≥ 0` by projected Gauss–Seidel
/// on the precision matrix.
pub fn orthant_mode(pp: &PseudoPosterior) -> Result<DVector<f64>> {
    let precision = pp
        .cov
        .clone()
        .cholesky()
        .ok_or_else(|| Error::SingularCovariance("posterior covariance is not positive definite".into()))?
        .inverse();
    let k = pp.k();
    let mut beta = beta_mode(pp);
    for _ in 0..10_000 {
        let mut change = 0.0f64;
        for i in 0..k {
            // coordinate minimizer of the quadratic with the others fixed
            let mut grad_rest = 0.0;
            for j in 0..k {
                if j != i {
                    grad_rest += precision[(i, j)] * (beta[j] - pp.mean[j]);
                }
            }
            let next = (pp.mean[i] - grad_rest / precision[(i, i)]).max(0.0);
            change = change.max((next - beta[i]).abs());
            beta[i] = next;
        }
        let scale = beta.amax().max(1.0);
        if change <= 1e-15 * scale {
            break;
        }
    }
    Ok(beta)
}

/// HPD interval of the zero-truncated marginal of `component`.
pub fn hpd_interval(pp: &PseudoPosterior, component: usize, coverage: f64) -> Result<HpdInterval> {
    let (mean, sd) = pp.marginal(component);
    hpd_truncated_normal(mean, sd, coverage)
}

/// HPD interval of `N(mean, sd²)` truncated to `[0, ∞)`.
///
/// Either the interval starts at 0 (density at the upper end no higher than
/// at 0) or the density is equal at both ends. The half-width around the
/// mode is found by bisection.
pub fn hpd_truncated_normal(mean: f64, sd: f64, coverage: f64) -> Result<HpdInterval> {
    if !(coverage > 0.0 && coverage < 1.0) {
        return Err(Error::InvalidCoverage(coverage));
    }
    if !(sd > 0.0) || !sd.is_finite() || !mean.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "need finite mean and positive sd, got mean={mean}, sd={sd}"
        )));
    }
    let a = mean / sd;
    // mass of [0, ∞) under the untruncated law
    let total = norm_cdf(a);

    if a <= 0.0 {
        // density decreasing on [0, ∞): upper tail beyond b holds (1−coverage)·total
        let upper = if a > -30.0 {
            let upper_z = -norm_quantile(total * (1.0 - coverage));
            (mean + sd * upper_z).max(0.0)
        } else {
            sd * deep_tail_offset(-a, coverage)
        };
        return Ok(HpdInterval {
            lower: 0.0,
            upper,
            coverage,
        });
    }

    // standardized half-width ρ around the mode
    let mass = |rho: f64| -> f64 {
        let lo = (-rho).max(-a);
        (norm_sf(lo) - norm_sf(rho)) / total
    };
    let mut hi = 1.0;
    while mass(hi) < coverage {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mass(mid) < coverage {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi.max(1.0) {
            break;
        }
    }
    let rho = 0.5 * (lo + hi);
    Ok(HpdInterval {
        lower: (mean - sd * rho).max(0.0),
        upper: mean + sd * rho,
        coverage,
    })
}

// Offset t with (1 − Φ(a0 + t)) / (1 − Φ(a0)) = 1 − coverage, in log space
// for a0 so large that 1 − Φ(a0) underflows.
fn deep_tail_offset(a0: f64, coverage: f64) -> f64 {
    let target = (1.0 - coverage).ln();
    let base = log_norm_sf(a0);
    let excess = |t: f64| log_norm_sf(a0 + t) - base - target;
    let mut hi = 1.0 / a0;
    while excess(hi) > 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Two-sided normal critical value `z_{1−α/2}` for coverage `1 − α`.
pub fn critical_value(coverage: f64) -> f64 {
    norm_quantile(0.5 + 0.5 * coverage)
}

/// `σ̂ = (b_u − b_l) / (2 z_{1−α/2})`.
pub fn sigma_hat(interval: &HpdInterval) -> f64 {
    (interval.upper - interval.lower) / (2.0 * critical_value(interval.coverage))
}

/// `true` (significant) iff the interval excludes zero.
pub fn significance_flag(interval: &HpdInterval) -> bool {
    interval.lower > 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ly(m: &[f64], d: DMatrix<f64>) -> LYEstimate {
        LYEstimate {
            m: DVector::from_column_slice(m),
            d,
        }
    }

    fn pp1(mean: f64, var: f64) -> PseudoPosterior {
        PseudoPosterior {
            mean: DVector::from_element(1, mean),
            cov: DMatrix::from_element(1, 1, var),
            truncated_at_zero: true,
        }
    }

    #[test]
    fn equal_precision_average() {
        let e = ly(&[1.0], DMatrix::from_element(1, 1, 1.0));
        let prior = BetaPrior::isotropic(vec![0.0], 1.0).unwrap();
        let pp = pseudo_posterior(&e, &prior).unwrap();
        assert!((pp.mean[0] - 0.5).abs() < 1e-15);
        assert!((pp.cov[(0, 0)] - 0.5).abs() < 1e-15);
        assert!(pp.truncated_at_zero);
    }

    #[test]
    fn diagonal_two_dimensional() {
        let e = ly(&[1.0, 2.0], DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0])));
        let prior = BetaPrior::isotropic(vec![0.0, 0.0], 1.0).unwrap();
        let pp = pseudo_posterior(&e, &prior).unwrap();
        assert!((pp.mean[0] - 0.5).abs() < 1e-14);
        assert!((pp.mean[1] - 0.4).abs() < 1e-14);
        assert!((pp.cov[(0, 0)] - 0.5).abs() < 1e-14);
        assert!((pp.cov[(1, 1)] - 0.8).abs() < 1e-14);
        assert!(pp.cov[(0, 1)].abs() < 1e-15);
    }

    #[test]
    fn flat_prior_limit() {
        let e = ly(&[0.7], DMatrix::from_element(1, 1, 0.03));
        let prior = BetaPrior::isotropic(vec![1.0], 1e12).unwrap();
        let pp = pseudo_posterior(&e, &prior).unwrap();
        assert!((pp.mean[0] - 0.7).abs() < 1e-12);
        assert!((pp.cov[(0, 0)] - 0.03).abs() < 1e-12);
    }

    #[test]
    fn singular_d_rejected() {
        let e = ly(&[0.7], DMatrix::from_element(1, 1, 0.0));
        let prior = BetaPrior::isotropic(vec![1.0], 1.0).unwrap();
        assert!(matches!(
            pseudo_posterior(&e, &prior),
            Err(Error::SingularCovariance(_))
        ));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let e = ly(&[0.7], DMatrix::from_element(1, 1, 1.0));
        let prior = BetaPrior::isotropic(vec![1.0, 1.0], 1.0).unwrap();
        assert!(matches!(pseudo_posterior(&e, &prior), Err(Error::InvalidPrior(_))));
    }

    #[test]
    fn clamping_rule() {
        let pp = PseudoPosterior {
            mean: DVector::from_vec(vec![0.5, -0.2]),
            cov: DMatrix::identity(2, 2),
            truncated_at_zero: true,
        };
        assert_eq!(beta_mode(&pp).as_slice(), &[0.5, 0.0]);
        let pos = pp1(0.3, 1.0);
        assert_eq!(beta_mode(&pos)[0], 0.3);
    }

    #[test]
    fn qp_mode_differs_under_correlation() {
        // strong positive correlation: pushing β₂ to 0 pulls β₁ down too
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 0.9, 0.9, 1.0]);
        let pp = PseudoPosterior {
            mean: DVector::from_vec(vec![1.0, -1.0]),
            cov,
            truncated_at_zero: true,
        };
        let clamp = beta_mode_with(&pp, ModeRule::Clamp).unwrap();
        let qp = beta_mode_with(&pp, ModeRule::Qp).unwrap();
        assert_eq!(clamp.as_slice(), &[1.0, 0.0]);
        // β₂ = 0 ⇒ β₁ = μ₁ + Σ₁₂/Σ₂₂ (0 − μ₂) = 1 + 0.9 = 1.9
        assert!((qp[0] - 1.9).abs() < 1e-10, "{qp}");
        assert_eq!(qp[1], 0.0);
        // identical when the unconstrained mode is feasible
        let feasible = PseudoPosterior {
            mean: DVector::from_vec(vec![1.0, 2.0]),
            ..pp
        };
        let a = beta_mode_with(&feasible, ModeRule::Qp).unwrap();
        assert!((a - beta_mode(&feasible)).amax() < 1e-12);
    }

    #[test]
    fn half_normal_interval() {
        let h = hpd_truncated_normal(0.0, 1.0, 0.95).unwrap();
        assert_eq!(h.lower, 0.0);
        assert!((h.upper - 1.959_963_984_540_054).abs() < 1e-10);
        assert!((sigma_hat(&h) - 0.5).abs() < 1e-10);
        assert!(!significance_flag(&h));
    }

    #[test]
    fn symmetric_interval_far_from_zero() {
        let h = hpd_truncated_normal(10.0, 1.0, 0.95).unwrap();
        assert!((h.lower - 8.040_036_015_459_946).abs() < 1e-9);
        assert!((h.upper - 11.959_963_984_540_054).abs() < 1e-9);
        assert!((sigma_hat(&h) - 1.0).abs() < 1e-9);
        assert!(significance_flag(&h));
    }

    #[test]
    fn tiny_coverage_collapses_to_mode() {
        let h = hpd_truncated_normal(2.0, 1.0, 1e-9).unwrap();
        assert!((h.upper - h.lower) < 1e-6);
        assert!((h.lower - 2.0).abs() < 1e-6);
        let h0 = hpd_truncated_normal(-1.0, 1.0, 1e-9).unwrap();
        assert_eq!(h0.lower, 0.0);
        assert!(h0.upper < 1e-6);
    }

    #[test]
    fn invalid_coverage() {
        for c in [0.0, 1.0, 1.2, -0.1, f64::NAN] {
            assert!(matches!(
                hpd_truncated_normal(0.0, 1.0, c),
                Err(Error::InvalidCoverage(_))
            ));
        }
    }

    #[test]
    fn sigma_hat_examples() {
        let sym = HpdInterval {
            lower: 8.04,
            upper: 11.96,
            coverage: 0.95,
        };
        assert!((sigma_hat(&sym) - 1.0).abs() < 1e-4);
        let half = HpdInterval {
            lower: 0.0,
            upper: 1.96,
            coverage: 0.95,
        };
        assert!((sigma_hat(&half) - 0.5).abs() < 1e-4);
        let zero = HpdInterval {
            lower: 1.0,
            upper: 1.0,
            coverage: 0.95,
        };
        assert_eq!(sigma_hat(&zero), 0.0);
    }

    #[test]
    fn significance_examples() {
        let iv = |lower, upper| HpdInterval {
            lower,
            upper,
            coverage: 0.95,
        };
        assert!(!significance_flag(&iv(0.0, 1.96)));
        assert!(significance_flag(&iv(0.1, 2.0)));
        assert!(!significance_flag(&iv(0.0, 0.0001)));
    }

    #[test]
    fn interval_mass_equals_coverage() {
        for &(m, s, c) in &[(0.3, 1.0, 0.9), (1.5, 0.7, 0.95), (-0.4, 2.0, 0.5), (5.0, 0.1, 0.99)] {
            let h = hpd_truncated_normal(m, s, c).unwrap();
            let mass = (norm_cdf((h.upper - m) / s) - norm_cdf((h.lower - m) / s)) / norm_cdf(m / s);
            assert!((mass - c).abs() < 1e-8, "({m},{s},{c}) -> {mass}");
        }
    }
}
