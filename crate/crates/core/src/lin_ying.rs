//! Lin–Ying estimating-equation statistics for the additive hazards model.
//!
//! The risk-set mean `z̃(u)` is a step function that only changes at the
//! observed times, so every integral over `u` reduces to a finite sum over
//! the segments between consecutive distinct times.

use nalgebra::{DMatrix, DVector};

use crate::data::SurvivalDataset;
use crate::error::{Error, Result};

/// Smallest/largest eigenvalue ratio below which `V₂` is treated as singular.
pub const SINGULAR_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LYStatistics {
    /// `V₁ = n⁻¹ Σ δᵢ [zᵢ − z̃(tᵢ)]`
    pub v1: DVector<f64>,
    /// `V₂ = n⁻¹ Σ ∫₀^{tᵢ} [zᵢ − z̃(u)]⊗² du`
    pub v2: DMatrix<f64>,
    /// `V₃ = n⁻¹ Σ δᵢ [zᵢ − z̃(tᵢ)]⊗²`
    pub v3: DMatrix<f64>,
    pub n: usize,
}

/// Root of `U(β) = V₁ − V₂β` with its sandwich covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct LYEstimate {
    /// `m = V₂⁻¹ V₁`
    pub m: DVector<f64>,
    /// `D = n⁻¹ V₂⁻¹ V₃ V₂⁻¹`
    pub d: DMatrix<f64>,
}

/// Mean covariate vector of the subjects with `tᵢ ≥ u`.
pub fn risk_set_mean(ds: &SurvivalDataset, u: f64) -> Result<DVector<f64>> {
    let mut sum = DVector::zeros(ds.k());
    let mut count = 0usize;
    for o in ds.observations().iter().filter(|o| o.time >= u) {
        sum += DVector::from_column_slice(&o.covariates);
        count += 1;
    }
    if count == 0 {
        return Err(Error::EmptyRiskSet { u });
    }
    Ok(sum / count as f64)
}

/// Running mean and centered cross-product matrix of a growing risk set.
struct RiskSetAccumulator {
    count: usize,
    mean: DVector<f64>,
    m2: DMatrix<f64>,
}

impl RiskSetAccumulator {
    fn new(k: usize) -> Self {
        Self {
            count: 0,
            mean: DVector::zeros(k),
            m2: DMatrix::zeros(k, k),
        }
    }

    // Welford update; identical covariates leave m2 exactly zero.
    fn push(&mut self, z: &DVector<f64>) {
        self.count += 1;
        let delta = z - &self.mean;
        self.mean += &delta / self.count as f64;
        let delta_after = z - &self.mean;
        self.m2 += &delta * delta_after.transpose();
    }
}

pub fn compute_statistics(ds: &SurvivalDataset) -> LYStatistics {
    let n = ds.n();
    let k = ds.k();
    let obs = ds.observations();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| obs[a].time.total_cmp(&obs[b].time));

    let mut v1 = DVector::zeros(k);
    let mut v2 = DMatrix::zeros(k, k);
    let mut v3 = DMatrix::zeros(k, k);
    let mut acc = RiskSetAccumulator::new(k);

    // Walk distinct times from the largest down; after adding a block of tied
    // times the accumulator holds exactly the risk set {i : tᵢ ≥ t}.
    let mut end = n;
    while end > 0 {
        let t = obs[order[end - 1]].time;
        let mut start = end;
        while start > 0 && obs[order[start - 1]].time == t {
            start -= 1;
        }
        let block = &order[start..end];
        let zs: Vec<DVector<f64>> = block
            .iter()
            .map(|&i| DVector::from_column_slice(&obs[i].covariates))
            .collect();
        for z in &zs {
            acc.push(z);
        }
        for (&i, z) in block.iter().zip(&zs) {
            if obs[i].event {
                let r = z - &acc.mean;
                v3 += &r * r.transpose();
                v1 += r;
            }
        }
        // z̃ is constant on (previous distinct time, t]
        let prev = if start > 0 { obs[order[start - 1]].time } else { 0.0 };
        let len = t - prev;
        if len > 0.0 {
            v2 += &acc.m2 * len;
        }
        end = start;
    }

    let inv_n = 1.0 / n as f64;
    let v2 = symmetrize(v2 * inv_n);
    let v3 = symmetrize(v3 * inv_n);
    LYStatistics {
        v1: v1 * inv_n,
        v2,
        v3,
        n,
    }
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// Solves `V₂ m = V₁` by Cholesky and forms `D = n⁻¹ V₂⁻¹ V₃ V₂⁻¹`.
pub fn ly_solve(stats: &LYStatistics) -> Result<LYEstimate> {
    let eig = stats.v2.clone().symmetric_eigen();
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    if !(max > 0.0) || min < SINGULAR_RATIO * max {
        return Err(Error::SingularDesign);
    }
    let chol = stats.v2.clone().cholesky().ok_or(Error::SingularDesign)?;
    let m = chol.solve(&stats.v1);
    let left = chol.solve(&stats.v3);
    let sandwich = chol.solve(&left.transpose());
    let d = symmetrize(sandwich) / stats.n as f64;
    Ok(LYEstimate { m, d })
}

/// Convenience: statistics followed by the solve.
pub fn ly_estimate(ds: &SurvivalDataset) -> Result<LYEstimate> {
    ly_solve(&compute_statistics(ds))
}
