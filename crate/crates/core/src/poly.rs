//! Coefficients of `∏ (a + β′zᵢ)` over the uncensored subjects of one grid
//! interval, built one factor at a time.
//!
//! Multiplying `P_n(a) = Σ d_j a^j` by `(a + b)` updates the coefficients as
//!
//! ```text
//! d_0' = d_0 · b
//! d_j' = d_{j−1} + d_j · b      (1 ≤ j ≤ n)
//! d_{n+1}' = d_n = 1
//! ```
//!
//! Coefficients are stored as `log|d_k|` plus a sign so that products of
//! hundreds of factors stay representable.

use serde::{Deserialize, Serialize};

use crate::numeric::{log_add, log_sum_exp};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyCoefficients {
    log_abs: Vec<f64>,
    signs: Vec<i8>,
}

impl Default for PolyCoefficients {
    fn default() -> Self {
        Self::init()
    }
}

impl PolyCoefficients {
    /// The empty product, `d₀ = 1`.
    pub fn init() -> Self {
        Self {
            log_abs: vec![0.0],
            signs: vec![1],
        }
    }

    /// Product of `(a + b)` over all `roots`.
    pub fn from_roots<I: IntoIterator<Item = f64>>(roots: I) -> Self {
        roots
            .into_iter()
            .fold(Self::init(), |p, b| p.multiply_in(b))
    }

    pub fn degree(&self) -> usize {
        self.log_abs.len() - 1
    }

    pub fn log_abs(&self) -> &[f64] {
        &self.log_abs
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Coefficient `d_k` in linear scale (may overflow to `inf`).
    pub fn coefficient(&self, k: usize) -> f64 {
        f64::from(self.signs[k]) * self.log_abs[k].exp()
    }

    /// Returns `P(a) · (a + bz)`.
    ///
    /// # Panics
    ///
    /// If `bz` is negative or not finite.
    pub fn multiply_in(&self, bz: f64) -> Self {
        assert!(bz >= 0.0 && bz.is_finite(), "factor offset must be >= 0, got {bz}");
        let log_b = bz.ln(); // -inf for bz == 0
        let n = self.degree();
        let mut log_abs = Vec::with_capacity(n + 2);
        log_abs.push(self.log_abs[0] + log_b);
        for j in 1..=n {
            log_abs.push(log_add(self.log_abs[j - 1], self.log_abs[j] + log_b));
        }
        log_abs.push(self.log_abs[n]);
        let signs = log_abs
            .iter()
            .map(|&l| if l == f64::NEG_INFINITY { 0 } else { 1 })
            .collect();
        Self { log_abs, signs }
    }

    /// `log Σ d_k a^k` for `a ≥ 0`.
    pub fn eval_log(&self, a: f64) -> f64 {
        assert!(a >= 0.0, "evaluation point must be >= 0, got {a}");
        if a == 0.0 {
            return self.log_abs[0];
        }
        let log_a = a.ln();
        let terms: Vec<f64> = self
            .log_abs
            .iter()
            .enumerate()
            .map(|(k, &l)| l + k as f64 * log_a)
            .collect();
        log_sum_exp(&terms)
    }
}
