//! Small scalar helpers shared across modules.

use libm::erfc;
use statrs::function::erf::erfc_inv;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Standard normal CDF, `Φ(x)`.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Standard normal upper tail, `1 − Φ(x)`, without cancellation.
pub fn norm_sf(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}

/// Standard normal quantile `Φ⁻¹(p)` for `p` in (0, 1).
pub fn norm_quantile(p: f64) -> f64 {
    let x = -SQRT_2 * erfc_inv(2.0 * p);
    if !x.is_finite() {
        return x;
    }
    // one Newton step; erfc_inv alone is only good to ~1e-11 in the tails
    let density = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let resid = if p < 0.5 { norm_cdf(x) - p } else { (1.0 - p) - norm_sf(x) };
    x - resid / density
}

/// `ln(1 − Φ(x))`, accurate far into the upper tail where `1 − Φ(x)`
/// underflows. Beyond `x = 5` it uses the continued fraction of the Mills
/// ratio.
pub fn log_norm_sf(x: f64) -> f64 {
    if x < 5.0 {
        return norm_sf(x).ln();
    }
    let mut frac = 0.0;
    for k in (1..=200).rev() {
        frac = k as f64 / (x + frac);
    }
    let mills = 1.0 / (x + frac);
    -0.5 * x * x - 0.5 * (2.0 * std::f64::consts::PI).ln() + mills.ln()
}

/// Unnormalized standard normal log density.
pub fn norm_log_kernel(x: f64) -> f64 {
    -0.5 * x * x
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `log(exp(a) + exp(b))`, treating `-inf` as an absent term.
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `log Σ exp(xᵢ)`; returns `-inf` for an empty or all-`-inf` slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let sum: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// Two-pass sample mean and standard deviation (n − 1 denominator).
///
/// A single value yields an sd of 0; an empty slice yields NaNs.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1) as f64).sqrt())
}

/// `x` with `digits` significant digits; scientific notation outside
/// `[1e-4, 1e6)`.
pub fn format_sig(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", digits - 1, 0.0);
    }
    // exponent after rounding, so 0.9999999 counts as 1.00000
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        return sci;
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}
