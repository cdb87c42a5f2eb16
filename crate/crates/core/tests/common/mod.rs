//! Independent reference computations used by the integration and
//! acceptance tests. Nothing here calls the estimator code paths it checks.
#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

// ---------------------------------------------------------------- quadrature

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, (k - g).abs() * h)
}

/// Global adaptive Gauss–Kronrod (7/15) on `[a, b]`: the panel with the
/// largest error estimate is bisected until the summed estimate falls below
/// `rel_tol·|I|` or 4000 panels are in use.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let mut panels = vec![(a, b, gk15(&f, a, b))];
    loop {
        let total: f64 = panels.iter().map(|p| p.2 .0).sum();
        let err: f64 = panels.iter().map(|p| p.2 .1).sum();
        if err <= rel_tol * total.abs() || err == 0.0 || panels.len() >= 4000 {
            return total;
        }
        let (i, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .expect("nonempty");
        let (lo, hi, _) = panels.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            return total;
        }
        panels.push((lo, mid, gk15(&f, lo, mid)));
        panels.push((mid, hi, gk15(&f, mid, hi)));
    }
}

/// `∫₀^∞ f`, for `f` that behaves like `x^{s−1}` at 0 and decays
/// exponentially. The head `[0, h]` is mapped through `x = u^p`,
/// `p = max(1, 1/s)`; the tail is integrated on doubling panels until a
/// panel adds less than `rel_tol` of the running total.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, s: f64, head: f64, rel_tol: f64) -> f64 {
    let p = (1.0 / s).max(1.0);
    let g = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let x = u.powf(p);
        f(x) * p * u.powf(p - 1.0)
    };
    let mut total = integrate(g, 0.0, head.powf(1.0 / p), rel_tol);
    let mut lo = head;
    let mut width = head;
    loop {
        let part = integrate(&f, lo, lo + width, rel_tol);
        total += part;
        if part.abs() <= 1e-17 * total.abs() && lo > 4.0 * head {
            break;
        }
        lo += width;
        width *= 2.0;
    }
    total
}

// ------------------------------------------------------------- exact algebra

pub fn rational(x: f64) -> BigRational {
    BigRational::from_f64(x).expect("finite float")
}

/// Coefficients of `∏ (a + bᵢ)` by exact convolution.
pub fn exact_product_coefficients(roots: &[f64]) -> Vec<BigRational> {
    let mut c = vec![BigRational::one()];
    for &b in roots {
        let b = rational(b);
        let mut next = vec![BigRational::zero(); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k] += ck * &b;
            next[k + 1] += ck;
        }
        c = next;
    }
    c
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("representable")
}

// -------------------------------------------------------------------- HPD

fn phi_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

fn phi_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Inverse upper tail by bisection on `phi_sf`.
fn phi_sf_inv(p: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0, 40.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi_sf(mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Shortest interval `[L, U] ⊂ [0, ∞)` holding `coverage` of `N(mean, sd²)`
/// truncated at 0, by scanning `L` on a 1e-3 grid and then on a 1e-5 grid
/// around the coarse optimum. For each `L` the matching `U` is exact.
pub fn hpd_grid_oracle(mean: f64, sd: f64, coverage: f64) -> (f64, f64) {
    let total = phi_cdf(mean / sd);
    let upper_for = |l: f64| -> Option<f64> {
        // mass above U must be sf(l) − coverage·total
        let rest = phi_sf((l - mean) / sd) - coverage * total;
        (rest > 0.0).then(|| mean + sd * phi_sf_inv(rest))
    };
    let scan = |from: f64, to: f64, step: f64| -> (f64, f64) {
        let mut best = (f64::INFINITY, 0.0, 0.0);
        let steps = ((to - from) / step).ceil() as usize;
        for i in 0..=steps {
            let l = (from + i as f64 * step).min(to);
            if let Some(u) = upper_for(l) {
                if u - l < best.0 {
                    best = (u - l, l, u);
                }
            }
        }
        (best.1, best.2)
    };
    let l_max = mean.max(0.0) + 1e-9;
    let (coarse, _) = scan(0.0, l_max, 1e-3);
    scan((coarse - 2e-3).max(0.0), (coarse + 2e-3).min(l_max), 1e-5)
}

// -------------------------------------------------------------- statistics

/// Kolmogorov–Smirnov distance of a sample to a continuous CDF.
pub fn ks_statistic(sample: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    sample
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

// -------------------------------------------------------------- Lin–Ying

/// Brute-force `(V₁, V₂, V₃)` for scalar or vector covariates: `z̃` is
/// recomputed from scratch on every segment between consecutive distinct
/// times. Returns row-major `k×k` matrices.
pub fn brute_force_statistics(rows: &[(f64, bool, Vec<f64>)]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let n = rows.len();
    let k = rows[0].2.len();
    let mean_at = |u: f64| -> Vec<f64> {
        let at_risk: Vec<&Vec<f64>> = rows.iter().filter(|r| r.0 >= u).map(|r| &r.2).collect();
        (0..k)
            .map(|c| at_risk.iter().map(|z| z[c]).sum::<f64>() / at_risk.len() as f64)
            .collect()
    };
    let mut times: Vec<f64> = rows.iter().map(|r| r.0).collect();
    times.push(0.0);
    times.sort_by(f64::total_cmp);
    times.dedup();

    let mut v1 = vec![0.0; k];
    let mut v2 = vec![0.0; k * k];
    let mut v3 = vec![0.0; k * k];
    for (t, event, z) in rows {
        if *event {
            let zt = mean_at(*t);
            for a in 0..k {
                v1[a] += z[a] - zt[a];
                for b in 0..k {
                    v3[a * k + b] += (z[a] - zt[a]) * (z[b] - zt[b]);
                }
            }
        }
        for w in times.windows(2) {
            if w[1] > *t {
                break;
            }
            let zt = mean_at(0.5 * (w[0] + w[1]));
            let len = w[1] - w[0];
            for a in 0..k {
                for b in 0..k {
                    v2[a * k + b] += len * (z[a] - zt[a]) * (z[b] - zt[b]);
                }
            }
        }
    }
    let scale = 1.0 / n as f64;
    for v in v1.iter_mut().chain(v2.iter_mut()).chain(v3.iter_mut()) {
        *v *= scale;
    }
    (v1, v2, v3)
}

// -------------------------------------------------------------- baseline

/// Mean and variance of the increment posterior
/// `f(Λ) ∝ Λ^{s−1} e^{−rate·Λ} ∏ (Λ/width + bᵢ)` by quadrature.
pub fn increment_moments_by_quadrature(s: f64, rate: f64, width: f64, roots: &[f64]) -> (f64, f64) {
    let log_f = |x: f64| -> f64 {
        (s - 1.0) * x.ln() - rate * x + roots.iter().map(|b| (x / width + b).ln()).sum::<f64>()
    };
    let peak = ((roots.len() as f64 + s) / rate).max(1e-300);
    let reference = log_f(peak);
    let f = |x: f64| if x <= 0.0 { 0.0 } else { (log_f(x) - reference).exp() };
    let head = peak.max(1.0 / rate);
    let tol = 1e-12;
    let i0 = integrate_half_line(f, s, head, tol);
    let i1 = integrate_half_line(|x| x * f(x), s + 1.0, head, tol);
    let mean = i1 / i0;
    let i2 = integrate_half_line(|x| (x - mean) * (x - mean) * f(x), s, head, tol);
    (mean, i2 / i0)
}
