//! Shapiro–Wilk W with Royston's coefficient approximation and normalizing
//! transformation (the AS R94 algorithm).

use alloc::vec::Vec;

use libm::{asin, exp, log, sqrt};

use super::ks::check_finite;
use super::TestResult;
use crate::statdist::special::{normal_quantile, normal_sf};
use crate::statdist::sort_f64;
use crate::{Error, Result};

const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.544, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
const G: [f64; 2] = [-2.273, 0.459];

pub const MIN_N: usize = 4;
pub const MAX_N: usize = 5000;

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

/// Antisymmetric coefficients `a_1 >= a_2 >= ... > 0` for the `n/2` extreme
/// pairs.
fn coefficients(n: usize) -> Vec<f64> {
    let half = n / 2;
    let an = n as f64;
    let mut a = Vec::with_capacity(half);
    if n == 3 {
        a.push(core::f64::consts::FRAC_1_SQRT_2);
        return a;
    }
    let an25 = an + 0.25;
    let m: Vec<f64> = (1..=half)
        .map(|i| normal_quantile((i as f64 - 0.375) / an25))
        .collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = sqrt(summ2);
    let rsn = 1.0 / sqrt(an);
    let a1 = poly(&C1, rsn) - m[0] / ssumm2;
    let (first, fac) = if n > 5 {
        let a2 = -m[1] / ssumm2 + poly(&C2, rsn);
        let fac = sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
        a.push(a1);
        a.push(a2);
        (2, fac)
    } else {
        let fac = sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
        a.push(a1);
        (1, fac)
    };
    for mi in &m[first..] {
        a.push(-mi / fac);
    }
    a
}

/// W for an ascending sample.
fn w_sorted(sorted: &[f64]) -> Result<f64> {
    let n = sorted.len();
    let range = sorted[n - 1] - sorted[0];
    if !(range > 0.0) {
        return Err(Error::degenerate("all observations are identical"));
    }
    // Scale by the range first; W is scale-free and this keeps sums tame.
    let a = coefficients(n);
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let ssq: f64 = sorted.iter().map(|x| { let d = (x - mean) / range; d * d }).sum();
    let num: f64 = a
        .iter()
        .enumerate()
        .map(|(i, ai)| ai * (sorted[n - 1 - i] - sorted[i]) / range)
        .sum();
    Ok((num * num / ssq).min(1.0))
}

/// Upper-tail p-value of W and the `1 - W` value at which the p-value
/// equals `alpha`.
fn p_value_and_cutoff(w: f64, n: usize, alpha: f64) -> (f64, f64) {
    let an = n as f64;
    let z = normal_quantile(1.0 - alpha);
    if n == 3 {
        let pw = (6.0 / core::f64::consts::PI * (asin(sqrt(w)) - core::f64::consts::PI / 3.0)).max(0.0);
        return (pw, f64::NAN);
    }
    let w1 = 1.0 - w;
    if n <= 11 {
        let gamma = poly(&G, an);
        let mu = poly(&C3, an);
        let sigma = exp(poly(&C4, an));
        // y = -ln(gamma - ln(1 - W)) is approximately normal(mu, sigma).
        let cutoff = exp(gamma - exp(-(mu + sigma * z)));
        let y = log(w1);
        let pw = if y >= gamma {
            1e-99
        } else {
            normal_sf((-log(gamma - y) - mu) / sigma)
        };
        (pw, cutoff)
    } else {
        let ln_n = log(an);
        let mu = poly(&C5, ln_n);
        let sigma = exp(poly(&C6, ln_n));
        let cutoff = exp(mu + sigma * z);
        (normal_sf((log(w1) - mu) / sigma), cutoff)
    }
}

/// The W statistic alone.
pub fn shapiro_wilk_w(sample: &[f64]) -> Result<f64> {
    let mut xs = sample.to_vec();
    check_size(&xs)?;
    sort_f64(&mut xs);
    w_sorted(&xs)
}

/// Shapiro–Wilk normality test. The reported statistic is `1 - W` so that,
/// as for every other test here, large values reject.
pub fn shapiro_wilk(sample: &[f64], alpha: f64) -> Result<TestResult> {
    let mut xs = sample.to_vec();
    shapiro_wilk_in_place(&mut xs, alpha)
}

pub(crate) fn shapiro_wilk_in_place(sample: &mut [f64], alpha: f64) -> Result<TestResult> {
    check_size(sample)?;
    sort_f64(sample);
    let w = w_sorted(sample)?;
    let (p, cutoff) = p_value_and_cutoff(w, sample.len(), alpha);
    let mut r = TestResult::decide(1.0 - w, cutoff, None);
    r.p_value = Some(p);
    Ok(r)
}

fn check_size(xs: &[f64]) -> Result<()> {
    if xs.len() < MIN_N || xs.len() > MAX_N {
        return Err(Error::invalid("Shapiro–Wilk needs between 4 and 5000 observations"));
    }
    check_finite(xs)
}
