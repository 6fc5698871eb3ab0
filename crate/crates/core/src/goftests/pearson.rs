use alloc::vec;

use libm::{ceil, pow, sqrt};

use super::ks::check_finite;
use super::{TestKind, TestResult, TestSpec};
use crate::statdist::special::{chi_square_quantile, normal_cdf};
use crate::statdist::{mean, sum_sq_dev};
use crate::{Error, Result};

/// `ceil(2 n^(2/5))` cells, capped at `n / 5` so every cell expects at least
/// five observations.
pub fn default_cells(n: usize) -> usize {
    let rule = ceil(2.0 * pow(n as f64, 0.4)) as usize;
    rule.min(n / 5).max(4)
}

/// `Σ (O − E)² / E`.
pub fn pearson_statistic(observed: &[u64], expected: &[f64]) -> Result<f64> {
    if observed.len() != expected.len() || observed.is_empty() {
        return Err(Error::invalid("observed and expected counts must have the same nonzero length"));
    }
    let mut x2 = 0.0;
    for (&o, &e) in observed.iter().zip(expected) {
        if !(e > 0.0) {
            return Err(Error::invalid("expected counts must be positive"));
        }
        let d = o as f64 - e;
        x2 += d * d / e;
    }
    Ok(x2)
}

/// Pearson chi-square test of normality with equiprobable cells under the
/// fitted normal (maximum-likelihood mean and variance); `df = cells − 3`.
pub fn pearson_chisq_normal(sample: &[f64], spec: &TestSpec) -> Result<TestResult> {
    let mut xs = sample.to_vec();
    pearson_in_place(&mut xs, spec)
}

pub(crate) fn pearson_in_place(sample: &mut [f64], spec: &TestSpec) -> Result<TestResult> {
    if spec.test != TestKind::PearsonChiSquareNormal {
        return Err(Error::invalid("spec is not a Pearson chi-square test"));
    }
    check_finite(sample)?;
    let n = sample.len();
    if n < 20 {
        return Err(Error::invalid("Pearson normality test needs at least 20 observations"));
    }
    let cells = spec.cells.unwrap_or_else(|| default_cells(n));
    if n < 5 * cells {
        return Err(Error::invalid("Pearson normality test needs n >= 5 * cells"));
    }
    let mu = mean(sample);
    let var = sum_sq_dev(sample, mu) / n as f64;
    if !(var > 0.0) {
        return Err(Error::degenerate("sample variance is zero"));
    }
    let sd = sqrt(var);
    let mut observed = vec![0u64; cells];
    for &x in sample.iter() {
        let u = normal_cdf((x - mu) / sd);
        let cell = ((u * cells as f64) as usize).min(cells - 1);
        observed[cell] += 1;
    }
    let expected = n as f64 / cells as f64;
    if expected < 1.0 {
        return Err(Error::invalid("expected cell count below 1"));
    }
    let x2: f64 = observed
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum();
    let df = (cells - 3) as u32;
    let crit = chi_square_quantile(df as f64, 1.0 - spec.alpha)?;
    Ok(TestResult::decide(x2, crit, Some(df)))
}
