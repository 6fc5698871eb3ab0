//! Critical values for the KS test when the normal mean and standard
//! deviation are estimated from the sample.
//!
//! The scaled statistic `sqrt(n) D` has no closed-form null law, so its upper
//! quantiles were tabulated once by simulation (100 000 standard-normal
//! samples per size; see `examples/lilliefors_table.rs`) and are interpolated
//! here: linearly in `1/sqrt(n)` across sizes and in `ln α` across levels.
//! Beyond the largest tabulated size the last row is used.

use libm::{log, sqrt};

use super::ks::ks_distance_sorted;
use super::lilliefors_table::{ALPHAS, SCALED_QUANTILES, SIZES};
use crate::statdist::special::normal_cdf;
use crate::statdist::{mean, sum_sq_dev};
use crate::{Error, Result};

/// Smallest and largest tabulated test sizes.
pub const LILLIEFORS_ALPHA_RANGE: (f64, f64) = (ALPHAS[ALPHAS.len() - 1], ALPHAS[0]);

/// KS distance from an ascending sample to the normal with the sample's mean
/// and (n−1)-denominator standard deviation.
pub fn estimated_normal_distance_sorted(sorted: &[f64]) -> Result<f64> {
    let n = sorted.len();
    if n < 2 {
        return Err(Error::invalid("need at least 2 observations to estimate a normal"));
    }
    let mu = mean(sorted);
    let var = sum_sq_dev(sorted, mu) / (n - 1) as f64;
    if !(var > 0.0) {
        return Err(Error::degenerate("sample variance is zero"));
    }
    let sd = sqrt(var);
    Ok(ks_distance_sorted(sorted, |x| normal_cdf((x - mu) / sd)))
}

/// Upper-α critical value of `D` (unscaled) at sample size `n`.
pub fn lilliefors_critical_value(n: usize, alpha: f64) -> Result<f64> {
    if n < SIZES[0] {
        return Err(Error::invalid("estimated-normal KS needs at least 4 observations"));
    }
    let (lo_a, hi_a) = LILLIEFORS_ALPHA_RANGE;
    if !(alpha >= lo_a && alpha <= hi_a) {
        return Err(Error::invalid(alloc::format!(
            "alpha {alpha} is outside the tabulated range [{lo_a}, {hi_a}] for estimated-normal KS"
        )));
    }
    let row = |i: usize| interp_alpha(&SCALED_QUANTILES[i], alpha);
    let last = SIZES.len() - 1;
    let scaled = if n >= SIZES[last] {
        row(last)
    } else {
        let j = SIZES.partition_point(|&s| s <= n);
        let (n0, n1) = (SIZES[j - 1], SIZES[j]);
        let (q0, q1) = (row(j - 1), row(j));
        if n == n0 {
            q0
        } else {
            let t = |s: usize| 1.0 / sqrt(s as f64);
            let w = (t(n) - t(n0)) / (t(n1) - t(n0));
            q0 + w * (q1 - q0)
        }
    };
    Ok(scaled / sqrt(n as f64))
}

fn interp_alpha(row: &[f64], alpha: f64) -> f64 {
    // ALPHAS is decreasing.
    let k = ALPHAS.iter().position(|&a| a <= alpha).unwrap_or(ALPHAS.len() - 1);
    if ALPHAS[k] == alpha || k == 0 {
        return row[k];
    }
    let (a0, a1) = (ALPHAS[k - 1], ALPHAS[k]);
    let w = (log(alpha) - log(a0)) / (log(a1) - log(a0));
    row[k - 1] + w * (row[k] - row[k - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows_are_monotone() {
        for row in SCALED_QUANTILES {
            for w in row.windows(2) {
                assert!(w[0] < w[1], "quantiles must grow as alpha shrinks");
            }
        }
    }

    #[test]
    fn classic_five_percent_points() {
        // Independent Monte Carlo tables, 5% and 1% levels. The n = 1000 row
        // is a separate 20 000-replicate simulation; published tables for
        // large n extrapolate and run about 4% high.
        let refs = [
            (10usize, 0.262_023_51, 0.303_417_63),
            (20, 0.191_907_94, 0.223_272_59),
            (30, 0.158_783_07, 0.184_920_78),
            (100, 0.089_000_91, 0.103_737_61),
            (1000, 0.899_949 / 31.622_776_601_683_8, 1.049_626 / 31.622_776_601_683_8),
        ];
        for (n, five, one) in refs {
            let got = lilliefors_critical_value(n, 0.05).unwrap();
            assert!((got / five - 1.0).abs() < 0.01, "n={n}: {got} vs {five}");
            let got = lilliefors_critical_value(n, 0.01).unwrap();
            assert!((got / one - 1.0).abs() < 0.015, "n={n}: {got} vs {one}");
        }
        // Large n: sqrt(n) D is about 0.895 at 5%.
        let big = lilliefors_critical_value(20_000, 0.05).unwrap() * sqrt(20_000.0);
        assert!((big - 0.895).abs() < 0.02, "{big}");
    }

    #[test]
    fn interpolates_between_sizes_and_levels() {
        let a = lilliefors_critical_value(100, 0.05).unwrap();
        let b = lilliefors_critical_value(110, 0.05).unwrap();
        let c = lilliefors_critical_value(120, 0.05).unwrap();
        assert!(a > b && b > c);
        let lo = lilliefors_critical_value(100, 0.1).unwrap();
        let mid = lilliefors_critical_value(100, 0.07).unwrap();
        assert!(lo < mid && mid < a);
        assert!(lilliefors_critical_value(3, 0.05).is_err());
        assert!(lilliefors_critical_value(100, 1e-5).is_err());
    }
}
