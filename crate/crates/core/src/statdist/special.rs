//! Special functions backing the distribution families.
//!
//! Everything here goes through `libm` so results are bit-identical with and
//! without `std`.

// Published rational-approximation coefficients are kept digit for digit.
#![allow(clippy::excessive_precision, clippy::inconsistent_digit_grouping)]

use libm::{erfc, exp, fabs, lgamma, log, sqrt};

use crate::{Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;

pub fn ln_gamma(x: f64) -> f64 {
    lgamma(x)
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * core::f64::consts::FRAC_1_SQRT_2)
}

pub fn normal_sf(z: f64) -> f64 {
    0.5 * erfc(z * core::f64::consts::FRAC_1_SQRT_2)
}

/// Standard normal quantile (Wichura's AS 241, PPND16), relative accuracy
/// about 1e-16 over (0, 1).
pub fn normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let q = p - 0.5;
    if fabs(q) <= 0.425 {
        let r = 0.180625 - q * q;
        return q
            * (((((((2509.080_928_730_122_7 * r + 33430.575_583_588_128) * r
                + 67265.770_927_008_700)
                * r
                + 45921.953_931_549_871)
                * r
                + 13731.693_765_509_461)
                * r
                + 1971.590_950_306_551_3)
                * r
                + 133.141_667_891_784_38)
                * r
                + 3.387_132_872_796_366_5)
            / (((((((5226.495_278_852_545_4 * r + 28729.085_735_721_943) * r
                + 39307.895_800_092_710)
                * r
                + 21213.794_301_586_595)
                * r
                + 5394.196_021_424_751)
                * r
                + 687.187_007_492_057_9)
                * r
                + 42.313_330_701_600_911)
                * r
                + 1.0);
    }
    let mut r = if q < 0.0 { p } else { 1.0 - p };
    r = sqrt(-log(r));
    let val = if r <= 5.0 {
        r -= 1.6;
        (((((((7.745_450_142_783_414e-4 * r + 0.022_723_844_989_269_184) * r
            + 0.241_780_725_177_450_6)
            * r
            + 1.270_458_252_452_368_4)
            * r
            + 3.647_848_324_763_204_5)
            * r
            + 5.769_497_221_460_691)
            * r
            + 4.630_337_846_156_546)
            * r
            + 1.423_437_110_749_683_5)
            / (((((((1.050_750_071_644_416_9e-9 * r + 5.475_938_084_995_345e-4) * r
                + 0.015_198_666_563_616_457)
                * r
                + 0.148_103_976_427_480_08)
                * r
                + 0.689_767_334_985_1)
                * r
                + 1.676_384_830_183_803_8)
                * r
                + 2.053_191_626_637_759)
                * r
                + 1.0)
    } else {
        r -= 5.0;
        (((((((2.010_334_399_292_288_1e-7 * r + 2.711_555_568_743_487_6e-5) * r
            + 0.001_242_660_947_388_078_4)
            * r
            + 0.026_532_189_526_576_124)
            * r
            + 0.296_560_571_828_504_9)
            * r
            + 1.784_826_539_917_291_3)
            * r
            + 5.463_784_911_164_114)
            * r
            + 6.657_904_643_501_103)
            / (((((((2.044_263_103_389_939_7e-15 * r + 1.421_511_758_316_446e-7) * r
                + 1.846_318_317_510_054_8e-5)
                * r
                + 7.868_691_311_456_133e-4)
                * r
                + 0.014_875_361_290_850_615)
                * r
                + 0.136_929_880_922_735_8)
                * r
                + 0.599_832_206_555_888)
                * r
                + 1.0)
    };
    if q < 0.0 {
        -val
    } else {
        val
    }
}

/// Regularized incomplete gamma functions `(P(a, x), Q(a, x))`.
pub fn gamma_pq(a: f64, x: f64) -> Result<(f64, f64)> {
    if !(a > 0.0) || x.is_nan() {
        return Err(Error::invalid("incomplete gamma needs a > 0 and a non-NaN x"));
    }
    if x <= 0.0 {
        return Ok((0.0, 1.0));
    }
    if x == f64::INFINITY {
        return Ok((1.0, 0.0));
    }
    let ln_front = a * log(x) - x - ln_gamma(a);
    if x < a + 1.0 {
        // Series: P = x^a e^-x / Gamma(a+1) * sum x^n / ((a+1)...(a+n)).
        let mut ap = a;
        let mut del = 1.0 / a;
        let mut sum = del;
        for _ in 0..MAX_ITER {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if fabs(del) < fabs(sum) * EPS {
                let p = (sum * exp(ln_front)).min(1.0);
                return Ok((p, 1.0 - p));
            }
        }
        Err(Error::Numeric("incomplete gamma series did not converge".into()))
    } else {
        // Modified Lentz continued fraction for Q.
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if fabs(d) < TINY {
                d = TINY;
            }
            c = b + an / c;
            if fabs(c) < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if fabs(del - 1.0) < EPS {
                let q = (exp(ln_front) * h).min(1.0);
                return Ok((1.0 - q, q));
            }
        }
        Err(Error::Numeric("incomplete gamma continued fraction did not converge".into()))
    }
}

/// `(cdf, sf)` of the central chi-square distribution.
pub fn chi_square_cdf_sf(df: f64, x: f64) -> Result<(f64, f64)> {
    gamma_pq(0.5 * df, 0.5 * x)
}

pub fn chi_square_density(df: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let k = 0.5 * df;
    exp((k - 1.0) * log(x) - 0.5 * x - k * core::f64::consts::LN_2 - ln_gamma(k))
}

/// `(cdf, sf)` of the noncentral chi-square distribution, as a Poisson(λ/2)
/// mixture of central chi-square terms summed outward from the Poisson mode
/// until the unvisited Poisson mass is below 1e-14.
pub fn noncentral_chi_square_cdf_sf(df: f64, lambda: f64, x: f64) -> Result<(f64, f64)> {
    if lambda == 0.0 {
        return chi_square_cdf_sf(df, x);
    }
    if x <= 0.0 {
        return Ok((0.0, 1.0));
    }
    if x == f64::INFINITY {
        return Ok((1.0, 0.0));
    }
    let half = 0.5 * lambda;
    let ln_half = log(half);
    let weight = |j: f64| exp(-half + j * ln_half - ln_gamma(j + 1.0));
    let mode = libm::floor(half);

    let mut mass = 0.0;
    let mut cdf = 0.0;
    let mut sf = 0.0;

    let mut j = mode;
    loop {
        let w = weight(j);
        let (p, q) = chi_square_cdf_sf(df + 2.0 * j, x)?;
        mass += w;
        cdf += w * p;
        sf += w * q;
        if j == 0.0 || w < 1e-17 {
            break;
        }
        j -= 1.0;
    }
    let mut j = mode + 1.0;
    let mut steps = 0usize;
    while 1.0 - mass > 1e-14 {
        let w = weight(j);
        let (p, q) = chi_square_cdf_sf(df + 2.0 * j, x)?;
        mass += w;
        cdf += w * p;
        sf += w * q;
        j += 1.0;
        steps += 1;
        if w < 1e-17 && steps > 8 {
            break;
        }
        if steps > MAX_ITER {
            return Err(Error::Numeric("noncentral chi-square series did not converge".into()));
        }
    }
    Ok((cdf.clamp(0.0, 1.0), sf.clamp(0.0, 1.0)))
}

/// Inverts a continuous nondecreasing cdf on `[lo, ∞)` by bracketing and
/// bisection, to `|cdf(x) - p| <= 1e-12` or machine resolution in `x`.
pub(crate) fn invert_cdf<F>(p: f64, lo: f64, guess: f64, cdf: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut lo = lo;
    let mut hi = guess.max(lo + 1.0);
    let mut iter = 0;
    while cdf(hi)? < p {
        lo = hi;
        hi *= 2.0;
        iter += 1;
        if iter > 2000 || !hi.is_finite() {
            return Err(Error::Numeric("quantile bracket search diverged".into()));
        }
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let c = cdf(mid)?;
        if fabs(c - p) <= 1e-13 {
            return Ok(mid);
        }
        if c < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Central chi-square quantile: Wilson–Hilferty start, then safeguarded
/// Newton steps with bisection fallback.
pub fn chi_square_quantile(df: f64, p: f64) -> Result<f64> {
    if p == 0.0 {
        return Ok(0.0);
    }
    let z = normal_quantile(p);
    let h = 2.0 / (9.0 * df);
    let wh = df * libm::pow(1.0 - h + z * sqrt(h), 3.0);
    let mut x = if wh > 0.0 { wh } else { 0.5 };
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for _ in 0..200 {
        let (c, _) = chi_square_cdf_sf(df, x)?;
        let diff = c - p;
        if fabs(diff) <= 1e-14 {
            return Ok(x);
        }
        if diff < 0.0 {
            lo = lo.max(x);
        } else {
            hi = hi.min(x);
        }
        let dens = chi_square_density(df, x);
        let mut next = if dens > 0.0 { x - diff / dens } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = if hi.is_finite() { 0.5 * (lo + hi) } else { 2.0 * x.max(1.0) };
        }
        if fabs(next - x) <= 1e-15 * x {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}
