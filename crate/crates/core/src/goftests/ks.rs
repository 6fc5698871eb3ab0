use libm::{exp, sqrt};

use super::lilliefors::{estimated_normal_distance_sorted, lilliefors_critical_value};
use super::{NullSpec, TestKind, TestResult, TestSpec};
use crate::statdist::{sort_f64, DistributionFamily};
use crate::{Error, Result};

/// `sup_x |ECDF(x) - F(x)|` for an ascending sample and a continuous `F`.
///
/// Evaluates both sides of every jump; with ties the per-position form is
/// still exact because the extreme of each side falls on the ends of the
/// tie run.
pub fn ks_distance_sorted<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d = d.max(above).max(below);
    }
    d
}

/// Kolmogorov limiting upper tail `P(sqrt(n) D > t)`.
pub fn kolmogorov_sf(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = exp(-2.0 * kf * kf * t * t);
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// `c` with `kolmogorov_sf(c) = alpha`.
pub fn kolmogorov_critical_value(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid("alpha must lie in (0, 1)"));
    }
    let (mut lo, mut hi) = (0.1f64, 10.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_sf(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn ks_one_sample(sample: &[f64], spec: &TestSpec) -> Result<TestResult> {
    let mut owned = sample.to_vec();
    ks_one_sample_in_place(&mut owned, spec)
}

pub(crate) fn ks_one_sample_in_place(sample: &mut [f64], spec: &TestSpec) -> Result<TestResult> {
    if spec.test != TestKind::KsOneSample {
        return Err(Error::invalid("spec is not a one-sample KS test"));
    }
    let n = sample.len();
    if n < 4 {
        return Err(Error::invalid("one-sample KS needs at least 4 observations"));
    }
    check_finite(sample)?;
    sort_f64(sample);
    match spec.null {
        NullSpec::FullySpecified(family) => {
            family.validate()?;
            let d = match family {
                DistributionFamily::Normal { location, scale } => ks_distance_sorted(sample, |x| {
                    crate::statdist::special::normal_cdf((x - location) / scale)
                }),
                other => ks_distance_sorted(sample, |x| other.cdf(x).unwrap_or(f64::NAN)),
            };
            let crit = kolmogorov_critical_value(spec.alpha)? / sqrt(n as f64);
            Ok(TestResult::decide(d, crit, None))
        }
        NullSpec::EstimatedNormal => {
            let d = estimated_normal_distance_sorted(sample)?;
            let crit = lilliefors_critical_value(n, spec.alpha)?;
            Ok(TestResult::decide(d, crit, None))
        }
    }
}

pub fn ks_two_sample(sample_a: &[f64], sample_b: &[f64], alpha: f64) -> Result<TestResult> {
    let mut a = sample_a.to_vec();
    let mut b = sample_b.to_vec();
    ks_two_sample_in_place(&mut a, &mut b, alpha)
}

pub(crate) fn ks_two_sample_in_place(a: &mut [f64], b: &mut [f64], alpha: f64) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("two-sample KS needs non-empty samples"));
    }
    if a.len() < 4 || b.len() < 4 {
        return Err(Error::invalid("two-sample KS needs at least 4 observations per sample"));
    }
    check_finite(a)?;
    check_finite(b)?;
    sort_f64(a);
    sort_f64(b);
    let d = two_sample_distance_sorted(a, b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let crit = kolmogorov_critical_value(alpha)? * sqrt((na + nb) / (na * nb));
    Ok(TestResult::decide(d, crit, None))
}

/// `sup |ECDF_a - ECDF_b|`, stepping through tied values together.
pub(crate) fn two_sample_distance_sorted(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d.max((i as f64 / na - j as f64 / nb).abs())
}

pub(crate) fn check_finite(xs: &[f64]) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::invalid("sample contains a non-finite value"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn spec_fixed(f: DistributionFamily) -> TestSpec {
        TestSpec::new(TestKind::KsOneSample, 0.05, NullSpec::FullySpecified(f)).unwrap()
    }

    #[test]
    fn single_point_at_median_gives_half() {
        let d = ks_distance_sorted(&[0.0], crate::statdist::special::normal_cdf);
        assert_eq!(d, 0.5);
    }

    #[test]
    fn null_quantile_midpoints_give_half_over_n() {
        let f = DistributionFamily::STANDARD_NORMAL;
        for n in [4usize, 10, 37] {
            let xs: Vec<f64> = (1..=n)
                .map(|i| f.quantile((i as f64 - 0.5) / n as f64).unwrap())
                .collect();
            let r = ks_one_sample(&xs, &spec_fixed(f)).unwrap();
            assert!((r.statistic - 0.5 / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn kolmogorov_critical_value_at_five_percent() {
        let c = kolmogorov_critical_value(0.05).unwrap();
        // Independent reference: inverse Kolmogorov survival at 0.05.
        assert!((c - 1.358_098_639_322_550_7).abs() < 1e-12, "{c}");
    }

    #[test]
    fn two_sample_examples() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let r = ks_two_sample(&a, &a, 0.05).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(!r.reject);

        let b = [10.0, 11.0, 12.0, 13.0];
        assert_eq!(ks_two_sample(&a, &b, 0.05).unwrap().statistic, 1.0);

        assert_eq!(two_sample_distance_sorted(&[1.0, 2.0], &[1.5, 2.5]), 0.5);
        assert!(ks_two_sample(&[], &a, 0.05).is_err());
    }

    #[test]
    fn small_sample_is_rejected_as_input() {
        let spec = spec_fixed(DistributionFamily::STANDARD_NORMAL);
        assert!(ks_one_sample(&[0.1, 0.2, 0.3], &spec).is_err());
    }
}
