//! Variance of complete U-statistics built from test indicators, and the
//! equivalent independent sample size (EISS) of a resampled power estimate.

use alloc::vec::Vec;

use libm::{exp, sqrt};
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use crate::goftests::TestSpec;
use crate::resample::{estimate_power, map_replicates, ResampleScheme};
use crate::statdist::special::{chi_square_cdf_sf, chi_square_quantile, ln_choose, noncentral_chi_square_cdf_sf};
use crate::statdist::{DistributionFamily, SeedSpec};
use crate::{Error, Result};

/// Largest number of subsets [`ucomp_small_oracle`] will enumerate.
pub const ORACLE_BUDGET: u64 = 1_000_000;

/// Default Monte Carlo draws for the local-alternative computations.
pub const DEFAULT_LOCAL_DRAWS: u64 = 200_000;

/// Variance of the complete U-statistic of order `m` on `n` observations,
/// `Σ C(m,i) C(n−m, m−i) σ²_i / C(n,m)` with `sigma_sq[i−1] = σ²_i`.
pub fn ucomp_variance_exact(sigma_sq: &[f64], n: u64, m: u64) -> Result<f64> {
    if m == 0 || m > n {
        return Err(Error::invalid("need 1 <= m <= n"));
    }
    if sigma_sq.len() as u64 != m {
        return Err(Error::invalid(alloc::format!(
            "expected {m} conditional variances, got {}",
            sigma_sq.len()
        )));
    }
    if sigma_sq.iter().any(|s| !(*s >= 0.0)) {
        return Err(Error::invalid("conditional variances must be nonnegative"));
    }
    let total = ln_choose(n, m);
    let mut v = 0.0;
    for (i, &s) in (1..=m).zip(sigma_sq) {
        if m - i > n - m || s == 0.0 {
            continue;
        }
        v += s * exp(ln_choose(m, i) + ln_choose(n - m, m - i) - total);
    }
    Ok(v)
}

/// Calls `f` on every `m`-subset of `0..n` in lexicographic order.
pub fn for_each_subset<F: FnMut(&[usize])>(n: usize, m: usize, mut f: F) {
    if m > n {
        return;
    }
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        f(&idx);
        let Some(i) = (0..m).rev().find(|&i| idx[i] != i + n - m) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exact complete U-statistic: the average of `kernel` over all `m`-subsets
/// of `data`.
pub fn ucomp_small_oracle<K>(data: &[f64], m: usize, mut kernel: K) -> Result<f64>
where
    K: FnMut(&[f64]) -> bool,
{
    let n = data.len();
    if m == 0 || m > n {
        return Err(Error::invalid("need 1 <= m <= n"));
    }
    let subsets = exp(ln_choose(n as u64, m as u64));
    if subsets > ORACLE_BUDGET as f64 + 0.5 {
        return Err(Error::invalid(alloc::format!(
            "C({n}, {m}) = {subsets:.0} subsets exceeds the enumeration budget of {ORACLE_BUDGET}"
        )));
    }
    let mut buf = Vec::with_capacity(m);
    let (mut hits, mut total) = (0u64, 0u64);
    for_each_subset(n, m, |idx| {
        buf.clear();
        buf.extend(idx.iter().map(|&i| data[i]));
        hits += kernel(&buf) as u64;
        total += 1;
    });
    Ok(hits as f64 / total as f64)
}

/// [`ucomp_small_oracle`] with a test's rejection indicator as the kernel.
pub fn ucomp_test_oracle(data: &[f64], m: usize, spec: &TestSpec) -> Result<f64> {
    let mut err = None;
    let u = ucomp_small_oracle(data, m, |sub| match spec.apply(sub) {
        Ok(r) => r.reject,
        Err(e) => {
            err.get_or_insert(e);
            false
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(u),
    }
}

/// Upper bound `β(1−β) m / n` on the variance of the complete U-statistic.
pub fn variance_bound(beta: f64, n: u64, m: u64) -> Result<f64> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::invalid("beta must lie in [0, 1]"));
    }
    if m == 0 || m > n {
        return Err(Error::invalid("need 1 <= m <= n"));
    }
    Ok(beta * (1.0 - beta) * m as f64 / n as f64)
}

/// Local-alternative model of two chi-square tests on `d` degrees of freedom
/// whose samples share a fraction `a` of their observations.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LocalAltSpec {
    pub d: u32,
    /// Noncentrality on the `√λ` scale.
    pub delta: f64,
    pub c_alpha: f64,
    /// Overlap fraction in `[0, 1)`.
    pub a: f64,
    pub draws: u64,
}

impl LocalAltSpec {
    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::invalid("d must be at least 2"));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::invalid("delta must be finite and nonnegative"));
        }
        if !(self.c_alpha > 0.0 && self.c_alpha.is_finite()) {
            return Err(Error::invalid("c_alpha must be positive"));
        }
        if !(0.0..1.0).contains(&self.a) {
            return Err(Error::invalid("the overlap fraction must lie in [0, 1)"));
        }
        if self.draws < 2 {
            return Err(Error::invalid("need at least 2 draws"));
        }
        Ok(())
    }

    /// Exact rejection probability of either test alone,
    /// `P(χ'²_d(δ²) > c_α)`.
    pub fn power(&self) -> Result<f64> {
        Ok(noncentral_chi_square_cdf_sf(self.d as f64, self.delta * self.delta, self.c_alpha)?.1)
    }
}

/// A Monte Carlo mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    sum: [f64; 3],
    sum_sq: [f64; 3],
}

impl Moments {
    fn push(&mut self, x: [f64; 3]) {
        self.n += 1.0;
        for (k, v) in x.into_iter().enumerate() {
            self.sum[k] += v;
            self.sum_sq[k] += v * v;
        }
    }

    fn merge(&mut self, o: &Moments) {
        self.n += o.n;
        for k in 0..3 {
            self.sum[k] += o.sum[k];
            self.sum_sq[k] += o.sum_sq[k];
        }
    }

    fn estimate(&self, k: usize) -> McEstimate {
        let mean = self.sum[k] / self.n;
        let var = ((self.sum_sq[k] - self.n * mean * mean) / (self.n - 1.0)).max(0.0);
        McEstimate {
            value: mean,
            std_error: sqrt(var / self.n),
        }
    }
}

const CHUNK: u64 = 4096;

/// Per draw: `[prod_a, prod_a − prod_0, single factor]`, where `prod_0` reuses
/// the draw's `X, Y` at zero overlap.
fn local_alt_moments(spec: &LocalAltSpec, seed: SeedSpec) -> Result<Moments> {
    spec.validate()?;
    let k = (spec.d - 1) as f64;
    let g = |t: f64| -> f64 {
        if t <= 0.0 {
            1.0
        } else {
            chi_square_cdf_sf(k, t).map(|(_, sf)| sf).unwrap_or(f64::NAN)
        }
    };
    let chi = ChiSquared::new(k).map_err(|_| Error::invalid("bad chi-square df"))?;
    let a = spec.a;
    let (ra, rb) = (sqrt(a / (1.0 - a)), sqrt(1.0 - a));
    let cut = spec.c_alpha / (1.0 - a);
    let chunks = spec.draws.div_ceil(CHUNK);
    let parts = map_replicates(chunks, seed, |_: &mut (), rng, c| {
        let mut mo = Moments::default();
        let count = CHUNK.min(spec.draws - c * CHUNK);
        for _ in 0..count {
            let x: f64 = rng.sample(StandardNormal);
            let y: f64 = rng.sample(StandardNormal);
            let z: f64 = rng.sample(StandardNormal);
            let w: f64 = chi.sample(rng);
            let u = z * ra + spec.delta / rb;
            let s = sqrt(u * u + a / (1.0 - a) * w);
            let prod_a = g(cut - (x + s) * (x + s)) * g(cut - (y + s) * (y + s));
            let (x0, y0) = (x + spec.delta, y + spec.delta);
            let f0 = g(spec.c_alpha - x0 * x0);
            let prod_0 = f0 * g(spec.c_alpha - y0 * y0);
            mo.push([prod_a, prod_a - prod_0, f0]);
        }
        mo
    });
    let mut total = Moments::default();
    for p in &parts {
        total.merge(p);
    }
    if total.sum.iter().any(|s| !s.is_finite()) {
        return Err(Error::Numeric("chi-square tail evaluation failed".into()));
    }
    Ok(total)
}

/// Monte Carlo estimate of the joint rejection probability `A` of two tests
/// with overlap fraction `a`.
pub fn local_alt_a(spec: &LocalAltSpec, seed: SeedSpec) -> Result<McEstimate> {
    Ok(local_alt_moments(spec, seed)?.estimate(0))
}

/// Monte Carlo mean of one factor of the product at zero overlap, which is
/// the single-test power.
pub fn local_alt_single(spec: &LocalAltSpec, seed: SeedSpec) -> Result<McEstimate> {
    Ok(local_alt_moments(spec, seed)?.estimate(2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VarianceReport {
    /// Sampling fraction `φ = m / n`.
    pub phi: f64,
    /// Power `β` of a single test (exact).
    pub beta: f64,
    pub a: McEstimate,
    /// Covariance of the two rejection indicators, `A − β²`.
    pub variance: McEstimate,
    /// `β(1−β) / variance`.
    pub eiss: f64,
    pub eiss_std_error: f64,
    /// `1/φ`, the lower bound on EISS.
    pub bound_phi_inv: f64,
}

/// EISS of a resampled power estimate under a local alternative at sampling
/// fraction `phi`.
///
/// The covariance `A − β²` is estimated as the mean of `prod_a − prod_0` over
/// common draws, since `E[prod_0] = β²` exactly. At large `1/φ` the
/// covariance is far smaller than `β²` and differencing independent
/// estimates of the two would swamp it.
pub fn eiss_local(phi: f64, d: u32, alpha: f64, delta: f64, draws: u64, seed: SeedSpec) -> Result<VarianceReport> {
    if !(phi > 0.0 && phi < 1.0) {
        return Err(Error::invalid("phi must lie in (0, 1)"));
    }
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::invalid("alpha must lie in (0, 0.5)"));
    }
    let spec = LocalAltSpec {
        d,
        delta,
        c_alpha: chi_square_quantile(d as f64, 1.0 - alpha)?,
        a: phi,
        draws,
    };
    eiss_local_spec(&spec, seed)
}

/// [`eiss_local`] with an explicit critical value; `spec.a` is the sampling
/// fraction.
pub fn eiss_local_spec(spec: &LocalAltSpec, seed: SeedSpec) -> Result<VarianceReport> {
    let phi = spec.a;
    if !(phi > 0.0 && phi < 1.0) {
        return Err(Error::invalid("phi must lie in (0, 1)"));
    }
    let mo = local_alt_moments(spec, seed)?;
    let beta = spec.power()?;
    let variance = mo.estimate(1);
    if variance.value <= variance.std_error {
        return Err(Error::Numeric(alloc::format!(
            "covariance estimate {:.3e} is not positive within its Monte Carlo error {:.1e}; increase draws",
            variance.value,
            variance.std_error
        )));
    }
    let eiss = beta * (1.0 - beta) / variance.value;
    Ok(VarianceReport {
        phi,
        beta,
        a: mo.estimate(0),
        variance,
        eiss,
        eiss_std_error: eiss * variance.std_error / variance.value,
        bound_phi_inv: 1.0 / phi,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimatorDistribution {
    /// `β̂(m)` for each dataset.
    pub values: Vec<f64>,
    pub mean: f64,
    pub sd: f64,
    /// `mean (1 − mean) / sd²`.
    pub eiss_empirical: f64,
}

/// Distribution of the resampled power estimate `β̂(m)` across independent
/// datasets of size `n` drawn from `truth`.
#[allow(clippy::too_many_arguments)]
pub fn simulate_estimator_distribution(
    truth: DistributionFamily,
    n: usize,
    m: usize,
    datasets: u64,
    replicates: u64,
    scheme: ResampleScheme,
    spec: &TestSpec,
    seed: SeedSpec,
) -> Result<EstimatorDistribution> {
    if datasets < 50 {
        return Err(Error::invalid("need at least 50 datasets"));
    }
    let mut values = Vec::with_capacity(datasets as usize);
    for k in 0..datasets {
        let data = truth.sample(n, seed.fork(2 * k))?;
        let p = estimate_power(&data, spec, m, replicates, scheme, seed.fork(2 * k + 1))?;
        values.push(p.beta_hat);
    }
    let mean = crate::statdist::mean(&values);
    let sd = sqrt(crate::statdist::sum_sq_dev(&values, mean) / (values.len() - 1) as f64);
    let eiss_empirical = if sd > 0.0 {
        mean * (1.0 - mean) / (sd * sd)
    } else {
        f64::INFINITY
    };
    Ok(EstimatorDistribution {
        values,
        mean,
        sd,
        eiss_empirical,
    })
}
