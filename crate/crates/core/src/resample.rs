//! Power estimation by resampling.
//!
//! A power point `β̂(m)` is the rejection fraction of a test over replicate
//! samples of size `m`. Replicates are independent work items: replicate `b`
//! of the job for size `m` runs on stream `b` of a job seed forked from the
//! caller's seed by `m`, and the only aggregation is a commutative count, so
//! the result is identical whatever the thread count.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use libm::sqrt;
use rand::Rng;

use crate::goftests::{NullSpec, TestSpec};
use crate::statdist::{mean, sum_sq_dev, DistributionFamily, Sample, SeedSpec, StreamRng};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum ResampleScheme {
    /// Without replacement; requires `m <= n`.
    Subsample,
    /// With replacement; any `m >= 1`.
    Bootstrap,
}

/// Where replicate samples come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum SamplingMode {
    Subsample,
    Bootstrap,
    /// Fresh i.i.d. draws from a named distribution standing in for an
    /// infinite population.
    Population,
}

impl From<ResampleScheme> for SamplingMode {
    fn from(s: ResampleScheme) -> Self {
        match s {
            ResampleScheme::Subsample => SamplingMode::Subsample,
            ResampleScheme::Bootstrap => SamplingMode::Bootstrap,
        }
    }
}

/// Estimated rejection probability at one sample size.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PowerPoint {
    pub m: usize,
    /// Replicates that produced a decision.
    pub replicates: u64,
    pub rejections: u64,
    /// Replicates whose test errored; never counted as rejections.
    #[cfg_attr(feature = "serde", serde(default))]
    pub failed: u64,
    pub beta_hat: f64,
    pub std_error: f64,
}

impl PowerPoint {
    pub fn from_counts(m: usize, replicates: u64, rejections: u64, failed: u64) -> Self {
        let beta_hat = if replicates == 0 {
            0.0
        } else {
            rejections as f64 / replicates as f64
        };
        let std_error = if replicates == 0 {
            0.0
        } else {
            sqrt(beta_hat * (1.0 - beta_hat) / replicates as f64)
        };
        PowerPoint {
            m,
            replicates,
            rejections,
            failed,
            beta_hat,
            std_error,
        }
    }

    /// Normal-approximation 95% interval for the rejection probability.
    pub fn interval95(&self) -> (f64, f64) {
        let h = 1.959_963_984_540_054 * self.std_error;
        ((self.beta_hat - h).max(0.0), (self.beta_hat + h).min(1.0))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PowerCurve {
    pub points: Vec<PowerPoint>,
}

impl PowerCurve {
    pub fn get(&self, m: usize) -> Option<&PowerPoint> {
        self.points.iter().find(|p| p.m == m)
    }
}

/// A source of replicate test decisions at a chosen sample size.
pub trait PowerModel: Sync {
    type Scratch: Default + Send;

    /// One replicate: draw a size-`m` sample and report whether the test
    /// rejects.
    fn replicate(&self, m: usize, rng: &mut StreamRng, scratch: &mut Self::Scratch) -> Result<bool>;

    /// Smallest size the kernel accepts.
    fn min_m(&self) -> usize;

    /// Hard upper limit on `m` (the data size under subsampling).
    fn max_m(&self) -> Option<usize>;

    /// Default search cap.
    fn default_cap(&self) -> usize;

    /// Size of the underlying data, when there is one.
    fn data_size(&self) -> Option<usize>;

    fn mode(&self) -> SamplingMode;

    fn check_m(&self, m: usize) -> Result<()> {
        if m < self.min_m() {
            return Err(Error::invalid(alloc::format!(
                "subsample size {m} is below the test minimum {}",
                self.min_m()
            )));
        }
        if let Some(max) = self.max_m() {
            if m > max {
                return Err(Error::invalid(alloc::format!(
                    "subsample size {m} exceeds the data size {max}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Default)]
struct Tally {
    ok: u64,
    rejections: u64,
    failed: u64,
    first_error: Option<(u64, Error)>,
}

impl Tally {
    fn record(mut self, index: u64, outcome: Result<bool>) -> Self {
        match outcome {
            Ok(r) => {
                self.ok += 1;
                self.rejections += r as u64;
            }
            Err(e) => {
                self.failed += 1;
                self = self.keep_first(Some((index, e)));
            }
        }
        self
    }

    fn keep_first(mut self, other: Option<(u64, Error)>) -> Self {
        self.first_error = match (self.first_error.take(), other) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }

    #[cfg_attr(not(feature = "std"), allow(dead_code))]
    fn merge(mut self, other: Tally) -> Self {
        self.ok += other.ok;
        self.rejections += other.rejections;
        self.failed += other.failed;
        self.keep_first(other.first_error)
    }
}

#[cfg(feature = "std")]
fn tally<S, F>(replicates: u64, job: SeedSpec, kernel: F) -> Tally
where
    S: Default + Send,
    F: Fn(&mut S, &mut StreamRng) -> Result<bool> + Sync,
{
    use rayon::prelude::*;
    (0..replicates)
        .into_par_iter()
        .fold(
            || (S::default(), Tally::default()),
            |(mut scratch, t), b| {
                let mut rng = job.stream(b).rng();
                let outcome = kernel(&mut scratch, &mut rng);
                (scratch, t.record(b, outcome))
            },
        )
        .map(|(_, t)| t)
        .reduce(Tally::default, Tally::merge)
}

#[cfg(not(feature = "std"))]
fn tally<S, F>(replicates: u64, job: SeedSpec, kernel: F) -> Tally
where
    S: Default + Send,
    F: Fn(&mut S, &mut StreamRng) -> Result<bool> + Sync,
{
    let mut scratch = S::default();
    (0..replicates).fold(Tally::default(), |t, b| {
        let mut rng = job.stream(b).rng();
        let outcome = kernel(&mut scratch, &mut rng);
        t.record(b, outcome)
    })
}

/// Runs `replicates` independent indicator draws and counts the `true`s.
///
/// Fails when more than 1% of replicates error, reporting the lowest failing
/// replicate index.
pub fn count_rejections<S, F>(replicates: u64, job: SeedSpec, kernel: F) -> Result<(u64, u64, u64)>
where
    S: Default + Send,
    F: Fn(&mut S, &mut StreamRng) -> Result<bool> + Sync,
{
    if replicates == 0 {
        return Err(Error::invalid("replicates must be >= 1"));
    }
    let t = tally(replicates, job, kernel);
    if t.failed * 100 > replicates || t.ok == 0 {
        let (index, source) = t.first_error.expect("failures recorded");
        return Err(Error::TooManyFailures {
            failed: t.failed,
            total: replicates,
            first: Box::new(Error::Replicate {
                index,
                source: Box::new(source),
            }),
        });
    }
    Ok((t.ok, t.rejections, t.failed))
}

/// Evaluates `kernel` on replicate streams `0..replicates` of `job`, returning
/// the outputs in replicate order regardless of thread count.
pub fn map_replicates<S, T, F>(replicates: u64, job: SeedSpec, kernel: F) -> Vec<T>
where
    S: Default + Send,
    T: Send,
    F: Fn(&mut S, &mut StreamRng, u64) -> T + Sync,
{
    #[cfg(feature = "std")]
    {
        use rayon::prelude::*;
        (0..replicates)
            .into_par_iter()
            .map_init(S::default, |scratch, b| kernel(scratch, &mut job.stream(b).rng(), b))
            .collect()
    }
    #[cfg(not(feature = "std"))]
    {
        let mut scratch = S::default();
        (0..replicates)
            .map(|b| kernel(&mut scratch, &mut job.stream(b).rng(), b))
            .collect()
    }
}

/// Estimated power of any [`PowerModel`] at size `m`.
pub fn estimate_power_with<M: PowerModel>(model: &M, m: usize, replicates: u64, seed: SeedSpec) -> Result<PowerPoint> {
    model.check_m(m)?;
    let job = seed.fork(m as u64);
    let (ok, rejections, failed) =
        count_rejections(replicates, job, |scratch: &mut M::Scratch, rng| model.replicate(m, rng, scratch))?;
    Ok(PowerPoint::from_counts(m, ok, rejections, failed))
}

/// Power points over a strictly increasing grid.
pub fn power_curve_with<M: PowerModel>(
    model: &M,
    m_grid: &[usize],
    replicates: u64,
    seed: SeedSpec,
) -> Result<PowerCurve> {
    if m_grid.is_empty() {
        return Err(Error::invalid("m grid must be nonempty"));
    }
    if m_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("m grid must be strictly increasing"));
    }
    let points = m_grid
        .iter()
        .map(|&m| estimate_power_with(model, m, replicates, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerCurve { points })
}

/// Writes `m` distinct positions of `0..n` into `out`, uniformly, by a
/// partial Fisher–Yates shuffle. Small `m` relative to `n` keeps the shuffled
/// prefix in a sparse map; the sequence of positions is the same either way.
pub fn subsample_indices<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, out: &mut Vec<usize>) {
    out.clear();
    debug_assert!(m <= n);
    if m.saturating_mul(8) >= n {
        out.extend(0..n);
        for i in 0..m {
            let j = rng.random_range(i..n);
            out.swap(i, j);
        }
        out.truncate(m);
    } else {
        let mut moved: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..m {
            let j = rng.random_range(i..n);
            let vi = *moved.get(&i).unwrap_or(&i);
            let vj = *moved.get(&j).unwrap_or(&j);
            moved.insert(j, vi);
            out.push(vj);
        }
    }
}

fn fill_subsample<R: Rng + ?Sized>(rng: &mut R, data: &[f64], m: usize, idx: &mut Vec<usize>, out: &mut Vec<f64>) {
    subsample_indices(rng, data.len(), m, idx);
    out.clear();
    out.extend(idx.iter().map(|&i| data[i]));
}

fn fill_bootstrap<R: Rng + ?Sized>(rng: &mut R, data: &[f64], m: usize, out: &mut Vec<f64>) {
    let n = data.len();
    out.clear();
    out.extend((0..m).map(|_| data[rng.random_range(0..n)]));
}

/// `m` observations drawn without replacement.
pub fn draw_subsample(data: &[f64], m: usize, seed: SeedSpec) -> Result<Sample> {
    if m == 0 {
        return Err(Error::invalid("subsample size must be >= 1"));
    }
    if m > data.len() {
        return Err(Error::invalid("subsample size exceeds the data size"));
    }
    let mut rng = seed.rng();
    let (mut idx, mut out) = (Vec::new(), Vec::with_capacity(m));
    fill_subsample(&mut rng, data, m, &mut idx, &mut out);
    Ok(Sample::from(out))
}

/// `m` observations drawn with replacement.
pub fn draw_bootstrap(data: &[f64], m: usize, seed: SeedSpec) -> Result<Sample> {
    if data.is_empty() {
        return Err(Error::invalid("cannot bootstrap an empty sample"));
    }
    if m == 0 {
        return Err(Error::invalid("bootstrap size must be >= 1"));
    }
    let mut rng = seed.rng();
    let mut out = Vec::with_capacity(m);
    fill_bootstrap(&mut rng, data, m, &mut out);
    Ok(Sample::from(out))
}

/// Where a [`SampleModel`] gets its replicate samples.
#[derive(Debug, Clone, Copy)]
pub enum SampleSource<'a> {
    Empirical { data: &'a [f64], scheme: ResampleScheme },
    Population(DistributionFamily),
}

/// Test decisions on resamples of univariate data (or on fresh population
/// draws). For the two-sample KS test each replicate compares the resample
/// with a fresh size-`m` sample from the model: the fully specified null,
/// or the normal fitted to the full data (or matched to the population).
#[derive(Debug, Clone)]
pub struct SampleModel<'a> {
    source: SampleSource<'a>,
    spec: TestSpec,
    model_family: Option<DistributionFamily>,
}

#[derive(Debug, Default)]
pub struct SampleScratch {
    draw: Vec<f64>,
    model: Vec<f64>,
    idx: Vec<usize>,
}

impl<'a> SampleModel<'a> {
    pub fn new(source: SampleSource<'a>, spec: TestSpec) -> Result<Self> {
        spec.validate()?;
        if let SampleSource::Empirical { data, .. } = source {
            if data.is_empty() {
                return Err(Error::invalid("data sample is empty"));
            }
            if data.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid("data contain a non-finite value"));
            }
        }
        if let SampleSource::Population(f) = source {
            f.validate()?;
        }
        let model_family = if spec.is_two_sample() {
            Some(match spec.null {
                NullSpec::FullySpecified(f) => f,
                NullSpec::EstimatedNormal => match source {
                    SampleSource::Empirical { data, .. } => {
                        let mu = mean(data);
                        if data.len() < 2 {
                            return Err(Error::invalid("need at least 2 observations to fit a normal"));
                        }
                        let var = sum_sq_dev(data, mu) / (data.len() - 1) as f64;
                        if !(var > 0.0) {
                            return Err(Error::degenerate("data variance is zero"));
                        }
                        DistributionFamily::normal(mu, sqrt(var))?
                    }
                    SampleSource::Population(f) => f.moment_matched_normal(),
                },
            })
        } else {
            if spec.test == crate::goftests::TestKind::MultinomialLrt {
                return Err(Error::invalid("the multinomial LRT needs a contingency-table model"));
            }
            None
        };
        Ok(SampleModel {
            source,
            spec,
            model_family,
        })
    }

    pub fn spec(&self) -> &TestSpec {
        &self.spec
    }

    /// The model the two-sample test draws its comparison sample from.
    pub fn model_family(&self) -> Option<DistributionFamily> {
        self.model_family
    }
}

impl PowerModel for SampleModel<'_> {
    type Scratch = SampleScratch;

    fn replicate(&self, m: usize, rng: &mut StreamRng, s: &mut SampleScratch) -> Result<bool> {
        match self.source {
            SampleSource::Empirical { data, scheme } => match scheme {
                ResampleScheme::Subsample => fill_subsample(rng, data, m, &mut s.idx, &mut s.draw),
                ResampleScheme::Bootstrap => fill_bootstrap(rng, data, m, &mut s.draw),
            },
            SampleSource::Population(f) => {
                s.draw.clear();
                s.draw.resize(m, 0.0);
                f.fill(rng, &mut s.draw);
            }
        }
        match self.model_family {
            Some(model) => {
                s.model.clear();
                s.model.resize(m, 0.0);
                model.fill(rng, &mut s.model);
                Ok(self.spec.apply_two_in_place(&mut s.draw, &mut s.model)?.reject)
            }
            None => Ok(self.spec.apply_in_place(&mut s.draw)?.reject),
        }
    }

    fn min_m(&self) -> usize {
        self.spec.min_sample_size()
    }

    fn max_m(&self) -> Option<usize> {
        match self.source {
            SampleSource::Empirical {
                data,
                scheme: ResampleScheme::Subsample,
            } => Some(data.len()),
            _ => None,
        }
    }

    fn default_cap(&self) -> usize {
        match self.source {
            SampleSource::Empirical { data, scheme } => match scheme {
                ResampleScheme::Subsample => data.len(),
                ResampleScheme::Bootstrap => 4 * data.len(),
            },
            SampleSource::Population(_) => 1 << 20,
        }
    }

    fn data_size(&self) -> Option<usize> {
        match self.source {
            SampleSource::Empirical { data, .. } => Some(data.len()),
            SampleSource::Population(_) => None,
        }
    }

    fn mode(&self) -> SamplingMode {
        match self.source {
            SampleSource::Empirical { scheme, .. } => scheme.into(),
            SampleSource::Population(_) => SamplingMode::Population,
        }
    }
}

/// Power of `spec` at size `m`, resampling `data` by `scheme`.
pub fn estimate_power(
    data: &[f64],
    spec: &TestSpec,
    m: usize,
    replicates: u64,
    scheme: ResampleScheme,
    seed: SeedSpec,
) -> Result<PowerPoint> {
    let model = SampleModel::new(SampleSource::Empirical { data, scheme }, *spec)?;
    estimate_power_with(&model, m, replicates, seed)
}

/// Power curve of `spec` over `m_grid`, resampling `data` by `scheme`.
pub fn power_curve(
    data: &[f64],
    spec: &TestSpec,
    m_grid: &[usize],
    replicates: u64,
    scheme: ResampleScheme,
    seed: SeedSpec,
) -> Result<PowerCurve> {
    let model = SampleModel::new(SampleSource::Empirical { data, scheme }, *spec)?;
    power_curve_with(&model, m_grid, replicates, seed)
}

/// Power at size `m` when samples come straight from `truth`.
pub fn estimate_population_power(
    truth: DistributionFamily,
    spec: &TestSpec,
    m: usize,
    replicates: u64,
    seed: SeedSpec,
) -> Result<PowerPoint> {
    let model = SampleModel::new(SampleSource::Population(truth), *spec)?;
    estimate_power_with(&model, m, replicates, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goftests::TestKind;

    #[test]
    fn power_point_invariants() {
        let p = PowerPoint::from_counts(10, 200, 50, 0);
        assert_eq!(p.beta_hat, 0.25);
        assert!((p.std_error - sqrt(0.25 * 0.75 / 200.0)).abs() < 1e-15);
    }

    #[test]
    fn subsample_full_size_is_permutation() {
        let data: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let mut s = draw_subsample(&data, 50, SeedSpec::new(3, 9)).unwrap().into_inner();
        s.sort_by(f64::total_cmp);
        assert_eq!(s, data);
        assert!(draw_subsample(&data, 51, SeedSpec::new(3, 9)).is_err());
    }

    #[test]
    fn sparse_and_dense_shuffles_agree() {
        // Same rng sequence, different storage: identical positions.
        let n = 1000;
        for m in [1usize, 5, 60, 124] {
            let mut dense = Vec::new();
            let mut rng = SeedSpec::new(1, m as u64).rng();
            let mut all: Vec<usize> = (0..n).collect();
            for i in 0..m {
                let j = rng.random_range(i..n);
                all.swap(i, j);
            }
            dense.extend_from_slice(&all[..m]);
            let mut sparse = Vec::new();
            subsample_indices(&mut SeedSpec::new(1, m as u64).rng(), n, m, &mut sparse);
            assert_eq!(dense, sparse);
        }
    }

    #[test]
    fn bootstrap_of_single_value() {
        let s = draw_bootstrap(&[2.5], 7, SeedSpec::new(0, 0)).unwrap();
        assert_eq!(s.as_slice(), &[2.5; 7]);
        assert!(draw_bootstrap(&[], 3, SeedSpec::new(0, 0)).is_err());
    }

    #[test]
    fn zero_replicates_is_an_error() {
        let data: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let spec = TestSpec::new(TestKind::ShapiroWilk, 0.05, NullSpec::EstimatedNormal).unwrap();
        assert!(estimate_power(&data, &spec, 10, 0, ResampleScheme::Subsample, SeedSpec::new(1, 0)).is_err());
    }

    #[test]
    fn replicate_failures_are_reported_with_index() {
        // Bootstrapping two distinct values at m=4 sometimes yields a
        // constant resample, which Shapiro–Wilk refuses.
        let spec = TestSpec::new(TestKind::ShapiroWilk, 0.05, NullSpec::EstimatedNormal).unwrap();
        let err = estimate_power(&[1.0, 2.0], &spec, 4, 500, ResampleScheme::Bootstrap, SeedSpec::new(5, 0))
            .unwrap_err();
        match err {
            Error::TooManyFailures { failed, total, first } => {
                assert!(failed > 5 && total == 500);
                assert!(matches!(*first, Error::Replicate { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
