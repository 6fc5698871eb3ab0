//! Credibility of multinomial models for contingency tables: independence
//! fit, deviance and Pearson distances, the two closed-form `N*`
//! approximations and resampling.

use alloc::vec;
use alloc::vec::Vec;

use libm::{log, round};
use rand::Rng;
use rand_distr::{Binomial, Distribution, Hypergeometric};

use crate::credindex::{search_nstar, CredibilityEstimate, NStar, SearchConfig};
use crate::goftests::TestResult;
use crate::resample::{map_replicates, PowerCurve, PowerModel, ResampleScheme, SamplingMode};
use crate::statdist::special::{chi_square_cdf_sf, chi_square_quantile, noncentral_chi_square_cdf_sf};
use crate::statdist::{SeedSpec, StreamRng};
use crate::{Error, Result};

/// An `R × C` grid of counts, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ContingencyTable {
    rows: usize,
    cols: usize,
    counts: Vec<u64>,
    n: u64,
}

impl ContingencyTable {
    pub fn new(rows: usize, cols: usize, counts: Vec<u64>) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::invalid("a contingency table needs at least 2 rows and 2 columns"));
        }
        if counts.len() != rows * cols {
            return Err(Error::invalid(alloc::format!(
                "expected {} counts for a {rows}x{cols} table, got {}",
                rows * cols,
                counts.len()
            )));
        }
        let n = counts.iter().sum();
        if n == 0 {
            return Err(Error::invalid("table total is zero"));
        }
        Ok(ContingencyTable { rows, cols, counts, n })
    }

    pub fn from_rows<R: AsRef<[u64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some(i) = rows.iter().position(|r| r.as_ref().len() != cols) {
            return Err(Error::invalid(alloc::format!(
                "row {} has {} entries, expected {cols}",
                i + 1,
                rows[i].as_ref().len()
            )));
        }
        let counts = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        ContingencyTable::new(rows.len(), cols, counts)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.counts[r * self.cols + c]
    }

    pub fn row_margins(&self) -> Vec<u64> {
        self.counts.chunks(self.cols).map(|r| r.iter().sum()).collect()
    }

    pub fn col_margins(&self) -> Vec<u64> {
        let mut out = vec![0; self.cols];
        for row in self.counts.chunks(self.cols) {
            for (o, &x) in out.iter_mut().zip(row) {
                *o += x;
            }
        }
        out
    }

    /// Empirical cell proportions `d(t) = n(t) / n`.
    pub fn proportions(&self) -> Vec<f64> {
        let n = self.n as f64;
        self.counts.iter().map(|&x| x as f64 / n).collect()
    }

    /// Every count multiplied by `k`.
    pub fn scaled(&self, k: u64) -> Result<Self> {
        ContingencyTable::new(self.rows, self.cols, self.counts.iter().map(|&x| x * k).collect())
    }

    pub fn df_independence(&self) -> u32 {
        ((self.rows - 1) * (self.cols - 1)) as u32
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MultinomialFit {
    /// Fitted cell probabilities, row-major.
    pub fitted: Vec<f64>,
    pub df: u32,
    /// Deviance `2 Σ n(t) log(n(t) / (n fitted(t)))`.
    pub g2: f64,
    /// Pearson `Σ (n(t) − n fitted(t))² / (n fitted(t))`.
    pub x2: f64,
    /// `g2 / (2n)`, the Kullback–Leibler distance per observation.
    pub kl_rate: f64,
}

/// Fit statistics of `table` against any fitted cell probabilities, for models
/// that supply their own projection.
pub fn fit_with(table: &ContingencyTable, fitted: Vec<f64>, df: u32) -> Result<MultinomialFit> {
    if fitted.len() != table.counts.len() {
        return Err(Error::invalid("fitted probabilities do not match the table shape"));
    }
    if fitted.iter().any(|p| !(*p >= 0.0)) {
        return Err(Error::invalid("fitted probabilities must be nonnegative"));
    }
    let total: f64 = fitted.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::invalid("fitted probabilities must sum to 1"));
    }
    let n = table.n as f64;
    let (mut g2, mut x2) = (0.0, 0.0);
    for (&obs, &p) in table.counts.iter().zip(&fitted) {
        let e = n * p;
        if obs > 0 {
            if e == 0.0 {
                return Err(Error::degenerate("positive count in a cell with zero fitted probability"));
            }
            g2 += obs as f64 * log(obs as f64 / e);
        }
        if e > 0.0 {
            let r = obs as f64 - e;
            x2 += r * r / e;
        }
    }
    let g2 = (2.0 * g2).max(0.0);
    Ok(MultinomialFit {
        fitted,
        df,
        g2,
        x2,
        kl_rate: g2 / (2.0 * n),
    })
}

/// Row-column independence: `fitted(r, c) = (row_r / n)(col_c / n)`, the KL
/// projection of the empirical distribution onto product distributions.
pub fn fit_independence(table: &ContingencyTable) -> Result<MultinomialFit> {
    let rows = table.row_margins();
    let cols = table.col_margins();
    if let Some(i) = rows.iter().position(|&r| r == 0) {
        return Err(Error::invalid(alloc::format!("row {} has a zero margin", i + 1)));
    }
    if let Some(j) = cols.iter().position(|&c| c == 0) {
        return Err(Error::invalid(alloc::format!("column {} has a zero margin", j + 1)));
    }
    let n = table.n as f64;
    let fitted = rows
        .iter()
        .flat_map(|&r| cols.iter().map(move |&c| (r as f64 / n) * (c as f64 / n)))
        .collect();
    let mut fit = fit_with(table, fitted, table.df_independence())?;
    // Exact independence in integers; floating residue would otherwise leave
    // a tiny positive distance.
    let exact = table.counts.chunks(table.cols).zip(&rows).all(|(row, &r)| {
        row.iter()
            .zip(&cols)
            .all(|(&x, &c)| x as u128 * table.n as u128 == r as u128 * c as u128)
    });
    if exact {
        fit.g2 = 0.0;
        fit.x2 = 0.0;
        fit.kl_rate = 0.0;
    }
    Ok(fit)
}

/// Likelihood ratio test: reject when `g2` exceeds the upper-α point of
/// `χ²_df`.
pub fn lrt_test(fit: &MultinomialFit, alpha: f64) -> Result<TestResult> {
    check_alpha(alpha)?;
    let crit = chi_square_quantile(fit.df as f64, 1.0 - alpha)?;
    let mut r = TestResult::decide(fit.g2, crit, Some(fit.df));
    r.p_value = Some(chi_square_cdf_sf(fit.df as f64, fit.g2)?.1);
    Ok(r)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::invalid("alpha must lie in (0, 0.5)"));
    }
    Ok(())
}

/// Noncentrality `λ` at which the size-α chi-square test on `df` degrees of
/// freedom has power `target_beta`.
pub fn solve_delta_star(df: u32, alpha: f64, target_beta: f64) -> Result<f64> {
    if df == 0 {
        return Err(Error::invalid("df must be positive"));
    }
    if !(alpha > 0.0 && alpha < target_beta && target_beta <= 0.99) {
        return Err(Error::invalid("need 0 < alpha < target_beta <= 0.99"));
    }
    let k = df as f64;
    let crit = chi_square_quantile(k, 1.0 - alpha)?;
    let power = |lambda: f64| noncentral_chi_square_cdf_sf(k, lambda, crit).map(|(_, sf)| sf);
    let (mut lo, mut hi) = (0.0, 1.0);
    while power(hi)? < target_beta {
        lo = hi;
        hi *= 2.0;
        if hi > 1e8 {
            return Err(Error::Numeric("noncentrality bracket overflow".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let p = power(mid)?;
        if (p - target_beta).abs() < 1e-8 {
            return Ok(mid);
        }
        if p < target_beta {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * hi.max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `n χ²_df(α) / (2 g2)`; infinite when the model fits exactly.
pub fn nstar_asy(table: &ContingencyTable, fit: &MultinomialFit, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if fit.g2 == 0.0 {
        return Ok(f64::INFINITY);
    }
    let crit = chi_square_quantile(fit.df as f64, 1.0 - alpha)?;
    Ok(table.n as f64 * crit / (2.0 * fit.g2))
}

/// `n λ* / x2`, with `λ*` the power-0.5 noncentrality; infinite when the
/// model fits exactly.
pub fn nstar_asy2(table: &ContingencyTable, fit: &MultinomialFit, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if fit.x2 == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(table.n as f64 * solve_delta_star(fit.df, alpha, 0.5)? / fit.x2)
}

/// Draws `Multinomial(m, probs)` into `out` by sequential binomials.
fn multinomial_into<R: Rng + ?Sized>(rng: &mut R, m: u64, probs: &[f64], out: &mut [u64]) {
    let mut left = m;
    let mut mass = 1.0;
    let last = probs.len() - 1;
    for (i, (&p, o)) in probs.iter().zip(out.iter_mut()).enumerate() {
        let k = if left == 0 {
            0
        } else if i == last || p >= mass {
            left
        } else if p <= 0.0 {
            0
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            Binomial::new(left, q).expect("probability in [0, 1]").sample(rng)
        };
        *o = k;
        left -= k;
        mass -= p;
    }
}

/// Draws `m` of the table's `n` individuals without replacement into `out` by
/// sequential hypergeometrics.
fn subsample_into<R: Rng + ?Sized>(rng: &mut R, m: u64, counts: &[u64], n: u64, out: &mut [u64]) {
    let mut left = m;
    let mut pool = n;
    for (&c, o) in counts.iter().zip(out.iter_mut()) {
        let k = if left == 0 || c == 0 {
            0
        } else if c == pool {
            left
        } else {
            Hypergeometric::new(pool, c, left).expect("valid urn").sample(rng)
        };
        *o = k;
        left -= k;
        pool -= c;
    }
}

/// One bootstrap table: a `Multinomial(m, d)` draw over all cells, margins
/// not fixed.
pub fn multinomial_resample(table: &ContingencyTable, m: u64, seed: SeedSpec) -> Result<ContingencyTable> {
    if m == 0 {
        return Err(Error::invalid("m must be >= 1"));
    }
    let mut out = vec![0; table.counts.len()];
    multinomial_into(&mut seed.rng(), m, &table.proportions(), &mut out);
    Ok(ContingencyTable {
        rows: table.rows,
        cols: table.cols,
        counts: out,
        n: m,
    })
}

/// `m` of the `n` categorized individuals drawn without replacement.
pub fn subsample_individuals(table: &ContingencyTable, m: u64, seed: SeedSpec) -> Result<ContingencyTable> {
    if m == 0 || m > table.n {
        return Err(Error::invalid(alloc::format!("m must lie in 1..={}", table.n)));
    }
    let mut out = vec![0; table.counts.len()];
    subsample_into(&mut seed.rng(), m, &table.counts, table.n, &mut out);
    Ok(ContingencyTable {
        rows: table.rows,
        cols: table.cols,
        counts: out,
        n: m,
    })
}

/// Independence deviance of a resampled table. Rows or columns left empty by
/// resampling contribute nothing; the caller keeps the nominal df.
pub fn resampled_deviance(counts: &[u64], cols: usize, row_buf: &mut Vec<u64>, col_buf: &mut Vec<u64>) -> f64 {
    row_buf.clear();
    row_buf.extend(counts.chunks(cols).map(|r| r.iter().sum::<u64>()));
    col_buf.clear();
    col_buf.resize(cols, 0);
    for row in counts.chunks(cols) {
        for (o, &x) in col_buf.iter_mut().zip(row) {
            *o += x;
        }
    }
    let n: u64 = row_buf.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    let mut g = 0.0;
    for (row, &r) in counts.chunks(cols).zip(row_buf.iter()) {
        for (&x, &c) in row.iter().zip(col_buf.iter()) {
            if x > 0 {
                let x = x as f64;
                g += x * log(x * n / (r as f64 * c as f64));
            }
        }
    }
    (2.0 * g).max(0.0)
}

#[derive(Debug, Default)]
pub struct TableScratch {
    counts: Vec<u64>,
    rows: Vec<u64>,
    cols: Vec<u64>,
}

/// Power of the size-α independence LRT on tables resampled from a fixed
/// table.
#[derive(Debug, Clone)]
pub struct TablePowerModel {
    table: ContingencyTable,
    probs: Vec<f64>,
    scheme: ResampleScheme,
    critical_value: f64,
}

impl TablePowerModel {
    pub fn new(table: &ContingencyTable, alpha: f64, scheme: ResampleScheme) -> Result<Self> {
        check_alpha(alpha)?;
        let critical_value = chi_square_quantile(table.df_independence() as f64, 1.0 - alpha)?;
        Ok(TablePowerModel {
            table: table.clone(),
            probs: table.proportions(),
            scheme,
            critical_value,
        })
    }

    pub fn critical_value(&self) -> f64 {
        self.critical_value
    }
}

impl PowerModel for TablePowerModel {
    type Scratch = TableScratch;

    fn replicate(&self, m: usize, rng: &mut StreamRng, s: &mut TableScratch) -> Result<bool> {
        s.counts.clear();
        s.counts.resize(self.table.counts.len(), 0);
        match self.scheme {
            ResampleScheme::Bootstrap => multinomial_into(rng, m as u64, &self.probs, &mut s.counts),
            ResampleScheme::Subsample => {
                subsample_into(rng, m as u64, &self.table.counts, self.table.n, &mut s.counts)
            }
        }
        let g2 = resampled_deviance(&s.counts, self.table.cols, &mut s.rows, &mut s.cols);
        Ok(g2 > self.critical_value)
    }

    fn min_m(&self) -> usize {
        2
    }

    fn max_m(&self) -> Option<usize> {
        match self.scheme {
            ResampleScheme::Subsample => Some(self.table.n as usize),
            ResampleScheme::Bootstrap => None,
        }
    }

    fn default_cap(&self) -> usize {
        match self.scheme {
            ResampleScheme::Subsample => self.table.n as usize,
            ResampleScheme::Bootstrap => 4 * self.table.n as usize,
        }
    }

    fn data_size(&self) -> Option<usize> {
        Some(self.table.n as usize)
    }

    fn mode(&self) -> SamplingMode {
        self.scheme.into()
    }
}

/// `N*` of the independence model by resampling the table, started from
/// `round(nstar_asy2)`.
pub fn find_nstar_categorical(
    table: &ContingencyTable,
    alpha: f64,
    scheme: ResampleScheme,
    seed: SeedSpec,
    config: &SearchConfig,
) -> Result<CredibilityEstimate> {
    let fit = fit_independence(table)?;
    let model = TablePowerModel::new(table, alpha, scheme)?;
    if !lrt_test(&fit, alpha)?.reject {
        let cap = config.m_cap.unwrap_or_else(|| model.default_cap());
        return Ok(CredibilityEstimate {
            n_star: NStar::Infinite,
            sqrt_n_star: None,
            bracket: None,
            target_beta: 0.5,
            alpha,
            mode: model.mode(),
            m_cap: cap,
            curve: PowerCurve { points: Vec::new() },
            evaluations: 0,
            data_size: Some(table.n as usize),
            phi_inv: None,
            eiss_lower_bound: None,
            note: Some("the independence model is not rejected at the full sample size".into()),
        });
    }
    let asy2 = nstar_asy2(table, &fit, alpha)?;
    let hint = asy2.is_finite().then(|| round(asy2).max(1.0) as usize);
    search_nstar(&model, alpha, 0.5, seed, config, hint)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AsyInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub replicates: u64,
    /// Resamples discarded for an empty row or column.
    pub redraws: u64,
}

/// Percentile bootstrap interval for `nstar_asy`: `B` multinomial resamples of
/// size `n` from the table's proportions. Resamples with an empty row or
/// column are redrawn; more than 1% redraws is an error.
pub fn bootstrap_ci_nstar_asy(
    table: &ContingencyTable,
    alpha: f64,
    replicates: u64,
    level: f64,
    seed: SeedSpec,
) -> Result<AsyInterval> {
    check_alpha(alpha)?;
    if replicates < 200 {
        return Err(Error::invalid("need at least 200 bootstrap replicates"));
    }
    if !(0.0..1.0).contains(&level) {
        return Err(Error::invalid("level must lie in [0, 1)"));
    }
    fit_independence(table)?;
    let crit = chi_square_quantile(table.df_independence() as f64, 1.0 - alpha)?;
    let probs = table.proportions();
    let (cols, n) = (table.cols, table.n);
    // A redraw budget per replicate keeps a pathological table from spinning.
    let max_tries = 1 + replicates / 100;
    let draws = map_replicates(replicates, seed, |s: &mut TableScratch, rng, _| {
        let mut redraws = 0;
        loop {
            s.counts.clear();
            s.counts.resize(probs.len(), 0);
            multinomial_into(rng, n, &probs, &mut s.counts);
            let g2 = resampled_deviance(&s.counts, cols, &mut s.rows, &mut s.cols);
            if s.rows.iter().all(|&r| r > 0) && s.cols.iter().all(|&c| c > 0) {
                let v = if g2 == 0.0 { f64::INFINITY } else { n as f64 * crit / (2.0 * g2) };
                return (Some(v), redraws);
            }
            redraws += 1;
            if redraws > max_tries {
                return (None, redraws);
            }
        }
    });
    let redraws: u64 = draws.iter().map(|d| d.1).sum();
    if redraws * 100 > replicates || draws.iter().any(|d| d.0.is_none()) {
        return Err(Error::TooManyFailures {
            failed: redraws,
            total: replicates,
            first: alloc::boxed::Box::new(Error::degenerate("resampled table has an empty row or column")),
        });
    }
    let mut values: Vec<f64> = draws.into_iter().filter_map(|d| d.0).collect();
    values.sort_by(f64::total_cmp);
    let q = |p: f64| percentile_sorted(&values, p);
    Ok(AsyInterval {
        lower: q(0.5 * (1.0 - level)),
        upper: q(0.5 * (1.0 + level)),
        level,
        replicates,
        redraws,
    })
}

/// Linear-interpolation percentile (`p` in `[0, 1]`) of ascending values.
pub fn percentile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let i = h as usize;
    if i + 1 >= sorted.len() {
        return sorted[sorted.len() - 1];
    }
    let (a, b) = (sorted[i], sorted[i + 1]);
    if a == b {
        return a;
    }
    a + (h - i as f64) * (b - a)
}
