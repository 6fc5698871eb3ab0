//! Searching a power curve for the credibility index `N*` (power 0.5) and the
//! generalized `N*_β`.
//!
//! The search is sequential; each power evaluation fans out over replicates
//! inside [`crate::resample`]. Steps:
//!
//! 1. Bracket the target by doubling from `m = 16` (or by halving/doubling
//!    from a start hint).
//! 2. Evaluate a coarse grid inside the bracket, equally spaced in `√m`.
//! 3. Fit `logit β̂` as a line in `√m` by weighted least squares and solve for
//!    the target.
//! 4. Refine at the fine replicate count around the candidate until the 95%
//!    interval of `β̂(candidate)` covers the target and adjacent fine points
//!    bracket it no wider than `max(2, 0.05 · candidate)`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use libm::{ceil, floor, log, round, sqrt};

use crate::goftests::TestSpec;
use crate::resample::{
    estimate_power_with, PowerCurve, PowerModel, PowerPoint, ResampleScheme, SampleModel, SampleSource, SamplingMode,
};
use crate::statdist::{DistributionFamily, SeedSpec};
use crate::{Error, Result};

/// `φ⁻¹` at or below this value marks an estimate as low-reliability.
pub const LOW_RELIABILITY_PHI_INV: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum NStar {
    Finite(usize),
    /// The target power was not reached by the search cap.
    Infinite,
}

impl NStar {
    pub fn finite(self) -> Option<usize> {
        match self {
            NStar::Finite(n) => Some(n),
            NStar::Infinite => None,
        }
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for NStar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        match self {
            NStar::Finite(n) => s.serialize_u64(*n as u64),
            NStar::Infinite => s.serialize_str("infinite"),
        }
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for NStar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Repr {
            N(u64),
            S(String),
        }
        match Repr::deserialize(d)? {
            Repr::N(n) => Ok(NStar::Finite(n as usize)),
            Repr::S(s) if s == "infinite" => Ok(NStar::Infinite),
            Repr::S(s) => Err(serde::de::Error::custom(alloc::format!("bad n_star {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchConfig {
    pub replicates_coarse: u64,
    pub replicates_fine: u64,
    /// Largest subsample size the search may try. `None` means the data size
    /// under subsampling, four times the data size under bootstrapping.
    pub m_cap: Option<usize>,
    /// Interior coarse-grid points placed inside the initial bracket.
    pub coarse_points: usize,
    /// Refinement rounds before giving up.
    pub max_refinements: usize,
    /// First size tried by the doubling phase when there is no hint.
    pub start_m: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            replicates_coarse: 250,
            replicates_fine: 1000,
            m_cap: None,
            coarse_points: 4,
            max_refinements: 8,
            start_m: 16,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates_coarse == 0 {
            return Err(Error::invalid("replicates_coarse must be >= 1"));
        }
        if self.replicates_fine < self.replicates_coarse {
            return Err(Error::invalid("replicates_fine must be >= replicates_coarse"));
        }
        if self.max_refinements == 0 {
            return Err(Error::invalid("max_refinements must be >= 1"));
        }
        if self.start_m == 0 {
            return Err(Error::invalid("start_m must be >= 1"));
        }
        Ok(())
    }

    /// Upper bound on distinct sizes the search can evaluate.
    pub fn max_grid_points(&self, m_cap: usize) -> usize {
        let log2 = usize::BITS - m_cap.max(1).leading_zeros();
        2 * log2 as usize + self.coarse_points + 3 * self.max_refinements
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CredibilityEstimate {
    pub n_star: NStar,
    /// `√N*`, the index on the scale of a distance.
    pub sqrt_n_star: Option<f64>,
    /// `(m_low, m_high)` with `β̂(m_low) < target ≤ β̂(m_high)` at the fine
    /// replicate count.
    pub bracket: Option<(usize, usize)>,
    pub target_beta: f64,
    pub alpha: f64,
    pub mode: SamplingMode,
    pub m_cap: usize,
    /// Every size evaluated, at its largest replicate count.
    pub curve: PowerCurve,
    /// Number of test evaluations spent.
    pub evaluations: u64,
    pub data_size: Option<usize>,
    /// `n / N*` (the inverse sampling fraction).
    pub phi_inv: Option<f64>,
    /// Lower bound on the equivalent independent sample size; equals
    /// `phi_inv`.
    pub eiss_lower_bound: Option<f64>,
    pub note: Option<String>,
}

impl CredibilityEstimate {
    pub fn is_finite(&self) -> bool {
        matches!(self.n_star, NStar::Finite(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Reliability {
    pub phi_inv: f64,
    pub eiss_lower_bound: f64,
    pub low_reliability: bool,
}

/// Reliability of a finite estimate computed from `n` observations.
pub fn reliability(n: usize, estimate: &CredibilityEstimate) -> Result<Reliability> {
    let n_star = estimate
        .n_star
        .finite()
        .ok_or_else(|| Error::invalid("reliability is undefined for an infinite N*"))?;
    reliability_for(n, n_star)
}

pub fn reliability_for(n: usize, n_star: usize) -> Result<Reliability> {
    if n == 0 || n_star == 0 {
        return Err(Error::invalid("n and N* must be positive"));
    }
    let phi_inv = n as f64 / n_star as f64;
    Ok(Reliability {
        phi_inv,
        eiss_lower_bound: phi_inv,
        low_reliability: phi_inv <= LOW_RELIABILITY_PHI_INV,
    })
}

fn logit(p: f64) -> f64 {
    log(p / (1.0 - p))
}

struct Search<'a, M: PowerModel> {
    model: &'a M,
    seed: SeedSpec,
    target: f64,
    points: BTreeMap<usize, PowerPoint>,
    evaluations: u64,
}

impl<M: PowerModel> Search<'_, M> {
    fn eval(&mut self, m: usize, replicates: u64) -> Result<PowerPoint> {
        if let Some(p) = self.points.get(&m) {
            if p.replicates + p.failed >= replicates {
                return Ok(*p);
            }
        }
        let p = estimate_power_with(self.model, m, replicates, self.seed)?;
        self.evaluations += replicates;
        self.points.insert(m, p);
        Ok(p)
    }

    fn curve(&self) -> PowerCurve {
        PowerCurve {
            points: self.points.values().copied().collect(),
        }
    }

    fn budget_error(&self, message: impl Into<String>) -> Error {
        Error::Budget {
            message: message.into(),
            curve: self.curve().points,
        }
    }

    /// Weighted least-squares line of `logit β̂` on `√m` over points in
    /// `[lo, hi]`; returns the size where the line crosses the target.
    fn interpolate(&self, lo: usize, hi: usize, min_reps: u64) -> Option<f64> {
        let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        let mut count = 0;
        for p in self.points.range(lo..=hi).map(|(_, p)| p) {
            if p.replicates < min_reps {
                continue;
            }
            let r = p.replicates as f64;
            let b = p.beta_hat.clamp(0.5 / r, 1.0 - 0.5 / r);
            let w = r * b * (1.0 - b);
            let x = sqrt(p.m as f64);
            let y = logit(b);
            sw += w;
            sx += w * x;
            sy += w * y;
            sxx += w * x * x;
            sxy += w * x * y;
            count += 1;
        }
        if count < 2 {
            return None;
        }
        let det = sw * sxx - sx * sx;
        if !(det > 0.0) {
            return None;
        }
        let slope = (sw * sxy - sx * sy) / det;
        let intercept = (sy - slope * sx) / sw;
        if !(slope > 0.0) {
            return None;
        }
        let root = (logit(self.target) - intercept) / slope;
        (root > 0.0).then_some(root * root)
    }

    /// Root on the straight line through two points in `(√m, logit β̂)`.
    fn secant(&self, lo: usize, hi: usize) -> f64 {
        let (a, b) = (self.points[&lo], self.points[&hi]);
        let clampb = |p: &PowerPoint| {
            let r = p.replicates as f64;
            logit(p.beta_hat.clamp(0.5 / r, 1.0 - 0.5 / r))
        };
        let (xa, xb) = (sqrt(lo as f64), sqrt(hi as f64));
        let (ya, yb) = (clampb(&a), clampb(&b));
        let x = if yb > ya {
            xa + (logit(self.target) - ya) * (xb - xa) / (yb - ya)
        } else {
            0.5 * (xa + xb)
        };
        let x = x.clamp(xa, xb);
        x * x
    }

    /// Adjacent fine points bracketing the target, nearest to `around`.
    fn fine_bracket(&self, fine: u64, around: usize) -> Option<(usize, usize)> {
        let fine_pts: Vec<&PowerPoint> = self.points.values().filter(|p| p.replicates + p.failed >= fine).collect();
        fine_pts
            .windows(2)
            .filter(|w| w[0].beta_hat < self.target && self.target <= w[1].beta_hat)
            .map(|w| (w[0].m, w[1].m))
            .min_by_key(|&(a, b)| {
                let mid = (a + b) / 2;
                (mid.abs_diff(around), b - a)
            })
    }
}

/// Searches any [`PowerModel`] for the size at which its power reaches
/// `target_beta`.
pub fn search_nstar<M: PowerModel>(
    model: &M,
    alpha: f64,
    target_beta: f64,
    seed: SeedSpec,
    config: &SearchConfig,
    start_hint: Option<usize>,
) -> Result<CredibilityEstimate> {
    config.validate()?;
    if !(target_beta > 0.0 && target_beta < 1.0) {
        return Err(Error::invalid("target power must lie in (0, 1)"));
    }
    let m_min = model.min_m();
    let cap = config.m_cap.unwrap_or_else(|| model.default_cap());
    if let Some(max) = model.max_m() {
        if cap > max {
            return Err(Error::invalid("m_cap exceeds the data size under subsampling"));
        }
    }
    if cap < m_min {
        return Err(Error::invalid(alloc::format!(
            "m_cap {cap} is below the smallest usable size {m_min}"
        )));
    }
    let coarse = config.replicates_coarse;
    let fine = config.replicates_fine;
    let mut s = Search {
        model,
        seed,
        target: target_beta,
        points: BTreeMap::new(),
        evaluations: 0,
    };

    // Phase 1: bracket.
    let start = start_hint.unwrap_or(config.start_m).clamp(m_min, cap);
    let (mut lo, mut hi);
    if s.eval(start, coarse)?.beta_hat >= target_beta {
        hi = start;
        loop {
            let m = (hi / 2).max(m_min);
            if m == hi {
                return Err(s.budget_error(alloc::format!(
                    "power already reaches {target_beta} at the smallest usable size {m_min}"
                )));
            }
            if s.eval(m, coarse)?.beta_hat < target_beta {
                lo = m;
                break;
            }
            hi = m;
        }
    } else {
        lo = start;
        loop {
            if lo == cap {
                return Ok(infinite(&s, alpha, target_beta, cap));
            }
            let m = lo.saturating_mul(2).min(cap);
            if s.eval(m, coarse)?.beta_hat >= target_beta {
                hi = m;
                break;
            }
            lo = m;
        }
    }

    // Phase 2: coarse grid, equally spaced in √m.
    if hi - lo > 1 {
        let (a, b) = (sqrt(lo as f64), sqrt(hi as f64));
        let k = config.coarse_points;
        for i in 1..=k {
            let x = a + (b - a) * i as f64 / (k + 1) as f64;
            let m = round(x * x) as usize;
            if m > lo && m < hi {
                s.eval(m, coarse)?;
            }
        }
        // Tighten to the adjacent coarse pair around the target.
        let inside: Vec<PowerPoint> = s.points.range(lo..=hi).map(|(_, p)| *p).collect();
        if let Some(w) = inside
            .windows(2)
            .find(|w| w[0].beta_hat < target_beta && target_beta <= w[1].beta_hat)
        {
            lo = w[0].m;
            hi = w[1].m;
        }
    }

    // Phase 3 and 4: interpolate, refine.
    let widen = |m: usize| (m / 2).max(m_min);
    let mut candidate = s
        .interpolate(widen(lo), (hi * 2).min(cap), 1)
        .unwrap_or_else(|| s.secant(lo, hi));
    for _ in 0..config.max_refinements {
        let c = (round(candidate) as usize).clamp(m_min, cap);
        let width = (floor(0.05 * c as f64) as usize).max(2);
        let c_lo = c.saturating_sub(width / 2).max(m_min);
        let c_hi = (c_lo + width).min(cap);
        let at_c = s.eval(c, fine)?;
        s.eval(c_lo, fine)?;
        s.eval(c_hi, fine)?;

        let (ci_lo, ci_hi) = at_c.interval95();
        let covered = ci_lo <= target_beta && target_beta <= ci_hi;
        if let Some((b_lo, b_hi)) = s.fine_bracket(fine, c) {
            let allowed = (floor(0.05 * c as f64) as usize).max(2);
            if covered && b_hi - b_lo <= allowed {
                let root = s
                    .interpolate(b_lo, b_hi, fine)
                    .or_else(|| s.interpolate(widen(b_lo), (b_hi * 2).min(cap), fine))
                    .unwrap_or_else(|| s.secant(b_lo, b_hi));
                let n_star = (round(root) as usize).clamp(b_lo, b_hi);
                return Ok(finite(&s, alpha, target_beta, cap, n_star, (b_lo, b_hi)));
            }
        }
        // Refit on the fine points near the candidate.
        let window = (c / 4).max(4 * width);
        candidate = s
            .interpolate(c.saturating_sub(window).max(m_min), (c + window).min(cap), fine)
            .or_else(|| s.interpolate(widen(lo), (hi * 2).min(cap), 1))
            .unwrap_or(c as f64);
        if round(candidate) as usize == c {
            // Nudge off a fixed point toward whichever side lacks a bracket.
            let step = ceil(0.5 * width as f64);
            candidate = if at_c.beta_hat < target_beta {
                c as f64 + step
            } else {
                c as f64 - step
            };
        }
    }
    Err(s.budget_error(alloc::format!(
        "no fine bracket of width <= 5% around the target after {} refinements",
        config.max_refinements
    )))
}

fn base_estimate<M: PowerModel>(s: &Search<'_, M>, alpha: f64, target: f64, cap: usize) -> CredibilityEstimate {
    CredibilityEstimate {
        n_star: NStar::Infinite,
        sqrt_n_star: None,
        bracket: None,
        target_beta: target,
        alpha,
        mode: s.model.mode(),
        m_cap: cap,
        curve: s.curve(),
        evaluations: s.evaluations,
        data_size: s.model.data_size(),
        phi_inv: None,
        eiss_lower_bound: None,
        note: None,
    }
}

fn infinite<M: PowerModel>(s: &Search<'_, M>, alpha: f64, target: f64, cap: usize) -> CredibilityEstimate {
    let mut e = base_estimate(s, alpha, target, cap);
    e.note = Some(alloc::format!(
        "power stayed below {target} up to the search cap m = {cap}; the model is not distinguishable at this size"
    ));
    e
}

fn finite<M: PowerModel>(
    s: &Search<'_, M>,
    alpha: f64,
    target: f64,
    cap: usize,
    n_star: usize,
    bracket: (usize, usize),
) -> CredibilityEstimate {
    let mut e = base_estimate(s, alpha, target, cap);
    e.n_star = NStar::Finite(n_star);
    e.sqrt_n_star = Some(sqrt(n_star as f64));
    e.bracket = Some(bracket);
    if let Some(n) = e.data_size {
        let phi_inv = n as f64 / n_star as f64;
        e.phi_inv = Some(phi_inv);
        e.eiss_lower_bound = Some(phi_inv);
        if phi_inv <= LOW_RELIABILITY_PHI_INV {
            e.note = Some(alloc::format!(
                "low reliability: n / N* = {phi_inv:.2} <= {LOW_RELIABILITY_PHI_INV}"
            ));
        }
    }
    e
}

/// `N*` for a one- or two-sample test by resampling `data`.
pub fn find_nstar(
    data: &[f64],
    spec: &TestSpec,
    scheme: ResampleScheme,
    seed: SeedSpec,
    config: &SearchConfig,
    start_hint: Option<usize>,
) -> Result<CredibilityEstimate> {
    let model = SampleModel::new(SampleSource::Empirical { data, scheme }, *spec)?;
    search_nstar(&model, spec.alpha, 0.5, seed, config, start_hint)
}

/// `N*_β`: the size at which the power reaches `target_beta`.
pub fn nstar_beta(
    data: &[f64],
    spec: &TestSpec,
    scheme: ResampleScheme,
    seed: SeedSpec,
    config: &SearchConfig,
    target_beta: f64,
) -> Result<CredibilityEstimate> {
    let model = SampleModel::new(SampleSource::Empirical { data, scheme }, *spec)?;
    search_nstar(&model, spec.alpha, target_beta, seed, config, None)
}

/// `N*_β` when the truth is a named distribution sampled directly.
pub fn find_population_nstar(
    truth: DistributionFamily,
    spec: &TestSpec,
    target_beta: f64,
    seed: SeedSpec,
    config: &SearchConfig,
    start_hint: Option<usize>,
) -> Result<CredibilityEstimate> {
    let model = SampleModel::new(SampleSource::Population(truth), *spec)?;
    search_nstar(&model, spec.alpha, target_beta, seed, config, start_hint)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statdist::StreamRng;
    use libm::exp;
    use rand::Rng;

    /// Deterministic logistic-in-√m power curve with a known root.
    struct Synthetic {
        root: f64,
        slope: f64,
        cap: usize,
    }

    impl PowerModel for Synthetic {
        type Scratch = ();
        fn replicate(&self, m: usize, rng: &mut StreamRng, _: &mut ()) -> Result<bool> {
            let z = self.slope * (sqrt(m as f64) - sqrt(self.root));
            let p = 1.0 / (1.0 + exp(-z));
            Ok(rng.random::<f64>() < p)
        }
        fn min_m(&self) -> usize {
            4
        }
        fn max_m(&self) -> Option<usize> {
            None
        }
        fn default_cap(&self) -> usize {
            self.cap
        }
        fn data_size(&self) -> Option<usize> {
            Some(10_000)
        }
        fn mode(&self) -> SamplingMode {
            SamplingMode::Bootstrap
        }
    }

    #[test]
    fn recovers_a_known_root() {
        let model = Synthetic {
            root: 300.0,
            slope: 0.5,
            cap: 40_000,
        };
        let cfg = SearchConfig::default();
        let e = search_nstar(&model, 0.05, 0.5, SeedSpec::new(42, 0), &cfg, None).unwrap();
        let n = e.n_star.finite().unwrap();
        assert!((n as f64 - 300.0).abs() < 30.0, "{n}");
        let (lo, hi) = e.bracket.unwrap();
        assert!(lo <= n && n <= hi);
        assert!(e.curve.get(lo).unwrap().beta_hat < 0.5);
        assert!(e.curve.get(hi).unwrap().beta_hat >= 0.5);
        assert_eq!(e.sqrt_n_star, Some(sqrt(n as f64)));
        assert!((e.phi_inv.unwrap() - 10_000.0 / n as f64).abs() < 1e-12);
        assert!(e.curve.points.len() <= cfg.max_grid_points(40_000));
        assert!(e.evaluations <= cfg.replicates_fine * e.curve.points.len() as u64);
    }

    #[test]
    fn reports_infinite_when_cap_is_reached() {
        let model = Synthetic {
            root: 1e9,
            slope: 0.5,
            cap: 5000,
        };
        let e = search_nstar(&model, 0.05, 0.5, SeedSpec::new(1, 0), &SearchConfig::default(), None).unwrap();
        assert_eq!(e.n_star, NStar::Infinite);
        assert!(e.note.is_some());
        assert!(e.bracket.is_none());
    }

    #[test]
    fn hint_far_above_root_still_brackets() {
        let model = Synthetic {
            root: 50.0,
            slope: 0.8,
            cap: 100_000,
        };
        let e = search_nstar(&model, 0.05, 0.5, SeedSpec::new(3, 0), &SearchConfig::default(), Some(5000)).unwrap();
        let n = e.n_star.finite().unwrap();
        assert!((n as f64 - 50.0).abs() < 8.0, "{n}");
    }

    #[test]
    fn reliability_flags() {
        let r = reliability_for(592, 32).unwrap();
        assert!((r.phi_inv - 18.5).abs() < 1e-12);
        assert!(!r.low_reliability);
        let r = reliability_for(25_263, 425).unwrap();
        assert!((r.phi_inv - 59.442_352_941_176_47).abs() < 1e-9);
        let r = reliability_for(300, 300).unwrap();
        assert_eq!(r.phi_inv, 1.0);
        assert!(r.low_reliability);
    }

    #[test]
    fn config_validation() {
        let c = SearchConfig {
            replicates_fine: 10,
            ..SearchConfig::default()
        };
        assert!(c.validate().is_err());
        let c = SearchConfig {
            replicates_coarse: 0,
            ..SearchConfig::default()
        };
        assert!(c.validate().is_err());
    }
}
