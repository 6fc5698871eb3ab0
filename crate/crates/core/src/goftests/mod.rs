//! The goodness-of-fit test battery.
//!
//! Each test turns a sample (or two) into a statistic and a size-α decision.
//! These decisions are the kernel that every power estimate averages.

use alloc::vec::Vec;

use crate::statdist::DistributionFamily;
use crate::{Error, Result};

mod ks;
mod lilliefors;
#[rustfmt::skip]
mod lilliefors_table;
mod pearson;
mod shapiro;

pub use ks::{kolmogorov_critical_value, kolmogorov_sf, ks_distance_sorted, ks_one_sample, ks_two_sample};
pub use lilliefors::{estimated_normal_distance_sorted, lilliefors_critical_value, LILLIEFORS_ALPHA_RANGE};
pub use pearson::{default_cells, pearson_chisq_normal, pearson_statistic};
pub use shapiro::{shapiro_wilk, shapiro_wilk_w};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "kebab-case")
)]
pub enum TestKind {
    KsOneSample,
    KsTwoSample,
    ShapiroWilk,
    PearsonChiSquareNormal,
    /// Likelihood-ratio (deviance) test for contingency tables; applied by
    /// [`crate::categorical`], not to univariate samples.
    MultinomialLrt,
}

/// What the one-sample tests compare against.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum NullSpec {
    FullySpecified(DistributionFamily),
    /// Normal with mean and standard deviation estimated from the sample.
    EstimatedNormal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TestSpec {
    pub test: TestKind,
    /// Size of the test, in `(0, 0.5)`.
    pub alpha: f64,
    pub null: NullSpec,
    /// Pearson cell count; `None` picks [`default_cells`].
    pub cells: Option<usize>,
}

impl TestSpec {
    pub fn new(test: TestKind, alpha: f64, null: NullSpec) -> Result<Self> {
        let spec = TestSpec {
            test,
            alpha,
            null,
            cells: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_cells(mut self, cells: usize) -> Result<Self> {
        self.cells = Some(cells);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 0.5) {
            return Err(Error::invalid("alpha must lie in (0, 0.5)"));
        }
        if let Some(c) = self.cells {
            if c < 4 {
                return Err(Error::invalid("Pearson test needs at least 4 cells"));
            }
        }
        if let NullSpec::FullySpecified(f) = self.null {
            f.validate()?;
        }
        Ok(())
    }

    /// Smallest sample size the test accepts.
    pub fn min_sample_size(&self) -> usize {
        match self.test {
            TestKind::PearsonChiSquareNormal => 5 * self.cells.unwrap_or(4),
            _ => 4,
        }
    }

    /// Runs a one-sample test. The slice may be reordered.
    pub fn apply_in_place(&self, sample: &mut [f64]) -> Result<TestResult> {
        match self.test {
            TestKind::KsOneSample => ks::ks_one_sample_in_place(sample, self),
            TestKind::ShapiroWilk => shapiro::shapiro_wilk_in_place(sample, self.alpha),
            TestKind::PearsonChiSquareNormal => pearson::pearson_in_place(sample, self),
            TestKind::KsTwoSample => Err(Error::invalid("the two-sample KS test needs two samples")),
            TestKind::MultinomialLrt => Err(Error::invalid("the multinomial LRT applies to contingency tables")),
        }
    }

    pub fn apply(&self, sample: &[f64]) -> Result<TestResult> {
        let mut owned: Vec<f64> = sample.to_vec();
        self.apply_in_place(&mut owned)
    }

    /// Runs the two-sample KS test. Both slices may be reordered.
    pub fn apply_two_in_place(&self, a: &mut [f64], b: &mut [f64]) -> Result<TestResult> {
        match self.test {
            TestKind::KsTwoSample => ks::ks_two_sample_in_place(a, b, self.alpha),
            _ => Err(Error::invalid("only the KS test has a two-sample form")),
        }
    }

    pub fn is_two_sample(&self) -> bool {
        self.test == TestKind::KsTwoSample
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TestResult {
    pub statistic: f64,
    pub critical_value: f64,
    /// Always `statistic > critical_value`.
    pub reject: bool,
    pub df: Option<u32>,
    pub p_value: Option<f64>,
}

impl TestResult {
    pub(crate) fn decide(statistic: f64, critical_value: f64, df: Option<u32>) -> Self {
        TestResult {
            statistic,
            critical_value,
            reject: statistic > critical_value,
            df,
            p_value: None,
        }
    }
}
