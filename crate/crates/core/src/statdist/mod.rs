//! Special functions, distribution families, samplers, and the seeded stream
//! contract shared by every other module.

use alloc::vec::Vec;
use core::ops::Deref;

mod family;
mod overlap;
mod rng;
pub mod special;

pub use family::DistributionFamily;
pub use overlap::overlap_pmf;
pub use rng::{SeedSpec, StreamRng};

/// An ordered multiset of univariate observations.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(transparent))]
pub struct Sample(Vec<f64>);

impl Sample {
    pub fn new(values: Vec<f64>) -> Self {
        Sample(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn mean(&self) -> f64 {
        mean(&self.0)
    }
}

impl From<Vec<f64>> for Sample {
    fn from(values: Vec<f64>) -> Self {
        Sample(values)
    }
}

impl Deref for Sample {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl FromIterator<f64> for Sample {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        Sample(iter.into_iter().collect())
    }
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sum of squared deviations from the mean (two-pass).
pub(crate) fn sum_sq_dev(xs: &[f64], mean: f64) -> f64 {
    xs.iter().map(|x| (x - mean) * (x - mean)).sum()
}

/// Sorts in place with a total order; NaNs sort last.
pub(crate) fn sort_f64(xs: &mut [f64]) {
    xs.sort_unstable_by(f64::total_cmp);
}
