use alloc::vec::Vec;

use libm::{exp, log, sqrt};
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, Open01, StandardNormal};

use super::special::{
    chi_square_cdf_sf, chi_square_quantile, invert_cdf, noncentral_chi_square_cdf_sf, normal_cdf,
    normal_quantile, normal_sf,
};
use super::{Sample, SeedSpec};
use crate::{Error, Result};

/// The distribution families the library needs: the normal model, the
/// logistic truth, and the chi-square laws behind critical values and local
/// power.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "family", rename_all = "snake_case")
)]
pub enum DistributionFamily {
    Normal { location: f64, scale: f64 },
    /// CDF `1 / (1 + exp(-(x - location) / scale))`, variance `scale² π² / 3`.
    Logistic { location: f64, scale: f64 },
    ChiSquare { df: u32 },
    NoncentralChiSquare { df: u32, noncentrality: f64 },
}

impl DistributionFamily {
    pub const STANDARD_NORMAL: Self = DistributionFamily::Normal {
        location: 0.0,
        scale: 1.0,
    };

    pub fn normal(location: f64, scale: f64) -> Result<Self> {
        let f = DistributionFamily::Normal { location, scale };
        f.validate()?;
        Ok(f)
    }

    pub fn logistic(location: f64, scale: f64) -> Result<Self> {
        let f = DistributionFamily::Logistic { location, scale };
        f.validate()?;
        Ok(f)
    }

    pub fn chi_square(df: u32) -> Result<Self> {
        let f = DistributionFamily::ChiSquare { df };
        f.validate()?;
        Ok(f)
    }

    pub fn noncentral_chi_square(df: u32, noncentrality: f64) -> Result<Self> {
        let f = DistributionFamily::NoncentralChiSquare { df, noncentrality };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DistributionFamily::Normal { location, scale }
            | DistributionFamily::Logistic { location, scale } => {
                if !location.is_finite() {
                    return Err(Error::invalid("location must be finite"));
                }
                if !(scale > 0.0 && scale.is_finite()) {
                    return Err(Error::invalid("scale must be finite and > 0"));
                }
            }
            DistributionFamily::ChiSquare { df } => {
                if df == 0 {
                    return Err(Error::invalid("chi-square df must be >= 1"));
                }
            }
            DistributionFamily::NoncentralChiSquare { df, noncentrality } => {
                if df == 0 {
                    return Err(Error::invalid("chi-square df must be >= 1"));
                }
                if !(noncentrality >= 0.0 && noncentrality.is_finite()) {
                    return Err(Error::invalid("noncentrality must be finite and >= 0"));
                }
            }
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        match *self {
            DistributionFamily::Normal { location, .. }
            | DistributionFamily::Logistic { location, .. } => location,
            DistributionFamily::ChiSquare { df } => df as f64,
            DistributionFamily::NoncentralChiSquare { df, noncentrality } => df as f64 + noncentrality,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            DistributionFamily::Normal { scale, .. } => scale * scale,
            DistributionFamily::Logistic { scale, .. } => {
                scale * scale * core::f64::consts::PI * core::f64::consts::PI / 3.0
            }
            DistributionFamily::ChiSquare { df } => 2.0 * df as f64,
            DistributionFamily::NoncentralChiSquare { df, noncentrality } => {
                2.0 * (df as f64 + 2.0 * noncentrality)
            }
        }
    }

    /// The normal distribution with this family's mean and variance.
    pub fn moment_matched_normal(&self) -> Self {
        DistributionFamily::Normal {
            location: self.mean(),
            scale: sqrt(self.variance()),
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(self.cdf_sf(x)?.0)
    }

    /// Upper tail `P(X > x)`, computed directly rather than as `1 - cdf`.
    pub fn sf(&self, x: f64) -> Result<f64> {
        Ok(self.cdf_sf(x)?.1)
    }

    fn cdf_sf(&self, x: f64) -> Result<(f64, f64)> {
        if x.is_nan() {
            return Err(Error::invalid("cdf argument is NaN"));
        }
        self.validate()?;
        Ok(match *self {
            DistributionFamily::Normal { location, scale } => {
                let z = (x - location) / scale;
                (normal_cdf(z), normal_sf(z))
            }
            DistributionFamily::Logistic { location, scale } => {
                let z = (x - location) / scale;
                (logistic_cdf(z), logistic_cdf(-z))
            }
            DistributionFamily::ChiSquare { df } => chi_square_cdf_sf(df as f64, x)?,
            DistributionFamily::NoncentralChiSquare { df, noncentrality } => {
                noncentral_chi_square_cdf_sf(df as f64, noncentrality, x)?
            }
        })
    }

    /// Inverse CDF. `p = 0` is accepted for the chi-square families (giving
    /// 0); otherwise `p` must lie in `(0, 1)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        self.validate()?;
        if !(0.0..1.0).contains(&p) {
            return Err(Error::invalid("quantile probability must lie in [0, 1)"));
        }
        match *self {
            DistributionFamily::Normal { location, scale } => {
                if p == 0.0 {
                    return Err(Error::invalid("normal quantile needs p > 0"));
                }
                Ok(location + scale * normal_quantile(p))
            }
            DistributionFamily::Logistic { location, scale } => {
                if p == 0.0 {
                    return Err(Error::invalid("logistic quantile needs p > 0"));
                }
                Ok(location + scale * log(p / (1.0 - p)))
            }
            DistributionFamily::ChiSquare { df } => chi_square_quantile(df as f64, p),
            DistributionFamily::NoncentralChiSquare { df, noncentrality } => {
                if p == 0.0 {
                    return Ok(0.0);
                }
                let guess = df as f64 + noncentrality;
                invert_cdf(p, 0.0, guess, |x| {
                    Ok(noncentral_chi_square_cdf_sf(df as f64, noncentrality, x)?.0)
                })
            }
        }
    }

    /// `count` independent draws on the stream named by `seed`.
    pub fn sample(&self, count: usize, seed: SeedSpec) -> Result<Sample> {
        self.validate()?;
        if count == 0 {
            return Err(Error::invalid("sample count must be >= 1"));
        }
        let mut rng = seed.rng();
        let mut out = Vec::with_capacity(count);
        out.resize(count, 0.0);
        self.fill(&mut rng, &mut out);
        Ok(Sample::from(out))
    }

    /// Hot-path sampler. The family must already be valid.
    pub fn fill<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        match *self {
            DistributionFamily::Normal { location, scale } => {
                for v in out.iter_mut() {
                    let z: f64 = StandardNormal.sample(rng);
                    *v = location + scale * z;
                }
            }
            DistributionFamily::Logistic { location, scale } => {
                for v in out.iter_mut() {
                    let u: f64 = Open01.sample(rng);
                    *v = location + scale * log(u / (1.0 - u));
                }
            }
            DistributionFamily::ChiSquare { df } => {
                let dist = ChiSquared::new(df as f64).expect("validated df");
                for v in out.iter_mut() {
                    *v = dist.sample(rng);
                }
            }
            DistributionFamily::NoncentralChiSquare { df, noncentrality } => {
                let shift = sqrt(noncentrality);
                let rest = (df > 1).then(|| ChiSquared::new((df - 1) as f64).expect("validated df"));
                for v in out.iter_mut() {
                    let z: f64 = StandardNormal.sample(rng);
                    let head = (z + shift) * (z + shift);
                    *v = head + rest.as_ref().map_or(0.0, |d| d.sample(rng));
                }
            }
        }
    }
}

fn logistic_cdf(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + exp(-z))
    } else {
        let e = exp(z);
        e / (1.0 + e)
    }
}
