//! Model credibility indices.
//!
//! The credibility index `N*` of a model is the sample size at which a chosen
//! size-α goodness-of-fit test rejects the model half of the time when the
//! data come from the true mechanism. A correct model has `N* = ∞`; a false
//! but useful model has a large finite index.
//!
//! This crate estimates `N*` (and the generalized `N*_β`) from power curves
//! built by subsampling or bootstrapping, provides the closed-form multinomial
//! approximations, and carries the U-statistic machinery used to judge how
//! reliable a subsampling estimate is (sampling fraction, EISS).
//!
//! The crate is `no_std` with `alloc`. The default `std` feature turns on
//! rayon-parallel replicate loops; results are identical with or without it
//! because every replicate draws from its own counter-addressed stream.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_debug_implementations)]
// `!(x > 0.0)` is used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod categorical;
pub mod credindex;
pub mod eisslab;
mod error;
pub mod goftests;
pub mod resample;
pub mod statdist;

pub use error::{Error, ErrorKind, Result};
pub use statdist::{DistributionFamily, Sample, SeedSpec};
