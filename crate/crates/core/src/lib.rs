//! Exact distribution calculations for frequency vectors under
//! per-coordinate interval constraints.
//!
//! Two families are covered. For the multiple hypergeometric distribution
//! (sampling without replacement from categories of fixed sizes),
//! rectangular event probabilities are computed both by direct summation
//! and through a convolution of truncated binomial coefficient rows, and
//! `ordering` verifies how those probabilities move with the sample size.
//! For the multinomial distribution, `multinomial` computes conditional
//! moments given a rectangular event and the variance reduction such
//! conditioning buys. All arithmetic is exact.

pub mod convolution;
pub mod error;
pub mod hypergeom;
pub mod multinomial;
pub mod numeric;
pub mod ordering;
pub mod simplex;
pub(crate) mod sweep;

pub use error::{Error, Result};
pub use numeric::Rational;
