//! Distributions of the leading base-b digits and of the leading
//! continued-fraction coefficients of a positive random variable X.
//!
//! Every model here depends on X only through the fractional part
//! {log_b X}; see [`fracpart::FracLogDistribution`].

pub mod contfrac;
pub mod empirical;
pub mod error;
pub mod fracpart;
pub mod significand;
pub mod special_math;

pub use error::{Error, Result};
