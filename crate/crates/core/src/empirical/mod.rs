//! Datasets, seeded samplers, Pareto fitting, frequency extraction and
//! chi-square conformance tests.

mod chisq;
mod dataset;
mod fit;
mod freqs;
mod sampler;

pub use chisq::*;
pub use dataset::*;
pub use fit::*;
pub use freqs::*;
pub use sampler::*;
