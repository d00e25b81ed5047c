//! Seeded samplers.
//!
//! Draws come from ChaCha8 seeded with `seed`. The output is cut into chunks
//! of 2^16 values and chunk c uses stream c of that generator, so chunks can
//! be filled in parallel and the result does not depend on the number of
//! worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::Dataset;
use crate::error::Result;
use crate::fracpart::{check_base, ParetoParams};

pub const CHUNK: usize = 1 << 16;

/// Fills `n` values with `f(u)`, u ~ U[0, 1).
pub fn sample_uniform_map(n: usize, seed: u64, f: impl Fn(f64) -> f64 + Sync) -> Vec<f64> {
    let mut out = vec![0.0; n];
    out.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        for x in chunk.iter_mut() {
            *x = f(rng.random::<f64>());
        }
    });
    out
}

/// X = b^U, U ~ U[0, 1), so that {log_b X} is uniform.
pub fn sample_benford(n: usize, base: u32, seed: u64) -> Result<Dataset> {
    check_base(base)?;
    let b = base as f64;
    let values = sample_uniform_map(n, seed, |u| b.powf(u));
    Ok(Dataset::from_values(format!("benford(b={base}, seed={seed})"), values))
}

/// X = x_m (1 − U)^{−1/s}.
pub fn sample_pareto(n: usize, p: &ParetoParams, seed: u64) -> Dataset {
    let (x_m, inv_s) = (p.x_m(), 1.0 / p.s());
    let values = sample_uniform_map(n, seed, |u| x_m * (1.0 - u).powf(-inv_s));
    Dataset::from_values(format!("pareto(s={}, x_m={x_m}, seed={seed})", p.s()), values)
}
