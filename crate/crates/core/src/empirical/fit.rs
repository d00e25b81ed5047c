use serde::Serialize;

use super::Dataset;
use crate::error::{Error, Result};
use crate::fracpart::ParetoParams;

/// Maximum-likelihood Pareto fit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub s_hat: f64,
    pub x_m_hat: f64,
    pub rho_hat: f64,
    pub p: usize,
    pub base: u32,
}

impl FitResult {
    pub fn params(&self) -> ParetoParams {
        ParetoParams::from_xmin(self.s_hat, self.x_m_hat, self.base)
            .expect("fitted parameters are valid")
    }
}

/// x̂_m = min x_i and ŝ = 1 / mean(ln(x_i / x̂_m)).
pub fn fit_pareto(ds: &Dataset, base: u32) -> Result<FitResult> {
    let v = ds.values();
    if v.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "a Pareto fit needs at least 2 values, got {}",
            v.len()
        )));
    }
    let x_m = v.iter().copied().fold(f64::INFINITY, f64::min);
    let ln_min = x_m.ln();
    let total: f64 = v.iter().map(|x| x.ln() - ln_min).sum();
    if !(total > 0.0) {
        return Err(Error::DegenerateSample(v.len()));
    }
    let s_hat = v.len() as f64 / total;
    let rho_hat = ParetoParams::from_xmin(s_hat, x_m, base)?.rho();
    Ok(FitResult {
        s_hat,
        x_m_hat: x_m,
        rho_hat,
        p: v.len(),
        base,
    })
}
