use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

pub const DEFAULT_MIN_EXPECTED: f64 = 5.0;

/// Observed against expected frequencies after bin merging.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalReport {
    /// Observed count per merged bin.
    pub observed: Vec<u64>,
    /// Expected probability per merged bin.
    pub expected: Vec<f64>,
    /// Index of the first original bin in each merged bin.
    pub group_start: Vec<usize>,
    pub sample_size: u64,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Number of original bins absorbed into a neighbour.
    pub bins_merged: usize,
}

/// Pearson chi-square test.
///
/// Bins are visited in the given order and accumulated until the group's
/// expected count reaches `min_expected`; a short final group is folded into
/// the one before it. Degrees of freedom are groups − 1 − `fitted`.
pub fn chi_square_test(observed: &[u64], expected: &[f64], min_expected: f64, fitted: usize) -> Result<EmpiricalReport> {
    if observed.len() != expected.len() {
        return Err(Error::invalid(format!(
            "{} observed bins but {} expected probabilities",
            observed.len(),
            expected.len()
        )));
    }
    if expected.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
        return Err(Error::invalid("expected probabilities must be finite and non-negative"));
    }
    let total_p: f64 = expected.iter().sum();
    if (total_p - 1.0).abs() > 1e-6 {
        return Err(Error::invalid(format!("expected probabilities sum to {total_p}, not 1")));
    }
    let n: u64 = observed.iter().sum();
    if n == 0 {
        return Err(Error::InsufficientData("no observations".into()));
    }
    let nf = n as f64;

    let mut groups: Vec<(usize, u64, f64)> = Vec::new();
    let mut open: Option<(usize, u64, f64)> = None;
    for (i, (&o, &p)) in observed.iter().zip(expected).enumerate() {
        let g = open.get_or_insert((i, 0, 0.0));
        g.1 += o;
        g.2 += p / total_p;
        if g.2 * nf >= min_expected {
            groups.push(open.take().unwrap());
        }
    }
    if let Some((start, o, p)) = open {
        match groups.last_mut() {
            Some(last) => {
                last.1 += o;
                last.2 += p;
            }
            None => groups.push((start, o, p)),
        }
    }
    let fitted_dof = groups.len().saturating_sub(1 + fitted);
    if groups.len() < 2 || fitted_dof == 0 {
        return Err(Error::InsufficientData(format!(
            "{} bins left after merging, too few for a test with {fitted} fitted parameters",
            groups.len()
        )));
    }
    let statistic: f64 = groups
        .iter()
        .map(|&(_, o, p)| {
            let e = p * nf;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let dist = ChiSquared::new(fitted_dof as f64).map_err(|e| Error::invalid(e.to_string()))?;
    Ok(EmpiricalReport {
        bins_merged: observed.len() - groups.len(),
        observed: groups.iter().map(|g| g.1).collect(),
        expected: groups.iter().map(|g| g.2).collect(),
        group_start: groups.iter().map(|g| g.0).collect(),
        sample_size: n,
        statistic,
        dof: fitted_dof,
        p_value: dist.sf(statistic),
    })
}
