use rayon::prelude::*;

use super::Dataset;
use crate::contfrac::{cf_expand, CfBin, CF_EPS};
use crate::error::{Error, Result};
use crate::fracpart::{check_base, log_base};
use crate::significand::{extract_significand, SignificandSpec};

const PAR_CHUNK: usize = 1 << 16;

/// Counts over A_(k), indexed from b^(k−1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignificandCounts {
    pub spec: SignificandSpec,
    pub counts: Vec<u64>,
}

impl SignificandCounts {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn get(&self, a: u64) -> Option<u64> {
        a.checked_sub(self.spec.lo())
            .and_then(|i| self.counts.get(i as usize).copied())
    }

    /// Counts of the last of the k digits (the leading digit when k = 1).
    pub fn digit_counts(&self) -> Vec<u64> {
        let b = self.spec.base() as usize;
        if self.spec.k() == 1 {
            return self.counts.clone();
        }
        let mut out = vec![0; b];
        for (i, &c) in self.counts.iter().enumerate() {
            out[i % b] += c;
        }
        out
    }
}

fn add_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

pub fn empirical_significand_freqs(ds: &Dataset, spec: SignificandSpec) -> Result<SignificandCounts> {
    let n = spec.support_len();
    if n > crate::significand::MAX_TABLE {
        return Err(Error::TooLarge(n, crate::significand::MAX_TABLE));
    }
    let lo = spec.lo();
    let counts = ds
        .values()
        .par_chunks(PAR_CHUNK)
        .map(|chunk| {
            let mut c = vec![0u64; n as usize];
            for &x in chunk {
                // Dataset values are positive and finite by construction.
                let a = extract_significand(x, spec).expect("valid dataset value");
                c[(a - lo) as usize] += 1;
            }
            c
        })
        .reduce(|| vec![0u64; n as usize], add_counts);
    Ok(SignificandCounts { spec, counts })
}

/// Counts of the first k coefficients of {log_b x}, laid out like
/// [`crate::contfrac::CfTable`]: A_max + 1 bins per axis, the last one
/// collecting everything above A_max.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfCounts {
    pub k: u32,
    pub a_max: u64,
    pub counts: Vec<u64>,
    /// Values whose floating-point expansion ended before k coefficients.
    pub dropped: u64,
}

impl CfCounts {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn get(&self, bins: &[CfBin]) -> u64 {
        let w = self.a_max as usize + 1;
        let i = bins.iter().fold(0, |acc, b| {
            acc * w
                + match b {
                    CfBin::Value(a) => (*a - 1) as usize,
                    CfBin::Tail => self.a_max as usize,
                }
        });
        self.counts[i]
    }
}

const MAX_CF_CELLS: u64 = 10_000_000;

pub fn empirical_cf_freqs(ds: &Dataset, base: u32, k: u32, a_max: u64) -> Result<CfCounts> {
    check_base(base)?;
    if k == 0 || a_max == 0 {
        return Err(Error::invalid("k and A_max must be >= 1"));
    }
    let w = a_max + 1;
    let cells = w
        .checked_pow(k)
        .filter(|&c| c <= MAX_CF_CELLS)
        .ok_or(Error::TooLarge(w.saturating_pow(k), MAX_CF_CELLS))?;
    let (counts, dropped) = ds
        .values()
        .par_chunks(PAR_CHUNK)
        .map(|chunk| {
            let mut c = vec![0u64; cells as usize];
            let mut dropped = 0u64;
            for &x in chunk {
                let y = log_base(x, base);
                let e = cf_expand(y, k as usize, CF_EPS).expect("finite logarithm");
                if e.coeffs.len() < k as usize {
                    dropped += 1;
                    continue;
                }
                let i = e
                    .coeffs
                    .iter()
                    .fold(0u64, |acc, &a| acc * w + a.min(w) - 1);
                c[i as usize] += 1;
            }
            (c, dropped)
        })
        .reduce(
            || (vec![0u64; cells as usize], 0),
            |(a, da), (b, db)| (add_counts(a, b), da + db),
        );
    Ok(CfCounts {
        k,
        a_max,
        counts,
        dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significand_counts() {
        let spec = SignificandSpec::new(10, 1).unwrap();
        let c = empirical_significand_freqs(&Dataset::from_values("t", [1.0]), spec).unwrap();
        assert_eq!(c.get(1), Some(1));
        assert_eq!(c.total(), 1);
        let spec2 = SignificandSpec::new(10, 2).unwrap();
        let c = empirical_significand_freqs(&Dataset::from_values("t", [0.00456678, 45.1, 1.0]), spec2).unwrap();
        assert_eq!(c.get(45), Some(2));
        assert_eq!(c.digit_counts()[5], 2);
        assert_eq!(c.digit_counts()[0], 1);
    }

    #[test]
    fn cf_counts() {
        let ds = Dataset::from_values("t", [10f64.powf(0.3), 10f64.powf(0.3) * 100.0, 10.0]);
        let c = empirical_cf_freqs(&ds, 10, 2, 5).unwrap();
        assert_eq!(c.get(&[CfBin::Value(3), CfBin::Value(3)]), 2);
        assert_eq!(c.dropped, 1);
        let e = empirical_cf_freqs(&Dataset::from_values("t", []), 10, 1, 5).unwrap();
        assert_eq!(e.total(), 0);
        let tail = Dataset::from_values("t", [10f64.powf(0.01)]);
        let c = empirical_cf_freqs(&tail, 10, 1, 5).unwrap();
        assert_eq!(c.get(&[CfBin::Tail]), 1);
    }
}
