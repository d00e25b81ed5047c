use super::{asymptotic_joint_approx, cf_endpoints, joint_pmf_general, CfVector};
use crate::error::{Error, Result};
use crate::fracpart::FracLogDistribution;
use crate::special_math::digamma;

pub const DEFAULT_A_MAX: u64 = 50;

/// Coefficients beyond this many terms are summed through a Benford-shaped
/// remainder instead of term by term.
const TAIL_TERMS: u64 = 20_000;

/// One axis position of a tabulated coefficient: a value up to A_max, or the
/// bucket of everything above it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CfBin {
    Value(u64),
    Tail,
}

impl CfBin {
    pub fn of(a: u64, a_max: u64) -> Self {
        if a > a_max {
            CfBin::Tail
        } else {
            CfBin::Value(a)
        }
    }

    fn index(self, a_max: u64) -> usize {
        match self {
            CfBin::Value(a) => (a - 1) as usize,
            CfBin::Tail => a_max as usize,
        }
    }

    fn from_index(i: usize, a_max: u64) -> Self {
        if i as u64 == a_max {
            CfBin::Tail
        } else {
            CfBin::Value(i as u64 + 1)
        }
    }
}

/// A pmf over the first k coefficients with per-axis tail buckets, stored
/// row-major with A_max + 1 bins per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct CfTable {
    k: u32,
    a_max: u64,
    probs: Vec<f64>,
}

impl CfTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn a_max(&self) -> u64 {
        self.a_max
    }

    pub fn width(&self) -> usize {
        self.a_max as usize + 1
    }

    /// Flat index of a bin vector.
    pub fn index(&self, bins: &[CfBin]) -> usize {
        bins.iter().fold(0, |acc, b| acc * self.width() + b.index(self.a_max))
    }

    pub fn bins_of(&self, index: usize) -> Vec<CfBin> {
        let w = self.width();
        let mut out = vec![CfBin::Tail; self.k as usize];
        let mut rest = index;
        for slot in out.iter_mut().rev() {
            *slot = CfBin::from_index(rest % w, self.a_max);
            rest /= w;
        }
        out
    }

    pub fn get(&self, bins: &[CfBin]) -> f64 {
        self.probs[self.index(bins)]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<CfBin>, f64)> + '_ {
        self.probs.iter().enumerate().map(|(i, &p)| (self.bins_of(i), p))
    }

    pub fn sum(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// A distribution of {Y} together with the tabulation bound A_max.
pub struct CfModel<'a> {
    d: &'a dyn FracLogDistribution,
    a_max: u64,
}

impl<'a> CfModel<'a> {
    pub fn new(d: &'a dyn FracLogDistribution, a_max: u64) -> Result<Self> {
        check_a_max(a_max)?;
        Ok(CfModel { d, a_max })
    }

    pub fn distribution(&self) -> &dyn FracLogDistribution {
        self.d
    }

    pub fn a_max(&self) -> u64 {
        self.a_max
    }

    pub fn joint_pmf(&self, v: &CfVector) -> f64 {
        joint_pmf_general(self.d, v)
    }

    /// The exact table for k ∈ {1, 2}.
    pub fn table(&self, k: u32) -> Result<CfTable> {
        let d = self.d;
        tabulate_from_cdf(&|y| d.cdf(y), k, self.a_max)
    }

    /// The table of the pdf-based approximation. Values are not renormalized.
    pub fn asymptotic_table(&self, k: u32) -> Result<CfTable> {
        // Fails early when there is no density.
        asymptotic_joint_approx(self.d, &CfVector::ones(1)?)?;
        let d = self.d;
        tabulate_from_cells(
            &|c: &[u64]| asymptotic_joint_approx(d, &CfVector(c.to_vec())).unwrap_or(f64::NAN),
            k,
            self.a_max,
        )
    }
}

fn check_a_max(a_max: u64) -> Result<()> {
    if a_max == 0 || a_max > 100_000 {
        return Err(Error::invalid(format!("A_max must be in 1..=100000, got {a_max}")));
    }
    Ok(())
}

fn check_k(k: u32) -> Result<()> {
    match k {
        1 | 2 => Ok(()),
        _ => Err(Error::Unsupported("coefficient tables are available for k = 1 and k = 2")),
    }
}

/// Blachman's approximation tabulated. It is the k-coefficient law of the
/// Gauss measure log_2(1 + y), so tails telescope exactly.
pub fn blachman_table(k: u32, a_max: u64) -> Result<CfTable> {
    tabulate_from_cdf(&|y: f64| y.clamp(0.0, 1.0).ln_1p() / std::f64::consts::LN_2, k, a_max)
}

/// The Gauss–Kuz'min law for a single coefficient, with the tail
/// log_2((A_max + 2)/(A_max + 1)).
pub fn gauss_kuzmin_table(a_max: u64) -> Result<CfTable> {
    blachman_table(1, a_max)
}

fn cell(f: &dyn Fn(f64) -> f64, c: &[u64]) -> f64 {
    let (x, xb) = cf_endpoints(&CfVector(c.to_vec()));
    let (x, xb) = (x.to_f64(), xb.to_f64());
    (f(x) - f(xb)).abs()
}

/// Σ_{a > n} of the Benford law of (a, a2) for fixed a2:
/// ψ(n+1+1/a2) − ψ(n+1+1/(a2+1)).
fn benford_column_remainder(n: u64, a2: u64) -> f64 {
    let base = (n + 1) as f64;
    digamma(base + 1.0 / a2 as f64).unwrap() - digamma(base + 1.0 / (a2 + 1) as f64).unwrap()
}

fn benford_cell(c: &[u64]) -> f64 {
    super::benford_joint_pmf(&CfVector(c.to_vec()))
}

/// Σ_{a1 > A} p(a1, a2): direct sum up to TAIL_TERMS past A, then the Benford
/// remainder scaled by the ratio of the last direct term to its Benford
/// counterpart.
fn column_tail(p: &dyn Fn(&[u64]) -> f64, a_max: u64, a2: u64) -> f64 {
    let end = a_max + TAIL_TERMS;
    let mut sum = 0.0;
    for a1 in (a_max + 1..=end).rev() {
        sum += p(&[a1, a2]);
    }
    let ratio = p(&[end, a2]) / benford_cell(&[end, a2]);
    sum + ratio * benford_column_remainder(end, a2)
}

fn tabulate_from_cdf(f: &dyn Fn(f64) -> f64, k: u32, a_max: u64) -> Result<CfTable> {
    check_k(k)?;
    check_a_max(a_max)?;
    let w = a_max as usize + 1;
    let tail_mass = f(1.0 / (a_max + 1) as f64);
    if k == 1 {
        let mut probs: Vec<f64> = (1..=a_max).map(|a| cell(f, &[a])).collect();
        probs.push(tail_mass);
        return Ok(CfTable { k, a_max, probs });
    }
    let mut probs = vec![0.0; w * w];
    for a1 in 1..=a_max {
        let row = (a1 - 1) as usize * w;
        for a2 in 1..=a_max {
            probs[row + (a2 - 1) as usize] = cell(f, &[a1, a2]);
        }
        // A_1 = a1 and A_2 > A_max: {Y} between [0; a1, A_max+1] and 1/a1.
        let (edge, _) = cf_endpoints(&CfVector(vec![a1, a_max + 1]));
        probs[row + a_max as usize] = f(1.0 / a1 as f64) - f(edge.to_f64());
    }
    let tail_row = a_max as usize * w;
    let mut column_tails = 0.0;
    for a2 in 1..=a_max {
        let t = column_tail(&|c: &[u64]| cell(f, c), a_max, a2);
        probs[tail_row + (a2 - 1) as usize] = t;
        column_tails += t;
    }
    probs[tail_row + a_max as usize] = (tail_mass - column_tails).max(0.0);
    Ok(CfTable { k, a_max, probs })
}

fn tabulate_from_cells(p: &dyn Fn(&[u64]) -> f64, k: u32, a_max: u64) -> Result<CfTable> {
    check_k(k)?;
    check_a_max(a_max)?;
    let w = a_max as usize + 1;
    let end = a_max + TAIL_TERMS;
    if k == 1 {
        let mut probs: Vec<f64> = (1..=a_max).map(|a| p(&[a])).collect();
        let mut tail: f64 = (a_max + 1..=end).rev().map(|a| p(&[a])).sum();
        tail += p(&[end]) / benford_cell(&[end]) / (end + 1) as f64;
        probs.push(tail);
        return Ok(CfTable { k, a_max, probs });
    }
    // Σ_{a2 > A} p(a1, a2), with the Benford remainder 1/(a1 (a1 (n+1) + 1)).
    let row_tail = |a1: u64, terms: u64| {
        let n = a_max + terms;
        let direct: f64 = (a_max + 1..=n).rev().map(|a2| p(&[a1, a2])).sum();
        let a1f = a1 as f64;
        let remainder = 1.0 / (a1f * (a1f * (n + 1) as f64 + 1.0));
        direct + p(&[a1, n]) / benford_cell(&[a1, n]) * remainder
    };
    let mut probs = vec![0.0; w * w];
    for a1 in 1..=a_max {
        let row = (a1 - 1) as usize * w;
        for a2 in 1..=a_max {
            probs[row + (a2 - 1) as usize] = p(&[a1, a2]);
        }
        probs[row + a_max as usize] = row_tail(a1, TAIL_TERMS);
    }
    let tail_row = a_max as usize * w;
    for a2 in 1..=a_max {
        probs[tail_row + (a2 - 1) as usize] = column_tail(p, a_max, a2);
    }
    // Both coefficients beyond A_max: rows summed directly for a while, then
    // the Benford remainder Σ_{a1 > n} 1/(a1 (a1 (A+1) + 1)) = ψ(n+1+c) − ψ(n+1),
    // c = 1/(A+1).
    let rows = 2_000;
    let inner = 4 * a_max.max(50);
    let n = a_max + rows;
    let mut both: f64 = (a_max + 1..=n).rev().map(|a1| row_tail(a1, inner)).sum();
    let c = 1.0 / (a_max + 1) as f64;
    let ratio = row_tail(n, inner) / (1.0 / (n as f64 * (n as f64 * (a_max + 1) as f64 + 1.0)));
    both += ratio * (digamma((n + 1) as f64 + c)? - digamma((n + 1) as f64)?);
    probs[tail_row + a_max as usize] = both;
    Ok(CfTable { k, a_max, probs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contfrac::{benford_a1_pmf, benford_a2_pmf, gauss_kuzmin_pmf, pareto_joint_pmf};
    use crate::fracpart::{Benford, ParetoParams};

    #[test]
    fn benford_tables() {
        let d = Benford::new(10).unwrap();
        let m = CfModel::new(&d, DEFAULT_A_MAX).unwrap();
        let t1 = m.table(1).unwrap();
        assert_eq!(t1.probabilities().len(), 51);
        assert!((t1.get(&[CfBin::Value(1)]) - 0.5).abs() < 1e-15);
        assert!((t1.get(&[CfBin::Tail]) - 1.0 / 51.0).abs() < 1e-15);
        assert!((t1.sum() - 1.0).abs() < 1e-12);

        let t2 = m.table(2).unwrap();
        assert!((t2.get(&[CfBin::Value(1), CfBin::Value(1)]) - 1.0 / 6.0).abs() < 1e-15);
        assert!((t2.sum() - 1.0).abs() < 1e-9);
        // The tail row of column a2 is Σ_{a1 > A} of the exact law.
        for a2 in [1, 7, 50] {
            let exact = benford_column_remainder(50, a2);
            assert!((t2.get(&[CfBin::Tail, CfBin::Value(a2)]) - exact).abs() < 1e-12);
        }
        // Column sums reproduce the A_2 marginal.
        for a2 in 1..=50 {
            let col: f64 = (1..=50)
                .map(|a1| t2.get(&[CfBin::Value(a1), CfBin::Value(a2)]))
                .sum::<f64>()
                + t2.get(&[CfBin::Tail, CfBin::Value(a2)]);
            assert!((col - benford_a2_pmf(a2).unwrap()).abs() < 1e-12, "a2 = {a2}");
        }
        for a1 in 1..=50 {
            let row: f64 = (0..51).map(|i| t2.probabilities()[(a1 - 1) * 51 + i]).sum();
            assert!((row - benford_a1_pmf(a1 as u64).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn pareto_table_normalizes() {
        let p = ParetoParams::from_rho(1.5, 0.48, 10).unwrap();
        let m = CfModel::new(&p, 20).unwrap();
        let t = m.table(2).unwrap();
        assert!((t.sum() - 1.0).abs() < 1e-9);
        assert!(t.probabilities().iter().all(|&x| x >= 0.0));
        let v = CfVector::new(vec![3, 4]).unwrap();
        assert!((t.get(&[CfBin::Value(3), CfBin::Value(4)]) - pareto_joint_pmf(&p, &v)).abs() < 1e-15);
    }

    #[test]
    fn gauss_kuzmin_and_blachman() {
        let t = gauss_kuzmin_table(50).unwrap();
        assert!((t.get(&[CfBin::Value(1)]) - gauss_kuzmin_pmf(1).unwrap()).abs() < 1e-15);
        assert!((t.get(&[CfBin::Tail]) - (52.0f64 / 51.0).log2()).abs() < 1e-15);
        assert!((t.sum() - 1.0).abs() < 1e-12);
        let b = blachman_table(2, 30).unwrap();
        assert!((b.sum() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn asymptotic_tables() {
        let d = Benford::new(10).unwrap();
        let m = CfModel::new(&d, 20).unwrap();
        let exact = m.table(2).unwrap();
        let approx = m.asymptotic_table(2).unwrap();
        for (x, y) in exact.probabilities().iter().zip(approx.probabilities()) {
            assert!((x - y).abs() < 1e-9);
        }
        let approx1 = m.asymptotic_table(1).unwrap();
        assert!((approx1.sum() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bins_round_trip() {
        let d = Benford::new(10).unwrap();
        let t = CfModel::new(&d, 5).unwrap().table(2).unwrap();
        for i in 0..36 {
            assert_eq!(t.index(&t.bins_of(i)), i);
        }
        assert_eq!(t.bins_of(35), vec![CfBin::Tail, CfBin::Tail]);
        assert!(CfModel::new(&d, 0).is_err());
        assert!(CfModel::new(&d, 5).unwrap().table(3).is_err());
    }
}
