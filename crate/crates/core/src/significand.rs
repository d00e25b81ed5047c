//! Integer significands A_(k) and single digits A_[j].

use crate::error::{Error, Result};
use crate::fracpart::{check_base, log_base, unit_step, FracLogDistribution, ParetoParams};
use crate::special_math::{log_gamma_ratio_offset, tau_diff_offset};

/// Largest support a table is materialized for.
pub const MAX_TABLE: u64 = 1_000_000;

/// Base b and number of leading digits k.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignificandSpec {
    base: u32,
    k: u32,
}

impl SignificandSpec {
    pub fn new(base: u32, k: u32) -> Result<Self> {
        check_base(base)?;
        if k == 0 {
            return Err(Error::invalid("k must be >= 1"));
        }
        // b^k must fit in u64.
        if (base as u64).checked_pow(k).is_none() {
            return Err(Error::invalid(format!("{base}^{k} does not fit in 64 bits")));
        }
        Ok(SignificandSpec { base, k })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Smallest member of the support, b^(k−1).
    pub fn lo(&self) -> u64 {
        (self.base as u64).pow(self.k - 1)
    }

    /// Largest member of the support, b^k − 1.
    pub fn hi(&self) -> u64 {
        (self.base as u64).pow(self.k) - 1
    }

    pub fn support_len(&self) -> u64 {
        self.hi() + 1 - self.lo()
    }

    pub fn contains(&self, a: u64) -> bool {
        (self.lo()..=self.hi()).contains(&a)
    }

    fn check_member(&self, a: u64) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "{a} is not a {}-digit base-{} significand",
                self.k, self.base
            )))
        }
    }

    fn check_tabulable(&self) -> Result<()> {
        let n = self.support_len();
        if n > MAX_TABLE {
            Err(Error::TooLarge(n, MAX_TABLE))
        } else {
            Ok(())
        }
    }
}

/// A pmf over A_(k), stored densely from b^(k−1) upward.
#[derive(Clone, Debug, PartialEq)]
pub struct SignificandPmf {
    spec: SignificandSpec,
    probs: Vec<f64>,
}

impl SignificandPmf {
    fn tabulate(spec: SignificandSpec, f: impl Fn(u64) -> Result<f64>) -> Result<Self> {
        spec.check_tabulable()?;
        let probs = (spec.lo()..=spec.hi()).map(f).collect::<Result<Vec<_>>>()?;
        Ok(SignificandPmf { spec, probs })
    }

    pub fn spec(&self) -> SignificandSpec {
        self.spec
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, a: u64) -> Option<f64> {
        a.checked_sub(self.spec.lo())
            .and_then(|i| self.probs.get(i as usize).copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        let lo = self.spec.lo();
        self.probs.iter().enumerate().map(move |(i, &p)| (lo + i as u64, p))
    }

    pub fn sum(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// A pmf over the digit in position j.
#[derive(Clone, Debug, PartialEq)]
pub struct DigitPmf {
    base: u32,
    j: u32,
    probs: Vec<f64>,
}

impl DigitPmf {
    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    /// The smallest digit: 1 for the leading digit, 0 otherwise.
    pub fn first_digit(&self) -> u32 {
        if self.j == 1 {
            1
        } else {
            0
        }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, a: u32) -> Option<f64> {
        a.checked_sub(self.first_digit())
            .and_then(|i| self.probs.get(i as usize).copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        let first = self.first_digit();
        self.probs.iter().enumerate().map(move |(i, &p)| (first + i as u32, p))
    }

    pub fn sum(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// max_a |Pr(A_[j] = a) − 1/b|.
    pub fn max_deviation_from_uniform(&self) -> f64 {
        let u = 1.0 / self.base as f64;
        self.probs.iter().map(|p| (p - u).abs()).fold(0.0, f64::max)
    }
}

/// Relative distance to a digit boundary below which x is placed on it.
const SNAP: f64 = 1e-12;

/// The k leading base-b digits of x as an integer in A_(k).
pub fn extract_significand(x: f64, spec: SignificandSpec) -> Result<u64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("significand argument", x));
    }
    let b = spec.base as f64;
    let n = log_base(x, spec.base).floor() as i32;
    let mut scaled = scale_by_power(x, b, spec.k as i32 - 1 - n);
    let (lo, hi) = (spec.lo() as f64, (spec.hi() + 1) as f64);
    // The floor of the logarithm can be off by one next to exact powers of b.
    if scaled >= hi {
        scaled /= b;
    } else if scaled < lo {
        scaled *= b;
    }
    // Values within rounding distance of a digit boundary are taken to lie on
    // it, so decimal inputs such as 0.3 or 1e23 keep their written digits.
    let near = scaled.round();
    let a = if (scaled - near).abs() <= SNAP * scaled {
        near
    } else {
        scaled.floor()
    };
    if a > spec.hi() as f64 {
        return Ok(spec.lo());
    }
    Ok((a as u64).clamp(spec.lo(), spec.hi()))
}

/// x · b^e, avoiding intermediate overflow and the rounding of b^e for e < 0.
fn scale_by_power(x: f64, b: f64, e: i32) -> f64 {
    let mut x = x;
    let mut e = e;
    while e != 0 {
        let step = e.clamp(-200, 200);
        if step > 0 {
            x *= b.powi(step);
        } else {
            x /= b.powi(-step);
        }
        e -= step;
    }
    x
}

fn check_same_base(d: &dyn FracLogDistribution, base: u32) -> Result<()> {
    if d.base() == base {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "distribution base {} differs from significand base {base}",
            d.base()
        )))
    }
}

/// log_b a − (k − 1), the point where the cdf of {Y} is read for a.
fn frac_point(a: u64, spec: SignificandSpec) -> f64 {
    if a > spec.hi() {
        return 1.0;
    }
    log_base(a as f64, spec.base) - (spec.k - 1) as f64
}

/// Pr(A_(k) = a) for any {Y}.
pub fn general_pmf_at(d: &dyn FracLogDistribution, spec: SignificandSpec, a: u64) -> Result<f64> {
    check_same_base(d, spec.base)?;
    spec.check_member(a)?;
    Ok(d.cdf(frac_point(a + 1, spec)) - d.cdf(frac_point(a, spec)))
}

pub fn general_pmf(d: &dyn FracLogDistribution, spec: SignificandSpec) -> Result<SignificandPmf> {
    check_same_base(d, spec.base)?;
    spec.check_tabulable()?;
    let mut probs = Vec::with_capacity(spec.support_len() as usize);
    let mut prev = d.cdf(frac_point(spec.lo(), spec));
    for a in spec.lo()..=spec.hi() {
        let next = d.cdf(frac_point(a + 1, spec));
        probs.push(next - prev);
        prev = next;
    }
    Ok(SignificandPmf { spec, probs })
}

/// Pr(A_[j] = a) = Σ_r Pr(A_(j) = rb + a), with j taken from the table's k.
pub fn digit_pmf_from_significand(p: &SignificandPmf) -> DigitPmf {
    let (b, j) = (p.spec.base, p.spec.k);
    if j == 1 {
        return DigitPmf {
            base: b,
            j,
            probs: p.probs.clone(),
        };
    }
    let mut probs = vec![0.0; b as usize];
    // The table starts at b^(j−1), a multiple of b, so index i holds digit i mod b.
    for (i, &q) in p.probs.iter().enumerate() {
        probs[i % b as usize] += q;
    }
    DigitPmf { base: b, j, probs }
}

/// Digit table for position j from the k = j significand pmf of `d`.
pub fn general_digit_pmf(d: &dyn FracLogDistribution, j: u32) -> Result<DigitPmf> {
    let spec = SignificandSpec::new(d.base(), j)?;
    Ok(digit_pmf_from_significand(&general_pmf(d, spec)?))
}

/// log_b(1 + 1/a).
pub fn benford_pmf_at(base: u32, a: u64) -> f64 {
    (1.0 / a as f64).ln_1p() / (base as f64).ln()
}

pub fn benford_pmf(spec: SignificandSpec) -> Result<SignificandPmf> {
    SignificandPmf::tabulate(spec, |a| Ok(benford_pmf_at(spec.base, a)))
}

fn check_digit(base: u32, j: u32, a: u32) -> Result<()> {
    check_base(base)?;
    if j == 0 {
        return Err(Error::invalid("digit position j must be >= 1"));
    }
    if a >= base || (j == 1 && a == 0) {
        return Err(Error::invalid(format!("{a} is not a valid digit at position {j} in base {base}")));
    }
    Ok(())
}

/// Pr(A_[j] = a) for a Benford variable, from the ratio of four gamma values
/// evaluated in log space.
pub fn benford_digit_pmf_closed_form(base: u32, j: u32, a: u32) -> Result<f64> {
    check_digit(base, j, a)?;
    if j == 1 {
        return Ok(benford_pmf_at(base, a as u64));
    }
    let b = base as f64;
    let n = b.powi(j as i32 - 1);
    let m = b.powi(j as i32 - 2);
    let lo = a as f64 / b;
    let hi = (a + 1) as f64 / b;
    let outer = log_gamma_ratio_offset(n, hi, lo)?;
    let inner = log_gamma_ratio_offset(m, hi, lo)?;
    Ok((outer - inner) / b.ln())
}

pub fn benford_digit_pmf(base: u32, j: u32) -> Result<DigitPmf> {
    digit_table(base, j, |a| benford_digit_pmf_closed_form(base, j, a))
}

fn digit_table(base: u32, j: u32, f: impl Fn(u32) -> Result<f64>) -> Result<DigitPmf> {
    check_base(base)?;
    let first = if j == 1 { 1 } else { 0 };
    let probs = (first..base).map(f).collect::<Result<Vec<_>>>()?;
    Ok(DigitPmf { base, j, probs })
}

/// b^(k−1+ρ), built from the exact integer power so that ρ = 0 gives an
/// exact integer.
fn b_pow_xi(p: &ParetoParams, k: u32) -> f64 {
    let b = p.base() as f64;
    let whole = b.powi(k as i32 - 1);
    if p.rho() == 0.0 {
        whole
    } else {
        whole * b.powf(p.rho())
    }
}

/// Pr(A_(k) = a) for Pareto X with general ρ.
pub fn pareto_pmf_at(p: &ParetoParams, k: u32, a: u64) -> Result<f64> {
    let spec = SignificandSpec::new(p.base(), k)?;
    spec.check_member(a)?;
    Ok(pareto_pmf_unchecked(p, k, a))
}

fn pareto_pmf_unchecked(p: &ParetoParams, k: u32, a: u64) -> f64 {
    let s = p.s();
    let ln_b = p.ln_b();
    let xi = p.rho() + (k - 1) as f64;
    let bxi = b_pow_xi(p, k);
    let (af, a1) = (a as f64, (a + 1) as f64);
    let ln_a = af.ln();
    let ln_a1 = a1.ln();
    // b^{s(ξ−1)} (a^{−s} − (a+1)^{−s}) / (1 − b^{−s})
    let head = (s * ((xi - 1.0) * ln_b - ln_a)).exp() * -(-s * (1.0 / af).ln_1p()).exp_m1()
        / p.one_minus_b_neg_s();
    // 1 − b^{sξ} v^{−s}
    let edge = |ln_v: f64| -(s * (xi * ln_b - ln_v)).exp_m1();
    head + unit_step(a1 - bxi) * edge(ln_a1) - unit_step(af - bxi) * edge(ln_a)
}

pub fn pareto_pmf(p: &ParetoParams, spec: SignificandSpec) -> Result<SignificandPmf> {
    if spec.base != p.base() {
        return Err(Error::invalid("Pareto base differs from significand base"));
    }
    SignificandPmf::tabulate(spec, |a| Ok(pareto_pmf_unchecked(p, spec.k, a)))
}

/// Discrete truncated Pareto pmf, the ρ = 0 case of [`pareto_pmf`].
pub fn dtp_pmf(s: f64, base: u32, k: u32, a: u64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain("Pareto shape", s));
    }
    let spec = SignificandSpec::new(base, k)?;
    spec.check_member(a)?;
    let ln_b = (base as f64).ln();
    let af = a as f64;
    // a^{−s}(1 − (1+1/a)^{−s}) / (b^{−s(k−1)} (1 − b^{−s}))
    let num = -(-s * (1.0 / af).ln_1p()).exp_m1();
    let den = -(-s * ln_b).exp_m1();
    Ok((s * ((k - 1) as f64 * ln_b - af.ln())).exp() * num / den)
}

/// Pr(A_[j] = a) for Pareto X, through the τ_s kernel.
pub fn pareto_digit_pmf(p: &ParetoParams, j: u32, a: u32) -> Result<f64> {
    check_digit(p.base(), j, a)?;
    if j == 1 {
        return Ok(pareto_pmf_unchecked(p, 1, a as u64));
    }
    let s = p.s();
    let b = p.base() as f64;
    let ln_b = p.ln_b();
    let xi = p.rho() + (j - 1) as f64;
    let n = b.powi(j as i32 - 1);
    let m = b.powi(j as i32 - 2);
    let lo = a as f64 / b;
    let hi = (a + 1) as f64 / b;
    let c = 1.0 / p.one_minus_b_neg_s();
    // b^{ξ−1}, exact when ρ = 0.
    let b_xi1 = b_pow_xi(p, j) / b;
    let eta = |v: f64| (b_xi1 - v / b).ceil();
    let (eta_lo, eta_hi) = (eta(a as f64), eta((a + 1) as f64));

    let inner = (s * (xi - 2.0) * ln_b).exp() * c * tau_diff_offset(s, m, lo, hi)?;
    let outer = (s * (xi - 1.0) * ln_b).exp() * c * tau_diff_offset(s, n, lo, hi)?;
    let middle = (s * (xi - 1.0) * ln_b).exp() * tau_diff_offset(s, eta_hi, lo + (eta_lo - eta_hi), hi)?;
    Ok(inner - outer + middle + eta_lo - eta_hi)
}

pub fn pareto_digit_pmf_table(p: &ParetoParams, j: u32) -> Result<DigitPmf> {
    digit_table(p.base(), j, |a| pareto_digit_pmf(p, j, a))
}

/// The pdf-based approximation over A_(k), reported without renormalization.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxPmf {
    pub spec: SignificandSpec,
    pub values: Vec<f64>,
    /// Sum of the raw values.
    pub sum: f64,
}

impl ApproxPmf {
    pub fn get(&self, a: u64) -> Option<f64> {
        a.checked_sub(self.spec.lo())
            .and_then(|i| self.values.get(i as usize).copied())
    }
}

/// Pr(A_(k) = a) ≈ f_{Y}(log_b a − k + 1) · log_b(1 + 1/a).
pub fn asymptotic_pmf_approx_at(
    d: &dyn FracLogDistribution,
    spec: SignificandSpec,
    a: u64,
) -> Result<f64> {
    check_same_base(d, spec.base)?;
    spec.check_member(a)?;
    let f = d
        .pdf(frac_point(a, spec))
        .ok_or(Error::Unsupported("the distribution has no density"))?;
    Ok(f * benford_pmf_at(spec.base, a))
}

pub fn asymptotic_pmf_approx(d: &dyn FracLogDistribution, spec: SignificandSpec) -> Result<ApproxPmf> {
    spec.check_tabulable()?;
    let values = (spec.lo()..=spec.hi())
        .map(|a| asymptotic_pmf_approx_at(d, spec, a))
        .collect::<Result<Vec<_>>>()?;
    let sum = values.iter().sum();
    Ok(ApproxPmf { spec, values, sum })
}

/// The Benford profile a ↦ a · Pr(A_(k) = a).
pub fn sum_invariance_profile(spec: SignificandSpec) -> Result<Vec<(u64, f64)>> {
    spec.check_tabulable()?;
    Ok((spec.lo()..=spec.hi())
        .map(|a| (a, a as f64 * benford_pmf_at(spec.base, a)))
        .collect())
}

/// The value the profile approaches as k grows, 1/ln b.
pub fn sum_invariance_limit(base: u32) -> f64 {
    1.0 / (base as f64).ln()
}

/// max_a |a · Pr(A_(k) = a) · ln b − 1|.
pub fn sum_invariance_max_rel_deviation(spec: SignificandSpec) -> Result<f64> {
    let limit = sum_invariance_limit(spec.base);
    Ok(sum_invariance_profile(spec)?
        .into_iter()
        .map(|(_, v)| (v / limit - 1.0).abs())
        .fold(0.0, f64::max))
}
