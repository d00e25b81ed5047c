use super::{cf_endpoints, continuants_u64, CfVector, Rational};
use crate::error::{Error, Result};
use crate::fracpart::{FracLogDistribution, ParetoParams};
use crate::special_math::digamma;

/// The ordered endpoints (lo, hi) of the {Y} interval for `v`, with the
/// exact width hi − lo.
fn interval(v: &CfVector) -> (f64, f64, f64) {
    const EXACT: u64 = 1 << 53;
    match continuants_u64(v.coeffs()) {
        Some((h, q, hp, qp)) if h + hp < EXACT => {
            // Adjacent convergents differ by exactly 1 / (h (h + h')).
            let width = 1.0 / (h as f64 * (h + hp) as f64);
            let (x, x_bumped) = (q as f64 / h as f64, (q + qp) as f64 / (h + hp) as f64);
            return if x < x_bumped { (x, x_bumped, width) } else { (x_bumped, x, width) };
        }
        _ => {}
    }
    let (x, x_bumped) = cf_endpoints(v);
    let width = x.sub(&x_bumped).abs().to_f64();
    let (x, x_bumped) = (x.to_f64(), x_bumped.to_f64());
    if x < x_bumped {
        (x, x_bumped, width)
    } else {
        (x_bumped, x, width)
    }
}

/// Pr(A_k = a_k) = (−1)^k (F([0; a_k + e_k]) − F([0; a_k])) for any {Y}.
pub fn joint_pmf_general(d: &dyn FracLogDistribution, v: &CfVector) -> f64 {
    let (lo, hi, _) = interval(v);
    d.cdf(hi) - d.cdf(lo)
}

/// The Benford case, as an exact fraction.
pub fn benford_joint_pmf_exact(v: &CfVector) -> Rational {
    let sign = if v.len() % 2 == 0 { 1 } else { -1 };
    if let Some((h, q, hp, qp)) = continuants_u64(v.coeffs()) {
        // q_b / h_b − q / h over the common denominator h h_b.
        let (hb, qb) = (h + hp, q + qp);
        let n = qb as i128 * h as i128 - q as i128 * hb as i128;
        let d = h as u128 * hb as u128;
        if let Ok(d) = i128::try_from(d) {
            return Rational::new(sign * n, d);
        }
    }
    let (x, x_bumped) = cf_endpoints(v);
    let diff = x_bumped.sub(&x);
    if v.len() % 2 == 0 {
        diff
    } else {
        diff.neg()
    }
}

pub fn benford_joint_pmf(v: &CfVector) -> f64 {
    benford_joint_pmf_exact(v).to_f64()
}

/// Π_j [0; a^{j:k}] · [0; a^{j:k} + e], the product over all remainders, as
/// an exact fraction. The remainders are built from the last coefficient
/// backwards.
pub fn product_form_pmf_exact(v: &CfVector) -> Rational {
    if let Some(r) = product_form_u64(v.coeffs()) {
        return r;
    }
    // Generic evaluation for long or huge vectors.
    let mut acc = Rational::one();
    for j in 1..=v.len() {
        let rem = v.remainder(j).expect("index in range");
        let (x, x_bumped) = cf_endpoints(&rem);
        acc = acc.mul(&x).mul(&x_bumped);
    }
    acc
}

/// The product in 64-bit integers, or None on overflow.
fn product_form_u64(c: &[u64]) -> Option<Rational> {
    let k = c.len();
    // [0; a_j, …, a_k] = q / h, updated as h ← a_j h + q, q ← h.
    let (mut h, mut q) = (1u64, 0u64);
    let (mut hb, mut qb) = (1u64, 0u64);
    let (mut num, mut den) = (1u64, 1u64);
    for j in (0..k).rev() {
        let bump = u64::from(j == k - 1);
        (q, h) = (h, c[j].checked_mul(h)?.checked_add(q)?);
        (qb, hb) = (hb, (c[j] + bump).checked_mul(hb)?.checked_add(qb)?);
        (num, den) = mul_reduced(num, den, q, h)?;
        (num, den) = mul_reduced(num, den, qb, hb)?;
    }
    i128::try_from(num).ok()?;
    Some(Rational::from_coprime(num as i128, den as i128))
}

/// (n / d) · (p / q) in lowest terms for reduced, positive inputs.
fn mul_reduced(n: u64, d: u64, p: u64, q: u64) -> Option<(u64, u64)> {
    let (n, q) = cancel_u64(n, q);
    let (p, d) = cancel_u64(p, d);
    Some((n.checked_mul(p)?, d.checked_mul(q)?))
}

/// Both arguments divided by their gcd.
fn cancel_u64(x: u64, y: u64) -> (u64, u64) {
    if x == 1 || y == 1 {
        return (x, y);
    }
    // The usual case here: one divides the other.
    if y % x == 0 {
        return (1, y / x);
    }
    let g = num_integer::gcd(x, y);
    (x / g, y / g)
}

pub fn product_form_pmf(v: &CfVector) -> f64 {
    product_form_pmf_exact(v).to_f64()
}

/// |log_2((1 + [0; a_k]) / (1 + [0; a_k + e_k]))|.
pub fn blachman_approx(v: &CfVector) -> f64 {
    let (x, x_bumped) = cf_endpoints(v);
    // (1 + x)/(1 + x') = 1 + (x − x')/(1 + x')
    let ratio = x.sub(&x_bumped).to_f64() / (1.0 + x_bumped.to_f64());
    ratio.ln_1p().abs() / std::f64::consts::LN_2
}

fn check_coeff(a: u64) -> Result<()> {
    if a == 0 {
        Err(Error::invalid("continued-fraction coefficients must be >= 1"))
    } else {
        Ok(())
    }
}

/// Pr(A_1 = a) = 1/a − 1/(a+1) for a Benford variable.
pub fn benford_a1_pmf(a: u64) -> Result<f64> {
    check_coeff(a)?;
    let a = a as f64;
    Ok(1.0 / (a * (a + 1.0)))
}

/// Pr(A_2 = a) = ψ(1 + 1/a) − ψ(1 + 1/(1+a)) for a Benford variable.
pub fn benford_a2_pmf(a: u64) -> Result<f64> {
    check_coeff(a)?;
    let a = a as f64;
    Ok(digamma(1.0 + 1.0 / a)? - digamma(1.0 + 1.0 / (1.0 + a))?)
}

/// log_2(1 + 1/(a(a+2))).
pub fn gauss_kuzmin_pmf(a: u64) -> Result<f64> {
    check_coeff(a)?;
    let a = a as f64;
    Ok((1.0 / (a * (a + 2.0))).ln_1p() / std::f64::consts::LN_2)
}

/// Pr(A_k = a_k) for Pareto X.
pub fn pareto_joint_pmf(p: &ParetoParams, v: &CfVector) -> f64 {
    let (lo, hi, width) = interval(v);
    let sl = p.s() * p.ln_b();
    let rho = p.rho();
    // 1 − b^{−s·width}
    let shrink = -(-sl * width).exp_m1();
    let head = (sl * (rho - 1.0 - lo)).exp() * shrink / p.one_minus_b_neg_s();
    let steps = if lo >= rho {
        (-sl * (lo - rho)).exp() * shrink
    } else if hi >= rho {
        -(-sl * (hi - rho)).exp_m1()
    } else {
        0.0
    };
    head + steps
}

/// The ρ = 0 first-coefficient law, (b^{−s/(a+1)} − b^{−s/a}) / (1 − b^{−s}).
pub fn pareto_a1_pmf(s: f64, base: u32, a: u64) -> Result<f64> {
    check_coeff(a)?;
    let p = ParetoParams::from_rho(s, 0.0, base)?;
    let sl = s * p.ln_b();
    let a = a as f64;
    let lo = 1.0 / (a + 1.0);
    let width = 1.0 / (a * (a + 1.0));
    Ok((-sl * lo).exp() * -(-sl * width).exp_m1() / p.one_minus_b_neg_s())
}

/// f_{Y}([0; a_k]) · (−1)^k ([0; a_k + e_k] − [0; a_k]).
pub fn asymptotic_joint_approx(d: &dyn FracLogDistribution, v: &CfVector) -> Result<f64> {
    let (x, x_bumped) = cf_endpoints(v);
    let width = x_bumped.sub(&x).abs().to_f64();
    // [0; 1] = 1 is the point 0 of the circle the density of {Y} lives on.
    let y = x.to_f64();
    let f = d
        .pdf(if y >= 1.0 { y - 1.0 } else { y })
        .ok_or(Error::Unsupported("the distribution has no density"))?;
    Ok(f * width)
}
