//! Simple continued fractions: coefficient vectors, exact evaluation,
//! expansion of reals, and the coefficient distributions built on them.

mod pmf;
mod rational;
mod table;

pub use pmf::*;
pub use rational::Rational;
use rational::mul_i128;
pub use table::*;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A finite vector (a_1, …, a_k) of positive integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CfVector(Vec<u64>);

impl CfVector {
    pub fn new(coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("a coefficient vector needs at least one entry"));
        }
        if coeffs.contains(&0) {
            return Err(Error::invalid("continued-fraction coefficients must be >= 1"));
        }
        Ok(CfVector(coeffs))
    }

    /// The all-ones vector of length k.
    pub fn ones(k: usize) -> Result<Self> {
        Self::new(vec![1; k])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for the usual `len`/`is_empty` pairing.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The vector with its last entry increased by one, a_k + e_k.
    pub fn bump_last(&self) -> Self {
        let mut c = self.0.clone();
        *c.last_mut().unwrap() += 1;
        CfVector(c)
    }

    /// The remainder (a_m, …, a_k), 1-based.
    pub fn remainder(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.len() {
            return Err(Error::invalid(format!("remainder index {m} outside 1..={}", self.len())));
        }
        Ok(CfVector(self.0[m - 1..].to_vec()))
    }

    /// The prefix (a_1, …, a_j).
    pub fn prefix(&self, j: usize) -> Result<Self> {
        if j == 0 || j > self.len() {
            return Err(Error::invalid(format!("prefix length {j} outside 1..={}", self.len())));
        }
        Ok(CfVector(self.0[..j].to_vec()))
    }

    /// Steps through every vector of this length with entries in
    /// 1..=max_entry, last entry fastest. Returns false after the final one,
    /// leaving the vector reset to all ones.
    pub fn advance_in_box(&mut self, max_entry: u64) -> bool {
        for c in self.0.iter_mut().rev() {
            if *c < max_entry {
                *c += 1;
                return true;
            }
            *c = 1;
        }
        false
    }
}

impl std::fmt::Display for CfVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Last two continuant pairs (h_k, q_k, h_{k−1}, q_{k−1}) of [a_1; …, a_k].
/// (h_k, q_k, h_{k−1}, q_{k−1}) in 64 bits, with h_k + h_{k−1} also fitting.
fn continuants_u64(c: &[u64]) -> Option<(u64, u64, u64, u64)> {
    let (mut h1, mut h2) = (1u64, 0u64);
    let (mut q1, mut q2) = (0u64, 1u64);
    for &a in c {
        let h = a.checked_mul(h1)?.checked_add(h2)?;
        let q = a.checked_mul(q1)?.checked_add(q2)?;
        (h2, h1) = (h1, h);
        (q2, q1) = (q1, q);
    }
    h1.checked_add(h2)?;
    Some((h1, q1, h2, q2))
}

fn continuants_small(c: &[u64]) -> Option<(i128, i128, i128, i128)> {
    if let Some((h, q, hp, qp)) = continuants_u64(c) {
        return Some((h as i128, q as i128, hp as i128, qp as i128));
    }
    let (mut h1, mut h2) = (1i128, 0i128);
    let (mut q1, mut q2) = (0i128, 1i128);
    for &a in c {
        let a = a as i128;
        let h = mul_i128(a, h1)?.checked_add(h2)?;
        let q = mul_i128(a, q1)?.checked_add(q2)?;
        (h2, h1) = (h1, h);
        (q2, q1) = (q1, q);
    }
    // Leave headroom so that h + h_{k−1} cannot overflow.
    if h1 > i128::MAX / 2 {
        return None;
    }
    Some((h1, q1, h2, q2))
}

fn continuants_big(c: &[u64]) -> (BigInt, BigInt, BigInt, BigInt) {
    let (mut h1, mut h2) = (BigInt::from(1), BigInt::zero());
    let (mut q1, mut q2) = (BigInt::zero(), BigInt::from(1));
    for &a in c {
        let h = &h1 * a + &h2;
        let q = &q1 * a + &q2;
        h2 = std::mem::replace(&mut h1, h);
        q2 = std::mem::replace(&mut q1, q);
    }
    (h1, q1, h2, q2)
}

/// [a_1; a_2, …, a_k] as a reduced fraction.
pub fn cf_eval(v: &CfVector) -> Rational {
    match continuants_small(v.coeffs()) {
        Some((h, q, _, _)) => Rational::from_coprime(h, q),
        None => {
            let (h, q, _, _) = continuants_big(v.coeffs());
            Rational::from_coprime_big(h, q)
        }
    }
}

/// ([0; a_k], [0; a_k + e_k]), the two endpoints of the interval of {Y}
/// on which the first k coefficients equal a_k.
pub fn cf_endpoints(v: &CfVector) -> (Rational, Rational) {
    match continuants_small(v.coeffs()) {
        Some((h, q, hp, qp)) => (
            Rational::from_coprime(q, h),
            Rational::from_coprime(q + qp, h + hp),
        ),
        None => {
            let (h, q, hp, qp) = continuants_big(v.coeffs());
            let bumped = Rational::from_coprime_big(&q + qp, &h + hp);
            (Rational::from_coprime_big(q, h), bumped)
        }
    }
}

/// Result of expanding a real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfExpansion {
    pub a0: i64,
    pub coeffs: Vec<u64>,
    /// The recursion hit a (numerically) zero fractional part before
    /// `max_len` coefficients were produced.
    pub exhausted: bool,
}

pub const CF_EPS: f64 = 1e-12;

/// Expands y with y_j = 1 / {y_{j−1}}.
///
/// Stops when the fractional part drops below `eps` or the next coefficient
/// would exceed 1/eps. A fractional part within `eps` of 1 is rounding noise
/// in front of an integer: the coefficient is bumped and the expansion ends,
/// so 0.3 expands to [3, 3] rather than [3, 2, 1, …].
pub fn cf_expand(y: f64, max_len: usize, eps: f64) -> Result<CfExpansion> {
    if !y.is_finite() {
        return Err(Error::domain("continued-fraction argument", y));
    }
    let mut a0 = y.floor();
    let mut f = y - a0;
    let mut coeffs = Vec::new();
    let mut exhausted = false;
    if 1.0 - f < eps {
        a0 += 1.0;
        f = 0.0;
    }
    while coeffs.len() < max_len {
        if f < eps {
            exhausted = true;
            break;
        }
        let x = 1.0 / f;
        if x > 1.0 / eps {
            exhausted = true;
            break;
        }
        let a = x.floor();
        f = x - a;
        if 1.0 - f < eps {
            coeffs.push(a as u64 + 1);
            exhausted = coeffs.len() < max_len;
            break;
        }
        coeffs.push(a as u64);
    }
    Ok(CfExpansion {
        a0: a0 as i64,
        coeffs,
        exhausted,
    })
}

/// Exact expansion of a rational by the Euclidean algorithm.
pub fn cf_expand_exact(r: &Rational, max_len: usize) -> (BigInt, Vec<u64>) {
    let mut n = r.numer();
    let mut d = r.denom();
    let a0 = floor_div(&n, &d);
    n -= &a0 * &d;
    let mut coeffs = Vec::new();
    while !n.is_zero() && coeffs.len() < max_len {
        // Invert the fractional part n/d.
        std::mem::swap(&mut n, &mut d);
        let a = floor_div(&n, &d);
        n -= &a * &d;
        coeffs.push(a.to_u64().expect("coefficient fits in 64 bits"));
    }
    (a0, coeffs)
}

fn floor_div(n: &BigInt, d: &BigInt) -> BigInt {
    use num_integer::Integer;
    n.div_floor(d)
}

/// Checks the alternating monotonicity of convergents in each coefficient.
///
/// With [a_j] = [a_1; …, a_j] and s_j = (−1)^{j−1}, for every j:
///   s_j [a_j] < s_j [a_j + e_j],
///   s_j [a_{j−1} + e_{j−1}] ≤ s_j [a_j]          (j ≥ 2),
///   s_j [a_j] < s_j [a_{j+1} + e_{j+1}]           (j < k).
pub fn lemma1_check(v: &CfVector) -> bool {
    let k = v.len();
    let prefix = |j: usize| CfVector(v.coeffs()[..j].to_vec());
    let value = |w: &CfVector| cf_eval(w);
    for j in 1..=k {
        let pj = prefix(j);
        let here = value(&pj);
        let bumped = value(&pj.bump_last());
        let odd = j % 2 == 1;
        // s_j x < s_j y  ⟺  x < y for odd j, x > y for even j.
        let lt = |x: &Rational, y: &Rational| if odd { x < y } else { x > y };
        let le = |x: &Rational, y: &Rational| if odd { x <= y } else { x >= y };
        if !lt(&here, &bumped) {
            return false;
        }
        if j >= 2 && !le(&value(&prefix(j - 1).bump_last()), &here) {
            return false;
        }
        if j < k && !lt(&here, &value(&prefix(j + 1).bump_last())) {
            return false;
        }
    }
    true
}
