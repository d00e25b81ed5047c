//! Exact rationals for continued-fraction arithmetic.
//!
//! Values live in a pair of `i128` while they fit and move to `BigRational`
//! when an operation overflows. Every value is kept reduced with a positive
//! denominator, so structural equality is numeric equality.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
enum Repr {
    Small { num: i128, den: i128 },
    Big(BigRational),
}

#[derive(Clone, Debug)]
pub struct Rational(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a < b {
        std::mem::swap(&mut a, &mut b);
    }
    if (a | b) >> 64 == 0 {
        let (mut x, mut y) = (a as u64, b as u64);
        while y != 0 {
            let t = x % y;
            x = y;
            y = t;
        }
        return x as u128;
    }
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact quotient for g > 0, with a 64-bit path since 128-bit division is slow.
fn div(x: i128, g: i128) -> i128 {
    if x == g {
        return 1;
    }
    match (i64::try_from(x), i64::try_from(g)) {
        (Ok(x), Ok(g)) => (x / g) as i128,
        _ => x / g,
    }
}

const F64_EXACT: u128 = 1 << 53;

/// x / y when y divides x, for x, y < 2^53. Floating-point division is
/// correctly rounded and much cheaper than integer division, and an exact
/// integer quotient below 2^53 is representable, so the multiply-back check
/// decides divisibility exactly.
#[inline]
fn exact_quotient(x: u64, y: u64) -> Option<u64> {
    let q = (x as f64 / y as f64) as u64;
    (q.wrapping_mul(y) == x).then_some(q)
}

/// Divides n and d > 0 by their gcd. When one divides the other, which is
/// the common case for products of convergents, a single division suffices.
fn cancel(n: i128, d: i128) -> (i128, i128) {
    let m = n.unsigned_abs();
    if m == 1 || d == 1 {
        return (n, d);
    }
    if m != 0 && m < F64_EXACT && (d as u128) < F64_EXACT {
        let m = m as u64;
        let du = d as u64;
        if let Some(q) = exact_quotient(du, m) {
            return (n.signum(), q as i128);
        }
        if let Some(q) = exact_quotient(m, du) {
            return (q as i128 * n.signum(), 1);
        }
    }
    let g = gcd_u128(m, d as u128) as i128;
    if g == 1 {
        (n, d)
    } else {
        (div(n, g), div(d, g))
    }
}

/// `x * y`, skipping the overflow check when both fit in 64 bits.
#[inline]
pub(crate) fn mul_i128(x: i128, y: i128) -> Option<i128> {
    match (i64::try_from(x), i64::try_from(y)) {
        (Ok(x), Ok(y)) => Some(x as i128 * y as i128),
        _ => x.checked_mul(y),
    }
}

impl Rational {
    pub fn from_integer(n: i128) -> Self {
        Rational(Repr::Small { num: n, den: 1 })
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// Builds `num / den`, reducing it. Panics if `den == 0`.
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        match Self::reduce_small(num, den) {
            Some(r) => r,
            None => Self::from_big(BigRational::new(BigInt::from(num), BigInt::from(den))),
        }
    }

    /// Trusts the caller that `num / den` is already in lowest terms with
    /// `den > 0` (continuants are always coprime).
    pub(crate) fn from_coprime(num: i128, den: i128) -> Self {
        debug_assert!(den > 0);
        Rational(Repr::Small { num, den })
    }

    pub(crate) fn from_coprime_big(num: BigInt, den: BigInt) -> Self {
        Self::from_big(BigRational::new_raw(num, den))
    }

    fn reduce_small(num: i128, den: i128) -> Option<Self> {
        if num == i128::MIN || den == i128::MIN {
            return None;
        }
        let g = match (num.unsigned_abs(), den.unsigned_abs()) {
            (1, _) | (_, 1) => 1,
            (m, d) => gcd_u128(m, d) as i128,
        };
        let (mut n, mut d) = if g == 1 { (num, den) } else { (div(num, g), div(den, g)) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        Some(Rational(Repr::Small { num: n, den: d }))
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i128(), r.denom().to_i128()) {
            (Some(n), Some(d)) if n != i128::MIN && d != i128::MIN => {
                Rational(Repr::Small { num: n, den: d })
            }
            _ => Rational(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => {
                BigRational::new_raw(BigInt::from(*num), BigInt::from(*den))
            }
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => BigInt::from(*num),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    /// Whether the value is held in the fixed-width representation.
    pub fn is_small(&self) -> bool {
        matches!(self.0, Repr::Small { .. })
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num == 0,
            Repr::Big(r) => r.is_zero(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num > 0,
            Repr::Big(r) => r.is_positive(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { num, den } => {
                if num.unsigned_abs() < 1 << 53 && (*den as u128) < 1 << 53 {
                    *num as f64 / *den as f64
                } else {
                    self.to_big().to_f64().unwrap_or(f64::NAN)
                }
            }
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small { num, den } => {
                assert!(*num != 0, "reciprocal of zero");
                if *num < 0 {
                    Rational(Repr::Small { num: -den, den: -num })
                } else {
                    Rational(Repr::Small { num: *den, den: *num })
                }
            }
            Repr::Big(r) => Self::from_big(r.recip()),
        }
    }

    pub fn abs(&self) -> Self {
        match &self.0 {
            Repr::Small { num, den } => Rational(Repr::Small { num: num.abs(), den: *den }),
            Repr::Big(r) => Rational(Repr::Big(r.abs())),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) =
            (&self.0, &other.0)
        {
            let n = mul_i128(*a, *d).and_then(|x| mul_i128(*c, *b).and_then(|y| x.checked_add(y)));
            if let (Some(n), Some(den)) = (n, mul_i128(*b, *d)) {
                if let Some(r) = Self::reduce_small(n, den) {
                    return r;
                }
            }
        }
        Self::from_big(self.to_big() + other.to_big())
    }

    pub fn neg(&self) -> Self {
        match &self.0 {
            Repr::Small { num, den } if *num != i128::MIN => {
                Rational(Repr::Small { num: -num, den: *den })
            }
            _ => Self::from_big(-self.to_big()),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product with cross-cancellation before multiplying, so the
    /// intermediate values stay as small as the reduced result allows.
    pub fn mul(&self, other: &Self) -> Self {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) =
            (&self.0, &other.0)
        {
            let (a, d) = cancel(*a, *d);
            let (c, b) = cancel(*c, *b);
            if let (Some(n), Some(den)) = (mul_i128(a, c), mul_i128(b, d)) {
                if n == 0 {
                    return Self::zero();
                }
                return Rational(Repr::Small { num: n, den });
            }
        }
        Self::from_big(self.to_big() * other.to_big())
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => a == c && b == d,
            _ => self.to_big() == other.to_big(),
        }
    }
}

impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) =
            (&self.0, &other.0)
        {
            if let (Some(l), Some(r)) = (mul_i128(*a, *d), mul_i128(*c, *b)) {
                return l.cmp(&r);
            }
        }
        self.to_big().cmp(&other.to_big())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_normalizes_sign() {
        let r = Rational::new(6, -4);
        assert_eq!(r, Rational::new(-3, 2));
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(Rational::new(0, 5), Rational::zero());
    }

    #[test]
    fn arithmetic() {
        let a = Rational::new(2, 5);
        let b = Rational::new(1, 3);
        assert_eq!(a.sub(&b), Rational::new(1, 15));
        assert_eq!(a.mul(&b), Rational::new(2, 15));
        assert_eq!(a.add(&b), Rational::new(11, 15));
        assert_eq!(a.recip(), Rational::new(5, 2));
        assert!(a > b);
        assert_eq!(Rational::new(-1, 2).recip(), Rational::from_integer(-2));
    }

    #[test]
    fn escalates_on_overflow_and_demotes_back() {
        let big = Rational::new(i128::MAX, 3);
        let sq = big.mul(&big);
        assert!(!sq.is_small());
        let back = sq.mul(&big.recip()).mul(&big.recip());
        assert!(back.is_small());
        assert_eq!(back, Rational::one());
        let sum = big.add(&big);
        assert!(!sum.is_small());
        assert_eq!(sum.sub(&big), big);
    }

    #[test]
    fn to_f64_large_values() {
        let r = Rational::new((1i128 << 100) + 1, 1i128 << 100);
        assert_eq!(r.to_f64(), 1.0);
        assert_eq!(Rational::new(3, 10).to_f64(), 0.3);
    }
}
