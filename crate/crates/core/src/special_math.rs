//! Scalar special functions used by the closed-form pmfs: digamma, Hurwitz
//! zeta, the piecewise `tau` kernel built from them, and a log-space ratio of
//! gamma functions that stays finite for very large arguments.

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// B_{2k} / (2k) for k = 1..7, the digamma asymptotic coefficients.
const DIGAMMA_ASYMP: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// B_{2k} / (2k (2k - 1)) for k = 1..7, the Stirling series for ln Γ.
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
];

/// B_{2k} / (2k)! for k = 1..10, the Euler–Maclaurin tail of the zeta sum.
const EM_COEFFS: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
];

const DIGAMMA_SHIFT: f64 = 10.0;
const LGAMMA_SHIFT: f64 = 16.0;

/// Digamma function ψ(v) for v > 0.
///
/// Shifts the argument above 10 with ψ(x+1) = ψ(x) + 1/x and then applies
/// the asymptotic series in 1/x².
pub fn digamma(v: f64) -> Result<f64> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::domain("digamma argument", v));
    }
    let mut acc = 0.0;
    let mut x = v;
    while x < DIGAMMA_SHIFT {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut series = 0.0;
    let mut pow = inv2;
    for c in DIGAMMA_ASYMP {
        series += c * pow;
        pow *= inv2;
    }
    Ok(acc + x.ln() - 0.5 / x - series)
}

/// Hurwitz zeta ζ(s, v) = Σ_{n≥0} (n+v)^{-s} for s > 0, s ≠ 1, v > 0.
///
/// Sums the first N terms directly and closes the sum with an Euler–Maclaurin
/// tail. N grows until the last correction term is below 1e-16 of the total.
/// For s < 1 this yields the analytically continued value, which is what the
/// differences in the Pareto digit pmf need.
pub fn hurwitz_zeta(s: f64, v: f64) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::invalid("hurwitz_zeta is singular at s = 1; use -digamma"));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain("hurwitz_zeta shape", s));
    }
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::domain("hurwitz_zeta argument", v));
    }
    let mut start = (LGAMMA_SHIFT.max(2.0 * s) - v).ceil().max(0.0) as u64;
    loop {
        let (value, last) = zeta_em(s, v, start);
        if last.abs() <= 1e-16 * value.abs() || start > 1 << 20 {
            return Ok(value);
        }
        start = 2 * start + 16;
    }
}

/// Returns the Euler–Maclaurin estimate with `n` direct terms, plus the size
/// of the last correction used (a bound on the remaining error).
fn zeta_em(s: f64, v: f64, n: u64) -> (f64, f64) {
    let mut head = 0.0;
    // Summing from the smallest terms up keeps the rounding error low.
    for i in (0..n).rev() {
        head += (i as f64 + v).powf(-s);
    }
    let a = n as f64 + v;
    let a_pow = a.powf(-s);
    let mut tail = a * a_pow / (s - 1.0) + 0.5 * a_pow;
    // Rising factorial s (s+1) ... (s+2k-2) times a^{-s-2k+1}.
    let mut rising = s;
    let mut pow = a_pow / a;
    let inv2 = 1.0 / (a * a);
    let mut last = 0.0;
    for (k, c) in EM_COEFFS.iter().enumerate() {
        last = c * rising * pow;
        tail += last;
        let m = 2.0 * k as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        pow *= inv2;
    }
    (head + tail, last)
}

/// The kernel of the Pareto digit pmf: −ψ(v) when s is exactly 1, ζ(s, v)
/// otherwise. There is no window around s = 1.
pub fn tau(s: f64, v: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain("tau shape", s));
    }
    if s == 1.0 {
        digamma(v).map(|d| -d)
    } else {
        hurwitz_zeta(s, v)
    }
}

/// τ_s(z + p) − τ_s(z + q).
///
/// Sums the differences term by term, (x)^{−s} − (x + δ)^{−s} with δ = q − p,
/// and closes with the Euler–Maclaurin tail of the difference. Nothing of
/// size ζ(s, z) is ever formed, so the result keeps its relative accuracy
/// when z is large or s is close to 0, where the two values nearly cancel.
pub fn tau_diff_offset(s: f64, z: f64, p: f64, q: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain("tau shape", s));
    }
    let (v, w) = (z + p, z + q);
    for x in [v, w] {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::domain("tau argument", x));
        }
    }
    let delta = q - p;
    if delta == 0.0 {
        return Ok(0.0);
    }
    let mut start = (LGAMMA_SHIFT.max(2.0 * s) - v.min(w)).ceil().max(0.0) as u64;
    loop {
        let (value, last) = zeta_diff_em(s, v, delta, start);
        if last.abs() <= 1e-16 * value.abs() || start > 1 << 20 {
            return Ok(value);
        }
        start = 2 * start + 16;
    }
}

/// x^{−e} − (x + δ)^{−e}
#[inline]
fn pow_diff(x: f64, delta: f64, e: f64) -> f64 {
    x.powf(-e) * -(-e * (delta / x).ln_1p()).exp_m1()
}

fn zeta_diff_em(s: f64, v: f64, delta: f64, n: u64) -> (f64, f64) {
    let mut head = 0.0;
    for i in (0..n).rev() {
        head += pow_diff(i as f64 + v, delta, s);
    }
    let a = n as f64 + v;
    let l = (delta / a).ln_1p();
    // ∫_a^∞ x^{−s} − (x+δ)^{−s} dx
    let integral = if s == 1.0 {
        l
    } else {
        a.powf(1.0 - s) * ((1.0 - s) * l).exp_m1() / (1.0 - s)
    };
    let mut tail = integral + 0.5 * pow_diff(a, delta, s);
    let mut rising = s;
    let mut last = 0.0;
    for (k, c) in EM_COEFFS.iter().enumerate() {
        let m = 2.0 * k as f64;
        last = c * rising * pow_diff(a, delta, s + m + 1.0);
        tail += last;
        rising *= (s + m + 1.0) * (s + m + 2.0);
    }
    (head + tail, last)
}

/// ln Γ(v) − ln Γ(w), evaluated without forming either gamma value.
///
/// Both arguments are shifted by the same integer above 16; the Stirling
/// difference is then written in terms of `ln_1p((v-w)/w)` so that nearly
/// equal large arguments do not cancel catastrophically.
pub fn log_gamma_ratio(v: f64, w: f64) -> Result<f64> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::domain("log_gamma_ratio numerator argument", v));
    }
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::domain("log_gamma_ratio denominator argument", w));
    }
    // Evaluate in one orientation so that swapping the arguments flips the
    // sign exactly.
    if v >= w {
        Ok(lgr_core(v, w, v - w))
    } else {
        Ok(-lgr_core(w, v, w - v))
    }
}

/// ln Γ(z + p) − ln Γ(z + q), with the difference p − q taken before adding
/// z, so that large z does not round it away.
pub fn log_gamma_ratio_offset(z: f64, p: f64, q: f64) -> Result<f64> {
    let (v, w) = (z + p, z + q);
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::domain("log_gamma_ratio numerator argument", v));
    }
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::domain("log_gamma_ratio denominator argument", w));
    }
    Ok(lgr_core(v, w, p - q))
}

fn lgr_core(v: f64, w: f64, d: f64) -> f64 {
    if d == 0.0 {
        return 0.0;
    }
    let shift = (LGAMMA_SHIFT - v.min(w)).ceil().max(0.0) as u32;
    // ln Γ(x) = ln Γ(x + n) - Σ_{i<n} ln(x + i)
    let mut acc = 0.0;
    for i in 0..shift {
        acc -= (d / (w + i as f64)).ln_1p();
    }
    let x = v + shift as f64;
    let y = w + shift as f64;
    let main = (y - 0.5) * (d / y).ln_1p() + d * x.ln() - d;
    acc + main + stirling_series(x) - stirling_series(y)
}

fn stirling_series(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut sum = 0.0;
    for c in STIRLING {
        sum += c * pow;
        pow *= inv2;
    }
    sum
}
