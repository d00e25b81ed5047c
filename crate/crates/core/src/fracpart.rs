//! The distribution of the fractional part {Y} = {log_b X}.
//!
//! Both the significand pmfs and the continued-fraction pmfs consume nothing
//! but the cdf (and, for the asymptotic approximations, the pdf) of {Y}. The
//! [`FracLogDistribution`] trait is that interface; Benford, Pareto, a generic
//! wrapper around the cdf of Y, and a tabulated cdf implement it.

use crate::error::{Error, Result};

/// Distribution of {log_b X} on [0, 1).
pub trait FracLogDistribution: Send + Sync {
    fn base(&self) -> u32;

    /// Cdf of {Y}. Total: returns 0 for `y <= 0` and 1 for `y >= 1`.
    fn cdf(&self, y: f64) -> f64;

    /// Density of {Y}, when the model has one in closed form.
    fn pdf(&self, _y: f64) -> Option<f64> {
        None
    }
}

/// Unit step with u(0) = 1.
#[inline]
pub(crate) fn unit_step(z: f64) -> f64 {
    if z >= 0.0 {
        1.0
    } else {
        0.0
    }
}

fn check_unit(y: f64) -> Result<()> {
    if (0.0..1.0).contains(&y) {
        Ok(())
    } else {
        Err(Error::domain("fractional-part argument", y))
    }
}

pub(crate) fn check_base(b: u32) -> Result<()> {
    if b >= 2 {
        Ok(())
    } else {
        Err(Error::invalid(format!("base must be an integer >= 2, got {b}")))
    }
}

/// A Benford variable: {Y} ~ U(0, 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Benford {
    base: u32,
}

impl Benford {
    pub fn new(base: u32) -> Result<Self> {
        check_base(base)?;
        Ok(Benford { base })
    }
}

impl FracLogDistribution for Benford {
    fn base(&self) -> u32 {
        self.base
    }

    fn cdf(&self, y: f64) -> f64 {
        y.clamp(0.0, 1.0)
    }

    fn pdf(&self, _y: f64) -> Option<f64> {
        Some(1.0)
    }
}

pub fn benford_frac_cdf(y: f64) -> Result<f64> {
    check_unit(y)?;
    Ok(y)
}

/// Parameters of a Pareto variable together with ρ = {log_b x_m}.
///
/// ρ is computed once here. When log_b x_m lies within 1e-12 of an integer it
/// is snapped, giving ρ = 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParetoParams {
    s: f64,
    x_m: f64,
    rho: f64,
    base: u32,
}

const RHO_SNAP: f64 = 1e-12;

impl ParetoParams {
    pub fn from_xmin(s: f64, x_m: f64, base: u32) -> Result<Self> {
        check_base(base)?;
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::domain("Pareto shape", s));
        }
        if !(x_m > 0.0) || !x_m.is_finite() {
            return Err(Error::domain("Pareto minimum", x_m));
        }
        let l = log_base(x_m, base);
        let nearest = l.round();
        let rho = if (l - nearest).abs() <= RHO_SNAP {
            0.0
        } else {
            l - l.floor()
        };
        Ok(ParetoParams {
            s,
            x_m,
            rho,
            base,
        })
    }

    /// Parameters with x_m = b^ρ.
    pub fn from_rho(s: f64, rho: f64, base: u32) -> Result<Self> {
        check_base(base)?;
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::domain("Pareto shape", s));
        }
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::domain("Pareto rho", rho));
        }
        Ok(ParetoParams {
            s,
            x_m: (base as f64).powf(rho),
            rho,
            base,
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn x_m(&self) -> f64 {
        self.x_m
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub(crate) fn ln_b(&self) -> f64 {
        (self.base as f64).ln()
    }

    /// 1 − b^{−s}, computed without cancellation for small s.
    pub(crate) fn one_minus_b_neg_s(&self) -> f64 {
        -(-self.s * self.ln_b()).exp_m1()
    }

    fn frac_cdf(&self, y: f64) -> f64 {
        let sl = self.s * self.ln_b();
        let head = (sl * (self.rho - 1.0)).exp() * -(-sl * y).exp_m1() / self.one_minus_b_neg_s();
        let step = if y >= self.rho {
            -(-sl * (y - self.rho)).exp_m1()
        } else {
            0.0
        };
        head + step
    }

    fn frac_pdf(&self, y: f64) -> f64 {
        let sl = self.s * self.ln_b();
        let b_neg_s = (-sl).exp();
        sl * (-sl * (y - self.rho)).exp() * (b_neg_s / self.one_minus_b_neg_s() + unit_step(y - self.rho))
    }
}

/// log_b x, using the exact library routines for bases 2 and 10.
#[inline]
pub(crate) fn log_base(x: f64, b: u32) -> f64 {
    match b {
        10 => x.log10(),
        2 => x.log2(),
        _ => x.ln() / (b as f64).ln(),
    }
}

impl FracLogDistribution for ParetoParams {
    fn base(&self) -> u32 {
        self.base
    }

    fn cdf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            0.0
        } else if y >= 1.0 {
            1.0
        } else {
            self.frac_cdf(y)
        }
    }

    fn pdf(&self, y: f64) -> Option<f64> {
        if (0.0..1.0).contains(&y) {
            Some(self.frac_pdf(y))
        } else {
            Some(0.0)
        }
    }
}

pub fn pareto_frac_cdf(p: &ParetoParams, y: f64) -> Result<f64> {
    check_unit(y)?;
    Ok(p.frac_cdf(y))
}

/// Density of {Y} for Pareto X. At y = ρ the density jumps; the right limit
/// is returned.
pub fn pareto_frac_pdf(p: &ParetoParams, y: f64) -> Result<f64> {
    check_unit(y)?;
    Ok(p.frac_pdf(y))
}

/// Which integers i to include in Σ_i [F_Y(y+i) − F_Y(i)].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Window {
    /// Inclusive range of integers.
    Range { lo: i64, hi: i64 },
    /// Walk outward from `center` in both directions until three consecutive
    /// terms on each side contribute less than 1e-15.
    Expand { center: i64 },
}

impl Window {
    /// Window from the 1e-14 and 1 − 1e-14 quantiles of Y, padded by one.
    pub fn from_quantiles(q_lo: f64, q_hi: f64) -> Self {
        Window::Range {
            lo: q_lo.floor() as i64 - 1,
            hi: q_hi.ceil() as i64 + 1,
        }
    }
}

const EXPAND_TERM_TOL: f64 = 1e-15;
const EXPAND_RUN: u32 = 3;
const EXPAND_MAX: i64 = 1 << 20;

/// Cdf of {Y} from the cdf of Y: Σ_{i∈ℤ} [F_Y(y+i) − F_Y(i)], truncated to
/// `window`. The result is clamped to [0, 1].
pub fn frac_cdf_from_cdf(f_y: &dyn Fn(f64) -> f64, y: f64, window: Window) -> Result<f64> {
    check_unit(y)?;
    Ok(frac_cdf_sum(f_y, y, window))
}

fn frac_cdf_sum(f_y: &dyn Fn(f64) -> f64, y: f64, window: Window) -> f64 {
    let term = |i: i64| {
        let fi = i as f64;
        f_y(y + fi) - f_y(fi)
    };
    let total = match window {
        Window::Range { lo, hi } => (lo..=hi).map(term).sum::<f64>(),
        Window::Expand { center } => {
            let mut total = term(center);
            for dir in [1i64, -1] {
                let mut run = 0;
                let mut i = center + dir;
                while run < EXPAND_RUN && (i - center).abs() < EXPAND_MAX {
                    let t = term(i);
                    total += t;
                    run = if t.abs() < EXPAND_TERM_TOL { run + 1 } else { 0 };
                    i += dir;
                }
            }
            total
        }
    };
    total.clamp(0.0, 1.0)
}

/// {Y} for an arbitrary Y given through its cdf.
pub struct FromLogCdf<F> {
    base: u32,
    cdf_y: F,
    window: Window,
}

impl<F: Fn(f64) -> f64 + Send + Sync> FromLogCdf<F> {
    pub fn new(base: u32, cdf_y: F, window: Window) -> Result<Self> {
        check_base(base)?;
        Ok(FromLogCdf {
            base,
            cdf_y,
            window,
        })
    }
}

impl<F: Fn(f64) -> f64 + Send + Sync> FracLogDistribution for FromLogCdf<F> {
    fn base(&self) -> u32 {
        self.base
    }

    fn cdf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            0.0
        } else if y >= 1.0 {
            1.0
        } else {
            frac_cdf_sum(&self.cdf_y, y, self.window)
        }
    }
}

/// Cdf of Y = log_b X for Pareto X: 1 − x_m^s b^{−sy} for y ≥ log_b x_m.
pub fn pareto_log_cdf(p: &ParetoParams) -> impl Fn(f64) -> f64 + Send + Sync {
    let (s, ln_b) = (p.s(), p.ln_b());
    let y_min = log_base(p.x_m(), p.base());
    move |y: f64| {
        if y < y_min {
            0.0
        } else {
            -(-s * ln_b * (y - y_min)).exp_m1()
        }
    }
}

/// A cdf of {Y} given as knots (y, F(y)) with linear interpolation; the
/// density is the slope of the segment.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedFracLog {
    base: u32,
    ys: Vec<f64>,
    fs: Vec<f64>,
}

impl TabulatedFracLog {
    /// Knots must have strictly increasing y in [0, 1] and nondecreasing F in
    /// [0, 1]. The endpoints (0, 0) and (1, 1) are added when missing.
    pub fn new(base: u32, knots: &[(f64, f64)]) -> Result<Self> {
        check_base(base)?;
        let mut ys = Vec::with_capacity(knots.len() + 2);
        let mut fs = Vec::with_capacity(knots.len() + 2);
        if knots.first().is_none_or(|k| k.0 > 0.0) {
            ys.push(0.0);
            fs.push(0.0);
        }
        for &(y, f) in knots {
            if !(0.0..=1.0).contains(&y) || !(0.0..=1.0).contains(&f) {
                return Err(Error::invalid(format!("cdf knot ({y}, {f}) outside [0,1]^2")));
            }
            if let (Some(&py), Some(&pf)) = (ys.last(), fs.last()) {
                if y <= py || f < pf {
                    return Err(Error::invalid(format!(
                        "cdf knots must increase in y and not decrease in F at ({y}, {f})"
                    )));
                }
            }
            ys.push(y);
            fs.push(f);
        }
        if ys.last().is_some_and(|&y| y < 1.0) {
            ys.push(1.0);
            fs.push(1.0);
        }
        if ys[0] != 0.0 || fs[0] != 0.0 || *fs.last().unwrap() != 1.0 {
            return Err(Error::invalid("cdf table must start at (0, 0) and end at (1, 1)"));
        }
        Ok(TabulatedFracLog { base, ys, fs })
    }

    fn segment(&self, y: f64) -> usize {
        // Index i with ys[i] <= y < ys[i+1].
        self.ys.partition_point(|&k| k <= y).saturating_sub(1).min(self.ys.len() - 2)
    }
}

impl FracLogDistribution for TabulatedFracLog {
    fn base(&self) -> u32 {
        self.base
    }

    fn cdf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if y >= 1.0 {
            return 1.0;
        }
        let i = self.segment(y);
        let t = (y - self.ys[i]) / (self.ys[i + 1] - self.ys[i]);
        self.fs[i] + t * (self.fs[i + 1] - self.fs[i])
    }

    fn pdf(&self, y: f64) -> Option<f64> {
        if !(0.0..1.0).contains(&y) {
            return Some(0.0);
        }
        let i = self.segment(y);
        Some((self.fs[i + 1] - self.fs[i]) / (self.ys[i + 1] - self.ys[i]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn benford_cdf_is_identity() {
        assert_eq!(benford_frac_cdf(0.0).unwrap(), 0.0);
        assert_eq!(benford_frac_cdf(0.25).unwrap(), 0.25);
        assert_eq!(benford_frac_cdf(0.999).unwrap(), 0.999);
        assert!(benford_frac_cdf(1.0).is_err());
        assert!(benford_frac_cdf(-0.1).is_err());
    }

    #[test]
    fn pareto_cdf_reference_value() {
        let p = ParetoParams::from_rho(1.0, 0.0, 10).unwrap();
        // 10^-1 (1 - 10^-0.5)/(1 - 10^-1) + (1 - 10^-0.5)
        let v = pareto_frac_cdf(&p, 0.5).unwrap();
        assert!((v - 0.759_746_926_647_957_9).abs() < 1e-14, "{v}");
    }

    #[test]
    fn pareto_cdf_limits() {
        for (s, rho) in [(1.0, 0.0), (0.5, 0.3), (2.5, 0.9), (1.5, 0.48)] {
            let p = ParetoParams::from_rho(s, rho, 10).unwrap();
            assert!((pareto_frac_cdf(&p, 1.0 - 1e-9).unwrap() - 1.0).abs() < 1e-8);
            assert!(pareto_frac_cdf(&p, 0.0).unwrap().abs() < 1e-15);
        }
        let near_benford = ParetoParams::from_rho(1e-6, 0.7, 10).unwrap();
        assert!((pareto_frac_cdf(&near_benford, 0.3).unwrap() - 0.3).abs() < 1e-4);
    }

    #[test]
    fn pareto_pdf_values() {
        let p = ParetoParams::from_rho(1.0, 0.3, 10).unwrap();
        let v = pareto_frac_pdf(&p, 0.5).unwrap();
        assert!((v - 1.614_258_861_905_78).abs() < 1e-12, "{v}");
        let h = 1e-6;
        let fd = (p.cdf(0.5 + h) - p.cdf(0.5 - h)) / (2.0 * h);
        assert!((fd - v).abs() < 1e-6);
        let flat = ParetoParams::from_rho(1e-6, 0.0, 10).unwrap();
        assert!((pareto_frac_pdf(&flat, 0.5).unwrap() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn pareto_pdf_integrates_to_one() {
        let p = ParetoParams::from_rho(1.3, 0.37, 10).unwrap();
        // Midpoint rule on either side of the jump at rho.
        let n = 200_000;
        let mut total = 0.0;
        for (a, b) in [(0.0, p.rho()), (p.rho(), 1.0)] {
            let h = (b - a) / n as f64;
            for i in 0..n {
                total += p.frac_pdf(a + (i as f64 + 0.5) * h) * h;
            }
        }
        assert!((total - 1.0).abs() < 1e-8, "{total}");
    }

    #[test]
    fn rho_snaps_on_exact_powers() {
        let p = ParetoParams::from_xmin(1.0, 1000.0, 10).unwrap();
        assert_eq!(p.rho(), 0.0);
        let p = ParetoParams::from_xmin(1.0, 1e-3, 10).unwrap();
        assert_eq!(p.rho(), 0.0);
        let p = ParetoParams::from_xmin(1.0, 8.0, 2).unwrap();
        assert_eq!(p.rho(), 0.0);
        let p = ParetoParams::from_xmin(1.0, 3.0, 10).unwrap();
        assert!((p.rho() - 3f64.log10()).abs() < 1e-15);
        let p = ParetoParams::from_xmin(1.0, 0.05, 10).unwrap();
        assert!((p.rho() - (0.05f64.log10() + 2.0)).abs() < 1e-14);
    }

    #[test]
    fn params_validation() {
        assert!(ParetoParams::from_rho(0.0, 0.5, 10).is_err());
        assert!(ParetoParams::from_rho(1.0, 1.0, 10).is_err());
        assert!(ParetoParams::from_rho(1.0, 0.5, 1).is_err());
        assert!(ParetoParams::from_xmin(1.0, -2.0, 10).is_err());
    }

    #[test]
    fn generic_uniform_log_cdfs() {
        let u01 = |y: f64| y.clamp(0.0, 1.0);
        let v = frac_cdf_from_cdf(&u01, 0.4, Window::Range { lo: -2, hi: 2 }).unwrap();
        assert!((v - 0.4).abs() < 1e-15);
        let u03 = |y: f64| (y / 3.0).clamp(0.0, 1.0);
        let v = frac_cdf_from_cdf(&u03, 0.5, Window::Expand { center: 1 }).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        assert!(frac_cdf_from_cdf(&u03, 1.0, Window::Expand { center: 0 }).is_err());
    }

    #[test]
    fn generic_matches_pareto_closed_form() {
        let p = ParetoParams::from_xmin(1.0, 1.0, 10).unwrap();
        let f = pareto_log_cdf(&p);
        let v = frac_cdf_from_cdf(&f, 0.3, Window::Expand { center: 0 }).unwrap();
        assert!((v - pareto_frac_cdf(&p, 0.3).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn tabulated_cdf() {
        let t = TabulatedFracLog::new(10, &[(0.5, 0.25)]).unwrap();
        assert_eq!(t.cdf(0.25), 0.125);
        assert_eq!(t.cdf(0.75), 0.625);
        assert_eq!(t.pdf(0.1), Some(0.5));
        assert_eq!(t.pdf(0.9), Some(1.5));
        assert!(TabulatedFracLog::new(10, &[(0.5, 0.6), (0.4, 0.7)]).is_err());
        assert!(TabulatedFracLog::new(10, &[(0.5, 0.6), (0.7, 0.5)]).is_err());
    }
}
