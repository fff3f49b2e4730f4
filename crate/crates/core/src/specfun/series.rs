//! Entire ascending series `J♯_ν` and `N♯_ν`.
//!
//! Both are entire functions of `z`; the Bessel and Neumann functions of a
//! positive argument `ζ` are recovered by substituting `z = ζ²`.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::dd::{CDd, Dd};
use crate::error::{Error, Result};

/// Truncation control for the entire series.
///
/// Only integer and half-integer orders are supported; that is every order
/// the fundamental solutions need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntireSeriesParams {
    pub nu: f64,
    pub terms_max: usize,
    pub tol: f64,
}

impl EntireSeriesParams {
    pub const DEFAULT_TOL: f64 = 1e-15;
    pub const DEFAULT_TERMS_MAX: usize = 200;

    pub fn new(nu: f64) -> Self {
        Self { nu, terms_max: Self::DEFAULT_TERMS_MAX, tol: Self::DEFAULT_TOL }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("series tolerance must be positive, got {}", self.tol)));
        }
        if self.terms_max < 8 {
            return Err(Error::InvalidArgument(format!("terms_max must be at least 8, got {}", self.terms_max)));
        }
        check_order(self.nu)
    }
}

pub(crate) fn check_order(nu: f64) -> Result<()> {
    let twice = 2.0 * nu;
    if !nu.is_finite() || twice != twice.round() {
        return Err(Error::InvalidArgument(format!("order {nu} is not an integer or half-integer")));
    }
    if nu < 0.0 && nu == nu.round() {
        return Err(Error::InvalidArgument(format!("order {nu} is a negative integer")));
    }
    Ok(())
}

/// Gamma function at integers and half-integers (poles excluded).
pub(crate) fn gamma_half_integer(x: f64) -> f64 {
    debug_assert!((2.0 * x).fract() == 0.0);
    if x == x.round() {
        assert!(x > 0.0, "gamma pole at {x}");
        return (1..x as u64).fold(1.0, |acc, m| acc * m as f64);
    }
    let mut g = PI.sqrt();
    let mut a = 0.5;
    if x > 0.0 {
        while a < x {
            g *= a;
            a += 1.0;
        }
    } else {
        while a > x {
            a -= 1.0;
            g /= a;
        }
    }
    g
}

/// Accumulates `Σ t_j c_j` where `t_j = t_{j-1}·(−z/4)/(j(j+ν))`, `t_0 = 1`,
/// with weights `c_j` supplied by `coeff`. Returns the double-double sum.
fn ascending_sum(
    nu: f64,
    z: Complex64,
    p: &EntireSeriesParams,
    mut coeff: impl FnMut(usize) -> Dd,
) -> Result<CDd> {
    let w = -z * 0.25;
    let mut term = CDd::ONE;
    let mut sum = term.mul_dd(coeff(0));
    let mut peak = sum.norm_approx().max(1.0);
    // terms grow while j(j+ν) < |z|/4
    let j_peak = (0.5 * z.norm().sqrt()).ceil() as usize + 1;
    let mut last = f64::INFINITY;
    for j in 1..p.terms_max {
        term = term.mul_c64(w).div_f64(j as f64 * (j as f64 + nu));
        let contrib = term.mul_dd(coeff(j));
        sum = sum.add(contrib);
        let mag = contrib.norm_approx().max(term.norm_approx());
        peak = peak.max(mag);
        last = mag;
        if j >= j_peak && (mag <= p.tol * sum.norm_approx() || mag <= 1e-32 * peak) {
            return Ok(sum);
        }
    }
    Err(Error::Truncation { terms: p.terms_max, last_term: last })
}

/// `J♯_ν(z) = Σ_j (−1)^j z^j (1/2)^{2j+ν} / (Γ(j+1) Γ(j+ν+1))`.
///
/// For `z ∉ (−∞, 0]`, `J♯_ν(z²) = z^{−ν} J_ν(z)`.
pub fn j_sharp(nu: f64, z: Complex64, p: &EntireSeriesParams) -> Result<Complex64> {
    p.validate()?;
    check_order(nu)?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument("non-finite argument".into()));
    }
    let sum = ascending_sum(nu, z, p, |_| Dd::from_f64(1.0))?;
    let prefactor = 0.5f64.powf(nu) / gamma_half_integer(nu + 1.0);
    Ok(sum.to_c64() * prefactor)
}

/// `N♯_ν(z)` for integer `ν ≥ 0`, the entire part of the Neumann function:
///
/// `N_ν(ζ) = (2/π)(log ζ − log 2 + γ) J_ν(ζ) + ζ^{−ν} N♯_ν(ζ²)`.
pub fn n_sharp(nu: u32, z: Complex64, p: &EntireSeriesParams) -> Result<Complex64> {
    p.validate()?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument("non-finite argument".into()));
    }
    let nuf = nu as f64;

    // finite part: −(2^ν/π) Σ_{j<ν} (ν−j−1)!/j! (z/4)^j
    let mut finite = Complex64::new(0.0, 0.0);
    let mut zpow = Complex64::new(1.0, 0.0);
    for j in 0..nu {
        let ratio = gamma_half_integer((nu - j) as f64) / gamma_half_integer(j as f64 + 1.0);
        finite += zpow * ratio;
        zpow *= z * 0.25;
    }
    finite *= -(2f64.powi(nu as i32)) / PI;

    // harmonic weights H_j + H_{j+ν}
    let mut h_j = Dd::ZERO;
    let mut h_jnu = (1..=nu).fold(Dd::ZERO, |acc, l| acc.add(Dd::recip_int(l)));
    let sum = ascending_sum(nuf, z, p, |j| {
        if j > 0 {
            h_j = h_j.add(Dd::recip_int(j as u32));
            h_jnu = h_jnu.add(Dd::recip_int(j as u32 + nu));
        }
        h_j.add(h_jnu)
    })?;
    let prefactor = -z.powi(nu as i32) * 0.5f64.powi(nu as i32) / (PI * gamma_half_integer(nuf + 1.0));
    Ok(finite + prefactor * sum.to_c64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(nu: f64) -> EntireSeriesParams {
        EntireSeriesParams::new(nu)
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_half_integer(1.0), 1.0);
        assert_eq!(gamma_half_integer(5.0), 24.0);
        assert_relative_eq!(gamma_half_integer(0.5), PI.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(gamma_half_integer(2.5), 0.75 * PI.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(gamma_half_integer(-0.5), -2.0 * PI.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(gamma_half_integer(-1.5), 4.0 / 3.0 * PI.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn j_sharp_at_origin() {
        let v = j_sharp(0.0, Complex64::new(0.0, 0.0), &p(0.0)).unwrap();
        assert_eq!(v, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn n_sharp_at_origin() {
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(n_sharp(0, z, &p(0.0)).unwrap(), Complex64::new(0.0, 0.0));
        assert_relative_eq!(n_sharp(1, z, &p(1.0)).unwrap().re, -2.0 / PI, max_relative = 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        let z = Complex64::new(1.0, 0.0);
        assert!(j_sharp(-1.0, z, &p(-1.0)).is_err());
        assert!(j_sharp(0.3, z, &p(0.3)).is_err());
        let bad = EntireSeriesParams { nu: 0.0, terms_max: 4, tol: 1e-15 };
        assert!(j_sharp(0.0, z, &bad).is_err());
        let bad = EntireSeriesParams { nu: 0.0, terms_max: 100, tol: 0.0 };
        assert!(j_sharp(0.0, z, &bad).is_err());
    }

    #[test]
    fn truncation_reports_last_term() {
        let short = EntireSeriesParams { nu: 0.0, terms_max: 8, tol: 1e-15 };
        match j_sharp(0.0, Complex64::new(400.0, 0.0), &short) {
            Err(Error::Truncation { terms, last_term }) => {
                assert_eq!(terms, 8);
                assert!(last_term > 1.0);
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }
}
