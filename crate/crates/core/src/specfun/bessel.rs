//! Bessel, Neumann and first Hankel functions of integer and half-integer
//! order, built on the entire series for moderate arguments and on the
//! Hankel asymptotic expansion beyond `|z| = 30`.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::series::{check_order, j_sharp, n_sharp, EntireSeriesParams};
use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Above this modulus the asymptotic expansion replaces the series.
pub const SERIES_RADIUS: f64 = 30.0;

/// Combining `J + iN` in f64 loses a factor `e^{2 Im z}`; past this modulus
/// the asymptotic expansion is already accurate to ~1e-15 and takes over
/// when `Im z` is large enough for that loss to matter.
const DAMPED_RADIUS: f64 = 17.0;
const DAMPED_IM: f64 = 3.0;

fn use_asymptotic(z: Complex64) -> bool {
    let r = z.norm();
    r > SERIES_RADIUS || (r > DAMPED_RADIUS && z.im > DAMPED_IM)
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub(crate) fn check_cut(z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite argument {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::BranchCut(format!("{z}")));
    }
    Ok(())
}

fn is_integer(nu: f64) -> bool {
    nu == nu.round()
}

/// `J_ν(z) = z^ν J♯_ν(z²)` with the principal power.
pub fn bessel_j(nu: f64, z: Complex64) -> Result<Complex64> {
    check_cut(z)?;
    check_order(nu)?;
    if z.norm() > SERIES_RADIUS {
        let (h1, h2) = asymptotic_pair(nu, z);
        return Ok(0.5 * (h1 + h2));
    }
    let js = j_sharp(nu, z * z, &EntireSeriesParams::new(nu))?;
    Ok((nu * z.ln()).exp() * js)
}

/// Neumann function `N_ν` (Bessel function of the second kind) for integer `ν ≥ 0`.
pub fn neumann_n(nu: u32, z: Complex64) -> Result<Complex64> {
    check_cut(z)?;
    if z.norm() > SERIES_RADIUS {
        let (h1, h2) = asymptotic_pair(nu as f64, z);
        return Ok((h1 - h2) / (2.0 * I));
    }
    Ok(series_jn(nu, z)?.1)
}

/// `(J_ν(z), N_ν(z))` from the entire series.
fn series_jn(nu: u32, z: Complex64) -> Result<(Complex64, Complex64)> {
    let nuf = nu as f64;
    let z2 = z * z;
    let p = EntireSeriesParams::new(nuf);
    let log_z = z.ln();
    let j = (nuf * log_z).exp() * j_sharp(nuf, z2, &p)?;
    let ns = n_sharp(nu, z2, &p)?;
    let n = (2.0 / PI) * (log_z - 2f64.ln() + EULER_GAMMA) * j + (-nuf * log_z).exp() * ns;
    Ok((j, n))
}

/// First Hankel function `H⁽¹⁾_ν(z) = J_ν(z) + i N_ν(z)`.
///
/// Integer orders use the entire series (or the asymptotic expansion for
/// `|z| > 30`); half-integer orders use the closed forms of `H⁽¹⁾_{±1/2}`
/// and upward recurrence.
pub fn hankel1(nu: f64, z: Complex64) -> Result<Complex64> {
    Ok(hankel1_with_j(nu, z)?.0)
}

/// `(H⁽¹⁾_ν(z), J_ν(z))`; the kernel split in the Nyström assembly needs both.
pub fn hankel1_with_j(nu: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
    check_cut(z)?;
    check_order(nu)?;
    if is_integer(nu) {
        if use_asymptotic(z) {
            let (h1, h2) = asymptotic_pair(nu, z);
            return Ok((h1, 0.5 * (h1 + h2)));
        }
        let (j, n) = series_jn(nu as u32, z)?;
        return Ok((j + I * n, j));
    }
    if nu < -0.5 {
        return Err(Error::InvalidArgument(format!("half-integer order {nu} below -1/2")));
    }
    let h = hankel1_half_integer(nu, z);
    let j = bessel_j(nu, z)?;
    Ok((h, j))
}

/// `H⁽¹⁾_ν` for `ν ∈ {−1/2, 1/2, 3/2, …}` by upward recurrence from the
/// closed forms `H_{−1/2}(z) = √(2/(πz)) e^{iz}`, `H_{1/2}(z) = −i √(2/(πz)) e^{iz}`.
fn hankel1_half_integer(nu: f64, z: Complex64) -> Complex64 {
    let base = (2.0 / (PI * z)).sqrt() * (I * z).exp();
    let mut prev = base; // order −1/2
    let mut cur = -I * base; // order 1/2
    if nu < 0.0 {
        return prev;
    }
    let mut order = 0.5;
    while order < nu {
        let next = cur * (2.0 * order) / z - prev;
        prev = cur;
        cur = next;
        order += 1.0;
    }
    cur
}

/// Asymptotic expansions of `(H⁽¹⁾_ν(z), H⁽²⁾_ν(z))` for large `|z|`,
/// valid for `0 ≤ arg z < π`.
fn asymptotic_pair(nu: f64, z: Complex64) -> (Complex64, Complex64) {
    let mu = 4.0 * nu * nu;
    let omega = z - nu * FRAC_PI_2 - FRAC_PI_4;
    let pref = (2.0 / (PI * z)).sqrt();
    let zinv = 1.0 / z;

    let mut s1 = Complex64::new(1.0, 0.0);
    let mut s2 = Complex64::new(1.0, 0.0);
    let mut a = Complex64::new(1.0, 0.0); // a_m(ν) / z^m
    let mut last = f64::INFINITY;
    for m in 1..80 {
        let odd = (2 * m - 1) as f64;
        a *= zinv * ((mu - odd * odd) / (8.0 * m as f64));
        let mag = a.norm();
        if mag > last || mag < 1e-17 {
            break;
        }
        last = mag;
        let ip = I.powi(m);
        s1 += ip * a;
        s2 += ip.conj() * a;
    }
    (pref * (I * omega).exp() * s1, pref * (-I * omega).exp() * s2)
}
