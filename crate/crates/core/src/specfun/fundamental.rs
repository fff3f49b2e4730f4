//! Radial fundamental solutions of `Δ + k²` (and of `Δ`) in `ℝⁿ`.
//!
//! Conventions: the fundamental solution `S` satisfies `ΔS + k²S = δ`, so
//! in two dimensions the Laplace kernel is `(1/2π) ln|x|` and the
//! radiating Helmholtz kernel is `(1/(4i)) H⁽¹⁾₀(k|x|)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::bessel::{check_cut, hankel1, EULER_GAMMA};
use super::series::{gamma_half_integer, j_sharp, n_sharp, EntireSeriesParams};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Which member of the radial family is meant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FsKind {
    Laplace,
    /// The outgoing choice `S̃_{n,k;r}`.
    HelmholtzRadiating { k: Complex64 },
    /// `S̃_{n,k,aₙ}` with an arbitrary free constant.
    HelmholtzGeneral { k: Complex64, a_n: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalSolution {
    n: usize,
    kind: FsKind,
}

/// The constants `bₙ`, `aₙ` (radiating choice) and `Cₙ` of the Hankel form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiationConstants {
    pub b_n: Complex64,
    pub a_n: Complex64,
    pub c_n: Complex64,
}

/// `ηₙ(ρ)` and its first three derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProfile {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    pub d3: Complex64,
}

fn check_wavenumber(k: Complex64) -> Result<()> {
    check_cut(k)?;
    if k.im < 0.0 {
        return Err(Error::InvalidArgument(format!("wavenumber {k} has negative imaginary part")));
    }
    Ok(())
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension must be at least 2, got {n}")));
    }
    Ok(())
}

/// `(bₙ, aₙ, Cₙ)` for dimension `n` and wavenumber `k`.
pub fn constants(n: usize, k: Complex64) -> Result<RadiationConstants> {
    check_dimension(n)?;
    check_cut(k)?;
    let nf = n as f64;
    let magnitude = PI.powf(1.0 - nf / 2.0) * 2f64.powf(-1.0 - nf / 2.0);
    let nu = (nf - 2.0) / 2.0;
    let (b_n, a_n) = if n.is_multiple_of(2) {
        let b = Complex64::new(magnitude, 0.0);
        (b, -I * b)
    } else {
        let sign = if ((n - 1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        let b = Complex64::new(sign * magnitude, 0.0);
        (b, -(-I * nu * PI).exp() * b)
    };
    let c_n = (nu * k.ln()).exp() / (I * 4.0 * (2.0 * PI).powf(nu));
    Ok(RadiationConstants { b_n, a_n, c_n })
}

/// Surface measure of the unit sphere in `ℝⁿ`.
pub fn unit_sphere_measure(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma_half_integer(n as f64 / 2.0)
}

impl FundamentalSolution {
    pub fn laplace(n: usize) -> Result<Self> {
        check_dimension(n)?;
        Ok(Self { n, kind: FsKind::Laplace })
    }

    pub fn radiating(n: usize, k: Complex64) -> Result<Self> {
        check_dimension(n)?;
        check_wavenumber(k)?;
        Ok(Self { n, kind: FsKind::HelmholtzRadiating { k } })
    }

    pub fn general(n: usize, k: Complex64, a_n: Complex64) -> Result<Self> {
        check_dimension(n)?;
        check_wavenumber(k)?;
        Ok(Self { n, kind: FsKind::HelmholtzGeneral { k, a_n } })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> FsKind {
        self.kind
    }

    pub fn wavenumber(&self) -> Option<Complex64> {
        match self.kind {
            FsKind::Laplace => None,
            FsKind::HelmholtzRadiating { k } | FsKind::HelmholtzGeneral { k, .. } => Some(k),
        }
    }

    pub fn is_radiating(&self) -> bool {
        matches!(self.kind, FsKind::HelmholtzRadiating { .. })
    }

    /// The free constant in use: the radiating one, or the user's.
    fn free_constant(&self, k: Complex64) -> Result<Complex64> {
        match self.kind {
            FsKind::HelmholtzGeneral { a_n, .. } => Ok(a_n),
            _ => Ok(constants(self.n, k)?.a_n),
        }
    }

    fn radius(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r == 0.0 {
            return Err(Error::Singularity);
        }
        Ok(r)
    }

    /// `S(x)`: the Hankel form for the radiating kernel, the entire-series
    /// form otherwise.
    pub fn value(&self, x: &[f64]) -> Result<Complex64> {
        let r = self.radius(x)?;
        self.radial_value(r)
    }

    pub fn radial_value(&self, r: f64) -> Result<Complex64> {
        match self.kind {
            FsKind::Laplace => Ok(Complex64::new(self.laplace_radial(r), 0.0)),
            FsKind::HelmholtzRadiating { .. } => self.radial_value_hankel(r),
            FsKind::HelmholtzGeneral { .. } => self.radial_value_series(r),
        }
    }

    fn laplace_radial(&self, r: f64) -> f64 {
        let s_n = unit_sphere_measure(self.n);
        if self.n == 2 {
            r.ln() / s_n
        } else {
            r.powi(2 - self.n as i32) / ((2.0 - self.n as f64) * s_n)
        }
    }

    /// Evaluation through `J♯` and `N♯` only.
    pub fn value_series(&self, x: &[f64]) -> Result<Complex64> {
        let r = self.radius(x)?;
        self.radial_value_series(r)
    }

    fn radial_value_series(&self, r: f64) -> Result<Complex64> {
        let k = match self.wavenumber() {
            None => return Ok(Complex64::new(self.laplace_radial(r), 0.0)),
            Some(k) => k,
        };
        let n = self.n;
        let nu = (n as f64 - 2.0) / 2.0;
        let consts = constants(n, k)?;
        let (b, a) = (consts.b_n, self.free_constant(k)?);
        let z = k * k * (r * r);
        let r_pow = r.powi(2 - n as i32);
        if n.is_multiple_of(2) {
            let order = (n - 2) / 2;
            let p = EntireSeriesParams::new(nu);
            let js = j_sharp(nu, z, &p)?;
            let ns = n_sharp(order as u32, z, &p)?;
            let log_part = a + 2.0 * b / PI * (k.ln() - 2f64.ln() + EULER_GAMMA) + 2.0 * b / PI * r.ln();
            Ok(k.powi(n as i32 - 2) * log_part * js + b * r_pow * ns)
        } else {
            let jp = j_sharp(nu, z, &EntireSeriesParams::new(nu))?;
            let jm = j_sharp(-nu, z, &EntireSeriesParams::new(-nu))?;
            Ok(a * k.powi(n as i32 - 2) * jp + b * r_pow * jm)
        }
    }

    /// Evaluation through `Cₙ |x|^{−(n−2)/2} H⁽¹⁾_{(n−2)/2}(k|x|)`.
    ///
    /// For a non-radiating free constant the difference to the radiating
    /// kernel, a multiple of `J♯`, is added.
    pub fn value_hankel(&self, x: &[f64]) -> Result<Complex64> {
        let r = self.radius(x)?;
        match self.kind {
            FsKind::HelmholtzGeneral { .. } => {
                let k = self.wavenumber().unwrap();
                let radiating = Self::radiating(self.n, k)?.radial_value_hankel(r)?;
                Ok(radiating + self.free_constant_shift(k, r)?)
            }
            _ => self.radial_value(r),
        }
    }

    /// `(aₙ − aₙ^rad) k^{n−2} J♯_ν(k²r²)`
    fn free_constant_shift(&self, k: Complex64, r: f64) -> Result<Complex64> {
        let nu = (self.n as f64 - 2.0) / 2.0;
        let delta = self.free_constant(k)? - constants(self.n, k)?.a_n;
        Ok(delta * k.powi(self.n as i32 - 2) * j_sharp(nu, k * k * (r * r), &EntireSeriesParams::new(nu))?)
    }

    fn radial_value_hankel(&self, r: f64) -> Result<Complex64> {
        let k = match self.wavenumber() {
            None => return Ok(Complex64::new(self.laplace_radial(r), 0.0)),
            Some(k) => k,
        };
        let nu = (self.n as f64 - 2.0) / 2.0;
        let c = constants(self.n, k)?.c_n;
        Ok(c * r.powf(-nu) * hankel1(nu, k * r)?)
    }

    /// `ηₙ(ρ)` and derivatives for the radiating kernel, from
    /// `d/dρ (ρ^{−ν} H_ν(kρ)) = −k ρ^{−ν} H_{ν+1}(kρ)`.
    pub fn radial_profile(&self, rho: f64) -> Result<RadialProfile> {
        if !(rho > 0.0) {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {rho}")));
        }
        let k = match self.kind {
            FsKind::HelmholtzRadiating { k } => k,
            _ => {
                return Err(Error::InvalidArgument(
                    "radial profile is defined for the radiating kernel".into(),
                ))
            }
        };
        let nu = (self.n as f64 - 2.0) / 2.0;
        let c = constants(self.n, k)?.c_n;
        let z = k * rho;
        let h0 = hankel1(nu, z)?;
        let h1 = hankel1(nu + 1.0, z)?;
        let h2 = hankel1(nu + 2.0, z)?;
        let h3 = hankel1(nu + 3.0, z)?;
        let rn = rho.powf(-nu);
        let rn1 = rn / rho;
        Ok(RadialProfile {
            value: c * rn * h0,
            d1: -k * rn * c * h1,
            d2: -k * rn1 * c * h1 + k * k * rn * c * h2,
            d3: 3.0 * k * k * rn1 * c * h2 - k * k * k * rn * c * h3,
        })
    }

    /// `∂S/∂ρ` at radius `ρ`, for every kind.
    pub fn radial_derivative(&self, r: f64) -> Result<Complex64> {
        match self.kind {
            FsKind::Laplace => {
                Ok(Complex64::new(1.0 / (unit_sphere_measure(self.n) * r.powi(self.n as i32 - 1)), 0.0))
            }
            FsKind::HelmholtzRadiating { .. } => Ok(self.radial_profile(r)?.d1),
            FsKind::HelmholtzGeneral { k, .. } => {
                let radiating = Self::radiating(self.n, k)?.radial_profile(r)?.d1;
                // d/dρ J♯_ν(k²ρ²) = −k²ρ J♯_{ν+1}(k²ρ²)
                let nu = (self.n as f64 - 2.0) / 2.0;
                let delta = self.free_constant(k)? - constants(self.n, k)?.a_n;
                let jn1 = j_sharp(nu + 1.0, k * k * (r * r), &EntireSeriesParams::new(nu + 1.0))?;
                Ok(radiating - delta * k.powi(self.n as i32) * r * jn1)
            }
        }
    }

    /// `∇S(x) = η′(|x|) x/|x|`.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<Complex64>> {
        let r = self.radius(x)?;
        let d = self.radial_derivative(r)?;
        Ok(x.iter().map(|xi| d * (xi / r)).collect())
    }

    /// The seven weighted quantities whose suprema over `ρ ≥ 1` are finite
    /// for the radiating kernel, in the order `|η|, |η′|, |η′−ikη|, |η″|,
    /// |η″−ikη′|, |η‴|, |η‴−ikη″|`, each multiplied by
    /// `ρ^{(n∓1)/2} e^{Im k ρ}` (the `+` weight for the radiation combinations).
    pub fn radiation_weights(&self, rho: f64) -> Result<[f64; 7]> {
        let p = self.radial_profile(rho)?;
        let k = self.wavenumber().unwrap();
        let nf = self.n as f64;
        let damp = (k.im * rho).exp();
        let w_lo = rho.powf((nf - 1.0) / 2.0) * damp;
        let w_hi = rho.powf((nf + 1.0) / 2.0) * damp;
        Ok([
            w_lo * p.value.norm(),
            w_lo * p.d1.norm(),
            w_hi * (p.d1 - I * k * p.value).norm(),
            w_lo * p.d2.norm(),
            w_hi * (p.d2 - I * k * p.d1).norm(),
            w_lo * p.d3.norm(),
            w_hi * (p.d3 - I * k * p.d2).norm(),
        ])
    }
}
