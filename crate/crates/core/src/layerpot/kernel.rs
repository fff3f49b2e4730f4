use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{hankel1_with_j, FsKind, FundamentalSolution, EULER_GAMMA};

/// Planar kernel `η(|x|)` of a fundamental solution together with the
/// pieces needed for the logarithmic quadrature split.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PlaneKernel {
    k: Option<Complex64>,
}

/// `1/(4i)`: the radiating normalization in the plane.
const C2: Complex64 = Complex64::new(0.0, -0.25);

impl PlaneKernel {
    pub fn new(fs: &FundamentalSolution) -> Result<Self> {
        if fs.dim() != 2 {
            return Err(Error::InvalidArgument(format!("layer potentials are planar, got n = {}", fs.dim())));
        }
        match fs.kind() {
            FsKind::Laplace => Ok(PlaneKernel { k: None }),
            FsKind::HelmholtzRadiating { k } => Ok(PlaneKernel { k: Some(k) }),
            FsKind::HelmholtzGeneral { .. } => {
                Err(Error::InvalidArgument("layer operators need the radiating fundamental solution".into()))
            }
        }
    }

    /// `(η, η′, η″)` at `r > 0`.
    pub fn profile(&self, r: f64) -> Result<(Complex64, Complex64, Complex64)> {
        match self.k {
            None => Ok((
                Complex64::from(r.ln() / (2.0 * PI)),
                Complex64::from(1.0 / (2.0 * PI * r)),
                Complex64::from(-1.0 / (2.0 * PI * r * r)),
            )),
            Some(k) => {
                let z = k * r;
                let (h0, _) = hankel1_with_j(0.0, z)?;
                let (h1, _) = hankel1_with_j(1.0, z)?;
                let d1 = -k * C2 * h1;
                let d2 = -k * k * C2 * h0 + k * C2 * h1 / r;
                Ok((C2 * h0, d1, d2))
            }
        }
    }

    /// `(η(r), P(r))` with `η = P ln r + smooth`.
    pub fn single_split(&self, r: f64) -> Result<(Complex64, Complex64)> {
        match self.k {
            None => Ok((Complex64::from(r.ln() / (2.0 * PI)), Complex64::from(1.0 / (2.0 * PI)))),
            Some(k) => {
                let (h0, j0) = hankel1_with_j(0.0, k * r)?;
                Ok((C2 * h0, j0 / (2.0 * PI)))
            }
        }
    }

    /// `(η′(r), Q(r))` with `−η′(r)/r = Q(r) ln r + smooth`.
    pub fn double_split(&self, r: f64) -> Result<(Complex64, Complex64)> {
        match self.k {
            None => Ok((Complex64::from(1.0 / (2.0 * PI * r)), Complex64::from(0.0))),
            Some(k) => {
                let (h1, j1) = hankel1_with_j(1.0, k * r)?;
                Ok((-k * C2 * h1, k * j1 / (2.0 * PI * r)))
            }
        }
    }

    /// Limit of `η(r) − ln r/(2π)` as `r → 0`.
    pub fn single_regular_part(&self) -> Complex64 {
        match self.k {
            None => Complex64::from(0.0),
            Some(k) => C2 + ((k / 2.0).ln() + EULER_GAMMA) / (2.0 * PI),
        }
    }
}
