use num_complex::Complex64;

use super::kernel::PlaneKernel;
use crate::error::{Error, Result};
use crate::geometry::{Boundary, Location, Point};
use crate::specfun::FundamentalSolution;

/// Layer potential used to represent a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    SingleLayer,
    DoubleLayer,
}

/// Ω (interior) or the complement of its closure (exterior).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Interior,
    Exterior,
}

impl Side {
    pub fn location(self) -> Location {
        match self {
            Side::Interior => Location::Interior,
            Side::Exterior => Location::Exterior,
        }
    }
}

/// A layer potential with a nodal density, restricted to one side of ∂Ω.
#[derive(Debug, Clone)]
pub struct SolutionField {
    pub fs: FundamentalSolution,
    pub boundary: Boundary,
    pub representation: Representation,
    pub density: Vec<Complex64>,
    pub side: Side,
}

impl SolutionField {
    pub fn new(
        fs: FundamentalSolution,
        boundary: Boundary,
        representation: Representation,
        density: Vec<Complex64>,
        side: Side,
    ) -> Result<Self> {
        if density.len() != boundary.len() {
            return Err(Error::DimensionMismatch { expected: boundary.len(), got: density.len() });
        }
        if density.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidArgument("density has non-finite entries".into()));
        }
        PlaneKernel::new(&fs)?;
        Ok(SolutionField { fs, boundary, representation, density, side })
    }

    pub fn eval(&self, x: Point) -> Result<Complex64> {
        eval_field(self, x)
    }

    pub fn eval_with_gradient(&self, x: Point) -> Result<(Complex64, [Complex64; 2])> {
        self.check_point(x)?;
        layer_potential(&PlaneKernel::new(&self.fs)?, &self.boundary, self.representation, &self.density, x)
    }

    fn check_point(&self, x: Point) -> Result<()> {
        match self.boundary.locate(x) {
            Location::NearBoundary => Err(Error::TooClose(x[0], x[1])),
            loc if loc != self.side.location() => Err(Error::InvalidArgument(format!(
                "point ({}, {}) is not on the {:?} side",
                x[0], x[1], self.side
            ))),
            _ => Ok(()),
        }
    }
}

/// Trapezoid evaluation of the field at `x`; refuses points in the
/// near-boundary band and points on the other side.
pub fn eval_field(sf: &SolutionField, x: Point) -> Result<Complex64> {
    sf.eval_with_gradient(x).map(|(v, _)| v)
}

/// Layer potential and its gradient at `x` by the plain trapezoid rule on
/// the nodes of `b`, regardless of the side. Only accurate a few grid
/// spacings away from the curve.
pub fn evaluate_layer(
    fs: &FundamentalSolution,
    b: &Boundary,
    rep: Representation,
    density: &[Complex64],
    x: Point,
) -> Result<(Complex64, [Complex64; 2])> {
    if density.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: b.len(), got: density.len() });
    }
    if b.locate(x) == Location::NearBoundary {
        return Err(Error::TooClose(x[0], x[1]));
    }
    layer_potential(&PlaneKernel::new(fs)?, b, rep, density, x)
}

pub(crate) fn layer_potential(
    ker: &PlaneKernel,
    b: &Boundary,
    rep: Representation,
    density: &[Complex64],
    x: Point,
) -> Result<(Complex64, [Complex64; 2])> {
    let mut val = Complex64::from(0.0);
    let mut gx = Complex64::from(0.0);
    let mut gy = Complex64::from(0.0);
    for j in 0..b.len() {
        let y = b.points[j];
        let d = [x[0] - y[0], x[1] - y[1]];
        let r = d[0].hypot(d[1]);
        if r == 0.0 {
            return Err(Error::Singularity);
        }
        let (eta, d1, d2) = ker.profile(r)?;
        let c = density[j] * b.weights[j];
        match rep {
            Representation::SingleLayer => {
                val += eta * c;
                let g = d1 / r * c;
                gx += g * d[0];
                gy += g * d[1];
            }
            Representation::DoubleLayer => {
                let nu = b.normals[j];
                let ndot = d[0] * nu[0] + d[1] * nu[1];
                val -= d1 * ndot / r * c;
                let radial = (d2 / r - d1 / (r * r)) * ndot / r;
                let tang = d1 / r;
                gx -= (radial * d[0] + tang * nu[0]) * c;
                gy -= (radial * d[1] + tang * nu[1]) * c;
            }
        }
    }
    Ok((val, [gx, gy]))
}
