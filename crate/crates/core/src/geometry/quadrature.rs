use std::f64::consts::PI;

use super::boundary::Boundary;
use super::curve::{CurveShape, Orientation, Point};
use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            z = 0.0;
            dp = 1.0;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Tensor-product quadrature over Ω in polar-like coordinates.
#[derive(Debug, Clone)]
pub struct AreaQuadrature {
    pub center: Point,
    pub n_radial: usize,
    pub n_angular: usize,
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

impl AreaQuadrature {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn area(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(Point) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&q, &a)| a * f(q)).sum()
    }
}

/// Area quadrature for a domain star-shaped about `center` (or about the
/// curve's own center when `None`), or for an annulus bounded by two
/// concentric circles.
///
/// Gauss–Legendre in the radial direction, trapezoid in the angle.
pub fn area_quadrature(
    b: &Boundary,
    center: Option<Point>,
    n_radial: usize,
    n_angular: usize,
) -> Result<AreaQuadrature> {
    if n_radial == 0 || n_angular < 3 {
        return Err(Error::InvalidArgument(format!(
            "area quadrature needs n_radial ≥ 1 and n_angular ≥ 3, got {n_radial} and {n_angular}"
        )));
    }
    let comps = b.components();
    match comps {
        [outer] if outer.orientation() == Orientation::Outer => {
            let c = center.unwrap_or_else(|| outer.shape().center());
            star_rule(outer.shape(), c, n_radial, n_angular)
        }
        [a, h] if a.orientation() == Orientation::Outer && h.orientation() == Orientation::Inner => {
            match (a.shape(), h.shape()) {
                (
                    CurveShape::Circle { center: c1, radius: r1 },
                    CurveShape::Circle { center: c2, radius: r2 },
                ) if c1 == c2 && center.is_none_or(|c| c == *c1) => {
                    Ok(annulus_rule(*c1, *r2, *r1, n_radial, n_angular))
                }
                _ => Err(Error::UnsupportedDomain(
                    "area quadrature with a hole needs two concentric circles".into(),
                )),
            }
        }
        _ => Err(Error::UnsupportedDomain(
            "area quadrature supports one star-shaped component or a circular annulus".into(),
        )),
    }
}

fn star_rule(shape: &CurveShape, c: Point, n_radial: usize, n_angular: usize) -> Result<AreaQuadrature> {
    let (gx, gw) = gauss_legendre(n_radial);
    // check star-shapedness on a grid finer than the one we integrate on
    let probe = (8 * n_angular).max(512);
    for j in 0..probe {
        let s = shape.sample(2.0 * PI * j as f64 / probe as f64);
        let cross = (s.x[0] - c[0]) * s.dx[1] - (s.x[1] - c[1]) * s.dx[0];
        if cross <= 0.0 {
            return Err(Error::UnsupportedDomain(format!(
                "domain is not star-shaped about ({}, {})",
                c[0], c[1]
            )));
        }
    }
    let mut points = Vec::with_capacity(n_radial * n_angular);
    let mut weights = Vec::with_capacity(n_radial * n_angular);
    let h = 2.0 * PI / n_angular as f64;
    for j in 0..n_angular {
        let s = shape.sample(h * j as f64);
        let d = [s.x[0] - c[0], s.x[1] - c[1]];
        let jac = d[0] * s.dx[1] - d[1] * s.dx[0];
        for (xi, wi) in gx.iter().zip(&gw) {
            let r = 0.5 * (xi + 1.0);
            points.push([c[0] + r * d[0], c[1] + r * d[1]]);
            weights.push(0.5 * wi * r * jac * h);
        }
    }
    Ok(AreaQuadrature { center: c, n_radial, n_angular, points, weights })
}

fn annulus_rule(c: Point, r_in: f64, r_out: f64, n_radial: usize, n_angular: usize) -> AreaQuadrature {
    let (gx, gw) = gauss_legendre(n_radial);
    let h = 2.0 * PI / n_angular as f64;
    let half = 0.5 * (r_out - r_in);
    let mut points = Vec::with_capacity(n_radial * n_angular);
    let mut weights = Vec::with_capacity(n_radial * n_angular);
    for j in 0..n_angular {
        let (st, ct) = (h * j as f64).sin_cos();
        for (xi, wi) in gx.iter().zip(&gw) {
            let r = r_in + half * (xi + 1.0);
            points.push([c[0] + r * ct, c[1] + r * st]);
            weights.push(half * wi * r * h);
        }
    }
    AreaQuadrature { center: c, n_radial, n_angular, points, weights }
}
