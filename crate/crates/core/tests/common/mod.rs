#![allow(dead_code)]

use helmholtz_bie::geometry::{make_boundary, Boundary, BoundarySpec, Point};
use helmholtz_bie::solver::PointSample;
use helmholtz_bie::specfun::FundamentalSolution;
use num_complex::Complex64;

pub fn c(x: f64) -> Complex64 {
    Complex64::from(x)
}

pub fn circle(n: usize) -> Boundary {
    make_boundary(&BoundarySpec::Circle { center: [0.0, 0.0], radius: 1.0 }, n).unwrap()
}

pub fn kite(n: usize) -> Boundary {
    make_boundary(&BoundarySpec::Kite { center: [0.0, 0.0], scale: 1.0 }, n).unwrap()
}

pub fn annulus(n: usize) -> Boundary {
    make_boundary(&BoundarySpec::Annulus { center: [0.0, 0.0], r_in: 0.5, r_out: 1.0 }, n).unwrap()
}

/// `x ↦ S̃(x − z)` for the radiating planar fundamental solution.
pub fn point_source(k: Complex64, z: Point) -> impl Fn(Point) -> PointSample + Sync {
    let fs = FundamentalSolution::radiating(2, k).unwrap();
    move |x: Point| {
        let d = [x[0] - z[0], x[1] - z[1]];
        let r = d[0].hypot(d[1]);
        let value = fs.radial_value(r).unwrap();
        let d1 = fs.radial_derivative(r).unwrap();
        PointSample { value, gradient: [d1 * d[0] / r, d1 * d[1] / r], laplacian: -k * k * value }
    }
}

/// Complex conjugate of [`point_source`] (an incoming wave for real k).
pub fn incoming_source(k: f64, z: Point) -> impl Fn(Point) -> PointSample + Sync {
    let out = point_source(c(k), z);
    move |x: Point| {
        let s = out(x);
        PointSample {
            value: s.value.conj(),
            gradient: [s.gradient[0].conj(), s.gradient[1].conj()],
            laplacian: s.laplacian.conj(),
        }
    }
}

/// `e^{ik d·x}`.
pub fn plane_wave(k: Complex64, d: [f64; 2]) -> impl Fn(Point) -> PointSample + Sync {
    move |x: Point| {
        let value = (Complex64::i() * k * (d[0] * x[0] + d[1] * x[1])).exp();
        let g = Complex64::i() * k * value;
        PointSample { value, gradient: [g * d[0], g * d[1]], laplacian: -k * k * value }
    }
}

pub fn normal_trace(b: &Boundary, u: &dyn Fn(Point) -> PointSample) -> Vec<Complex64> {
    b.points
        .iter()
        .zip(&b.normals)
        .map(|(&p, nu)| {
            let s = u(p);
            s.gradient[0] * nu[0] + s.gradient[1] * nu[1]
        })
        .collect()
}

/// 5-point finite-difference `(Δ + k²)u / |u|`-type relative residual.
pub fn fd_helmholtz_residual(u: &dyn Fn(Point) -> Complex64, k: Complex64, x: Point, h: f64) -> f64 {
    let c0 = u(x);
    let lap = (u([x[0] + h, x[1]]) + u([x[0] - h, x[1]]) + u([x[0], x[1] + h]) + u([x[0], x[1] - h]) - 4.0 * c0) / (h * h);
    (lap + k * k * c0).norm() / (k * k * c0).norm().max((k * k).norm() * 1e-3)
}
