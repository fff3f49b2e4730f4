use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::kernel::PlaneKernel;
use crate::error::{Error, Result};
use crate::geometry::Boundary;
use crate::specfun::FundamentalSolution;

/// Which boundary integral operator a matrix realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// `V μ(x) = ∫ S(x−y) μ(y) dσ_y`
    Single,
    /// `W μ(x) = ∫ ∂_{ν_y} S(x−y) μ(y) dσ_y`
    Double,
    /// `Wᵗ μ(x) = ∫ ∂_{ν_x} S(x−y) μ(y) dσ_y`
    AdjointDouble,
}

/// Dense Nyström matrix of a boundary operator, acting on nodal values.
#[derive(Debug, Clone)]
pub struct NystromOperator {
    pub kind: OperatorKind,
    pub fs: FundamentalSolution,
    pub boundary: Boundary,
    pub matrix: DMatrix<Complex64>,
}

impl NystromOperator {
    pub fn apply(&self, mu: &[Complex64]) -> Result<Vec<Complex64>> {
        if mu.len() != self.matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: self.matrix.ncols(), got: mu.len() });
        }
        let v = &self.matrix * nalgebra::DVector::from_column_slice(mu);
        Ok(v.as_slice().to_vec())
    }

    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.nrows() == 0
    }
}

/// Weights `R_d` of the trapezoid-type rule for `∫ ln(4 sin²((t−τ)/2)) f(τ) dτ`
/// at equispaced nodes, indexed by `d = (i − j) mod n`.
pub fn log_weights(n: usize) -> Vec<f64> {
    let m = n / 2;
    let mf = m as f64;
    (0..n)
        .map(|d| {
            let s = 2.0 * PI * d as f64 / n as f64;
            let sum: f64 = (1..m).map(|l| (l as f64 * s).cos() / l as f64).sum();
            let parity = if d % 2 == 0 { 1.0 } else { -1.0 };
            -2.0 * PI / mf * sum - PI / (mf * mf) * parity
        })
        .collect()
}

/// Assemble the Nyström matrix of `kind` on `boundary`.
///
/// Same-component blocks use the logarithmic product rule; blocks coupling
/// different components have smooth kernels and use plain trapezoid weights.
pub fn assemble(kind: OperatorKind, fs: &FundamentalSolution, boundary: &Boundary) -> Result<NystromOperator> {
    let ker = PlaneKernel::new(fs)?;
    let base = match kind {
        OperatorKind::AdjointDouble => OperatorKind::Double,
        k => k,
    };
    let n_total = boundary.len();
    let r_logs: Vec<Vec<f64>> = boundary.components().iter().map(|c| log_weights(c.len())).collect();
    let rows: Vec<Vec<Complex64>> =
        (0..n_total).into_par_iter().map(|i| assemble_row(base, &ker, boundary, &r_logs, i)).collect::<Result<_>>()?;
    let mut matrix = DMatrix::from_fn(n_total, n_total, |i, j| rows[i][j]);
    if kind == OperatorKind::AdjointDouble {
        let w = &boundary.weights;
        matrix = DMatrix::from_fn(n_total, n_total, |i, j| matrix[(j, i)] * (w[j] / w[i]));
    }
    Ok(NystromOperator { kind, fs: *fs, boundary: boundary.clone(), matrix })
}

fn assemble_row(
    kind: OperatorKind,
    ker: &PlaneKernel,
    b: &Boundary,
    r_logs: &[Vec<f64>],
    i: usize,
) -> Result<Vec<Complex64>> {
    let ci = b.component_of[i];
    let n = b.components()[ci].len();
    let li = i - b.offsets[ci];
    let h = 2.0 * PI / n as f64;
    let r_log = &r_logs[ci];
    let x = b.points[i];
    let mut row = Vec::with_capacity(b.len());
    for j in 0..b.len() {
        let y = b.points[j];
        let d = [x[0] - y[0], x[1] - y[1]];
        let r = d[0].hypot(d[1]);
        let nu = b.normals[j];
        let sp = b.speeds[j];
        let same = b.component_of[j] == ci;
        let entry = if !same {
            match kind {
                OperatorKind::Single => ker.single_split(r)?.0 * b.weights[j],
                _ => -ker.double_split(r)?.0 * (d[0] * nu[0] + d[1] * nu[1]) / r * b.weights[j],
            }
        } else {
            let lj = j - b.offsets[ci];
            let dd = (li + n - lj) % n;
            if dd == 0 {
                match kind {
                    OperatorKind::Single => {
                        let m1 = sp / (4.0 * PI);
                        let m2 = (ker.single_regular_part() + (sp * sp).ln() / (4.0 * PI)) * sp;
                        r_log[0] * m1 + h * m2
                    }
                    _ => Complex64::from(h * b.curvatures[j] * sp / (4.0 * PI)),
                }
            } else {
                let lg = (4.0 * (PI * dd as f64 / n as f64).sin().powi(2)).ln();
                let (m1, kval) = match kind {
                    OperatorKind::Single => {
                        let (eta, p) = ker.single_split(r)?;
                        (0.5 * p * sp, eta * sp)
                    }
                    _ => {
                        let (d1, q) = ker.double_split(r)?;
                        let ndot = d[0] * nu[0] + d[1] * nu[1];
                        (0.5 * q * ndot * sp, -d1 * ndot / r * sp)
                    }
                };
                r_log[dd] * m1 + h * (kval - m1 * lg)
            }
        };
        row.push(entry);
    }
    Ok(row)
}
