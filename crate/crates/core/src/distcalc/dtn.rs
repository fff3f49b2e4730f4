use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Boundary, Point};
use crate::layerpot::{assemble, NearEvaluator, OperatorKind, Representation};
use crate::specfun::FundamentalSolution;

/// Relative singular-value threshold below which the augmented first-kind
/// system is declared singular.
const CAPACITY_TOL: f64 = 1e-12;

/// Interior Dirichlet-to-Neumann map of the Laplacian on nodal values.
///
/// The harmonic extension of `v` is `V[σ] + c` with `(σ, c)` solving
///
/// ```text
/// [ V   1 ] [σ]   [v]
/// [ wᵀ  0 ] [c] = [0]
/// ```
///
/// which stays invertible when the logarithmic capacity of ∂Ω is one (the
/// unit circle). The normal derivative is then `(−½I + Wᵗ)σ`.
#[derive(Debug, Clone)]
pub struct DtNOperator {
    pub boundary: Boundary,
    /// `v ↦ ∂_ν u`
    pub matrix: DMatrix<f64>,
    /// `v ↦ σ`
    density_map: DMatrix<f64>,
    /// `v ↦ c`
    constant_map: DVector<f64>,
}

pub fn build_dtn(boundary: &Boundary) -> Result<DtNOperator> {
    let lap = FundamentalSolution::laplace(2)?;
    let v = assemble(OperatorKind::Single, &lap, boundary)?.matrix.map(|z| z.re);
    let wt = assemble(OperatorKind::AdjointDouble, &lap, boundary)?.matrix.map(|z| z.re);
    let n = boundary.len();
    let mut a = DMatrix::<f64>::zeros(n + 1, n + 1);
    a.view_mut((0, 0), (n, n)).copy_from(&v);
    for i in 0..n {
        a[(i, n)] = 1.0;
        a[(n, i)] = boundary.weights[i];
    }
    let sv = a.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    if smin < CAPACITY_TOL * smax {
        return Err(Error::Capacity(smin / smax));
    }
    let inv = a.lu().try_inverse().ok_or(Error::Capacity(0.0))?;
    let density_map = inv.view((0, 0), (n, n)).into_owned();
    let constant_map = DVector::from_iterator(n, (0..n).map(|j| inv[(n, j)]));
    let mut neumann = wt;
    for i in 0..n {
        neumann[(i, i)] -= 0.5;
    }
    let matrix = &neumann * &density_map;
    Ok(DtNOperator { boundary: boundary.clone(), matrix, density_map, constant_map })
}

impl DtNOperator {
    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.nrows() == 0
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check(v)?;
        Ok(real_apply(&self.matrix, v))
    }

    /// `D_w⁻¹ DTNᵀ D_w μ`: the nodal function whose plain quadrature pairing
    /// with any `v` equals `Σ w μ (DtN v)`.
    pub fn apply_transpose(&self, mu: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check(mu)?;
        let w = &self.boundary.weights;
        let wm: Vec<Complex64> = mu.iter().zip(w).map(|(m, w)| m * w).collect();
        let t = real_apply(&self.matrix.transpose(), &wm);
        Ok(t.iter().zip(w).map(|(x, w)| x / w).collect())
    }

    /// Harmonic extension of nodal data `v`, ready for evaluation at any
    /// point of Ω (including close to ∂Ω).
    pub fn harmonic_extension(&self, v: &[Complex64]) -> Result<HarmonicExtension> {
        self.check(v)?;
        let sigma = real_apply(&self.density_map, v);
        let c: Complex64 = self.constant_map.iter().zip(v).map(|(a, b)| b * *a).sum();
        let lap = FundamentalSolution::laplace(2)?;
        Ok(HarmonicExtension {
            near: NearEvaluator::new(&lap, &self.boundary, Representation::SingleLayer, &sigma)?,
            constant: c,
        })
    }

    fn check(&self, v: &[Complex64]) -> Result<()> {
        if v.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: v.len() });
        }
        Ok(())
    }
}

fn real_apply(m: &DMatrix<f64>, v: &[Complex64]) -> Vec<Complex64> {
    let re = DVector::from_iterator(v.len(), v.iter().map(|z| z.re));
    let im = DVector::from_iterator(v.len(), v.iter().map(|z| z.im));
    let (a, b) = (m * re, m * im);
    a.iter().zip(b.iter()).map(|(x, y)| Complex64::new(*x, *y)).collect()
}

/// Harmonic function in Ω with prescribed boundary values.
#[derive(Debug)]
pub struct HarmonicExtension {
    near: NearEvaluator,
    constant: Complex64,
}

impl HarmonicExtension {
    /// Value and gradient at `x ∈ Ω`.
    pub fn eval(&self, x: Point) -> Result<(Complex64, [Complex64; 2])> {
        let (v, g) = self.near.eval(x)?;
        Ok((v + self.constant, g))
    }
}
