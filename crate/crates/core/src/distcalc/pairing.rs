use num_complex::Complex64;
use rayon::prelude::*;

use super::dtn::DtNOperator;
use crate::error::{Error, Result};
use crate::geometry::{AreaQuadrature, Boundary, Point};

/// A distribution `f = f₀ + ∂₁f₁ + ∂₂f₂` of negative Schauder order, stored
/// by samples of `f₀, f₁, f₂` at the area-quadrature points and of `f₁, f₂`
/// at the boundary nodes. The Hölder exponent is not tracked numerically.
#[derive(Debug, Clone)]
pub struct SchauderMinusOne {
    pub f0: Vec<Complex64>,
    pub f1: Vec<Complex64>,
    pub f2: Vec<Complex64>,
    pub f1_boundary: Vec<Complex64>,
    pub f2_boundary: Vec<Complex64>,
}

impl SchauderMinusOne {
    pub fn from_fn(
        aq: &AreaQuadrature,
        b: &Boundary,
        f0: impl Fn(Point) -> Complex64,
        f1: impl Fn(Point) -> Complex64,
        f2: impl Fn(Point) -> Complex64,
    ) -> Self {
        SchauderMinusOne {
            f0: aq.points.iter().map(|&q| f0(q)).collect(),
            f1: aq.points.iter().map(|&q| f1(q)).collect(),
            f2: aq.points.iter().map(|&q| f2(q)).collect(),
            f1_boundary: b.points.iter().map(|&p| f1(p)).collect(),
            f2_boundary: b.points.iter().map(|&p| f2(p)).collect(),
        }
    }

    /// A plain function `f₀` (no derivative part).
    pub fn function(aq: &AreaQuadrature, b: &Boundary, f0: impl Fn(Point) -> Complex64) -> Self {
        let zero = |_: Point| Complex64::from(0.0);
        Self::from_fn(aq, b, f0, zero, zero)
    }

    fn validate(&self, n_area: usize, n_boundary: usize) -> Result<()> {
        for v in [&self.f0, &self.f1, &self.f2] {
            if v.len() != n_area {
                return Err(Error::DimensionMismatch { expected: n_area, got: v.len() });
            }
        }
        for v in [&self.f1_boundary, &self.f2_boundary] {
            if v.len() != n_boundary {
                return Err(Error::DimensionMismatch { expected: n_boundary, got: v.len() });
            }
        }
        let all = [&self.f0, &self.f1, &self.f2, &self.f1_boundary, &self.f2_boundary];
        if all.iter().any(|v| v.iter().any(|z| !z.is_finite())) {
            return Err(Error::InvalidArgument("non-finite sample in distribution".into()));
        }
        Ok(())
    }
}

/// Values and gradients of a test function on Ω̄.
#[derive(Debug, Clone)]
pub struct TestFunction {
    pub area: Vec<Complex64>,
    pub area_gradient: Vec<[Complex64; 2]>,
    pub boundary: Vec<Complex64>,
}

impl TestFunction {
    pub fn from_fn(aq: &AreaQuadrature, b: &Boundary, f: impl Fn(Point) -> (Complex64, [Complex64; 2])) -> Self {
        let (area, area_gradient) = aq.points.iter().map(|&q| f(q)).unzip();
        TestFunction { area, area_gradient, boundary: b.points.iter().map(|&p| f(p).0).collect() }
    }
}

/// `⟨E♯f, v⟩ = ∫_Ω f₀v + Σ_j ∫_∂Ω ν_j f_j v dσ − Σ_j ∫_Ω f_j ∂_j v`.
pub fn e_sharp_pair(f: &SchauderMinusOne, v: &TestFunction, b: &Boundary, aq: &AreaQuadrature) -> Result<Complex64> {
    f.validate(aq.len(), b.len())?;
    if v.area.len() != aq.len() || v.area_gradient.len() != aq.len() {
        return Err(Error::DimensionMismatch { expected: aq.len(), got: v.area.len().min(v.area_gradient.len()) });
    }
    if v.boundary.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: b.len(), got: v.boundary.len() });
    }
    let area: Complex64 = (0..aq.len())
        .map(|q| aq.weights[q] * (f.f0[q] * v.area[q] - f.f1[q] * v.area_gradient[q][0] - f.f2[q] * v.area_gradient[q][1]))
        .sum();
    let bdry: Complex64 = (0..b.len())
        .map(|i| {
            let nu = b.normals[i];
            b.weights[i] * (nu[0] * f.f1_boundary[i] + nu[1] * f.f2_boundary[i]) * v.boundary[i]
        })
        .sum();
    Ok(area + bdry)
}

/// An element `g = μ₀ + Sᵗ[μ₁]` of the distributional Neumann-data space,
/// with `S` the interior Dirichlet-to-Neumann map.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityPair {
    pub mu0: Vec<Complex64>,
    pub mu1: Vec<Complex64>,
}

impl DensityPair {
    pub fn new(mu0: Vec<Complex64>, mu1: Vec<Complex64>) -> Result<Self> {
        if mu0.len() != mu1.len() {
            return Err(Error::DimensionMismatch { expected: mu0.len(), got: mu1.len() });
        }
        if mu0.iter().chain(&mu1).any(|z| !z.is_finite()) {
            return Err(Error::InvalidArgument("non-finite density".into()));
        }
        Ok(DensityPair { mu0, mu1 })
    }

    /// Classical (continuous) data: `μ₁ = 0`.
    pub fn classical(mu0: Vec<Complex64>) -> Self {
        let n = mu0.len();
        DensityPair { mu0, mu1: vec![Complex64::from(0.0); n] }
    }

    pub fn len(&self) -> usize {
        self.mu0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu0.is_empty()
    }

    /// Nodal data `μ₀ + D_w⁻¹ DtNᵀ D_w μ₁`, whose plain quadrature pairing
    /// reproduces [`pair_density`] exactly.
    pub fn lower(&self, dtn: &DtNOperator) -> Result<Vec<Complex64>> {
        if self.mu1.iter().all(|z| *z == Complex64::from(0.0)) {
            if self.len() != dtn.len() {
                return Err(Error::DimensionMismatch { expected: dtn.len(), got: self.len() });
            }
            return Ok(self.mu0.clone());
        }
        let t = dtn.apply_transpose(&self.mu1)?;
        Ok(self.mu0.iter().zip(t).map(|(a, b)| a + b).collect())
    }
}

/// `⟨g, v⟩ = Σ w μ₀ v + Σ w μ₁ (DtN v)`.
pub fn pair_density(g: &DensityPair, v: &[Complex64], dtn: &DtNOperator) -> Result<Complex64> {
    if g.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: g.len(), got: v.len() });
    }
    let w = &dtn.boundary.weights;
    let mut s: Complex64 = (0..v.len()).map(|i| w[i] * g.mu0[i] * v[i]).sum();
    if g.mu1.iter().any(|z| *z != Complex64::from(0.0)) {
        let dv = dtn.apply(v)?;
        s += (0..v.len()).map(|i| w[i] * g.mu1[i] * dv[i]).sum::<Complex64>();
    }
    Ok(s)
}

/// Distributional normal derivative of `u` tested against nodal `v`:
/// `⟨∂_ν u, v⟩ = ∫ u DtN[v] dσ + ⟨E♯[Δu], G[v]⟩`, with `G[v]` the harmonic
/// extension of `v`.
pub fn dist_normal_derivative(
    u_boundary: &[Complex64],
    laplacian: &SchauderMinusOne,
    v: &[Complex64],
    dtn: &DtNOperator,
    aq: &AreaQuadrature,
) -> Result<Complex64> {
    let b = &dtn.boundary;
    if u_boundary.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: b.len(), got: u_boundary.len() });
    }
    let dv = dtn.apply(v)?;
    let bdry: Complex64 = (0..b.len()).map(|i| b.weights[i] * u_boundary[i] * dv[i]).sum();

    let ext = dtn.harmonic_extension(v)?;
    let samples = aq.points.par_iter().map(|&q| ext.eval(q)).collect::<Result<Vec<_>>>()?;
    let (area, area_gradient) = samples.into_iter().unzip();
    let g = TestFunction { area, area_gradient, boundary: v.to_vec() };
    Ok(bdry + e_sharp_pair(laplacian, &g, b, aq)?)
}
