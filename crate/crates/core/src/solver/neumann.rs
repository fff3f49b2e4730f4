use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::distcalc::{build_dtn, DensityPair};
use crate::error::{Error, Result};
use crate::geometry::Boundary;
use crate::layerpot::{assemble, NearEvaluator, OperatorKind, Representation, Side, SolutionField};
use crate::specfun::FundamentalSolution;

/// `σ_min < DIP_THRESHOLD · σ_max` flags a breakdown wavenumber.
pub const DIP_THRESHOLD: f64 = 1e-6;
/// Largest admissible relative cokernel component of the data.
pub const COMPATIBILITY_TOL: f64 = 1e-6;

/// Interior or exterior Neumann problem for `Δu + k²u = 0`.
#[derive(Debug, Clone)]
pub struct NeumannProblem {
    pub side: Side,
    pub k: Complex64,
    pub boundary: Boundary,
    pub data: DensityPair,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Single-layer density φ.
    pub density: Vec<Complex64>,
    /// `u = v±[φ]` on the problem's side.
    pub field: SolutionField,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Relative size of the data's component on the numerical cokernel
    /// (zero when the system is regular).
    pub compatibility_defect: f64,
    /// `max |(∓½I + Wᵗ)φ − g|`.
    pub residual_boundary: f64,
    /// Whether the least-squares fallback was used.
    pub least_squares: bool,
    /// Nodal data actually solved for (the lowered distributional data).
    pub data_nodes: Vec<Complex64>,
}

fn sign(side: Side) -> f64 {
    match side {
        Side::Interior => -0.5,
        Side::Exterior => 0.5,
    }
}

/// `∓½I + M` for `M` the Nyström matrix of `kind`.
pub fn system_matrix(fs: &FundamentalSolution, b: &Boundary, side: Side, kind: OperatorKind) -> Result<DMatrix<Complex64>> {
    let mut m = assemble(kind, fs, b)?.matrix;
    for i in 0..m.nrows() {
        m[(i, i)] += sign(side);
    }
    Ok(m)
}

/// `(σ_min, σ_max)` of `∓½I + Wᵗ`.
pub fn system_singular_values(fs: &FundamentalSolution, b: &Boundary, side: Side) -> Result<(f64, f64)> {
    let sv = system_matrix(fs, b, side, OperatorKind::AdjointDouble)?.singular_values();
    Ok((sv.min(), sv.max()))
}

pub fn solve_neumann(p: &NeumannProblem) -> Result<SolveReport> {
    let fs = FundamentalSolution::radiating(2, p.k)?;
    let n = p.boundary.len();
    if p.data.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.data.len() });
    }
    let g = if p.data.mu1.iter().all(|z| *z == Complex64::from(0.0)) {
        p.data.mu0.clone()
    } else {
        p.data.lower(&build_dtn(&p.boundary)?)?
    };
    let a = system_matrix(&fs, &p.boundary, p.side, OperatorKind::AdjointDouble)?;
    let gv = DVector::from_column_slice(&g);

    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let (sigma_min, sigma_max) = (sv.min(), sv.max());
    let least_squares = sigma_min < DIP_THRESHOLD * sigma_max;

    let (phi, defect) = if !least_squares {
        let phi = a.clone().lu().solve(&gv).ok_or_else(|| Error::Numerical("LU solve failed".into()))?;
        (phi, 0.0)
    } else {
        let u = svd.u.as_ref().ok_or_else(|| Error::Numerical("SVD without U".into()))?;
        let cut = DIP_THRESHOLD * sigma_max;
        let null: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] < cut).collect();
        let gnorm = gv.norm();
        let proj: f64 = null.iter().map(|&i| u.column(i).dotc(&gv).norm_sqr()).sum::<f64>().sqrt();
        let defect = if gnorm > 0.0 { proj / gnorm } else { 0.0 };
        if defect > COMPATIBILITY_TOL {
            return Err(Error::IncompatibleData { defect, dim: null.len() });
        }
        let phi = svd.solve(&gv, cut).map_err(|e| Error::Numerical(e.to_string()))?;
        (phi, defect)
    };
    let residual_boundary = (&a * &phi - &gv).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if !phi.iter().all(|z| z.is_finite()) {
        return Err(Error::Numerical("non-finite density".into()));
    }
    let density: Vec<Complex64> = phi.as_slice().to_vec();
    let field = SolutionField::new(fs, p.boundary.clone(), Representation::SingleLayer, density.clone(), p.side)?;
    Ok(SolveReport {
        density,
        field,
        sigma_min,
        sigma_max,
        compatibility_defect: defect,
        residual_boundary,
        least_squares,
        data_nodes: g,
    })
}

/// One sample of an eigenvalue scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSample {
    pub k: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
}

impl ScanSample {
    pub fn relative(&self) -> f64 {
        self.sigma_min / self.sigma_max
    }
}

fn scan_point(b: &Boundary, side: Side, k: f64) -> Result<ScanSample> {
    let fs = FundamentalSolution::radiating(2, Complex64::from(k))?;
    let (sigma_min, sigma_max) = system_singular_values(&fs, b, side)?;
    Ok(ScanSample { k, sigma_min, sigma_max })
}

/// `σ_min(∓½I + Wᵗ)` at `samples` equispaced real wavenumbers.
pub fn eigen_scan(b: &Boundary, side: Side, k_min: f64, k_max: f64, samples: usize) -> Result<Vec<ScanSample>> {
    if !(k_min > 0.0 && k_max > k_min && samples >= 2) {
        return Err(Error::InvalidArgument(format!("bad scan range [{k_min}, {k_max}] with {samples} samples")));
    }
    (0..samples)
        .into_par_iter()
        .map(|i| scan_point(b, side, k_min + (k_max - k_min) * i as f64 / (samples - 1) as f64))
        .collect()
}

/// Local minima of a scan, refined by golden-section search between the
/// neighbouring samples and kept when the refined relative `σ_min` falls
/// below [`DIP_THRESHOLD`].
pub fn find_dips(b: &Boundary, side: Side, scan: &[ScanSample]) -> Result<Vec<ScanSample>> {
    let candidates: Vec<usize> = (1..scan.len().saturating_sub(1))
        .filter(|&i| scan[i].relative() <= scan[i - 1].relative() && scan[i].relative() < scan[i + 1].relative())
        .collect();
    let refined = candidates
        .par_iter()
        .map(|&i| golden_min(b, side, scan[i - 1].k, scan[i + 1].k))
        .collect::<Result<Vec<_>>>()?;
    Ok(refined.into_iter().filter(|s| s.relative() < DIP_THRESHOLD).collect())
}

fn golden_min(b: &Boundary, side: Side, mut lo: f64, mut hi: f64) -> Result<ScanSample> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = scan_point(b, side, x1)?;
    let mut f2 = scan_point(b, side, x2)?;
    while hi - lo > 1e-11 * hi {
        if f1.relative() < f2.relative() {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = scan_point(b, side, x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = scan_point(b, side, x2)?;
        }
    }
    Ok(if f1.relative() < f2.relative() { f1 } else { f2 })
}

/// Neumann eigenfunction recovered from a breakdown wavenumber.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    pub k: f64,
    /// Boundary trace ω (right singular vector of `∓½I + W`), scaled so
    /// that its largest entry is 1.
    pub trace: Vec<Complex64>,
    /// `w⁺[ω]` in Ω (interior) or `w⁻[−ω]` in Ω⁻ (exterior).
    pub field: SolutionField,
    pub sigma_relative: f64,
    /// Number of singular values below the dip threshold.
    pub multiplicity: usize,
}

pub fn neumann_eigenfunction(b: &Boundary, k: f64, side: Side) -> Result<Eigenfunction> {
    let fs = FundamentalSolution::radiating(2, Complex64::from(k))?;
    let a = system_matrix(&fs, b, side, OperatorKind::Double)?;
    let svd = a.svd(false, true);
    let sv = &svd.singular_values;
    let (imin, smin) = sv.iter().enumerate().fold((0, f64::INFINITY), |a, (i, s)| if *s < a.1 { (i, *s) } else { a });
    let rel = smin / sv.max();
    if rel >= DIP_THRESHOLD {
        return Err(Error::NotAtDip(k, rel));
    }
    let multiplicity = sv.iter().filter(|s| **s < DIP_THRESHOLD * sv.max()).count();
    let v_t = svd.v_t.ok_or_else(|| Error::Numerical("SVD without V".into()))?;
    let mut trace: Vec<Complex64> = v_t.row(imin).iter().map(|z| z.conj()).collect();
    let big = trace.iter().copied().fold(Complex64::from(0.0), |a, z| if z.norm() > a.norm() { z } else { a });
    let scale = big.norm() / big;
    trace.iter_mut().for_each(|z| *z *= scale);
    let density = match side {
        Side::Interior => trace.clone(),
        Side::Exterior => trace.iter().map(|z| -z).collect(),
    };
    let field = SolutionField::new(fs, b.clone(), Representation::DoubleLayer, density, side)?;
    Ok(Eigenfunction { k, trace, field, sigma_relative: rel, multiplicity })
}

impl Eigenfunction {
    /// Largest one-sided normal derivative of the field on its own side,
    /// at every node, by extrapolation along the normal.
    pub fn max_normal_derivative(&self) -> Result<f64> {
        let f = &self.field;
        let near = NearEvaluator::new(&f.fs, &f.boundary, f.representation, &f.density)?;
        let vals = (0..f.boundary.len())
            .into_par_iter()
            .map(|i| {
                let (_, g) = near.boundary_limit(i, f.side)?;
                let nu = f.boundary.normals[i];
                Ok((g[0] * nu[0] + g[1] * nu[1]).norm())
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(vals.into_iter().fold(0.0, f64::max))
    }

    /// Largest trace on the opposite side of the same double layer, which
    /// vanishes for a true eigenfunction.
    pub fn max_opposite_trace(&self) -> Result<f64> {
        let f = &self.field;
        let other = match f.side {
            Side::Interior => Side::Exterior,
            Side::Exterior => Side::Interior,
        };
        let near = NearEvaluator::new(&f.fs, &f.boundary, f.representation, &f.density)?;
        let vals = (0..f.boundary.len())
            .into_par_iter()
            .map(|i| near.boundary_limit(i, other).map(|(v, _)| v.norm()))
            .collect::<Result<Vec<f64>>>()?;
        Ok(vals.into_iter().fold(0.0, f64::max))
    }
}
