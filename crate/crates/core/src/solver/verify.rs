use num_complex::Complex64;
use rayon::prelude::*;

use crate::distcalc::{dist_normal_derivative, e_sharp_pair, DtNOperator, SchauderMinusOne, TestFunction};
use crate::error::{Error, Result};
use crate::geometry::{AreaQuadrature, Boundary, Location, Point};
use crate::layerpot::{assemble, evaluate_layer, NearEvaluator, OperatorKind, Representation, Side, SolutionField};
use crate::specfun::FundamentalSolution;

/// Value, gradient and Laplacian of a closed-form function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSample {
    pub value: Complex64,
    pub gradient: [Complex64; 2],
    pub laplacian: Complex64,
}

/// A closed-form function on the plane.
pub type ClosedForm<'a> = &'a (dyn Fn(Point) -> PointSample + Sync);

/// Boundary values and normal derivatives of a field at the nodes.
#[derive(Debug, Clone)]
pub struct Traces {
    pub value: Vec<Complex64>,
    pub normal_derivative: Vec<Complex64>,
}

impl Traces {
    pub fn from_closed_form(b: &Boundary, u: ClosedForm) -> Self {
        let (value, normal_derivative) = b
            .points
            .iter()
            .zip(&b.normals)
            .map(|(&p, nu)| {
                let s = u(p);
                (s.value, s.gradient[0] * nu[0] + s.gradient[1] * nu[1])
            })
            .unzip();
        Traces { value, normal_derivative }
    }

    /// One-sided traces of a layer field on its own side. A single layer
    /// uses the Nyström matrices (`Vφ`, `∓½φ + Wᵗφ`); a double layer uses
    /// the jump relation for the value and normal extrapolation for the
    /// derivative.
    pub fn from_field(sf: &SolutionField) -> Result<Self> {
        let b = &sf.boundary;
        let s = match sf.side {
            Side::Interior => 1.0,
            Side::Exterior => -1.0,
        };
        match sf.representation {
            Representation::SingleLayer => {
                let value = assemble(OperatorKind::Single, &sf.fs, b)?.apply(&sf.density)?;
                let wt = assemble(OperatorKind::AdjointDouble, &sf.fs, b)?.apply(&sf.density)?;
                let normal_derivative = wt.iter().zip(&sf.density).map(|(w, p)| w - 0.5 * s * p).collect();
                Ok(Traces { value, normal_derivative })
            }
            Representation::DoubleLayer => {
                let w = assemble(OperatorKind::Double, &sf.fs, b)?.apply(&sf.density)?;
                let value = w.iter().zip(&sf.density).map(|(w, p)| w + 0.5 * s * p).collect();
                let near = NearEvaluator::new(&sf.fs, b, sf.representation, &sf.density)?;
                let normal_derivative = (0..b.len())
                    .into_par_iter()
                    .map(|i| {
                        let (_, g) = near.boundary_limit(i, sf.side)?;
                        let nu = b.normals[i];
                        Ok(g[0] * nu[0] + g[1] * nu[1])
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Traces { value, normal_derivative })
            }
        }
    }
}

/// Third Green identity for a solution of the homogeneous Helmholtz
/// equation on `side`.
///
/// With `D = w[u] − v[∂_ν u]`, the identity reads `D = u` in Ω and `D = 0`
/// outside (interior), or `−D = u` in Ω⁻ and `−D = 0` in Ω (exterior,
/// radiating `u`). Returns `|LHS − expected|` at each probe; `exact`
/// supplies `u` at probes on `side`.
pub fn green_identity_residual(
    traces: &Traces,
    exact: &(dyn Fn(Point) -> Result<Complex64> + Sync),
    b: &Boundary,
    k: Complex64,
    side: Side,
    probes: &[Point],
) -> Result<Vec<f64>> {
    let fs = FundamentalSolution::radiating(2, k)?;
    let sgn = match side {
        Side::Interior => 1.0,
        Side::Exterior => -1.0,
    };
    probes
        .par_iter()
        .map(|&x| {
            let loc = b.locate(x);
            if loc == Location::NearBoundary {
                return Err(Error::TooClose(x[0], x[1]));
            }
            let (w, _) = evaluate_layer(&fs, b, Representation::DoubleLayer, &traces.value, x)?;
            let (v, _) = evaluate_layer(&fs, b, Representation::SingleLayer, &traces.normal_derivative, x)?;
            let lhs = sgn * (w - v);
            let expected = if loc == side.location() { exact(x)? } else { Complex64::from(0.0) };
            Ok((lhs - expected).norm())
        })
        .collect()
}

/// Outgoing-radiation diagnostic.
#[derive(Debug, Clone)]
pub struct RadiationReport {
    /// `(R, q(R))` with `q(R) = R^{3/2} e^{Im k R} max_θ |∂_r u − iku|`.
    pub rows: Vec<(f64, f64)>,
    /// `q(R_{j+1}) / max(q(R_j), floor)` for consecutive radii.
    pub ratios: Vec<f64>,
    pub pass: bool,
    /// All radii lie beyond the safety radius `1 + 2 max|y|`, if one was
    /// supplied.
    pub beyond_safety_radius: bool,
}

/// Growth allowed between consecutive radii.
pub const RADIATION_GROWTH: f64 = 1.2;

/// `field` returns value and gradient; `safety` is the largest node radius
/// of the scatterer, if any.
pub fn radiation_check(
    field: &(dyn Fn(Point) -> Result<(Complex64, [Complex64; 2])> + Sync),
    k: Complex64,
    radii: &[f64],
    directions: usize,
    safety: Option<f64>,
    floor: f64,
) -> Result<RadiationReport> {
    if directions == 0 || radii.is_empty() {
        return Err(Error::InvalidArgument("radiation check needs radii and directions".into()));
    }
    let rows = radii
        .iter()
        .map(|&r| {
            let worst = (0..directions)
                .into_par_iter()
                .map(|j| {
                    let th = 2.0 * std::f64::consts::PI * j as f64 / directions as f64;
                    let (c, s) = (th.cos(), th.sin());
                    let (u, g) = field([r * c, r * s])?;
                    Ok((g[0] * c + g[1] * s - Complex64::i() * k * u).norm())
                })
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok((r, r.powf(1.5) * (k.im * r).exp() * worst))
        })
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = rows.windows(2).map(|w| w[1].1 / w[0].1.max(floor)).collect();
    let pass = ratios.iter().all(|r| *r <= RADIATION_GROWTH);
    let beyond_safety_radius = safety.is_none_or(|m| radii.iter().all(|&r| r > 1.0 + 2.0 * m));
    Ok(RadiationReport { rows, ratios, pass, beyond_safety_radius })
}

/// Interior distributional second Green identity
/// `⟨E♯[Δu], v⟩ − ∫_Ω u Δv = ⟨∂_ν u, v⟩ − ∫_∂Ω (∂_ν v) u dσ`; returns
/// `|LHS − RHS|`.
pub fn second_green_residual(u: ClosedForm, v: ClosedForm, dtn: &DtNOperator, aq: &AreaQuadrature) -> Result<f64> {
    let b = &dtn.boundary;
    let lap_u = SchauderMinusOne::function(aq, b, |p| u(p).laplacian);
    let v_test = TestFunction::from_fn(aq, b, |p| {
        let s = v(p);
        (s.value, s.gradient)
    });
    let lhs = e_sharp_pair(&lap_u, &v_test, b, aq)?
        - aq.points.iter().zip(&aq.weights).map(|(&q, &a)| a * u(q).value * v(q).laplacian).sum::<Complex64>();
    let ut = Traces::from_closed_form(b, u);
    let vt = Traces::from_closed_form(b, v);
    let dn = dist_normal_derivative(&ut.value, &lap_u, &vt.value, dtn, aq)?;
    let rhs = dn - (0..b.len()).map(|i| b.weights[i] * vt.normal_derivative[i] * ut.value[i]).sum::<Complex64>();
    Ok((lhs - rhs).norm())
}

/// Exterior form `⟨∂u/∂ν⁻, v⟩ − ∫ (∂v/∂ν⁻) u dσ` for radiating `u`, `v`,
/// with `ν⁻ = −ν` the outward normal of Ω⁻; it vanishes exactly.
pub fn exterior_second_green_form(u: ClosedForm, v: ClosedForm, b: &Boundary) -> f64 {
    let ut = Traces::from_closed_form(b, u);
    let vt = Traces::from_closed_form(b, v);
    (0..b.len())
        .map(|i| b.weights[i] * (-ut.normal_derivative[i] * vt.value[i] + vt.normal_derivative[i] * ut.value[i]))
        .sum::<Complex64>()
        .norm()
}
