use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use super::field::{layer_potential, Representation, Side};
use super::kernel::PlaneKernel;
use super::operator::{NystromOperator, OperatorKind};
use crate::error::{Error, Result};
use crate::geometry::{Boundary, Point};
use crate::specfun::FundamentalSolution;

/// Number of samples along the normal used to extrapolate to the curve.
const EXTRAP_POINTS: usize = 8;
/// Trapezoid evaluation is trusted at distances of at least this many grid
/// spacings.
const SAFE_SPACINGS: f64 = 5.0;
/// Extrapolation step relative to the local radius of curvature.
const STEP_FRACTION: f64 = 0.005;
const MAX_LEVELS: usize = 14;

#[derive(Debug)]
struct Level {
    boundary: Boundary,
    density: Vec<Complex64>,
    spacing: f64,
}

/// Accurate evaluation of a layer potential close to (and onto) the curve.
///
/// The density is interpolated trigonometrically onto successively finer
/// grids, built on first use. A point at distance `d` uses the coarsest grid
/// whose spacing is below `d/5`. Closer than the local extrapolation step
/// `δ` (a small fraction of the local radius of curvature), the field is
/// sampled at `jδ`, `j = 1..8`, along the normal through the foot point and
/// extrapolated polynomially.
#[derive(Debug)]
pub struct NearEvaluator {
    ker: PlaneKernel,
    rep: Representation,
    base: Boundary,
    density: Vec<Complex64>,
    levels: Vec<OnceLock<Result<Level>>>,
    scale: f64,
}

impl NearEvaluator {
    pub fn new(
        fs: &FundamentalSolution,
        boundary: &Boundary,
        rep: Representation,
        density: &[Complex64],
    ) -> Result<Self> {
        if density.len() != boundary.len() {
            return Err(Error::DimensionMismatch { expected: boundary.len(), got: density.len() });
        }
        let n = boundary.nodes_per_component();
        if boundary.components().iter().any(|c| c.len() != n) {
            return Err(Error::InvalidArgument("near evaluation needs equal node counts per component".into()));
        }
        let scale = boundary
            .components()
            .iter()
            .map(|c| c.perimeter() / (2.0 * PI))
            .fold(f64::INFINITY, f64::min);
        Ok(NearEvaluator {
            ker: PlaneKernel::new(fs)?,
            rep,
            base: boundary.clone(),
            density: density.to_vec(),
            levels: (0..MAX_LEVELS).map(|_| OnceLock::new()).collect(),
            scale,
        })
    }

    /// Extrapolation step for a foot point with curvature `kappa`.
    pub fn step(&self, kappa: f64) -> f64 {
        STEP_FRACTION * self.scale.min(1.0 / kappa.abs().max(1e-300))
    }

    fn level(&self, l: usize) -> Result<&Level> {
        self.levels[l]
            .get_or_init(|| {
                let m = self.base.nodes_per_component() << (l + 1);
                let fine = self.base.refine(m)?;
                let mut density = Vec::with_capacity(fine.len());
                for (ci, c) in self.base.components().iter().enumerate() {
                    let off = self.base.offsets[ci];
                    density.extend(trig_interpolate(&self.density[off..off + c.len()], m));
                }
                let spacing = fine.grid_spacing();
                Ok(Level { boundary: fine, density, spacing })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Field and gradient at a point at distance at least `d` from the curve.
    fn eval_resolved(&self, x: Point, d: f64) -> Result<(Complex64, [Complex64; 2])> {
        if SAFE_SPACINGS * self.base.grid_spacing() <= d {
            return layer_potential(&self.ker, &self.base, self.rep, &self.density, x);
        }
        for l in 0..MAX_LEVELS {
            let lvl = self.level(l)?;
            if SAFE_SPACINGS * lvl.spacing <= d {
                return layer_potential(&self.ker, &lvl.boundary, self.rep, &lvl.density, x);
            }
        }
        Err(Error::Numerical(format!("no grid within the refinement budget resolves distance {d:e}")))
    }

    /// Field and gradient at any point not on the curve.
    pub fn eval(&self, x: Point) -> Result<(Complex64, [Complex64; 2])> {
        let b = &self.base;
        if b.min_node_distance(x) >= SAFE_SPACINGS * b.grid_spacing() {
            return layer_potential(&self.ker, b, self.rep, &self.density, x);
        }
        let (t, ci, foot, normal, dist) = b
            .components()
            .iter()
            .enumerate()
            .map(|(ci, c)| {
                let (t, p, nu, d) = c.foot_point(x);
                (t, ci, p, nu, d)
            })
            .min_by(|a, b| a.4.total_cmp(&b.4))
            .unwrap();
        let s = b.components()[ci].sample(t);
        let kappa = (s.dx[0] * s.ddx[1] - s.dx[1] * s.ddx[0]) / s.dx[0].hypot(s.dx[1]).powi(3);
        let step = self.step(kappa);
        if dist >= step {
            return self.eval_resolved(x, dist);
        }
        let sign = if (x[0] - foot[0]) * normal[0] + (x[1] - foot[1]) * normal[1] >= 0.0 { 1.0 } else { -1.0 };
        self.extrapolate(foot, [sign * normal[0], sign * normal[1]], step, dist)
    }

    /// One-sided limit at global node `node`; the interior side lies along
    /// `−ν`.
    pub fn boundary_limit(&self, node: usize, side: Side) -> Result<(Complex64, [Complex64; 2])> {
        let b = &self.base;
        if node >= b.len() {
            return Err(Error::InvalidArgument(format!("node {node} out of range")));
        }
        let nu = b.normals[node];
        let dir = match side {
            Side::Interior => [-nu[0], -nu[1]],
            Side::Exterior => nu,
        };
        self.extrapolate(b.points[node], dir, self.step(b.curvatures[node]), 0.0)
    }

    fn extrapolate(&self, foot: Point, dir: Point, step: f64, target: f64) -> Result<(Complex64, [Complex64; 2])> {
        let s: Vec<f64> = (1..=EXTRAP_POINTS).map(|j| j as f64 * step).collect();
        let samples = s
            .iter()
            .map(|&sj| self.eval_resolved([foot[0] + sj * dir[0], foot[1] + sj * dir[1]], sj))
            .collect::<Result<Vec<_>>>()?;
        let pick = |f: &dyn Fn(&(Complex64, [Complex64; 2])) -> Complex64| {
            let ys: Vec<Complex64> = samples.iter().map(f).collect();
            neville(&s, &ys, target)
        };
        Ok((pick(&|v| v.0), [pick(&|v| v.1[0]), pick(&|v| v.1[1])]))
    }
}

/// Polynomial through `(x_j, y_j)` evaluated at `t`.
pub(crate) fn neville(x: &[f64], y: &[Complex64], t: f64) -> Complex64 {
    let mut p = y.to_vec();
    let n = x.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = ((t - x[i + m]) * p[i] + (x[i] - t) * p[i + 1]) / (x[i] - x[i + m]);
        }
    }
    p[0]
}

/// Trigonometric interpolant of equispaced samples, resampled at `m`
/// equispaced points (`m` ≥ `values.len()`). The Nyquist mode is taken as a
/// cosine.
pub fn trig_interpolate(values: &[Complex64], m: usize) -> Vec<Complex64> {
    let n = values.len();
    let half = n / 2;
    let coef: Vec<Complex64> = (0..n)
        .map(|q| {
            let q = q as i64 - half as i64;
            values
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (q * j as i64) as f64 / n as f64))
                .sum::<Complex64>()
                / n as f64
        })
        .collect();
    (0..m)
        .into_par_iter()
        .map(|l| {
            let t = 2.0 * PI * l as f64 / m as f64;
            // coef[0] is the Nyquist mode q = −n/2
            let mut acc = coef[0] * (half as f64 * t).cos();
            for (idx, c) in coef.iter().enumerate().skip(1) {
                let q = idx as f64 - half as f64;
                acc += c * Complex64::from_polar(1.0, q * t);
            }
            acc
        })
        .collect()
}

/// Extrapolated one-sided limits of the double layer at a node.
#[derive(Debug, Clone, Copy)]
pub struct JumpCheck {
    pub node: usize,
    pub w_plus: Complex64,
    pub w_minus: Complex64,
    /// `(Wμ)` at the node from the Nyström matrix.
    pub w_on: Complex64,
    /// `|w⁺ − (½μ + Wμ)|`
    pub err_plus: f64,
    /// `|w⁻ − (−½μ + Wμ)|`
    pub err_minus: f64,
}

/// Compare the extrapolated interior/exterior limits of the double layer
/// with `±½μ + Wμ` at the given nodes.
pub fn jump_check(w: &NystromOperator, mu: &[Complex64], nodes: &[usize]) -> Result<Vec<JumpCheck>> {
    if w.kind != OperatorKind::Double {
        return Err(Error::InvalidArgument("jump_check needs the double-layer operator".into()));
    }
    let wmu = w.apply(mu)?;
    let near = NearEvaluator::new(&w.fs, &w.boundary, Representation::DoubleLayer, mu)?;
    nodes
        .par_iter()
        .map(|&node| {
            let (w_plus, _) = near.boundary_limit(node, Side::Interior)?;
            let (w_minus, _) = near.boundary_limit(node, Side::Exterior)?;
            let w_on = wmu[node];
            Ok(JumpCheck {
                node,
                w_plus,
                w_minus,
                w_on,
                err_plus: (w_plus - (0.5 * mu[node] + w_on)).norm(),
                err_minus: (w_minus - (-0.5 * mu[node] + w_on)).norm(),
            })
        })
        .collect()
}
