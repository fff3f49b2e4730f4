use std::f64::consts::PI;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// An analytic, 2π-periodic parametrization traversed counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveShape {
    Circle { center: Point, radius: f64 },
    Ellipse { center: Point, semi_x: f64, semi_y: f64 },
    /// `x(t) = c + s·(cos t + 0.65 cos 2t − 0.65, 1.5 sin t)`.
    Kite { center: Point, scale: f64 },
    /// Radial graph `r(t) = r₀ + Σ_m (a_m cos mt + b_m sin mt)`, `m ≥ 1`.
    Star { center: Point, r0: f64, cos: Vec<f64>, sin: Vec<f64> },
}

/// Position, first and second derivative at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub x: Point,
    pub dx: Point,
    pub ddx: Point,
}

impl CurveShape {
    pub fn center(&self) -> Point {
        match self {
            CurveShape::Circle { center, .. }
            | CurveShape::Ellipse { center, .. }
            | CurveShape::Kite { center, .. }
            | CurveShape::Star { center, .. } => *center,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidCurve(format!("{what} must be positive, got {v}")))
            }
        };
        match self {
            CurveShape::Circle { radius, .. } => positive(*radius, "radius"),
            CurveShape::Ellipse { semi_x, semi_y, .. } => {
                positive(*semi_x, "semi-axis")?;
                positive(*semi_y, "semi-axis")
            }
            CurveShape::Kite { scale, .. } => positive(*scale, "scale"),
            CurveShape::Star { r0, cos, sin, .. } => {
                positive(*r0, "mean radius")?;
                if cos.iter().chain(sin).any(|v| !v.is_finite()) {
                    return Err(Error::InvalidCurve("non-finite Fourier coefficient".into()));
                }
                Ok(())
            }
        }
    }

    pub fn sample(&self, t: f64) -> CurveSample {
        let (c, s) = (t.cos(), t.sin());
        match self {
            CurveShape::Circle { center, radius } => CurveSample {
                x: [center[0] + radius * c, center[1] + radius * s],
                dx: [-radius * s, radius * c],
                ddx: [-radius * c, -radius * s],
            },
            CurveShape::Ellipse { center, semi_x, semi_y } => CurveSample {
                x: [center[0] + semi_x * c, center[1] + semi_y * s],
                dx: [-semi_x * s, semi_y * c],
                ddx: [-semi_x * c, -semi_y * s],
            },
            CurveShape::Kite { center, scale } => {
                let (c2, s2) = ((2.0 * t).cos(), (2.0 * t).sin());
                CurveSample {
                    x: [center[0] + scale * (c + 0.65 * c2 - 0.65), center[1] + scale * 1.5 * s],
                    dx: [scale * (-s - 1.3 * s2), scale * 1.5 * c],
                    ddx: [scale * (-c - 2.6 * c2), -scale * 1.5 * s],
                }
            }
            CurveShape::Star { center, r0, cos, sin } => {
                let (mut r, mut dr, mut ddr) = (*r0, 0.0, 0.0);
                for m in 1..=cos.len().max(sin.len()) {
                    let a = cos.get(m - 1).copied().unwrap_or(0.0);
                    let b = sin.get(m - 1).copied().unwrap_or(0.0);
                    let mf = m as f64;
                    let (cm, sm) = ((mf * t).cos(), (mf * t).sin());
                    r += a * cm + b * sm;
                    dr += mf * (b * cm - a * sm);
                    ddr -= mf * mf * (a * cm + b * sm);
                }
                CurveSample {
                    x: [center[0] + r * c, center[1] + r * s],
                    dx: [dr * c - r * s, dr * s + r * c],
                    ddx: [ddr * c - 2.0 * dr * s - r * c, ddr * s + 2.0 * dr * c - r * s],
                }
            }
        }
    }
}

/// Whether a component bounds Ω from outside or is the boundary of a hole.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Outer,
    Inner,
}

/// One closed component of ∂Ω with its Nyström data.
///
/// Inner components are traversed clockwise, so for every component the
/// normal `(x₂′, −x₁′)/|x′|` points out of Ω (into the hole for an inner
/// component).
#[derive(Debug, Clone)]
pub struct CurveComponent {
    shape: CurveShape,
    orientation: Orientation,
    pub params: Vec<f64>,
    pub points: Vec<Point>,
    pub tangents: Vec<Point>,
    pub second: Vec<Point>,
    pub speeds: Vec<f64>,
    pub normals: Vec<Point>,
    pub curvatures: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CurveComponent {
    pub fn new(shape: CurveShape, orientation: Orientation, n: usize) -> Result<Self> {
        let c = Self::build(shape, orientation, n)?;
        c.check_simple()?;
        Ok(c)
    }

    fn build(shape: CurveShape, orientation: Orientation, n: usize) -> Result<Self> {
        shape.validate()?;
        if n < 16 || !n.is_multiple_of(2) {
            return Err(Error::InvalidCurve(format!("nodes per component must be even and at least 16, got {n}")));
        }
        let h = 2.0 * PI / n as f64;
        let mut c = CurveComponent {
            shape,
            orientation,
            params: Vec::with_capacity(n),
            points: Vec::with_capacity(n),
            tangents: Vec::with_capacity(n),
            second: Vec::with_capacity(n),
            speeds: Vec::with_capacity(n),
            normals: Vec::with_capacity(n),
            curvatures: Vec::with_capacity(n),
            weights: Vec::with_capacity(n),
        };
        for i in 0..n {
            let t = h * i as f64;
            let s = c.sample(t);
            let speed = s.dx[0].hypot(s.dx[1]);
            if !(speed >= 1e-10) {
                return Err(Error::InvalidCurve(format!("irregular parametrization at t = {t}: |x'| = {speed:e}")));
            }
            let kappa = (s.dx[0] * s.ddx[1] - s.dx[1] * s.ddx[0]) / speed.powi(3);
            c.params.push(t);
            c.points.push(s.x);
            c.tangents.push(s.dx);
            c.second.push(s.ddx);
            c.speeds.push(speed);
            c.normals.push([s.dx[1] / speed, -s.dx[0] / speed]);
            c.curvatures.push(kappa);
            c.weights.push(h * speed);
        }
        Ok(c)
    }

    /// Position and derivatives at parameter `t`, in this component's
    /// traversal direction.
    pub fn sample(&self, t: f64) -> CurveSample {
        match self.orientation {
            Orientation::Outer => self.shape.sample(t),
            Orientation::Inner => {
                let s = self.shape.sample(-t);
                CurveSample { x: s.x, dx: [-s.dx[0], -s.dx[1]], ddx: s.ddx }
            }
        }
    }

    pub fn shape(&self) -> &CurveShape {
        &self.shape
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same curve with `n` nodes. The curve was already checked for
    /// self-intersection, so only regularity is re-verified.
    pub fn refine(&self, n: usize) -> Result<Self> {
        CurveComponent::build(self.shape.clone(), self.orientation, n)
    }

    pub fn perimeter(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Parameter spacing times the largest speed.
    pub fn grid_spacing(&self) -> f64 {
        let vmax = self.speeds.iter().cloned().fold(0.0, f64::max);
        2.0 * PI * vmax / self.len() as f64
    }

    /// Signed area enclosed by the node polygon traversed in order.
    pub fn signed_area(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.points[i], self.points[(i + 1) % n]);
                a[0] * b[1] - a[1] * b[0]
            })
            .sum::<f64>()
            * 0.5
    }

    /// Winding number of the node polygon around `x`.
    pub fn winding(&self, x: Point) -> f64 {
        let n = self.len();
        let mut total = 0.0;
        for i in 0..n {
            let a = self.points[i];
            let b = self.points[(i + 1) % n];
            let (ax, ay) = (a[0] - x[0], a[1] - x[1]);
            let (bx, by) = (b[0] - x[0], b[1] - x[1]);
            total += (ax * by - ay * bx).atan2(ax * bx + ay * by);
        }
        total / (2.0 * PI)
    }

    /// Closest point on the curve to `x`, by Newton iteration from the
    /// nearest node. Returns `(t, foot, unit normal, distance)`.
    pub fn foot_point(&self, x: Point) -> (f64, Point, Point, f64) {
        let (i0, _) = self
            .points
            .iter()
            .map(|p| (p[0] - x[0]).hypot(p[1] - x[1]))
            .enumerate()
            .fold((0, f64::INFINITY), |a, (i, d)| if d < a.1 { (i, d) } else { a });
        let h = 2.0 * PI / self.len() as f64;
        let mut t = self.params[i0];
        for _ in 0..50 {
            let s = self.sample(t);
            let d = [s.x[0] - x[0], s.x[1] - x[1]];
            let g = d[0] * s.dx[0] + d[1] * s.dx[1];
            let dg = s.dx[0] * s.dx[0] + s.dx[1] * s.dx[1] + d[0] * s.ddx[0] + d[1] * s.ddx[1];
            let step = if dg > 0.0 { (g / dg).clamp(-h, h) } else { -g.signum() * 0.1 * h };
            t -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let s = self.sample(t);
        let speed = s.dx[0].hypot(s.dx[1]);
        let normal = [s.dx[1] / speed, -s.dx[0] / speed];
        (t, s.x, normal, (s.x[0] - x[0]).hypot(s.x[1] - x[1]))
    }

    fn check_simple(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if segments_cross(self.points[i], self.points[(i + 1) % n], self.points[j], self.points[(j + 1) % n]) {
                    return Err(Error::InvalidCurve(format!("self-intersection between segments {i} and {j}")));
                }
            }
        }
        Ok(())
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

pub(crate) fn segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(shape: &CurveShape, t: f64) -> (Point, Point) {
        let h = 1e-5;
        let a = shape.sample(t - h);
        let b = shape.sample(t + h);
        (
            [(b.x[0] - a.x[0]) / (2.0 * h), (b.x[1] - a.x[1]) / (2.0 * h)],
            [(b.dx[0] - a.dx[0]) / (2.0 * h), (b.dx[1] - a.dx[1]) / (2.0 * h)],
        )
    }

    #[test]
    fn foot_point_on_ellipse() {
        let c = CurveComponent::new(CurveShape::Ellipse { center: [0.0, 0.0], semi_x: 2.0, semi_y: 1.0 }, Orientation::Outer, 32)
            .unwrap();
        let t0 = 0.7;
        let s = c.sample(t0);
        let sp = s.dx[0].hypot(s.dx[1]);
        let nu = [s.dx[1] / sp, -s.dx[0] / sp];
        let x = [s.x[0] + 0.05 * nu[0], s.x[1] + 0.05 * nu[1]];
        let (t, _, n, d) = c.foot_point(x);
        assert!((t - t0).abs() < 1e-12 && (d - 0.05).abs() < 1e-12);
        assert!((n[0] - nu[0]).abs() < 1e-12);
    }

    #[test]
    fn analytic_derivatives() {
        let shapes = [
            CurveShape::Circle { center: [0.1, 0.2], radius: 1.3 },
            CurveShape::Ellipse { center: [0.0, 0.0], semi_x: 2.0, semi_y: 0.7 },
            CurveShape::Kite { center: [0.0, 0.0], scale: 1.0 },
            CurveShape::Star { center: [0.0, 0.0], r0: 1.0, cos: vec![0.0, 0.1, 0.05], sin: vec![0.02, 0.0, 0.0, 0.03] },
        ];
        for shape in &shapes {
            for t in [0.0, 0.7, 2.1, 4.4] {
                let s = shape.sample(t);
                let (dx, ddx) = fd(shape, t);
                for d in 0..2 {
                    assert!((s.dx[d] - dx[d]).abs() < 1e-8, "{shape:?} dx");
                    assert!((s.ddx[d] - ddx[d]).abs() < 1e-8, "{shape:?} ddx");
                }
            }
        }
    }

    #[test]
    fn rejects_small_or_odd_n() {
        let c = CurveShape::Circle { center: [0.0, 0.0], radius: 1.0 };
        assert!(CurveComponent::new(c.clone(), Orientation::Outer, 15).is_err());
        assert!(CurveComponent::new(c.clone(), Orientation::Outer, 8).is_err());
        assert!(CurveComponent::new(c, Orientation::Outer, 16).is_ok());
    }

    #[test]
    fn rejects_self_intersection() {
        // r(t) = 1 + 1.5 cos 2t has negative radius → loops cross
        let bad = CurveShape::Star { center: [0.0, 0.0], r0: 1.0, cos: vec![0.0, 1.5], sin: vec![] };
        assert!(matches!(CurveComponent::new(bad, Orientation::Outer, 64), Err(Error::InvalidCurve(_))));
    }

    #[test]
    fn inner_orientation_normals_point_into_hole() {
        let c = CurveComponent::new(CurveShape::Circle { center: [0.0, 0.0], radius: 0.5 }, Orientation::Inner, 32).unwrap();
        for (p, nu) in c.points.iter().zip(&c.normals) {
            assert!(p[0] * nu[0] + p[1] * nu[1] < 0.0);
        }
        assert!(c.signed_area() < 0.0);
        assert!((c.curvatures[0] + 2.0).abs() < 1e-12);
    }
}
