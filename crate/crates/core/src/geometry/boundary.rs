use super::curve::{segments_cross, CurveComponent, CurveShape, Orientation, Point};
use crate::error::{Error, Result};

/// Curve descriptions accepted by [`make_boundary`].
#[derive(Debug, Clone, PartialEq)]
pub enum BoundarySpec {
    Circle { center: Point, radius: f64 },
    Ellipse { center: Point, semi_x: f64, semi_y: f64 },
    Kite { center: Point, scale: f64 },
    Annulus { center: Point, r_in: f64, r_out: f64 },
    Star { center: Point, r0: f64, cos: Vec<f64>, sin: Vec<f64> },
    /// Arbitrary collection of components, e.g. two disjoint bodies.
    Components(Vec<(CurveShape, Orientation)>),
}

impl BoundarySpec {
    fn components(&self) -> Result<Vec<(CurveShape, Orientation)>> {
        use BoundarySpec::*;
        Ok(match self {
            Circle { center, radius } => vec![(CurveShape::Circle { center: *center, radius: *radius }, Orientation::Outer)],
            Ellipse { center, semi_x, semi_y } => vec![(
                CurveShape::Ellipse { center: *center, semi_x: *semi_x, semi_y: *semi_y },
                Orientation::Outer,
            )],
            Kite { center, scale } => vec![(CurveShape::Kite { center: *center, scale: *scale }, Orientation::Outer)],
            Star { center, r0, cos, sin } => vec![(
                CurveShape::Star { center: *center, r0: *r0, cos: cos.clone(), sin: sin.clone() },
                Orientation::Outer,
            )],
            Annulus { center, r_in, r_out } => {
                if !(r_in < r_out) {
                    return Err(Error::InvalidCurve(format!("annulus needs r_in < r_out, got {r_in} and {r_out}")));
                }
                vec![
                    (CurveShape::Circle { center: *center, radius: *r_out }, Orientation::Outer),
                    (CurveShape::Circle { center: *center, radius: *r_in }, Orientation::Inner),
                ]
            }
            Components(list) => {
                if list.is_empty() {
                    return Err(Error::InvalidCurve("boundary needs at least one component".into()));
                }
                list.clone()
            }
        })
    }
}

/// Where a point sits relative to Ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Interior,
    Exterior,
    NearBoundary,
}

/// ∂Ω as a list of components with flattened node arrays.
///
/// Global node `g` belongs to component `component_of[g]` and has local
/// index `g - offsets[component_of[g]]`.
#[derive(Debug, Clone)]
pub struct Boundary {
    components: Vec<CurveComponent>,
    /// Number of connected components of Ω.
    pub kappa_plus: usize,
    /// Number of bounded connected components of the complement.
    pub kappa_minus: usize,
    pub offsets: Vec<usize>,
    pub component_of: Vec<usize>,
    pub points: Vec<Point>,
    pub normals: Vec<Point>,
    pub weights: Vec<f64>,
    pub speeds: Vec<f64>,
    pub curvatures: Vec<f64>,
}

/// Discretize a curve description with `n` nodes per component.
pub fn make_boundary(spec: &BoundarySpec, n: usize) -> Result<Boundary> {
    let comps = spec
        .components()?
        .into_iter()
        .map(|(shape, o)| CurveComponent::new(shape, o, n))
        .collect::<Result<Vec<_>>>()?;
    Boundary::from_components(comps)
}

impl Boundary {
    pub fn from_components(components: Vec<CurveComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidCurve("boundary needs at least one component".into()));
        }
        for (i, a) in components.iter().enumerate() {
            let want = match a.orientation() {
                Orientation::Outer => 1.0,
                Orientation::Inner => -1.0,
            };
            if a.signed_area() * want <= 0.0 {
                return Err(Error::InvalidCurve(format!("component {i} is traversed in the wrong direction")));
            }
            for b in components.iter().skip(i + 1) {
                check_disjoint(a, b)?;
            }
        }

        // every hole must sit inside exactly one outer component, and outer
        // components must not be nested
        for (i, c) in components.iter().enumerate() {
            let probe = c.points[0];
            let inside_outers = components
                .iter()
                .enumerate()
                .filter(|(j, o)| *j != i && o.orientation() == Orientation::Outer && o.winding(probe) > 0.5)
                .count();
            match c.orientation() {
                Orientation::Inner if inside_outers != 1 => {
                    return Err(Error::InvalidCurve(format!("hole {i} is not inside exactly one outer component")))
                }
                Orientation::Outer if inside_outers != 0 => {
                    return Err(Error::InvalidCurve(format!("outer component {i} is nested in another")))
                }
                _ => {}
            }
        }

        Ok(Self::assemble(components))
    }

    fn assemble(components: Vec<CurveComponent>) -> Self {
        let kappa_plus = components.iter().filter(|c| c.orientation() == Orientation::Outer).count();
        let kappa_minus = components.len() - kappa_plus;

        let mut b = Boundary {
            components,
            kappa_plus,
            kappa_minus,
            offsets: vec![],
            component_of: vec![],
            points: vec![],
            normals: vec![],
            weights: vec![],
            speeds: vec![],
            curvatures: vec![],
        };
        let mut offset = 0;
        for (ci, c) in b.components.iter().enumerate() {
            b.offsets.push(offset);
            offset += c.len();
            b.component_of.extend(std::iter::repeat_n(ci, c.len()));
            b.points.extend_from_slice(&c.points);
            b.normals.extend_from_slice(&c.normals);
            b.weights.extend_from_slice(&c.weights);
            b.speeds.extend_from_slice(&c.speeds);
            b.curvatures.extend_from_slice(&c.curvatures);
        }
        b
    }

    pub fn components(&self) -> &[CurveComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Nodes per component.
    pub fn nodes_per_component(&self) -> usize {
        self.components[0].len()
    }

    /// Same curves with `n` nodes per component. Layout checks are not
    /// repeated: they were done when `self` was built.
    pub fn refine(&self, n: usize) -> Result<Self> {
        let comps = self.components.iter().map(|c| c.refine(n)).collect::<Result<Vec<_>>>()?;
        Ok(Boundary::assemble(comps))
    }

    pub fn perimeter(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// One grid spacing: `2π max|x′| / N` over all components.
    pub fn grid_spacing(&self) -> f64 {
        self.components.iter().map(|c| c.grid_spacing()).fold(0.0, f64::max)
    }

    /// Largest node distance from the origin.
    pub fn max_radius(&self) -> f64 {
        self.points.iter().map(|p| p[0].hypot(p[1])).fold(0.0, f64::max)
    }

    pub fn min_node_distance(&self, x: Point) -> f64 {
        self.points.iter().map(|p| (p[0] - x[0]).hypot(p[1] - x[1])).fold(f64::INFINITY, f64::min)
    }

    /// Winding-number classification with a one-grid-spacing exclusion band.
    pub fn locate(&self, x: Point) -> Location {
        if self.min_node_distance(x) < self.grid_spacing() {
            return Location::NearBoundary;
        }
        let w: f64 = self.components.iter().map(|c| c.winding(x)).sum();
        if w > 0.5 {
            Location::Interior
        } else {
            Location::Exterior
        }
    }

    /// Interior/exterior classification ignoring the exclusion band.
    pub fn side_of(&self, x: Point) -> Location {
        let w: f64 = self.components.iter().map(|c| c.winding(x)).sum();
        if w > 0.5 {
            Location::Interior
        } else {
            Location::Exterior
        }
    }
}

fn check_disjoint(a: &CurveComponent, b: &CurveComponent) -> Result<()> {
    let n = a.len();
    let m = b.len();
    for i in 0..n {
        for j in 0..m {
            let pa = a.points[i];
            let pb = b.points[j];
            if (pa[0] - pb[0]).hypot(pa[1] - pb[1]) == 0.0 {
                return Err(Error::InvalidCurve("components share a node".into()));
            }
            if segments_cross(pa, a.points[(i + 1) % n], pb, b.points[(j + 1) % m]) {
                return Err(Error::InvalidCurve("components intersect".into()));
            }
        }
    }
    Ok(())
}
