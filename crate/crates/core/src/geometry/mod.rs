//! Closed boundary curves, their Nyström node data, point location and area
//! quadrature.

mod boundary;
mod curve;
mod quadrature;

pub use boundary::{make_boundary, Boundary, BoundarySpec, Location};
pub use curve::{CurveComponent, CurveSample, CurveShape, Orientation, Point};
pub use quadrature::{area_quadrature, gauss_legendre, AreaQuadrature};
