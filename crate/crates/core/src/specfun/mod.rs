//! Special functions: entire Bessel series, Hankel functions and the radial
//! fundamental solutions of the Helmholtz operator.

mod bessel;
mod dd;
mod fundamental;
mod series;

pub use bessel::{bessel_j, hankel1, hankel1_with_j, neumann_n, EULER_GAMMA, SERIES_RADIUS};
pub use fundamental::{
    constants, unit_sphere_measure, FsKind, FundamentalSolution, RadialProfile, RadiationConstants,
};
pub use series::{j_sharp, n_sharp, EntireSeriesParams};
