//! Boundary integral solvers for the interior and exterior Neumann problems
//! of the Helmholtz equation in the plane.
//!
//! Neumann data may be distributional: a boundary functional
//! `g = μ₀ + Sᵗ[μ₁]`, with `S` the interior Dirichlet-to-Neumann map, is
//! lowered to nodal data and the second-kind equations `(∓½I + Wᵗ)φ = g`
//! are solved by a Nyström method with logarithmic product quadrature.

pub mod distcalc;
pub mod error;
pub mod geometry;
pub mod layerpot;
pub mod solver;
pub mod specfun;

pub use error::{Error, Result};
