//! Distributional calculus on Ω: the extension pairing `E♯`, the interior
//! Dirichlet-to-Neumann map, distributional Neumann data `μ₀ + Sᵗ[μ₁]` and
//! the distributional normal derivative.

mod dtn;
mod pairing;

pub use dtn::{build_dtn, DtNOperator, HarmonicExtension};
pub use pairing::{dist_normal_derivative, e_sharp_pair, pair_density, DensityPair, SchauderMinusOne, TestFunction};
