//! Single- and double-layer potentials: Nyström matrices of `V`, `W`, `Wᵗ`,
//! off-boundary evaluation and one-sided boundary limits.
//!
//! Sign conventions: `S` solves `ΔS + k²S = δ`, the normal `ν` points out of
//! Ω, and the double layer jumps as `w± = ±½μ + Wμ` with `+` the interior
//! side.

mod field;
mod kernel;
mod near;
mod operator;

pub use field::{eval_field, evaluate_layer, Representation, Side, SolutionField};
pub use near::{jump_check, trig_interpolate, JumpCheck, NearEvaluator};
pub use operator::{assemble, log_weights, NystromOperator, OperatorKind};
