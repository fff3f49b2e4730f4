//! Interior and exterior Neumann solvers, breakdown-wavenumber scans,
//! eigenfunction recovery and the verification suite (Green identities,
//! radiation condition).

mod neumann;
mod verify;

pub use neumann::{
    eigen_scan, find_dips, neumann_eigenfunction, solve_neumann, system_matrix, system_singular_values, Eigenfunction,
    NeumannProblem, ScanSample, SolveReport, COMPATIBILITY_TOL, DIP_THRESHOLD,
};
pub use verify::{
    exterior_second_green_form, green_identity_residual, radiation_check, second_green_residual, ClosedForm,
    PointSample, RadiationReport, Traces, RADIATION_GROWTH,
};
