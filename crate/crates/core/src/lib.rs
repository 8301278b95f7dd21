//! Discrete Calderon-Zygmund convolution operators on the lattice and its
//! half-space.
//!
//! The crate covers the chain from kernel to solver: kernel validation
//! ([`kernel`]), discrete and continuous symbols ([`symbol`]), the periodic
//! Riemann boundary problem with its index and canonical factorization
//! ([`riemann`]), solvability diagnostics through slice windings
//! ([`solvability`]), and the half-space equation solvers ([`solver`]).
//! Plain-text formats live in [`io`].

pub mod error;
mod fftutil;
pub mod io;
pub mod kernel;
pub mod linalg;
pub mod periodic;
pub mod phase;
pub mod riemann;
pub mod solvability;
pub mod solver;
pub mod symbol;

pub use error::{CzError, Result};
pub use kernel::{riesz_constant, KernelFamily, KernelSpec};
pub use periodic::PeriodicGrid;
pub use riemann::{
    compute_index, factorize, project_minus, project_plus_coeff, project_plus_cot,
    solve_riemann, Factorization, RiemannProblem, RiemannSolution,
};
pub use solvability::{
    continuous_winding, discrete_winding, main_theorem_report, paired_coefficient,
    transmission_check, MainTheoremReport, SliceWindingReport, TransmissionReport, WindingMode,
};
pub use solver::{
    apply_operator, solve_dense, solve_truncated, solve_wiener_hopf, FastOperator,
    HalfSpaceProblem, SolveMethod, SolveReport,
};
pub use symbol::{
    continuous_symbol, discrete_symbol, mesh_convergence_report, sample_symbol_grid,
    ConvergenceReport, PartialSumPlan, SymbolGrid, SymbolSample,
};
