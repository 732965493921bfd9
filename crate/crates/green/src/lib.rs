//! Discrete Dirichlet Green operators on 1D/2D grids and recovery of
//! coefficient statistics from averaged operators.
//!
//! Interior symbols are read with windowed plane-wave probes after
//! `(-Δ_h)^k` preconditioning, which makes the free-operator basis exact.

mod banded;
mod conductivity;
mod finite_model;
mod grid;
mod jensen;
mod operator;
mod probe;
mod recovery;
mod rigidity;
mod sampler;
pub mod scenarios;
mod surrogate;

pub use banded::BandedCholesky;
pub use conductivity::{
    closed_form_invariant, conductivity_invariant_recover, default_directions, frobenius, principal_direction,
    solve_invariant, ConductivityInvariant, PointInvariant, Sym2,
};
pub use finite_model::{finite_model_recover, law_mixed_moments, monomial_name, multi_indices, RANK_TOL};
pub use grid::{Field, Grid};
pub use jensen::{jensen_green_check, JensenGreenReport};
pub use operator::{assemble_green, DiscreteGreen, GreenCombination, GreenOperator, Kind};
pub use probe::{
    discrete_dispersion, probe_columns, probe_symbol, ProbeColumn, ProbeConfig, ProbeSample, SymbolFit,
};
pub use recovery::{
    recover_mean_variance, two_atom_pipeline, two_atom_recover, MeanVariance, PipelineConfig, PipelineResult,
    TwoAtomBranch,
};
pub use rigidity::{rigidity_residual, RigidityReport};
pub use sampler::{averaged_green, averaged_green_monte_carlo, CoefficientSampler};
pub use surrogate::surrogate_symbol_gap;

/// Smallest admissible eigenvalue of `Ē - G_{q̄}`.
pub const JENSEN_TOL: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum GreenError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("operator not positive definite: pivot {pivot} at row {row}")]
    Indefinite { row: usize, pivot: f64 },
    #[error("probe fit at node {node} ill-conditioned (cond {cond:e})")]
    IllConditioned { cond: f64, node: usize },
    #[error("inconsistent moments at index {index}: variance {variance}")]
    InconsistentMoments { index: usize, variance: f64 },
    #[error("monomials {monomials:?} are dependent at degree {degree}")]
    RankDeficient { degree: u32, monomials: Vec<String> },
    #[error("numerical failure: {0}")]
    Numerical(String),
}
