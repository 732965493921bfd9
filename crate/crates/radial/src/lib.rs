//! Radial Schrödinger and conductivity DN maps on the unit ball.
//!
//! The `Q_N` family has exact rational DN eigenvalues; an independent
//! Dormand-Prince shooting solver in `t = ln r` serves as the numeric check,
//! and the affine/Jensen identities are verified on top of both.

mod family;
mod identities;
pub mod ode;
mod potential;
mod shooting;

pub use family::{q, rational_string, to_f64, weighted_sum, QNFamily, Rational};
pub use identities::{
    find_barycentric_tuples, jensen_dn_check, verify_affine_identity, BarycentricTuple, JensenAtom, JensenReport,
    LambdaPolicy, Mode,
};
pub use potential::RadialPotential;
pub use shooting::{
    alessandrini_check, conductivity_dn_numeric, dn_eig_numeric, dn_eig_numeric_with, dn_table_exact, dn_table_numeric,
    liouville_check, solution_sup_error, DNEigenvalueTable, EigenEntry, Provenance, ShootingOptions,
};

/// Paper default for the `Q_N` parameter.
pub const DEFAULT_LAMBDA: i64 = 16;
/// Absolute tolerance on DN Jensen margins.
pub const JENSEN_TOL: f64 = 1e-7;

#[derive(Debug, thiserror::Error)]
pub enum RadialError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("r = {0} outside [0, 1]")]
    Domain(f64),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("Jensen margin {margin:e} at l = {ell} below -{tol:e}")]
    JensenViolation { ell: u32, margin: f64, tol: f64 },
}
