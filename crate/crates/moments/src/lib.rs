//! Finite moment hierarchies of random `Q_N` potentials and their DN maps.
//!
//! Vandermonde kernels in `S = N²` give pairs of laws whose DN moments agree
//! through a prescribed order; everything on the happy path is exact.

mod boundary;
mod fingerprint;
mod laws;
mod products;

pub use boundary::{dn_form_entry, gr, gr_real, AffineDNDecomposition, BoundaryVector, FormValue, GaussianRational};
pub use fingerprint::{law_fingerprint, sample_fingerprint, tv_distance, Fingerprint};
pub use laws::{build_moment_matched_laws, default_nodes, MomentMatchedLaws, QNLaw};
pub use products::{
    dn_covariance, dn_moment_product, expect_product, mean_potential_gap, product_polynomial, random_factor_pairs,
    run_product_trials, s_moment_gap, sharpness_pairs, FactorPair, TrialRow,
};

#[derive(Debug, thiserror::Error)]
pub enum MomentsError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("boundary vector uses degree {ell} outside the eigenvalue table")]
    Support { ell: u32 },
    #[error("internal invariant broken: {0}")]
    Internal(String),
    #[error(transparent)]
    Radial(#[from] randcal_radial::RadialError),
}
