//! Exact one-dimensional Kohn-Nirenberg symbol calculus.
//!
//! Symbols are finite sums of Gaussian-rational coefficients times jet
//! monomials in a coefficient function `u` times powers of `ξ`. Composition,
//! parametrices, triangularity checks and moment averaging are all exact.

mod average;
mod calculus;
mod jet;
mod serial;
mod symbol;

pub use average::{average_symbol, MomentSymbolLaw};
pub use calculus::{
    compose, conductivity_symbol, parametrix, schrodinger_symbol, triangularity_report, TriangularityReport,
};
pub use jet::JetMonomial;
pub use serial::{from_records, to_records, TermRecord};
pub use symbol::{gr, gr_int, parse_rational, q, rational_string, GaussianRational, Rational, Symbol, SymbolTerm};

/// Default lowest retained homogeneity degree.
pub const DEFAULT_CUTOFF: i32 = -10;

#[derive(Debug, thiserror::Error)]
pub enum SymbolError {
    #[error("degenerate principal symbol")]
    DegeneratePrincipalSymbol,
    #[error("triangularity violated at {monomial}: {reason}")]
    Triangularity { monomial: String, reason: String },
    #[error("atom {atom} has no value for derivative order {order}")]
    MissingJetOrder { atom: usize, order: u32 },
    #[error("invalid law: {0}")]
    InvalidLaw(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}
