//! Asymptotic Fisher information of stationary ARMA(p,q) models.
//!
//! The Fisher matrix is obtained as the unique solution of a Stein
//! (discrete Lyapunov) equation driven by a companion-form realization of
//! the score process, and factorized through the Sylvester resultant and
//! the Bezout matrix of the AR and MA polynomials. Singularity of the
//! Fisher matrix is equivalent to a common AR/MA factor, so the crate also
//! ships identifiability diagnostics (rank tests, resultant determinant,
//! Bezout kernel) and a Monte Carlo oracle for the score covariance.
//!
//! Dense matrices are `nalgebra::DMatrix<f64>` (complex variants where the
//! construction is intrinsically complex, e.g. root-parameterized factors).

pub mod bezout;
pub mod error;
pub mod fisher;
pub mod mc_oracle;
pub mod poly;
pub mod statespace;
pub mod stein;
pub mod structmat;

pub use error::{Error, Result};
pub use fisher::{ArmaModel, IdentReport, Verdict};
pub use poly::{Polynomial, RootSet};
