//! Crate-wide error type.

/// Errors raised by validation and by the numerical routines.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("constant term must be 1, got {0}")]
    ConstantTermNotOne(f64),
    #[error("coefficient sequence is empty")]
    EmptyCoefficients,
    #[error("coefficients are not real: factor parameters not closed under conjugation (max imaginary part {0:.3e})")]
    ComplexCoefficients(f64),
    #[error("dimension must be at least 1, got {0}")]
    BadDimension(usize),
    #[error("equal degrees required (p=q), got p={p}, q={q}")]
    DegreeMismatch { p: usize, q: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("root finder did not converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("(1 - phi z) with phi = {phi} is not a factor: deflation residual {residual:.3e}")]
    NotAFactor { phi: num_complex::Complex64, residual: f64 },
    #[error("factor parameters do not re-expand to the polynomial: residual {0:.3e}")]
    BadFactorization(f64),
    #[error("{0} is not a common zero of the reciprocal polynomials")]
    NotCommonZero(num_complex::Complex64),
    #[error("evaluation at a pole: |denominator| = {0:.3e} < 1e-12")]
    PoleEvaluation(f64),
    #[error("matrix is not stable: spectral radius {0}")]
    NotStable(f64),
    #[error("Kronecker system is singular (spectral radius condition violated)")]
    SingularSystem,
    #[error("bad simulation config: {0}")]
    BadConfig(String),
}

impl Error {
    /// True for failures of a numerical procedure on admissible input
    /// (as opposed to precondition violations).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::NotStable(_)
                | Error::SingularSystem
                | Error::PoleEvaluation(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
