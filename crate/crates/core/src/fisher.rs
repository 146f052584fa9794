//! Asymptotic Fisher information of a stationary ARMA model and the
//! identifiability verdict.
//!
//! The Fisher matrix is the unique solution of `I = F I Fᵀ + b_in b_inᵀ`
//! and does not depend on the noise variance. It factorizes as
//! `I = R(c,−a) P R(c,−a)ᵀ` with `P` strictly positive definite, so `I`
//! is singular exactly when the AR and MA polynomials share a factor.
//! The report cross-checks three detectors: the SVD rank of `I`, the
//! resultant determinant, and explicit common-root matching (plus the
//! Bezout rank and kernel in the equal-degree case).

use crate::bezout::{self, KernelBasis};
use crate::error::{Error, Result};
use crate::poly::{self, Polynomial};
use crate::statespace::{build_score_system, stability_check};
use crate::stein::{outer, solve_stein, DEFAULT_STEIN_TOL};
use crate::structmat::{resultant_det, sylvester};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Default relative singular-value threshold for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// A stationary, causal and invertible ARMA(p,q) parameter point.
#[derive(Debug, Clone)]
pub struct ArmaModel {
    ar: Polynomial,
    ma: Polynomial,
    sigma2: f64,
}

impl ArmaModel {
    /// Validates stability of both polynomial factors and positivity of
    /// the noise variance.
    pub fn new(ar: Polynomial, ma: Polynomial, sigma2: f64) -> Result<Self> {
        for p in [&ar, &ma] {
            let (ok, radius) = stability_check(p)?;
            if !ok {
                return Err(Error::NotStable(radius));
            }
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::BadConfig(format!(
                "sigma2 must be a positive real, got {sigma2}"
            )));
        }
        Ok(Self { ar, ma, sigma2 })
    }

    pub fn ar(&self) -> &Polynomial {
        &self.ar
    }

    pub fn ma(&self) -> &Polynomial {
        &self.ma
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn p(&self) -> usize {
        self.ar.degree()
    }

    pub fn q(&self) -> usize {
        self.ma.degree()
    }
}

/// Identifiability verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Identifiable,
    Singular,
}

/// Aggregated diagnosis. `bezout_rank` and `kernel_basis` are present
/// only in the equal-degree case. `borderline` flags a disagreement
/// between the rank test and the root test (the verdict is then
/// `Singular`, never a silent pick).
#[derive(Debug, Clone)]
pub struct IdentReport {
    pub fisher: DMatrix<f64>,
    pub rank: usize,
    pub resultant_det: f64,
    pub bezout_rank: Option<usize>,
    pub common_roots: Vec<(Complex64, usize)>,
    pub kernel_basis: Option<KernelBasis>,
    pub verdict: Verdict,
    pub borderline: bool,
    pub singular_values: Vec<f64>,
    /// Ratio of the smallest kept singular value to the largest dropped
    /// one (to the threshold itself at full rank); audits borderline
    /// rank decisions.
    pub sv_gap: f64,
}

/// Solves `I = F I Fᵀ + b_in b_inᵀ`. The result is independent of the
/// noise variance by construction (`sigma2` is never read).
pub fn fisher_information(model: &ArmaModel) -> Result<DMatrix<f64>> {
    let sys = build_score_system(model.ar(), model.ma())?;
    Ok(solve_stein(&sys.f, &outer(&sys.b_in), DEFAULT_STEIN_TOL)?.x)
}

/// The factorization `I = R(c,−a) P R(c,−a)ᵀ` with `P` the Stein
/// solution for `(G, e eᵀ)`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub r: DMatrix<f64>,
    pub p: DMatrix<f64>,
    pub residual: f64,
}

pub fn fisher_factorization(model: &ArmaModel) -> Result<Factorization> {
    let sys = build_score_system(model.ar(), model.ma())?;
    let m = sys.p + sys.q;
    let e = DVector::from_fn(m, |i, _| if i == 0 { 1.0 } else { 0.0 });
    let p = solve_stein(&sys.g, &outer(&e), DEFAULT_STEIN_TOL)?.x;
    let r = sylvester(model.ma(), model.ar())?;
    let fisher = fisher_information(model)?;
    let residual = (&fisher - &r * &p * r.transpose()).norm() / fisher.norm();
    Ok(Factorization { r, p, residual })
}

/// Runs all detectors and arbitrates the verdict.
pub fn identifiability_report(model: &ArmaModel, tol: f64) -> Result<IdentReport> {
    let fisher = fisher_information(model)?;
    let sv_vec = fisher.clone().svd(false, false).singular_values;
    let singular_values: Vec<f64> = sv_vec.iter().copied().collect();
    let threshold = tol * singular_values[0];
    let rank = singular_values.iter().filter(|&&s| s > threshold).count();
    // gap on normalized singular values, floored so the ratio stays finite
    let sv_gap = if rank == 0 {
        0.0
    } else {
        let kept = singular_values[rank - 1] / singular_values[0];
        let dropped = if rank < singular_values.len() {
            singular_values[rank] / singular_values[0]
        } else {
            tol
        };
        kept / dropped.max(1e-30)
    };

    let resultant = resultant_det(model.ar(), model.ma())?;
    let common_roots = poly::common_roots(model.ar(), model.ma(), tol)?;

    let (bezout_rank, kernel_basis) = if model.p() == model.q() && model.p() >= 1 {
        let bz = bezout::bezout_matrix(model.ma(), model.ar())?;
        let bsv = bz.entries.svd(false, false).singular_values;
        let brank = if bsv[0] == 0.0 {
            0
        } else {
            bsv.iter().filter(|&&s| s > tol * bsv[0]).count()
        };
        let kb = bezout::kernel_basis(model.ma(), model.ar(), tol)?;
        (Some(brank), Some(kb))
    } else {
        (None, None)
    };

    let rank_deficient = rank < model.p() + model.q();
    let roots_found = !common_roots.is_empty();
    let (verdict, borderline) = match (rank_deficient, roots_found) {
        (false, false) => (Verdict::Identifiable, false),
        (true, true) => (Verdict::Singular, false),
        _ => (Verdict::Singular, true),
    };

    Ok(IdentReport {
        fisher,
        rank,
        resultant_det: resultant,
        bezout_rank,
        common_roots,
        kernel_basis,
        verdict,
        borderline,
        singular_values,
        sv_gap,
    })
}
