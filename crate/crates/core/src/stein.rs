//! Stein (discrete Lyapunov) equations `X = A X Aᵀ + Q` and the four
//! solution matrices attached to an ARMA parameter point:
//!
//! * `H` driven by `G_M` and `Q` driven by `F_N` (equal-degree regime),
//!   with `H = (I ⊕ B(c,a)) Q (I ⊕ B(c,a))`;
//! * the Fisher matrix `I` driven by `(F, b_in)` and `P` driven by
//!   `(G, e)`, with `I = M⁻¹ H M⁻ᵀ` and `P = N⁻¹ Q N⁻ᵀ`.
//!
//! The production solver is squaring/doubling on the series
//! `Σ A^k Q (Aᵀ)^k`; an independent Kronecker-vectorization solve is kept
//! as a cross-check oracle.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::statespace::{build_score_system, transformed_pair, STABILITY_MARGIN};
use crate::structmat::equal_degree;
use nalgebra::{DMatrix, DVector};

/// Default tail-bound tolerance for the doubling iteration.
pub const DEFAULT_STEIN_TOL: f64 = 1e-13;
/// Doubling steps before giving up (each step squares `A`).
pub const MAX_DOUBLINGS: usize = 100;
/// Largest dimension accepted by the Kronecker oracle (system size m²).
pub const MAX_KRON_DIM: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteinMethod {
    Doubling,
    Kronecker,
}

/// A solved Stein equation: symmetric `X`, its relative residual
/// `‖X − AXAᵀ − Q‖_F / ‖Q‖_F`, and the solver used.
#[derive(Debug, Clone)]
pub struct SteinSolution {
    pub x: DMatrix<f64>,
    pub residual: f64,
    pub method: SteinMethod,
}

/// The four Stein solutions for a model `θ = (a, c)` of common degree n.
#[derive(Debug, Clone)]
pub struct SteinQuartet {
    /// Solution for `(G_M, e_P e_Pᵀ)`.
    pub h: DMatrix<f64>,
    /// Solution for `(F_N, e_P e_Pᵀ)`; strictly positive definite.
    pub q: DMatrix<f64>,
    /// Solution for `(F, b_in b_inᵀ)`: the asymptotic Fisher matrix.
    pub fisher: DMatrix<f64>,
    /// Solution for `(G, e eᵀ)`; strictly positive definite.
    pub p: DMatrix<f64>,
}

/// Spectral radius by Gelfand's formula `‖A^{2^k}‖^{1/2^k}` with
/// normalized repeated squaring. Robust for nilpotent matrices and
/// complex spectra, accurate to ~1e-13 at 48 squarings.
fn spectral_radius(a: &DMatrix<f64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let mut b = a.clone();
    let mut log_radius = 0.0_f64;
    let mut weight = 1.0_f64; // 1 / 2^k
    for _ in 0..48 {
        let nb = b.norm();
        if nb == 0.0 {
            return 0.0;
        }
        if !nb.is_finite() {
            return f64::INFINITY;
        }
        log_radius += weight * nb.ln();
        b /= nb;
        b = &b * &b;
        weight *= 0.5;
    }
    let nb = b.norm();
    if nb == 0.0 {
        return 0.0;
    }
    (log_radius + weight * nb.ln()).exp()
}

fn residual_of(a: &DMatrix<f64>, q: &DMatrix<f64>, x: &DMatrix<f64>) -> f64 {
    let r = x - a * x * a.transpose() - q;
    r.norm() / q.norm().max(f64::MIN_POSITIVE)
}

/// Doubling solver: starting from `(A_0, X_0) = (A, Q)`, repeat
/// `X ← X + A_k X A_kᵀ`, `A_{k+1} = A_k²` until the tail bound
/// `‖A_k‖_F² ‖X‖_F ≤ tol`. `X` is symmetrized on output.
pub fn solve_stein(a: &DMatrix<f64>, q: &DMatrix<f64>, tol: f64) -> Result<SteinSolution> {
    let radius = spectral_radius(a);
    if radius >= 1.0 - STABILITY_MARGIN {
        return Err(Error::NotStable(radius));
    }
    let mut x = q.clone();
    let mut ak = a.clone();
    let mut converged = false;
    for _ in 0..MAX_DOUBLINGS {
        let an = ak.norm();
        if an * an * x.norm() <= tol {
            converged = true;
            break;
        }
        x = &x + &ak * &x * ak.transpose();
        ak = &ak * &ak;
    }
    if !converged {
        let an = ak.norm();
        return Err(Error::NoConvergence {
            residual: an * an * x.norm(),
            iterations: MAX_DOUBLINGS,
        });
    }
    let x = (&x + x.transpose()) * 0.5;
    let residual = residual_of(a, q, &x);
    Ok(SteinSolution {
        x,
        residual,
        method: SteinMethod::Doubling,
    })
}

/// Kronecker-vectorization oracle: solves
/// `(I_{m²} − A ⊗ A) vec(X) = vec(Q)` by LU. Cross-check only.
pub fn solve_stein_kron(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<SteinSolution> {
    let m = a.nrows();
    if m > MAX_KRON_DIM {
        return Err(Error::DimensionMismatch(format!(
            "Kronecker oracle supports m ≤ {MAX_KRON_DIM}, got {m}"
        )));
    }
    let kron = a.kronecker(a);
    let sys = DMatrix::identity(m * m, m * m) - kron;
    let rhs = DVector::from_column_slice(q.as_slice());
    let sol = sys.lu().solve(&rhs).ok_or(Error::SingularSystem)?;
    let x = DMatrix::from_column_slice(m, m, sol.as_slice());
    let x = (&x + x.transpose()) * 0.5;
    let residual = residual_of(a, q, &x);
    Ok(SteinSolution {
        x,
        residual,
        method: SteinMethod::Kronecker,
    })
}

/// Rank-one right-hand side `v vᵀ`.
pub fn outer(v: &DVector<f64>) -> DMatrix<f64> {
    v * v.transpose()
}

/// Driving vector `e_P`: last basis vector of the first block, zeros in
/// the second (`e_P = M(c,a) b_in = N(c) e`).
pub fn e_p_vector(n: usize) -> DVector<f64> {
    DVector::from_fn(2 * n, |i, _| if i == n - 1 { 1.0 } else { 0.0 })
}

/// Solves the four Stein equations for an equal-degree model.
pub fn stein_quartet(a: &Polynomial, c: &Polynomial) -> Result<SteinQuartet> {
    let n = equal_degree(a, c)?;
    let sys = build_score_system(a, c)?;
    let tp = transformed_pair(a, c)?;
    let ep = e_p_vector(n);
    let e = DVector::from_fn(2 * n, |i, _| if i == 0 { 1.0 } else { 0.0 });
    let h = solve_stein(&tp.g_m, &outer(&ep), DEFAULT_STEIN_TOL)?;
    let q = solve_stein(&tp.f_n, &outer(&ep), DEFAULT_STEIN_TOL)?;
    let fisher = solve_stein(&sys.f, &outer(&sys.b_in), DEFAULT_STEIN_TOL)?;
    let p = solve_stein(&sys.g, &outer(&e), DEFAULT_STEIN_TOL)?;
    Ok(SteinQuartet {
        h: h.x,
        q: q.x,
        fisher: fisher.x,
        p: p.x,
    })
}
