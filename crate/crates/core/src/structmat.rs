//! Builders for the structured matrices of the ARMA/Bezout calculus:
//! shift J, exchange P, power vectors u_n(z)/u*_n(z), the bidiagonal
//! factors U_φ with their Toeplitz inverses T_φ, the Hankel matrices
//! S(a), S(â), S̃(ĉ), the Sylvester resultant R(c,−a), and the block
//! transforms M(c,a), N(c).
//!
//! Everything is materialized densely; the sizes in play are tiny.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Relative pivot threshold for declaring an LU factorization singular.
pub const SINGULAR_PIVOT_TOL: f64 = 1e-10;

/// Forward shift: ones on the first subdiagonal, `J_{ij} = 1` iff `i = j+1`.
pub fn shift_matrix(n: usize) -> Result<DMatrix<f64>> {
    check_dim(n)?;
    Ok(DMatrix::from_fn(n, n, |i, j| if i == j + 1 { 1.0 } else { 0.0 }))
}

/// Anti-diagonal identity (exchange) matrix, `P_{ij} = δ_{i, n+1-j}`.
/// `P² = I`, and `P M P = Mᵀ` for Toeplitz `M`.
pub fn exchange_matrix(n: usize) -> Result<DMatrix<f64>> {
    check_dim(n)?;
    Ok(DMatrix::from_fn(n, n, |i, j| if i + j == n - 1 { 1.0 } else { 0.0 }))
}

/// Power vector `u_n(z) = (1, z, …, z^{n-1})ᵀ`, or the reversed
/// `u*_n(z) = (z^{n-1}, …, 1)ᵀ` when `starred`.
pub fn u_vector(n: usize, z: Complex64, starred: bool) -> Result<DVector<Complex64>> {
    check_dim(n)?;
    let mut v = DVector::from_element(n, Complex64::new(1.0, 0.0));
    let mut pw = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let idx = if starred { n - 1 - k } else { k };
        v[idx] = pw;
        pw *= z;
    }
    Ok(v)
}

/// Lower bidiagonal factor `U_φ = I − φJ`.
pub fn u_phi_matrix(n: usize, phi: Complex64) -> Result<DMatrix<Complex64>> {
    check_dim(n)?;
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else if i == j + 1 {
            -phi
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Inverse of `U_φ`: lower triangular Toeplitz with `(i,j)` entry `φ^{i-j}`.
pub fn t_phi_matrix(n: usize, phi: Complex64) -> Result<DMatrix<Complex64>> {
    check_dim(n)?;
    let mut powers = vec![Complex64::new(1.0, 0.0); n];
    for k in 1..n {
        powers[k] = powers[k - 1] * phi;
    }
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if i >= j {
            powers[i - j]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Hankel matrix `S(a)` with `S(a)_{ij} = a_{i+j-1}` (1-based), zero past
/// the degree. First row `(a_1, …, a_n)`.
pub fn s_matrix(p: &Polynomial) -> Result<DMatrix<f64>> {
    let n = p.degree();
    check_dim(n)?;
    Ok(DMatrix::from_fn(n, n, |i, j| p.coeff(i + j + 1)))
}

/// Hankel matrix `S(â)` with `S(â)_{ij} = a_{n-i-j+1}` (1-based), zero for
/// negative indices. First row `(a_{n-1}, …, a_0)`.
pub fn s_hat_matrix(p: &Polynomial) -> Result<DMatrix<f64>> {
    let n = p.degree();
    check_dim(n)?;
    Ok(DMatrix::from_fn(n, n, |i, j| {
        let k = n as isize - i as isize - j as isize - 1;
        if k >= 0 {
            p.coeff(k as usize)
        } else {
            0.0
        }
    }))
}

/// The `(n+1)×(n+1)` Hankel matrix `S̃(ĉ)` with first row `(c_n, …, c_1, 1)`.
pub fn s_tilde_hat(c: &Polynomial) -> Result<DMatrix<f64>> {
    let n = c.degree();
    check_dim(n)?;
    Ok(DMatrix::from_fn(n + 1, n + 1, |i, j| {
        let k = n as isize - i as isize - j as isize;
        if k >= 0 {
            c.coeff(k as usize)
        } else {
            0.0
        }
    }))
}

/// Sylvester resultant `R(c,−a)`: `p` rows carrying `(1, c_1, …, c_q)`
/// shifted, stacked over `q` rows carrying `−(1, a_1, …, a_p)` shifted;
/// square of size `p+q`.
pub fn sylvester(c: &Polynomial, a: &Polynomial) -> Result<DMatrix<f64>> {
    let p = a.degree();
    let q = c.degree();
    if p + q == 0 {
        return Err(Error::BadDimension(0));
    }
    let m = p + q;
    let mut r = DMatrix::zeros(m, m);
    for i in 0..p {
        for k in 0..=q {
            r[(i, i + k)] = c.coeff(k);
        }
    }
    for i in 0..q {
        for k in 0..=p {
            r[(p + i, i + k)] = -a.coeff(k);
        }
    }
    Ok(r)
}

/// Determinant of `R(c,−a)` by LU with partial pivoting. Equals
/// `(−1)^q ∏_{i,j} (γ_j − α_i)` over the zeros `α_i` of `â` and `γ_j` of
/// `ĉ` (both degrees ≥ 1 for that product form to apply); the sign comes
/// from the `q` negated rows.
pub fn resultant_det(a: &Polynomial, c: &Polynomial) -> Result<f64> {
    let r = sylvester(c, a)?;
    Ok(det_lu(&r).0)
}

/// LU determinant together with a relative-pivot singularity flag:
/// singular iff the smallest pivot magnitude is below
/// [`SINGULAR_PIVOT_TOL`] times the largest.
pub fn det_lu(m: &DMatrix<f64>) -> (f64, bool) {
    let lu = m.clone().lu();
    let det = lu.determinant();
    let u = lu.u();
    let k = u.nrows().min(u.ncols());
    let mut min_p = f64::INFINITY;
    let mut max_p: f64 = 0.0;
    for i in 0..k {
        let piv = u[(i, i)].abs();
        min_p = min_p.min(piv);
        max_p = max_p.max(piv);
    }
    (det, min_p <= SINGULAR_PIVOT_TOL * max_p)
}

/// Block transform `M(c,a) = [P, 0; P S(â) P, P S(ĉ) P]`, size `2n`.
pub fn m_matrix(c: &Polynomial, a: &Polynomial) -> Result<DMatrix<f64>> {
    let n = equal_degree(a, c)?;
    let p = exchange_matrix(n)?;
    let psap = &p * s_hat_matrix(a)? * &p;
    let pscp = &p * s_hat_matrix(c)? * &p;
    Ok(assemble_blocks(&p, &DMatrix::zeros(n, n), &psap, &pscp))
}

/// Block transform `N(c) = [P S(ĉ) P, S(c); 0, I]`, size `2n`.
pub fn n_matrix(c: &Polynomial) -> Result<DMatrix<f64>> {
    let n = c.degree();
    check_dim(n)?;
    let p = exchange_matrix(n)?;
    let pscp = &p * s_hat_matrix(c)? * &p;
    Ok(assemble_blocks(
        &pscp,
        &s_matrix(c)?,
        &DMatrix::zeros(n, n),
        &DMatrix::identity(n, n),
    ))
}

/// Stacks four equally sized blocks `[a, b; c, d]`.
pub fn assemble_blocks(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
    d: &DMatrix<f64>,
) -> DMatrix<f64> {
    let n = a.nrows();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((0, n), (n, n)).copy_from(b);
    out.view_mut((n, 0), (n, n)).copy_from(c);
    out.view_mut((n, n), (n, n)).copy_from(d);
    out
}

pub(crate) fn equal_degree(a: &Polynomial, c: &Polynomial) -> Result<usize> {
    let (p, q) = (a.degree(), c.degree());
    if p != q {
        return Err(Error::DegreeMismatch { p, q });
    }
    check_dim(p)?;
    Ok(p)
}

fn check_dim(n: usize) -> Result<()> {
    if n < 1 {
        Err(Error::BadDimension(n))
    } else {
        Ok(())
    }
}
