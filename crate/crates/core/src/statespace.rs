//! Companion-form realizations of the score-derivative process and their
//! transforms.
//!
//! Two realizations are carried around: `(G, e)` with output map
//! `C = R(c,−a)`, and `(F, b_in)` whose state *is* the score derivative.
//! Both share the characteristic polynomial `ĝ = â ĉ`, and the Sylvester
//! matrix intertwines them: `R(c,−a) G = F R(c,−a)`. The conjugated pair
//! `(G_M, F_N)` links the same dynamics to the Bezout matrix.

use crate::error::{Error, Result};
use crate::poly::{Polynomial, ROOT_MAX_ITER, ROOT_TOL};
use crate::structmat::{assemble_blocks, equal_degree, exchange_matrix, shift_matrix, sylvester, u_vector};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// A reciprocal-root radius above `1 - STABILITY_MARGIN` counts as unstable.
pub const STABILITY_MARGIN: f64 = 1e-8;

/// Score-process system matrices for an ARMA(p,q) parameter point.
#[derive(Debug, Clone)]
pub struct ScoreSystem {
    /// Block-diagonal companion pair `diag(J − e_p aᵀ, J − e_q cᵀ)`.
    pub f: DMatrix<f64>,
    /// Companion matrix `J − e_{p+q} gᵀ` of `ĝ = â ĉ`.
    pub g: DMatrix<f64>,
    /// Driving vector `(e_p; −e_q)`.
    pub b_in: DVector<f64>,
    /// Output map `C = R(c,−a)`.
    pub c: DMatrix<f64>,
    pub p: usize,
    pub q: usize,
}

/// The conjugated matrices `G_M` and `F_N` of the equal-degree regime,
/// built from their explicit block forms.
#[derive(Debug, Clone)]
pub struct TransformedPair {
    pub g_m: DMatrix<f64>,
    pub f_n: DMatrix<f64>,
}

/// Companion matrix `J − e tᵀ` of a reciprocal polynomial (empty for
/// degree 0).
fn companion(p: &Polynomial) -> DMatrix<f64> {
    let n = p.degree();
    let mut m = DMatrix::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for (j, &t) in p.tail().iter().enumerate() {
        m[(0, j)] -= t;
    }
    m
}

/// Assembles `F`, `G`, `b_in`, and `C = R(c,−a)` for the model `(a, c)`.
pub fn build_score_system(a: &Polynomial, c: &Polynomial) -> Result<ScoreSystem> {
    let (p, q) = (a.degree(), c.degree());
    if p + q == 0 {
        return Err(Error::BadDimension(0));
    }
    let m = p + q;

    let mut f = DMatrix::zeros(m, m);
    f.view_mut((0, 0), (p, p)).copy_from(&companion(a));
    f.view_mut((p, p), (q, q)).copy_from(&companion(c));

    let g = companion(&a.product(c));

    let mut b_in = DVector::zeros(m);
    if p >= 1 {
        b_in[0] = 1.0;
    }
    if q >= 1 {
        b_in[p] = -1.0;
    }

    Ok(ScoreSystem {
        f,
        g,
        b_in,
        c: sylvester(c, a)?,
        p,
        q,
    })
}

/// Transfer function `τ(z) = ((1/â(z)) u*_p(z); −(1/ĉ(z)) u*_q(z))`
/// of the score process.
pub fn transfer_tau(a: &Polynomial, c: &Polynomial, z: Complex64) -> Result<DVector<Complex64>> {
    let (p, q) = (a.degree(), c.degree());
    let ahat = a.eval_reciprocal(z);
    let chat = c.eval_reciprocal(z);
    let worst = ahat.norm().min(chat.norm());
    if worst < 1e-12 {
        return Err(Error::PoleEvaluation(worst));
    }
    let mut tau = DVector::from_element(p + q, Complex64::new(0.0, 0.0));
    if p >= 1 {
        let top = u_vector(p, z, true)? / ahat;
        tau.rows_mut(0, p).copy_from(&top);
    }
    if q >= 1 {
        let bot = u_vector(q, z, true)? * (-chat.finv());
        tau.rows_mut(p, q).copy_from(&bot);
    }
    Ok(tau)
}

/// Controllability matrix `[b, Ab, …, A^{m-1}b]`.
pub fn controllability_matrix(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DMatrix<f64>> {
    let m = a.nrows();
    if a.ncols() != m || b.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "A is {}×{}, b has length {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    let mut out = DMatrix::zeros(m, m);
    let mut col = b.clone();
    for k in 0..m {
        out.set_column(k, &col);
        col = a * col;
    }
    Ok(out)
}

/// Observability matrix: `C`, `CA`, …, `CA^{m-1}` stacked by rows.
pub fn observability_matrix(c: &DMatrix<f64>, a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let m = a.nrows();
    if a.ncols() != m || c.ncols() != m {
        return Err(Error::DimensionMismatch(format!(
            "A is {}×{}, C has {} columns",
            a.nrows(),
            a.ncols(),
            c.ncols()
        )));
    }
    let rows = c.nrows();
    let mut out = DMatrix::zeros(rows * m, m);
    let mut blk = c.clone();
    for k in 0..m {
        out.view_mut((k * rows, 0), (rows, m)).copy_from(&blk);
        blk = &blk * a;
    }
    Ok(out)
}

/// Left null direction of `[F − λI | b_in]` at a common zero `λ` of `â`
/// and `ĉ`: the row `(u, v)` of Horner sequences
/// `u = (1, â_1(λ), …, â_{p-1}(λ))` and likewise for `v`.
pub fn uncontrollable_direction(
    a: &Polynomial,
    c: &Polynomial,
    lambda: Complex64,
) -> Result<DVector<Complex64>> {
    let (p, q) = (a.degree(), c.degree());
    if p == 0
        || q == 0
        || a.eval_reciprocal(lambda).norm() > 1e-8
        || c.eval_reciprocal(lambda).norm() > 1e-8
    {
        return Err(Error::NotCommonZero(lambda));
    }
    let mut out = DVector::from_element(p + q, Complex64::new(0.0, 0.0));
    for (i, v) in a.horner_sequence(lambda).into_iter().enumerate() {
        out[i] = v;
    }
    for (i, v) in c.horner_sequence(lambda).into_iter().enumerate() {
        out[p + i] = v;
    }
    Ok(out)
}

/// Builds `G_M = [P(J−eaᵀ)P, 0; (c−a)eᵀ, PJP−ceᵀ]` and
/// `F_N = [P(J−eaᵀ)P, 0; eeᵀ, J−ecᵀ]` from their explicit blocks.
/// The conjugation identities `G_M = M(c,a) F M(c,a)⁻¹` and
/// `F_N = N(c) G N(c)⁻¹` are exercised in tests only.
pub fn transformed_pair(a: &Polynomial, c: &Polynomial) -> Result<TransformedPair> {
    let n = equal_degree(a, c)?;
    let j = shift_matrix(n)?;
    let p = exchange_matrix(n)?;
    let av = DVector::from_column_slice(a.tail());
    let cv = DVector::from_column_slice(c.tail());
    let e = DVector::from_fn(n, |i, _| if i == 0 { 1.0 } else { 0.0 });

    let top_left = &p * (&j - &e * av.transpose()) * &p;
    let zero = DMatrix::zeros(n, n);

    let g_m = assemble_blocks(
        &top_left,
        &zero,
        &((&cv - &av) * e.transpose()),
        &(&p * &j * &p - &cv * e.transpose()),
    );
    let f_n = assemble_blocks(
        &top_left,
        &zero,
        &(&e * e.transpose()),
        &(&j - &e * cv.transpose()),
    );
    Ok(TransformedPair { g_m, f_n })
}

/// Stability of a polynomial factor: all zeros of the reciprocal strictly
/// inside the unit circle (margin [`STABILITY_MARGIN`]). Returns the flag
/// and the spectral radius estimate.
pub fn stability_check(p: &Polynomial) -> Result<(bool, f64)> {
    if p.degree() == 0 {
        return Ok((true, 0.0));
    }
    let roots = p.roots_of_reciprocal(ROOT_TOL, ROOT_MAX_ITER)?;
    let radius = roots
        .roots
        .iter()
        .map(|(z, _)| z.norm())
        .fold(0.0, f64::max);
    Ok((radius < 1.0 - STABILITY_MARGIN, radius))
}

/// Numerical rank with the loose threshold used for controllability and
/// observability decisions: `1e3 · max(rows, cols) · ε · σ_max`.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    if sv.is_empty() {
        return 0;
    }
    let thresh = 1e3 * m.nrows().max(m.ncols()) as f64 * f64::EPSILON * sv[0];
    sv.iter().filter(|&&s| s > thresh).count()
}
