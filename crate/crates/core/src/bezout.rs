//! Bezout matrix of two equal-degree polynomials with unit constant term:
//! the unique `B(a,b)` with
//! `a(z)b(w) − a(w)b(z) = (z−w) u_n(z)ᵀ B(a,b) u_n(w)`,
//! together with its rank-one peeling along root factors, the full
//! expansion over all factor parameters, the common-zero factorization,
//! and an explicit kernel basis built from Toeplitz powers.
//!
//! `B(a,b)` is symmetric, antisymmetric in its arguments, and singular
//! exactly when `a` and `b` share a factor; its kernel dimension is the
//! degree of the gcd.

use crate::error::{Error, Result};
use crate::poly::{self, Polynomial};
use crate::structmat::{equal_degree, shift_matrix, t_phi_matrix, u_phi_matrix};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Deflation residual above which `(1 − φz)` is rejected as a factor.
pub const DEFLATE_TOL: f64 = 1e-8;

/// Symmetric Bezout matrix of size `n` (the common degree).
#[derive(Debug, Clone)]
pub struct BezoutMatrix {
    pub n: usize,
    pub entries: DMatrix<f64>,
}

/// Kernel basis `v_k^j = (T_{γ_k}^j J^{j-1})ᵀ ℓ` for the common zeros
/// `γ_k` (with multiplicities) of the two reciprocal polynomials.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    pub vectors: Vec<DVector<Complex64>>,
    pub common_roots: Vec<(Complex64, usize)>,
}

impl KernelBasis {
    pub fn total_multiplicity(&self) -> usize {
        self.common_roots.iter().map(|(_, m)| m).sum()
    }
}

/// Builds `B(a,b)` by the coefficient recursion
/// `B_{i,j} = d_{i+1,j} + B_{i+1,j-1}` with `d_{ij} = a_i b_j − a_j b_i`
/// (0-based, out-of-range entries zero), which matches the coefficient of
/// `z^i w^j` in the defining identity.
pub fn bezout_matrix(a: &Polynomial, b: &Polynomial) -> Result<BezoutMatrix> {
    let n = equal_degree(a, b)?;
    let ac: Vec<Complex64> = a.coeffs().iter().map(|&x| x.into()).collect();
    let bc: Vec<Complex64> = b.coeffs().iter().map(|&x| x.into()).collect();
    let entries = bezout_entries(&ac, &bc).map(|z| z.re);
    Ok(BezoutMatrix { n, entries })
}

fn bezout_entries(ac: &[Complex64], bc: &[Complex64]) -> DMatrix<Complex64> {
    let n = ac.len() - 1;
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in (0..n).rev() {
        for j in 0..n {
            let mut v = ac[i + 1] * bc[j] - ac[j] * bc[i + 1];
            if i + 1 < n && j >= 1 {
                v += m[(i + 1, j - 1)];
            }
            m[(i, j)] = v;
        }
    }
    m
}

/// Divides out `(1 − φz)`: returns the deflated ascending coefficients and
/// the remainder magnitude, which equals `|p̂(φ)|`.
fn deflate(coeffs: &[Complex64], phi: Complex64) -> (Vec<Complex64>, f64) {
    let n = coeffs.len() - 1;
    let mut r = Vec::with_capacity(n);
    r.push(coeffs[0]);
    for k in 1..n {
        let prev = r[k - 1];
        r.push(coeffs[k] + phi * prev);
    }
    let residual = (coeffs[n] + phi * r[n - 1]).norm();
    (r, residual)
}

fn deflate_checked(coeffs: &[Complex64], phi: Complex64) -> Result<Vec<Complex64>> {
    let (r, residual) = deflate(coeffs, phi);
    if residual > DEFLATE_TOL {
        return Err(Error::NotAFactor { phi, residual });
    }
    Ok(r)
}

fn to_complex(p: &Polynomial) -> Vec<Complex64> {
    p.coeffs().iter().map(|&x| x.into()).collect()
}

/// One step of the rank-one peeling: with `(1−α1 z) | a` and
/// `(1−β1 z) | b`,
/// `B(a,b) = U_{α1} (B(a_{-1},b_{-1}) ⊕ 0) U_{β1}ᵀ + (β1−α1) b_{β1} a_{α1}ᵀ`
/// where `a_{α1}` holds the coefficients of the deflated `a_{-1}`.
/// Returns the inner Bezout matrix and the reconstructed right-hand side.
pub fn bezout_decompose_once(
    a: &Polynomial,
    b: &Polynomial,
    alpha1: Complex64,
    beta1: Complex64,
) -> Result<(DMatrix<Complex64>, DMatrix<f64>)> {
    let n = equal_degree(a, b)?;
    let a1 = deflate_checked(&to_complex(a), alpha1)?;
    let b1 = deflate_checked(&to_complex(b), beta1)?;
    let inner = if n >= 2 {
        bezout_entries(&a1, &b1)
    } else {
        DMatrix::from_element(0, 0, Complex64::new(0.0, 0.0))
    };

    let mut embedded = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    if n >= 2 {
        embedded.view_mut((0, 0), (n - 1, n - 1)).copy_from(&inner);
    }
    let u_a = u_phi_matrix(n, alpha1)?;
    let u_b = u_phi_matrix(n, beta1)?;
    let av = DVector::from_column_slice(&a1);
    let bv = DVector::from_column_slice(&b1);
    let rec = &u_a * embedded * u_b.transpose() + &bv * av.transpose() * (beta1 - alpha1);
    Ok((inner, rec.map(|z| z.re)))
}

/// Full expansion of `B(a,b)` as a sum of `n` rank-one terms over the
/// factor parameter lists `a(z) = ∏(1−α_k z)`, `b(z) = ∏(1−β_k z)`.
pub fn bezout_expansion(
    a: &Polynomial,
    b: &Polynomial,
    alphas: &[Complex64],
    betas: &[Complex64],
) -> Result<DMatrix<f64>> {
    let n = equal_degree(a, b)?;
    check_factorization(a, alphas)?;
    check_factorization(b, betas)?;

    let e = DVector::from_fn(n, |i, _| {
        if i == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut sum = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for k in 1..=n {
        let mut x = e.clone();
        let mut y = e.clone();
        for j in 1..k {
            x = u_phi_matrix(n, alphas[j - 1])? * x;
            y = u_phi_matrix(n, betas[j - 1])? * y;
        }
        for j in k + 1..=n {
            x = u_phi_matrix(n, betas[j - 1])? * x;
            y = u_phi_matrix(n, alphas[j - 1])? * y;
        }
        sum += &x * y.transpose() * (betas[k - 1] - alphas[k - 1]);
    }
    Ok(sum.map(|z| z.re))
}

fn check_factorization(p: &Polynomial, phis: &[Complex64]) -> Result<()> {
    let n = p.degree();
    if phis.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} factor parameters for degree {}",
            phis.len(),
            n
        )));
    }
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for phi in phis {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k] += ck;
            next[k + 1] -= phi * ck;
        }
        c = next;
    }
    let residual = c
        .iter()
        .zip(p.coeffs())
        .map(|(got, &want)| (got - Complex64::new(want, 0.0)).norm())
        .fold(0.0, f64::max);
    if residual > 1e-8 {
        return Err(Error::BadFactorization(residual));
    }
    Ok(())
}

/// For a common zero `φ` of the two reciprocal polynomials,
/// `B(a,b) = U_φ (B(a_{-1},b_{-1}) ⊕ 0) U_φᵀ`; returns the inner matrix.
pub fn bezout_common_zero_factor(
    a: &Polynomial,
    b: &Polynomial,
    phi: Complex64,
) -> Result<DMatrix<Complex64>> {
    let n = equal_degree(a, b)?;
    let a1 = deflate_checked(&to_complex(a), phi)?;
    let b1 = deflate_checked(&to_complex(b), phi)?;
    Ok(if n >= 2 {
        bezout_entries(&a1, &b1)
    } else {
        DMatrix::from_element(0, 0, Complex64::new(0.0, 0.0))
    })
}

/// Kernel basis of `B(a,b)`: one vector `v_k^j = (T_{γ_k}^j J^{j-1})ᵀ ℓ`
/// per common zero `γ_k` and `j = 1..multiplicity`. `tol` is the
/// root-matching distance.
pub fn kernel_basis(a: &Polynomial, b: &Polynomial, tol: f64) -> Result<KernelBasis> {
    let n = equal_degree(a, b)?;
    let common = poly::common_roots(a, b, tol)?;
    let shift = shift_matrix(n)?.map(|x| Complex64::new(x, 0.0));
    let last = DVector::from_fn(n, |i, _| {
        if i == n - 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut vectors = Vec::new();
    for &(gamma, mult) in &common {
        let t = t_phi_matrix(n, gamma)?;
        let mut tj = DMatrix::from_diagonal_element(n, n, Complex64::new(1.0, 0.0));
        let mut jj = DMatrix::from_diagonal_element(n, n, Complex64::new(1.0, 0.0));
        for j in 1..=mult {
            tj *= &t; // T^j
            if j > 1 {
                jj *= &shift; // J^{j-1}
            }
            let m = &tj * &jj;
            vectors.push(m.transpose() * &last);
        }
    }
    Ok(KernelBasis {
        vectors,
        common_roots: common,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn poly(coeffs: &[f64]) -> Polynomial {
        Polynomial::new(coeffs.to_vec()).unwrap()
    }

    fn cz(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // the planted pair: both contain the factor (1 - 0.5 z)
    fn planted() -> (Polynomial, Polynomial) {
        (poly(&[1.0, -0.8, 0.15]), poly(&[1.0, -0.3, -0.1]))
    }

    #[test]
    fn bezout_examples() {
        let a = poly(&[1.0, 0.5]);
        let b = poly(&[1.0, 0.3]);
        let bz = bezout_matrix(&a, &b).unwrap();
        assert_relative_eq!(bz.entries[(0, 0)], 0.2, max_relative = 1e-14);

        let bz = bezout_matrix(&a, &a).unwrap();
        assert_eq!(bz.entries, DMatrix::zeros(1, 1));

        let (a, b) = planted();
        let bz = bezout_matrix(&a, &b).unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[-0.5, 0.25, 0.25, -0.125]);
        assert!((bz.entries.clone() - want).norm() < 1e-14);

        let short = poly(&[1.0, 0.5]);
        assert!(matches!(
            bezout_matrix(&a, &short),
            Err(Error::DegreeMismatch { p: 2, q: 1 })
        ));
    }

    #[test]
    fn bezout_symmetry_and_antisymmetry() {
        let a = poly(&[1.0, -0.4, 0.2, 0.05]);
        let b = poly(&[1.0, 0.6, -0.1, -0.02]);
        let ab = bezout_matrix(&a, &b).unwrap().entries;
        let ba = bezout_matrix(&b, &a).unwrap().entries;
        assert!((ab.clone() - ab.transpose()).norm() < 1e-14);
        assert!((ab + ba).norm() < 1e-14);
    }

    #[test]
    fn defining_identity() {
        let cases = [
            (poly(&[1.0, 0.5]), poly(&[1.0, 0.3])),
            planted(),
            (
                poly(&[1.0, -0.4, 0.2, 0.05, -0.01]),
                poly(&[1.0, 0.6, -0.1, -0.02, 0.004]),
            ),
        ];
        for (a, b) in cases {
            let n = a.degree();
            let bz = bezout_matrix(&a, &b).unwrap().entries.map(|x| cz(x, 0.0));
            for k in 0..50 {
                let t = k as f64;
                let z = cz(0.8 * t.cos(), 0.9 * (1.3 * t).sin());
                let w = cz(-0.7 * (2.1 * t).sin(), 0.6 * (0.7 * t).cos());
                let lhs = a.eval(z) * b.eval(w) - a.eval(w) * b.eval(z);
                let uz = crate::structmat::u_vector(n, z, false).unwrap();
                let uw = crate::structmat::u_vector(n, w, false).unwrap();
                let rhs = (z - w) * (uz.transpose() * &bz * uw)[(0, 0)];
                let scale = lhs.norm().max(rhs.norm()).max(1.0);
                assert!((lhs - rhs).norm() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn decompose_once_examples() {
        // shared factor parameter: the rank-one term vanishes
        let (a, b) = planted();
        let (inner, rec) = bezout_decompose_once(&a, &b, cz(0.5, 0.0), cz(0.5, 0.0)).unwrap();
        assert_eq!(inner.nrows(), 1);
        assert!((inner[(0, 0)] - cz(-0.5, 0.0)).norm() < 1e-12);
        let direct = bezout_matrix(&a, &b).unwrap().entries;
        assert!((rec - direct).norm() < 1e-10);

        // a = b with a shared factor: everything cancels
        let p2 = poly(&[1.0, -0.8, 0.15]);
        let (_, rec) = bezout_decompose_once(&p2, &p2, cz(0.5, 0.0), cz(0.5, 0.0)).unwrap();
        assert!(rec.norm() < 1e-12);

        // n = 1: empty inner block, pure rank-one term
        let a = poly(&[1.0, 0.5]);
        let b = poly(&[1.0, 0.3]);
        let (inner, rec) = bezout_decompose_once(&a, &b, cz(-0.5, 0.0), cz(-0.3, 0.0)).unwrap();
        assert_eq!(inner.nrows(), 0);
        assert_relative_eq!(rec[(0, 0)], 0.2, max_relative = 1e-12);

        assert!(matches!(
            bezout_decompose_once(&a, &b, cz(0.9, 0.0), cz(-0.3, 0.0)),
            Err(Error::NotAFactor { .. })
        ));
    }

    #[test]
    fn expansion_examples() {
        let a = poly(&[1.0, 0.5]);
        let b = poly(&[1.0, 0.3]);
        let m = bezout_expansion(&a, &b, &[cz(-0.5, 0.0)], &[cz(-0.3, 0.0)]).unwrap();
        assert_relative_eq!(m[(0, 0)], 0.2, max_relative = 1e-12);

        let phis = [cz(-0.5, 0.0)];
        let m = bezout_expansion(&a, &a, &phis, &phis).unwrap();
        assert!(m.norm() < 1e-14);

        let (a, b) = planted();
        let alphas = [cz(0.5, 0.0), cz(0.3, 0.0)];
        let betas = [cz(0.5, 0.0), cz(-0.2, 0.0)];
        let m = bezout_expansion(&a, &b, &alphas, &betas).unwrap();
        let direct = bezout_matrix(&a, &b).unwrap().entries;
        assert!((m - direct).norm() < 1e-10);

        // any consistent ordering works
        let alphas = [cz(0.3, 0.0), cz(0.5, 0.0)];
        let betas = [cz(-0.2, 0.0), cz(0.5, 0.0)];
        let m = bezout_expansion(&a, &b, &alphas, &betas).unwrap();
        let direct = bezout_matrix(&a, &b).unwrap().entries;
        assert!((m - direct).norm() < 1e-10);

        assert!(matches!(
            bezout_expansion(&a, &b, &[cz(0.1, 0.0), cz(0.2, 0.0)], &betas),
            Err(Error::BadFactorization(_))
        ));
    }

    #[test]
    fn common_zero_factor_examples() {
        let (a, b) = planted();
        let inner = bezout_common_zero_factor(&a, &b, cz(0.5, 0.0)).unwrap();
        assert_eq!(inner.nrows(), 1);
        assert!((inner[(0, 0)] - cz(-0.5, 0.0)).norm() < 1e-12);
        // reconstruct the common-zero factorization
        let n = 2;
        let u = u_phi_matrix(n, cz(0.5, 0.0)).unwrap();
        let mut emb = DMatrix::from_element(n, n, cz(0.0, 0.0));
        emb[(0, 0)] = inner[(0, 0)];
        let rec = (&u * emb * u.transpose()).map(|z| z.re);
        let direct = bezout_matrix(&a, &b).unwrap().entries;
        assert!((rec - direct).norm() < 1e-10);

        // degree-1 identical polynomials: 0×0 inner block
        let p = poly(&[1.0, -0.5]);
        let inner = bezout_common_zero_factor(&p, &p, cz(0.5, 0.0)).unwrap();
        assert_eq!(inner.nrows(), 0);

        // repeated factor (1-0.5z)^2 in both: two deflation steps reach 0×0
        let a2 = Polynomial::from_reciprocal_roots(&[cz(0.5, 0.0), cz(0.5, 0.0)]).unwrap();
        let b2 = a2.clone();
        let inner = bezout_common_zero_factor(&a2, &b2, cz(0.5, 0.0)).unwrap();
        assert_eq!(inner.nrows(), 1);
        let a1 = poly(&[1.0, -0.5]);
        let inner2 = bezout_common_zero_factor(&a1, &a1, cz(0.5, 0.0)).unwrap();
        assert_eq!(inner2.nrows(), 0);

        assert!(matches!(
            bezout_common_zero_factor(&a, &b, cz(0.3, 0.0)),
            Err(Error::NotAFactor { .. })
        ));
    }

    #[test]
    fn kernel_examples() {
        let (a, b) = planted();
        let kb = kernel_basis(&a, &b, 1e-8).unwrap();
        assert_eq!(kb.vectors.len(), 1);
        let v = &kb.vectors[0];
        assert!((v[0] - cz(0.5, 0.0)).norm() < 1e-9);
        assert!((v[1] - cz(1.0, 0.0)).norm() < 1e-12);
        let bz = bezout_matrix(&a, &b).unwrap().entries.map(|x| cz(x, 0.0));
        assert!((&bz * v).norm() < 1e-9);

        // no common zeros
        let a1 = poly(&[1.0, -0.5]);
        let b1 = poly(&[1.0, 0.3]);
        assert!(kernel_basis(&a1, &b1, 1e-8).unwrap().vectors.is_empty());

        // a = b with two distinct roots: full kernel of the zero matrix
        let p = poly(&[1.0, 0.0, -0.25]);
        let kb = kernel_basis(&p, &p, 1e-8).unwrap();
        assert_eq!(kb.vectors.len(), 2);
        let stacked = DMatrix::from_fn(2, 2, |i, j| kb.vectors[j][i]);
        assert!(stacked.map(|z| z.re).determinant().abs() > 1e-3);
    }

    #[test]
    fn kernel_multiplicity_two() {
        // (1-0.5z)^2 planted in both degree-3 polynomials
        let g = cz(0.5, 0.0);
        let a = Polynomial::from_reciprocal_roots(&[g, g, cz(-0.2, 0.0)]).unwrap();
        let b = Polynomial::from_reciprocal_roots(&[g, g, cz(0.3, 0.0)]).unwrap();
        let kb = kernel_basis(&a, &b, 1e-6).unwrap();
        assert_eq!(kb.total_multiplicity(), 2);
        assert_eq!(kb.vectors.len(), 2);
        let bz = bezout_matrix(&a, &b).unwrap();
        let bzc = bz.entries.map(|x| cz(x, 0.0));
        let bnorm = bz.entries.norm();
        for v in &kb.vectors {
            assert!((&bzc * v).norm() <= 1e-8 * bnorm);
        }
        // v^2 = (2γ, 1, 0)
        let v2 = &kb.vectors[1];
        assert!((v2[0] - cz(1.0, 0.0)).norm() < 1e-6);
        assert!((v2[1] - cz(1.0, 0.0)).norm() < 1e-6);
        assert!(v2[2].norm() < 1e-6);
    }

    #[test]
    fn rank_drops_by_gcd_degree() {
        // gcd degrees 0, 1, 2 against degree-4 polynomials
        let free_a =
            Polynomial::from_reciprocal_roots(&[cz(0.5, 0.0), cz(-0.3, 0.0), cz(0.7, 0.0), cz(0.1, 0.0)])
                .unwrap();
        let free_b =
            Polynomial::from_reciprocal_roots(&[cz(0.4, 0.0), cz(-0.6, 0.0), cz(0.85, 0.0), cz(-0.15, 0.0)])
                .unwrap();
        let planted1_a =
            Polynomial::from_reciprocal_roots(&[cz(0.5, 0.0), cz(-0.3, 0.0), cz(0.7, 0.0), cz(0.1, 0.0)])
                .unwrap();
        let planted1_b =
            Polynomial::from_reciprocal_roots(&[cz(0.5, 0.0), cz(-0.6, 0.0), cz(0.85, 0.0), cz(-0.15, 0.0)])
                .unwrap();
        let planted2_a =
            Polynomial::from_reciprocal_roots(&[cz(0.5, 0.0), cz(-0.3, 0.0), cz(0.7, 0.0), cz(0.1, 0.0)])
                .unwrap();
        let planted2_b =
            Polynomial::from_reciprocal_roots(&[cz(0.5, 0.0), cz(-0.3, 0.0), cz(0.85, 0.0), cz(-0.15, 0.0)])
                .unwrap();
        for (a, b, gcd) in [
            (free_a, free_b, 0usize),
            (planted1_a, planted1_b, 1),
            (planted2_a, planted2_b, 2),
        ] {
            let bz = bezout_matrix(&a, &b).unwrap().entries;
            let sv = bz.svd(false, false).singular_values;
            let thresh = 1e-8 * sv[0];
            let rank = sv.iter().filter(|&&s| s > thresh).count();
            assert_eq!(rank, 4 - gcd);
        }
    }
}
