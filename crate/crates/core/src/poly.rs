//! Polynomials with unit constant term and their elementary operations.
//!
//! The standing convention: a polynomial `p(z) = 1 + p_1 z + … + p_n z^n`
//! is stored by its ascending coefficients, and its reciprocal
//! `p̂(z) = z^n p(1/z) = z^n + p_1 z^{n-1} + … + p_n` is monic with the
//! reversed coefficient sequence. Root finding always targets `p̂`; a
//! causal/invertible ARMA factor has all zeros of `p̂` inside the unit
//! circle.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Default residual tolerance for the root finder.
pub const ROOT_TOL: f64 = 1e-12;
/// Default iteration cap for the root finder.
pub const ROOT_MAX_ITER: usize = 200;
/// Roots closer than this are merged into one cluster with multiplicity.
pub const CLUSTER_RADIUS: f64 = 1e-6;
/// Default distance below which a root of `â` and a root of `ĉ` count as common.
pub const COMMON_ROOT_TOL: f64 = 1e-8;

/// Real polynomial in ascending powers with constant term exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

/// Roots of a reciprocal polynomial, clustered into (value, multiplicity)
/// pairs. `residual` is the largest `|p̂(root)|` over the raw roots.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: Vec<(Complex64, usize)>,
    pub residual: f64,
}

impl RootSet {
    /// Sum of multiplicities.
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }
}

impl Polynomial {
    /// Validates and wraps an ascending coefficient sequence.
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Result<Self> {
        let coeffs = coeffs.into();
        if coeffs.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        if coeffs[0] != 1.0 {
            return Err(Error::ConstantTermNotOne(coeffs[0]));
        }
        Ok(Self { coeffs })
    }

    /// Builds `1 + t_1 z + … + t_k z^k` from the coefficients after the
    /// constant term. An empty tail gives the constant polynomial 1.
    pub fn from_tail(tail: &[f64]) -> Self {
        let mut coeffs = Vec::with_capacity(tail.len() + 1);
        coeffs.push(1.0);
        coeffs.extend_from_slice(tail);
        Self { coeffs }
    }

    /// Expands `∏_k (1 - φ_k z)` from the zeros of the reciprocal
    /// polynomial. The parameter set must be closed under conjugation so
    /// that the coefficients are real.
    pub fn from_reciprocal_roots(phis: &[Complex64]) -> Result<Self> {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for phi in phis {
            // multiply by (1 - phi z)
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, ck) in c.iter().enumerate() {
                next[k] += ck;
                next[k + 1] -= phi * ck;
            }
            c = next;
        }
        let max_imag = c.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        if max_imag > 1e-10 {
            return Err(Error::ComplexCoefficients(max_imag));
        }
        Ok(Self {
            coeffs: c.iter().map(|z| z.re).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Ascending coefficients, `coeffs()[0] == 1`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// The tail `(p_1, …, p_n)` — the parameter vector without the unit
    /// constant term.
    pub fn tail(&self) -> &[f64] {
        &self.coeffs[1..]
    }

    /// Ascending coefficients of the reciprocal `p̂(z) = z^n p(1/z)`:
    /// the reversed sequence, monic by construction.
    pub fn reciprocal(&self) -> Vec<f64> {
        self.coeffs.iter().rev().copied().collect()
    }

    /// Coefficient convolution `p(z) q(z)`.
    pub fn product(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out[0] = 1.0; // exact: both constant terms are 1
        Polynomial { coeffs: out }
    }

    /// Evaluates `p(z)` by Horner's rule.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Evaluates the reciprocal `p̂(z) = z^n + p_1 z^{n-1} + … + p_n`.
    pub fn eval_reciprocal(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Horner sequence `(p̂_0(λ), …, p̂_{n-1}(λ))` with `p̂_0 = 1` and
    /// `p̂_k(λ) = λ p̂_{k-1}(λ) + p_k`. One more step would give `p̂(λ)`.
    pub fn horner_sequence(&self, lambda: Complex64) -> Vec<Complex64> {
        let n = self.degree();
        let mut seq = Vec::with_capacity(n);
        let mut acc = Complex64::new(1.0, 0.0);
        seq.push(acc);
        for k in 1..n {
            acc = lambda * acc + self.coeffs[k];
            seq.push(acc);
        }
        seq
    }

    /// All zeros of the monic reciprocal `p̂`, with multiplicities assigned
    /// by clustering within [`CLUSTER_RADIUS`]. Degree 0 yields an empty
    /// root set.
    pub fn roots_of_reciprocal(&self, tol: f64, max_iter: usize) -> Result<RootSet> {
        let n = self.degree();
        if n == 0 {
            return Ok(RootSet {
                roots: Vec::new(),
                residual: 0.0,
            });
        }
        let raw = aberth(&self.coeffs, tol, max_iter)?;
        let residual = raw
            .iter()
            .map(|&z| self.eval_reciprocal(z).norm())
            .fold(0.0, f64::max);
        Ok(RootSet {
            roots: cluster(&raw, CLUSTER_RADIUS),
            residual,
        })
    }
}

/// Matches zeros of `â` against zeros of `ĉ`; pairs within `tol` are
/// reported as common roots with multiplicity `min` of the two cluster
/// sizes. The reported value is the midpoint of the matched pair.
pub fn common_roots(
    a: &Polynomial,
    c: &Polynomial,
    tol: f64,
) -> Result<Vec<(Complex64, usize)>> {
    let ra = a.roots_of_reciprocal(ROOT_TOL, ROOT_MAX_ITER)?;
    let rc = c.roots_of_reciprocal(ROOT_TOL, ROOT_MAX_ITER)?;
    let mut used = vec![false; rc.roots.len()];
    let mut out = Vec::new();
    for &(alpha, ma) in &ra.roots {
        let mut best: Option<(usize, f64)> = None;
        for (j, &(gamma, _)) in rc.roots.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (alpha - gamma).norm();
            if d <= tol && best.map(|(_, bd)| d < bd).unwrap_or(true) {
                best = Some((j, d));
            }
        }
        if let Some((j, _)) = best {
            used[j] = true;
            let (gamma, mc) = rc.roots[j];
            out.push(((alpha + gamma) / 2.0, ma.min(mc)));
        }
    }
    Ok(out)
}

/// Aberth–Ehrlich simultaneous iteration on the monic polynomial whose
/// descending coefficients are `coeffs` (i.e. on `p̂` when `coeffs` are the
/// ascending coefficients of `p`). Initial guesses sit on a circle of
/// radius 0.8 at distinct, conjugate-asymmetric angles.
fn aberth(coeffs: &[f64], tol: f64, max_iter: usize) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    debug_assert!(n >= 1);
    let eval = |z: Complex64| {
        coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    };
    let eval_deriv = |z: Complex64| {
        coeffs[..n]
            .iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| {
                acc * z + c * (n - k) as f64
            })
    };

    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4 + 0.05 * k as f64;
            0.8 * Complex64::new(angle.cos(), angle.sin())
        })
        .collect();

    // Once the residual target is met, keep polishing for a few sweeps:
    // around a root of multiplicity m the residual is |z - root|^m, so
    // hitting `tol` alone leaves clusters only tol^(1/m) tight.
    const POLISH_SWEEPS: usize = 30;

    let mut residual = f64::INFINITY;
    let mut sweeps_since_hit: Option<usize> = None;
    for _ in 0..max_iter {
        let mut max_step = 0.0_f64;
        let mut max_abs = 0.0_f64;
        for k in 0..n {
            let pk = eval(z[k]);
            let mut dk = eval_deriv(z[k]);
            if dk.norm() == 0.0 {
                dk = Complex64::new(f64::EPSILON, 0.0);
            }
            let w = pk / dk;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).finv())
                .sum();
            let denom = Complex64::new(1.0, 0.0) - w * sum;
            let step = if denom.norm() == 0.0 { w } else { w / denom };
            z[k] -= step;
            max_step = max_step.max(step.norm());
            max_abs = max_abs.max(z[k].norm());
        }
        residual = z.iter().map(|&zk| eval(zk).norm()).fold(0.0, f64::max);
        if residual <= tol {
            let hits = sweeps_since_hit.map(|s| s + 1).unwrap_or(0);
            sweeps_since_hit = Some(hits);
            if max_step <= 1e-14 * (1.0 + max_abs) || hits >= POLISH_SWEEPS {
                return Ok(z);
            }
        }
    }
    if residual <= tol {
        return Ok(z);
    }
    Err(Error::NoConvergence {
        residual,
        iterations: max_iter,
    })
}

/// Greedy clustering: a root joins the first cluster whose centroid lies
/// within `radius`, otherwise starts a new one.
fn cluster(roots: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &r in roots {
        match clusters
            .iter_mut()
            .find(|(center, _)| (*center - r).norm() <= radius)
        {
            Some((center, m)) => {
                *center = (*center * *m as f64 + r) / (*m + 1) as f64;
                *m += 1;
            }
            None => clusters.push((r, 1)),
        }
    }
    clusters
}
