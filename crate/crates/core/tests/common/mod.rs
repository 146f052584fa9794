//! Deterministic generators for random stable polynomials, planted-gcd
//! model families, and stable matrices, shared by the integration suites.
//! Each test target compiles its own copy, so not every helper is used
//! by every target.
#![allow(dead_code)]

use armafisher::poly::Polynomial;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

pub struct Gen {
    rng: ChaCha12Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    pub fn u01(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.u01()
    }

    pub fn usize_in(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.rng.next_u64() as usize) % (hi - lo + 1)
    }

    /// Conjugate-closed set of `n` reciprocal roots with radius ≤ `rmax`,
    /// every root at distance ≥ `min_sep` from `avoid` and from the roots
    /// already chosen.
    pub fn roots_avoiding(
        &mut self,
        n: usize,
        rmax: f64,
        avoid: &[Complex64],
        min_sep: f64,
    ) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = Vec::with_capacity(n);
        let mut taken: Vec<Complex64> = avoid.to_vec();
        let mut attempts = 0;
        while out.len() < n {
            attempts += 1;
            assert!(attempts < 100_000, "root sampling failed to separate");
            // the real segment fills up quickly under a separation
            // constraint; lean on conjugate pairs once sampling gets tight
            let pair_prob = if attempts > 500 { 0.9 } else { 0.45 };
            let remaining = n - out.len();
            let cands: Vec<Complex64> = if remaining >= 2 && self.u01() < pair_prob {
                let r = self.range(0.5 * min_sep + 0.05, rmax);
                let theta = self.range(0.2, std::f64::consts::PI - 0.2);
                let z = Complex64::from_polar(r, theta);
                if z.im.abs() < 0.51 * min_sep {
                    continue;
                }
                vec![z, z.conj()]
            } else {
                vec![Complex64::new(self.range(-rmax, rmax), 0.0)]
            };
            let ok = cands
                .iter()
                .all(|z| taken.iter().all(|w| (z - w).norm() >= min_sep));
            if ok {
                for z in cands {
                    taken.push(z);
                    out.push(z);
                }
            }
        }
        out
    }

    pub fn stable_poly(&mut self, n: usize) -> Polynomial {
        let roots = self.roots_avoiding(n, 0.85, &[], 0.02);
        Polynomial::from_reciprocal_roots(&roots).unwrap()
    }

    /// Stable pair with known reciprocal roots and no near-common roots
    /// across the two polynomials.
    pub fn gcd_free_pair_with_roots(
        &mut self,
        p: usize,
        q: usize,
        min_sep: f64,
    ) -> (Polynomial, Polynomial, Vec<Complex64>, Vec<Complex64>) {
        let ra = self.roots_avoiding(p, 0.85, &[], min_sep);
        let rc = self.roots_avoiding(q, 0.85, &ra, min_sep);
        (
            Polynomial::from_reciprocal_roots(&ra).unwrap(),
            Polynomial::from_reciprocal_roots(&rc).unwrap(),
            ra,
            rc,
        )
    }

    pub fn gcd_free_pair(&mut self, p: usize, q: usize, min_sep: f64) -> (Polynomial, Polynomial) {
        let (a, c, _, _) = self.gcd_free_pair_with_roots(p, q, min_sep);
        (a, c)
    }

    /// Pair sharing exactly the real roots `planted` (each of multiplicity
    /// one per polynomial unless repeated in the slice); the remaining
    /// roots of the two polynomials stay `min_sep` away from each other
    /// and from the planted set.
    pub fn planted_pair(
        &mut self,
        p: usize,
        q: usize,
        planted: &[Complex64],
        min_sep: f64,
    ) -> (Polynomial, Polynomial) {
        let d = planted.len();
        assert!(d <= p && d <= q);
        // distinct planted roots must themselves stay separated from the rest
        let mut avoid: Vec<Complex64> = planted.to_vec();
        let ra = self.roots_avoiding(p - d, 0.85, &avoid, min_sep);
        avoid.extend_from_slice(&ra);
        let rc = self.roots_avoiding(q - d, 0.85, &avoid, min_sep);
        let mut full_a = planted.to_vec();
        full_a.extend_from_slice(&ra);
        let mut full_c = planted.to_vec();
        full_c.extend_from_slice(&rc);
        (
            Polynomial::from_reciprocal_roots(&full_a).unwrap(),
            Polynomial::from_reciprocal_roots(&full_c).unwrap(),
        )
    }

    /// Distinct real values usable as planted common roots.
    pub fn planted_values(&mut self, d: usize, min_sep: f64) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = Vec::with_capacity(d);
        while out.len() < d {
            let sign = if self.u01() < 0.5 { -1.0 } else { 1.0 };
            let v = Complex64::new(sign * self.range(0.2, 0.8), 0.0);
            if out.iter().all(|w| (v - w).norm() >= min_sep) {
                out.push(v);
            }
        }
        out
    }

    /// Dense matrix with 2-norm `radius` (hence spectral radius ≤ `radius`).
    pub fn stable_matrix(&mut self, m: usize, radius: f64) -> DMatrix<f64> {
        let a = DMatrix::from_fn(m, m, |_, _| self.range(-1.0, 1.0));
        let top = a.clone().svd(false, false).singular_values[0];
        a * (radius / top)
    }

    /// Random positive semidefinite matrix `B Bᵀ`.
    pub fn psd_matrix(&mut self, m: usize) -> DMatrix<f64> {
        let b = DMatrix::from_fn(m, m, |_, _| self.range(-1.0, 1.0));
        &b * b.transpose()
    }
}

/// Relative Frobenius distance `‖x − y‖ / max(‖x‖, ‖y‖, 1)`.
pub fn rel_err(x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    (x - y).norm() / x.norm().max(y.norm()).max(1.0)
}
