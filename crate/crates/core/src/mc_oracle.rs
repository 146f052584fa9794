//! Monte Carlo oracle for the Fisher matrix: simulates the score process
//! `ξ_{t+1} = F ξ_t + b_in ε_t` with Gaussian noise and returns the sample
//! mean of `ξ_t ξ_tᵀ / σ²` with batch-means standard errors.
//!
//! Noise is counter-based: one ChaCha12 stream per replication (keyed by
//! the seed and the replication index), one draw per time index, Gaussian
//! via the inverse-CDF transform. Results are therefore bitwise
//! reproducible and independent of how replications would be scheduled.

use crate::error::{Error, Result};
use crate::fisher::{fisher_information, ArmaModel};
use crate::statespace::build_score_system;
use nalgebra::{DMatrix, DVector};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use statrs::distribution::{ContinuousCDF, Normal};

/// Batches per replication for the batch-means standard errors.
pub const NUM_BATCHES: usize = 50;
/// Default burn-in length.
pub const DEFAULT_BURN_IN: usize = 2000;

/// Simulation configuration.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub model: ArmaModel,
    /// Retained steps per replication; at least 1000.
    pub horizon: usize,
    /// Discarded warm-up steps; at least 100.
    pub burn_in: usize,
    pub seed: u64,
    pub replications: usize,
}

/// Empirical Fisher estimate with entrywise batch-means standard errors.
#[derive(Debug, Clone)]
pub struct EmpiricalInfo {
    pub mean: DMatrix<f64>,
    pub stderr: DMatrix<f64>,
    pub samples: usize,
}

/// One uniform draw in (0,1) from 64 random bits, bounded away from the
/// endpoints so the inverse CDF stays finite.
fn uniform_open(bits: u64) -> f64 {
    ((bits >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0) // 2^-53
}

/// Simulates the score recursion and averages `ξ ξᵀ / σ²`.
pub fn simulate_score_covariance(cfg: &SimConfig) -> Result<EmpiricalInfo> {
    if cfg.horizon < 1000 {
        return Err(Error::BadConfig(format!(
            "horizon must be ≥ 1000, got {}",
            cfg.horizon
        )));
    }
    if cfg.burn_in < 100 {
        return Err(Error::BadConfig(format!(
            "burn-in must be ≥ 100, got {}",
            cfg.burn_in
        )));
    }
    if cfg.replications < 1 {
        return Err(Error::BadConfig("replications must be ≥ 1".into()));
    }

    let sys = build_score_system(cfg.model.ar(), cfg.model.ma())?;
    let m = sys.p + sys.q;
    let sigma = cfg.model.sigma2().sqrt();
    let stdnorm = Normal::new(0.0, 1.0).expect("unit normal");
    let t_len = cfg.horizon;

    let mut total = DMatrix::zeros(m, m);
    let mut batch_sums: Vec<DMatrix<f64>> = Vec::with_capacity(NUM_BATCHES * cfg.replications);
    let mut batch_counts: Vec<usize> = Vec::with_capacity(NUM_BATCHES * cfg.replications);

    for rep in 0..cfg.replications {
        let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
        rng.set_stream(rep as u64);
        let mut xi = DVector::zeros(m);
        let mut rep_batches = vec![DMatrix::zeros(m, m); NUM_BATCHES];
        let mut rep_counts = vec![0usize; NUM_BATCHES];
        for t in 0..cfg.burn_in + t_len {
            let eps = sigma * stdnorm.inverse_cdf(uniform_open(rng.next_u64()));
            xi = &sys.f * xi + &sys.b_in * eps;
            if t >= cfg.burn_in {
                let i = t - cfg.burn_in;
                let b = ((i * NUM_BATCHES) / t_len).min(NUM_BATCHES - 1);
                rep_batches[b].ger(1.0, &xi, &xi, 1.0);
                rep_counts[b] += 1;
            }
        }
        for (bsum, bcount) in rep_batches.into_iter().zip(rep_counts) {
            total += &bsum;
            batch_sums.push(bsum);
            batch_counts.push(bcount);
        }
    }

    let samples = t_len * cfg.replications;
    let scale = 1.0 / (samples as f64 * cfg.model.sigma2());
    let mean = total * scale;

    let k = batch_sums.len();
    let mut var_acc = DMatrix::zeros(m, m);
    for (bsum, bcount) in batch_sums.iter().zip(&batch_counts) {
        let bmean = bsum / (*bcount as f64 * cfg.model.sigma2());
        let dev = bmean - &mean;
        var_acc += dev.component_mul(&dev);
    }
    let stderr = (var_acc / (k as f64 * (k as f64 - 1.0))).map(f64::sqrt);

    Ok(EmpiricalInfo {
        mean,
        stderr,
        samples,
    })
}

/// Iterates the covariance recursion `i_{t+1} = F i_t Fᵀ + σ² b_in b_inᵀ`
/// from zero and returns the relative distance of `i_steps / σ²` to the
/// analytic Fisher matrix. Decays geometrically in `steps`.
pub fn stationary_recursion_check(model: &ArmaModel, steps: usize) -> Result<f64> {
    let sys = build_score_system(model.ar(), model.ma())?;
    let target = fisher_information(model)?;
    let s2 = model.sigma2();
    let drive = (&sys.b_in * sys.b_in.transpose()) * s2;
    let mut it = DMatrix::zeros(target.nrows(), target.ncols());
    for _ in 0..steps {
        it = &sys.f * it * sys.f.transpose() + &drive;
    }
    Ok((it / s2 - &target).norm() / target.norm())
}
