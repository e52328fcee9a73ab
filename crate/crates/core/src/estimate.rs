//! Sample averages of an integrand over one randomized point set, and
//! statistics across independent replicates.

use alloc::vec;

use crate::error::{Error, Result};
use crate::integrand::Integrand;
use crate::math::{self, sqrt};
use crate::rng;
use crate::rqmc::{ScrambleKeys, Sobol};

/// Sampling scheme for one replicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampler {
    Mc,
    Rqmc,
}

/// Mean of `f` over `n` scrambled Sobol' points (mapped to normals) under
/// `seed`. `n` must be a power of two.
pub fn rqmc_mean<F: Integrand + ?Sized>(f: &F, n: usize, seed: u64) -> Result<f64> {
    check_n(n)?;
    let s = f.dim();
    if s == 0 {
        return f.eval(&[]);
    }
    let gen = Sobol::new(s)?;
    let keys = ScrambleKeys::new(seed, s);
    let mut z = vec![0.0; s];
    let mut acc = 0.0;
    for i in 0..n {
        gen.gaussian_point_into(i as u32, &keys, &mut z);
        acc += f.eval(&z)?;
    }
    Ok(acc / n as f64)
}

/// Mean of `f` over `n` independent pseudorandom normal vectors.
pub fn mc_mean<F: Integrand + ?Sized>(f: &F, n: usize, seed: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let s = f.dim();
    let mut z = vec![0.0; s];
    let mut acc = 0.0;
    for i in 0..n {
        for (j, zj) in z.iter_mut().enumerate() {
            *zj = math::ppf_unchecked(rng::uniform(seed, i as u64, j as u64));
        }
        acc += f.eval(&z)?;
    }
    Ok(acc / n as f64)
}

pub fn sample_mean<F: Integrand + ?Sized>(f: &F, sampler: Sampler, n: usize, seed: u64) -> Result<f64> {
    match sampler {
        Sampler::Mc => mc_mean(f, n, seed),
        Sampler::Rqmc => rqmc_mean(f, n, seed),
    }
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::invalid("n must be a power of two"));
    }
    if n as u64 > 1u64 << 32 {
        return Err(Error::invalid("at most 2^32 points"));
    }
    Ok(())
}

/// Mean and standard error of the mean of replicate estimates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReplicateStats {
    pub mean: f64,
    pub stderr: f64,
    pub reps: usize,
}

impl ReplicateStats {
    /// Needs at least two replicates.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::invalid("at least two replicates are needed"));
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
        Ok(Self { mean, stderr: sqrt(var / n as f64), reps: n })
    }

    pub fn scaled(self, c: f64) -> Self {
        Self { mean: c * self.mean, stderr: c.abs() * self.stderr, reps: self.reps }
    }
}

/// Replicate seed for replicate `rep` of stream `tag`.
pub fn replicate_seed(base: u64, rep: usize, tag: u64) -> u64 {
    rng::derive(base, rep as u64, tag)
}

/// Runs `reps` replicates sequentially.
pub fn replicate<F: Integrand + ?Sized>(
    f: &F,
    sampler: Sampler,
    n: usize,
    reps: usize,
    base_seed: u64,
    tag: u64,
) -> Result<ReplicateStats> {
    let mut values = vec![0.0; reps];
    for (r, v) in values.iter_mut().enumerate() {
        *v = sample_mean(f, sampler, n, replicate_seed(base_seed, r, tag))?;
    }
    ReplicateStats::from_values(&values)
}
