//! Conditional density estimation for a sum of log-normals.
//!
//! With h(y) = Σ exp(μ_j + (Ry)_j) increasing in y₁, the density of h at x
//! is E[φ(y₁*) / ∂₁h(y₁*, y_{−1})] where h(y₁*, y_{−1}) = x. Averaging this
//! over RQMC samples of y_{−1} gives an unbiased, smooth density estimate.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::estimate::check_n;
use crate::integrand::Integrand;
use crate::linalg::{reverse_cholesky, PathConstruction, PathKind};
use crate::math::log2;
use crate::models::{lognormal_sum, LognormalSumSpec};
use crate::preint::{LognormalPreint, RootResult};
use crate::rqmc::{ScrambleKeys, Sobol};
use crate::subspace::{constrained_rotation, estimate_c, FirstDirectionConstraint, Rotation};

/// Replicate curves on a grid and their MISE.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityEstimate {
    pub grid: Vec<f64>,
    pub curves: Vec<Vec<f64>>,
    pub mise: f64,
}

impl DensityEstimate {
    pub fn new(grid: Vec<f64>, curves: Vec<Vec<f64>>) -> Result<Self> {
        let mise = mise(&curves, &grid, None)?;
        Ok(Self { grid, curves, mise })
    }

    pub fn neg_log2_mise(&self) -> f64 {
        neg_log2(self.mise)
    }

    /// Pointwise mean and sample variance across replicates.
    pub fn pointwise(&self) -> Vec<(f64, f64)> {
        let reps = self.curves.len() as f64;
        (0..self.grid.len())
            .map(|g| {
                let mean = self.curves.iter().map(|c| c[g]).sum::<f64>() / reps;
                let var = self.curves.iter().map(|c| (c[g] - mean) * (c[g] - mean)).sum::<f64>() / (reps - 1.0);
                (mean, var)
            })
            .collect()
    }
}

/// `len` equally spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, len: usize) -> Result<Vec<f64>> {
    if len < 2 || !(hi > lo) {
        return Err(Error::invalid("grid needs len >= 2 and hi > lo"));
    }
    let h = (hi - lo) / (len - 1) as f64;
    Ok((0..len).map(|i| if i + 1 == len { hi } else { lo + h * i as f64 }).collect())
}

/// The default evaluation grid, 200 points on [0.1, 50].
pub fn default_grid() -> Vec<f64> {
    uniform_grid(0.1, 50.0, 200).expect("valid constants")
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("grid must be non-empty and strictly increasing"));
    }
    Ok(())
}

/// One density curve from `n` scrambled Sobol' samples of y_{−1}.
///
/// Roots are warm-started along the grid, since y₁* increases with x.
pub fn cde_curve(spec: &LognormalSumSpec, r: &PathConstruction, grid: &[f64], n: usize, seed: u64) -> Result<Vec<f64>> {
    check_grid(grid)?;
    check_n(n)?;
    let ctx = LognormalPreint::new(spec.clone(), r)?;
    let s = spec.dim() - 1;
    let mut out = vec![0.0; grid.len()];
    if s == 0 {
        let mut sum = ctx.exp_sum(&[]);
        accumulate(&ctx, &mut sum, grid, &mut out)?;
        return Ok(out);
    }
    let gen = Sobol::new(s)?;
    let keys = ScrambleKeys::new(seed, s);
    let mut y = vec![0.0; s];
    for i in 0..n {
        gen.gaussian_point_into(i as u32, &keys, &mut y);
        let mut sum = ctx.exp_sum(&y);
        accumulate(&ctx, &mut sum, grid, &mut out)?;
    }
    for v in &mut out {
        *v /= n as f64;
    }
    Ok(out)
}

fn accumulate(ctx: &LognormalPreint, sum: &mut crate::preint::ExpSum, grid: &[f64], out: &mut [f64]) -> Result<()> {
    let mut hint = None;
    for (o, &x) in out.iter_mut().zip(grid) {
        let cd = ctx.at(sum, x, hint)?;
        *o += cd.density;
        if let RootResult::Root(y) = cd.root {
            hint = Some(y);
        }
    }
    Ok(())
}

/// Integrated across-replicate variance of the curves (trapezoid rule).
///
/// With a `reference` density the mean integrated squared deviation from
/// it is returned instead.
pub fn mise(curves: &[Vec<f64>], grid: &[f64], reference: Option<&[f64]>) -> Result<f64> {
    check_grid(grid)?;
    if curves.len() < 2 {
        return Err(Error::invalid("MISE needs at least two replicates"));
    }
    if curves.iter().any(|c| c.len() != grid.len()) || reference.is_some_and(|r| r.len() != grid.len()) {
        return Err(Error::invalid("curve length must equal the grid length"));
    }
    let reps = curves.len() as f64;
    let pointwise: Vec<f64> = (0..grid.len())
        .map(|g| match reference {
            Some(r) => curves.iter().map(|c| (c[g] - r[g]) * (c[g] - r[g])).sum::<f64>() / reps,
            None => {
                let mean = curves.iter().map(|c| c[g]).sum::<f64>() / reps;
                curves.iter().map(|c| (c[g] - mean) * (c[g] - mean)).sum::<f64>() / (reps - 1.0)
            }
        })
        .collect();
    Ok(trapezoid(grid, &pointwise))
}

pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(xw, yw)| 0.5 * (xw[1] - xw[0]) * (yw[0] + yw[1])).sum()
}

/// Cap on −log₂(MISE), reached when the MISE is exactly zero.
pub const NEG_LOG2_CAP: f64 = 1074.0;

/// −log₂ of a MISE value, capped at [`NEG_LOG2_CAP`].
pub fn neg_log2(m: f64) -> f64 {
    if m <= 0.0 {
        NEG_LOG2_CAP
    } else {
        (-log2(m)).min(NEG_LOG2_CAP)
    }
}

/// h(y) = Σ exp(μ_j + (Ry)_j) as an integrand.
#[derive(Clone, Debug)]
pub struct LognormalSum {
    spec: LognormalSumSpec,
    r: PathConstruction,
}

impl LognormalSum {
    pub fn new(spec: LognormalSumSpec, r: PathConstruction) -> Result<Self> {
        if r.dim() != spec.dim() {
            return Err(Error::invalid("construction order must equal d"));
        }
        Ok(Self { spec, r })
    }
}

impl Integrand for LognormalSum {
    fn dim(&self) -> usize {
        self.spec.dim()
    }
    fn eval(&self, y: &[f64]) -> Result<f64> {
        Ok(lognormal_sum(&self.spec, &self.r, y))
    }
}

/// Baseline construction: Σ = R Rᵀ with R lower triangular in reverse
/// order, so the first column is supported on the first coordinate and the
/// conditioning variable is hidden in one summand.
pub fn direct_construction(spec: &LognormalSumSpec) -> Result<PathConstruction> {
    let r = reverse_cholesky(&spec.sigma)?;
    Ok(PathConstruction { r, kind: PathKind::Cholesky, sigma: spec.sigma.clone() })
}

/// CAS construction: with R0 = chol(Σ) and Ĉ the gradient moment of h
/// under R0, the first direction maximizes vᵀĈv subject to R0 v ≥ 0.
/// Returns the rotation and R = R0 U.
pub fn cas_construction(spec: &LognormalSumSpec, m: usize, eps: f64, seed: u64) -> Result<(Rotation, PathConstruction)> {
    let r0 = PathConstruction::cholesky(spec.sigma.clone())?;
    let h = LognormalSum::new(spec.clone(), r0.clone())?;
    let c = estimate_c(&h, m, eps, seed)?;
    let d = spec.dim();
    let rot = constrained_rotation(&c, FirstDirectionConstraint::SignPattern { r0: r0.clone(), signs: vec![1.0; d] })?;
    let mut pc = r0.rotated(&rot.u);
    let scale = crate::math::max_abs(&pc.first_column());
    for i in 0..d {
        if pc.r[(i, 0)] < 0.0 && -pc.r[(i, 0)] <= crate::preint::SIGN_TOL * scale {
            pc.r[(i, 0)] = 0.0;
        }
    }
    Ok((rot, pc))
}

/// Replicate curves for one construction, replicate `rep` seeded by
/// `derive(base_seed, rep, tag)`.
pub fn cde_replicates(
    spec: &LognormalSumSpec,
    r: &PathConstruction,
    grid: &[f64],
    n: usize,
    reps: usize,
    base_seed: u64,
    tag: u64,
) -> Result<DensityEstimate> {
    let curves = (0..reps)
        .map(|rep| cde_curve(spec, r, grid, n, crate::estimate::replicate_seed(base_seed, rep, tag)))
        .collect::<Result<Vec<_>>>()?;
    DensityEstimate::new(grid.to_vec(), curves)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_curves_have_zero_mise() {
        let grid = uniform_grid(0.0, 1.0, 5).unwrap();
        let c = vec![vec![1.0, 2.0, 3.0, 2.0, 1.0]; 3];
        assert_eq!(mise(&c, &grid, None).unwrap(), 0.0);
        assert_eq!(neg_log2(0.0), NEG_LOG2_CAP);
        assert!(mise(&c[..1], &grid, None).is_err());
    }

    #[test]
    fn grid_endpoints() {
        let g = default_grid();
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[199], 50.0);
    }
}
