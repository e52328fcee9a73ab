//! The conditional-density experiment: direct versus CAS construction.

use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use casqmc_core::cde::{cas_construction, cde_curve, direct_construction, DensityEstimate};
use casqmc_core::estimate::replicate_seed;
use casqmc_core::models::LognormalSumSpec;
use casqmc_core::rng;
use casqmc_core::PathConstruction;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, Family};
use crate::error::{HarnessError, Result};
use crate::harness::{gradient_seed, pool, ErfReport, ErfRow};

const DIRECT_STREAM: u64 = 0x4449_5245_4354;
const CAS_STREAM: u64 = 0x4341_53;

/// Both estimators at one correlation.
#[derive(Clone, Debug)]
pub struct CdeRun {
    pub rho: f64,
    pub direct: DensityEstimate,
    pub cas: DensityEstimate,
    pub setup: Duration,
    pub elapsed: Duration,
}

fn replicates(cfg: &ExperimentConfig, spec: &LognormalSumSpec, pc: &PathConstruction, grid: &[f64], tag: u64) -> Result<DensityEstimate> {
    let curves = pool(cfg.workers)?.install(|| {
        (0..cfg.reps)
            .into_par_iter()
            .map(|r| cde_curve(spec, pc, grid, cfg.n, replicate_seed(cfg.base_seed, r, rng::mix64(tag))))
            .collect::<casqmc_core::Result<Vec<_>>>()
    })?;
    Ok(DensityEstimate::new(grid.to_vec(), curves)?)
}

/// Runs the direct and CAS estimators for every configured ρ.
pub fn cde_experiment(cfg: &ExperimentConfig, grid: &[f64]) -> Result<(ErfReport, Vec<CdeRun>)> {
    if cfg.family != Family::Cde {
        return Err(HarnessError::Usage("not a density configuration".into()));
    }
    cfg.validate()?;
    let mut report = ErfReport::default();
    let mut runs = Vec::new();
    for &rho in &cfg.rhos {
        let start = Instant::now();
        let spec = LognormalSumSpec::autocorrelated(cfg.model.d, rho)?;
        let direct_pc = direct_construction(&spec)?;
        let t = Instant::now();
        let (_, cas_pc) = cas_construction(&spec, cfg.m_grad, cfg.eps_fd, gradient_seed(cfg.base_seed))?;
        let setup = t.elapsed();
        let direct = replicates(cfg, &spec, &direct_pc, grid, DIRECT_STREAM)?;
        let cas = replicates(cfg, &spec, &cas_pc, grid, CAS_STREAM)?;
        let elapsed = start.elapsed();
        for (name, est, erf) in [("DIRECT", &direct, 1.0), ("CAS", &cas, (direct.mise / cas.mise).sqrt())] {
            report.rows.push(ErfRow {
                problem: "cde".into(),
                param_rho: Some(rho),
                param_k: None,
                method: name.into(),
                mean: est.neg_log2_mise(),
                stderr: None,
                erf: Some(erf),
            });
            report.timings.push((if name == "CAS" { setup } else { Duration::ZERO }, elapsed));
        }
        runs.push(CdeRun { rho, direct, cas, setup, elapsed });
    }
    Ok((report, runs))
}

/// Curve export with columns `x,mean_density,var_density`.
pub fn write_curves(path: &Path, est: &DensityEstimate) -> Result<()> {
    let io = |source| HarnessError::Io { path: path.into(), source };
    let mut f = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
    writeln!(f, "x,mean_density,var_density").map_err(io)?;
    for (x, (m, v)) in est.grid.iter().zip(est.pointwise()) {
        writeln!(f, "{x:.16e},{m:.16e},{v:.16e}").map_err(io)?;
    }
    f.flush().map_err(io)
}
