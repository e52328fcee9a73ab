//! Replicated runs and error-reduction tables.

use std::time::{Duration, Instant};

use casqmc_core::estimate::{replicate_seed, sample_mean, ReplicateStats};
use casqmc_core::rng;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, Family};
use crate::error::{HarnessError, Result};
use crate::method::Method;
use crate::problem::{assemble, Problem};

/// Outcome of one method on one setting.
#[derive(Clone, Debug)]
pub struct MethodRun {
    pub method: Method,
    pub stats: ReplicateStats,
    /// Gradient-moment and rotation cost, paid once before the replicates.
    pub setup: Duration,
    pub elapsed: Duration,
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq)]
pub struct ErfRow {
    pub problem: String,
    pub param_rho: Option<f64>,
    pub param_k: Option<f64>,
    pub method: String,
    pub mean: f64,
    pub stderr: Option<f64>,
    pub erf: Option<f64>,
}

/// Rows plus timing, which is reported but kept out of the CSV so that the
/// file is a pure function of the configuration.
#[derive(Clone, Debug, Default)]
pub struct ErfReport {
    pub rows: Vec<ErfRow>,
    pub timings: Vec<(Duration, Duration)>,
}

/// Seed for the gradient-moment points of every rotation in a run.
pub fn gradient_seed(base_seed: u64) -> u64 {
    rng::derive(base_seed, 0, rng::stream::GRADIENT)
}

pub(crate) fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HarnessError::Usage(format!("cannot start {workers} workers: {e}")))
}

/// Runs `cfg.reps` independent replicates of `method` on `problem`.
///
/// Replicate r is seeded by mixing (base seed, r, method stream); the
/// rotation, if any, is computed once beforehand.
pub fn run_estimator(cfg: &ExperimentConfig, problem: &Problem, method: Method) -> Result<MethodRun> {
    let start = Instant::now();
    let est = assemble(problem, method, cfg.m_grad, cfg.eps_fd, gradient_seed(cfg.base_seed))?;
    let f = &*est.integrand;
    let values = pool(cfg.workers)?.install(|| {
        (0..cfg.reps)
            .into_par_iter()
            .map(|r| sample_mean(f, est.sampler, cfg.n, replicate_seed(cfg.base_seed, r, method.stream())))
            .collect::<casqmc_core::Result<Vec<f64>>>()
    })?;
    let stats = ReplicateStats::from_values(&values)?.scaled(est.scale);
    Ok(MethodRun { method, stats, setup: est.setup, elapsed: start.elapsed() })
}

/// Methods reported for a family; finance tables always carry the MC row.
pub fn reported_methods(cfg: &ExperimentConfig) -> Vec<Method> {
    let mut out = cfg.methods.clone();
    if cfg.family != Family::Cle && !out.contains(&Method::Mc) {
        out.insert(0, Method::Mc);
    }
    out
}

/// ERF = stderr(MC) / stderr(method) for every setting and method.
pub fn erf_table(cfg: &ExperimentConfig) -> Result<ErfReport> {
    cfg.validate()?;
    let mut report = ErfReport::default();
    for problem in cfg.settings()? {
        let mc = run_estimator(cfg, &problem, Method::Mc)?;
        for method in reported_methods(cfg) {
            let run = if method == Method::Mc { mc.clone() } else { run_estimator(cfg, &problem, method)? };
            let erf = if method == Method::Mc { 1.0 } else { mc.stats.stderr / run.stats.stderr };
            report.rows.push(ErfRow {
                problem: problem.name(),
                param_rho: problem.param_rho(),
                param_k: Some(problem.param_k()),
                method: problem.label(method).into(),
                mean: run.stats.mean,
                stderr: Some(run.stats.stderr),
                erf: Some(erf),
            });
            report.timings.push((run.setup, run.elapsed));
        }
    }
    Ok(report)
}
