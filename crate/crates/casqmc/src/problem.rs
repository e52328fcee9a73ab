//! Problem settings and the estimator each method uses on them.

use std::time::{Duration, Instant};

use casqmc_core::estimate::Sampler;
use casqmc_core::greeks::{greek_rotation, Greek, GreekKind, PreintGreek};
use casqmc_core::integrand::Rotated;
use casqmc_core::linalg::{bm_construction, PathKind};
use casqmc_core::models::{Basket, BasketSpec, Cle, CleOutput, CleSpec, GbmSpec, SvAsian, SvSpec};
use casqmc_core::preint::{BasketPreint, CleLastStep, ClePreint, SvPreint};
use casqmc_core::subspace::{
    as_rotation, block_diag2, change_of_construction, constrained_rotation, estimate_c, FirstDirectionConstraint,
};
use casqmc_core::Integrand;

use crate::error::{HarnessError, Result};
use crate::method::Method;

/// One parameter setting of one problem family.
#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    Spread { spec: BasketSpec, rho: f64 },
    Sv(SvSpec),
    Greek { spec: GbmSpec, kind: GreekKind },
    Cle(CleSpec),
}

impl Problem {
    pub fn name(&self) -> String {
        match self {
            Problem::Spread { .. } => "spread".into(),
            Problem::Sv(s) => format!("sv:{}", s.kind.name()),
            Problem::Greek { kind, .. } => format!("greeks:{}", kind.name()),
            Problem::Cle(_) => "cle".into(),
        }
    }

    pub fn param_rho(&self) -> Option<f64> {
        match self {
            Problem::Spread { rho, .. } => Some(*rho),
            Problem::Sv(s) => Some(s.rho),
            _ => None,
        }
    }

    pub fn param_k(&self) -> f64 {
        match self {
            Problem::Spread { spec, .. } => spec.k,
            Problem::Sv(s) => s.k,
            Problem::Greek { spec, .. } => spec.k,
            Problem::Cle(s) => s.k,
        }
    }

    /// Factor applied to integrand means: discounting for prices. Greek
    /// integrands are discounted already; probabilities need none.
    pub fn scale(&self) -> f64 {
        match self {
            Problem::Spread { spec, .. } => spec.discount(),
            Problem::Sv(s) => s.discount(),
            Problem::Greek { .. } | Problem::Cle(_) => 1.0,
        }
    }

    /// Methods reported for this family; MC is the ERF baseline.
    pub fn methods(&self) -> &'static [Method] {
        match self {
            Problem::Cle(_) => &Method::NETWORK,
            _ => &Method::FINANCE,
        }
    }

    pub fn supports(&self, m: Method) -> bool {
        m == Method::Mc || self.methods().contains(&m)
    }

    /// Display name of a method within this family.
    pub fn label(&self, m: Method) -> &'static str {
        match self {
            Problem::Cle(_) => m.network_label(),
            _ => m.tag(),
        }
    }
}

/// An integrand ready for replicated sampling.
pub struct Estimator {
    pub integrand: Box<dyn Integrand + Send>,
    pub sampler: Sampler,
    pub scale: f64,
    /// Time spent estimating the gradient moment and rotation.
    pub setup: Duration,
}

fn boxed<I: Integrand + Send + 'static>(i: I) -> Box<dyn Integrand + Send> {
    Box::new(i)
}

/// Builds the estimator of `method` on `problem`. Rotations come from a
/// gradient moment estimated with `m_grad` points, step `eps` and
/// `grad_seed`.
pub fn assemble(problem: &Problem, method: Method, m_grad: usize, eps: f64, grad_seed: u64) -> Result<Estimator> {
    if !problem.supports(method) {
        return Err(HarnessError::Incompatible { method: method.tag().into(), problem: problem.name() });
    }
    let mut setup = Duration::ZERO;
    let mut timed = |t: Instant| setup += t.elapsed();
    let integrand = match problem {
        Problem::Spread { spec, .. } => {
            let std = spec.construction(PathKind::Standard)?;
            match method {
                Method::Mc | Method::RqmcStd => boxed(Basket::new(spec.clone(), &std)?),
                Method::RqmcPca => boxed(Basket::new(spec.clone(), &spec.construction(PathKind::Pca)?)?),
                Method::PreStd => boxed(BasketPreint::new(spec.clone(), &std)?),
                Method::PrePca => boxed(BasketPreint::new(spec.clone(), &spec.construction(PathKind::Pca)?)?),
                Method::RqmcAs | Method::PreCas => {
                    let t = Instant::now();
                    let r0 = spec.construction(PathKind::Cholesky)?;
                    let c = estimate_c(&Basket::new(spec.clone(), &r0)?, m_grad, eps, grad_seed)?;
                    let out = if method == Method::RqmcAs {
                        boxed(Basket::new(spec.clone(), &r0.rotated(&as_rotation(&c).u))?)
                    } else {
                        let signs = (0..spec.dim()).map(|j| spec.weight_of_row(j).signum()).collect();
                        let rot = constrained_rotation(&c, FirstDirectionConstraint::SignPattern { r0: r0.clone(), signs })?;
                        boxed(BasketPreint::new(spec.clone(), &r0.rotated(&rot.u))?)
                    };
                    timed(t);
                    out
                }
                _ => unreachable!(),
            }
        }
        Problem::Sv(spec) => {
            let pca_u = || -> Result<_> {
                let std = bm_construction(spec.d, spec.dt(), PathKind::Standard)?;
                let pca = bm_construction(spec.d, spec.dt(), PathKind::Pca)?;
                Ok(block_diag2(&change_of_construction(&std, &pca)?))
            };
            let moment = || estimate_c(&SvAsian::new(spec.clone(), None)?, m_grad, eps, grad_seed);
            match method {
                Method::Mc | Method::RqmcStd => boxed(SvAsian::new(spec.clone(), None)?),
                Method::RqmcPca => boxed(SvAsian::new(spec.clone(), Some(pca_u()?))?),
                Method::PreStd => boxed(SvPreint::new(spec.clone(), casqmc_core::Matrix::identity(2 * spec.d))?),
                Method::PrePca => boxed(SvPreint::new(spec.clone(), pca_u()?)?),
                Method::RqmcAs => {
                    let t = Instant::now();
                    let u = as_rotation(&moment()?).u;
                    timed(t);
                    boxed(SvAsian::new(spec.clone(), Some(u))?)
                }
                Method::PreCas => {
                    let t = Instant::now();
                    let block = FirstDirectionConstraint::BlockSupport((0..spec.d).collect());
                    let rot = constrained_rotation(&moment()?, block)?;
                    timed(t);
                    boxed(SvPreint::new(spec.clone(), rot.u)?)
                }
                _ => unreachable!(),
            }
        }
        Problem::Greek { spec, kind } => {
            let std = spec.construction(PathKind::Standard)?;
            let pca = spec.construction(PathKind::Pca)?;
            match method {
                Method::Mc | Method::RqmcStd => boxed(Greek::new(spec.clone(), *kind, &std)?),
                Method::RqmcPca => boxed(Greek::new(spec.clone(), *kind, &pca)?),
                Method::PreStd => boxed(PreintGreek::new(spec.clone(), *kind, &std)?),
                Method::PrePca => boxed(PreintGreek::new(spec.clone(), *kind, &pca)?),
                Method::RqmcAs | Method::PreCas => {
                    let t = Instant::now();
                    let gr = greek_rotation(spec, *kind, m_grad, eps, grad_seed)?;
                    timed(t);
                    if method == Method::RqmcAs {
                        let u = as_rotation(&gr.rotation.source).u;
                        boxed(Greek::new(spec.clone(), *kind, &std.rotated(&u))?)
                    } else {
                        boxed(PreintGreek::new(spec.clone(), *kind, &gr.construction)?)
                    }
                }
                _ => unreachable!(),
            }
        }
        Problem::Cle(spec) => {
            let moment = || estimate_c(&Cle::new(spec.clone(), CleOutput::Smoothed)?, m_grad, eps, grad_seed);
            match method {
                Method::Mc | Method::RqmcStd => boxed(Cle::new(spec.clone(), CleOutput::Indicator)?),
                Method::PreStd => boxed(CleLastStep::new(spec.clone())?),
                Method::RqmcAs => {
                    let t = Instant::now();
                    let u = as_rotation(&moment()?).u;
                    timed(t);
                    boxed(Rotated::new(Cle::new(spec.clone(), CleOutput::Indicator)?, u)?)
                }
                Method::PreAs => {
                    let t = Instant::now();
                    let s = spec.dim();
                    let last = FirstDirectionConstraint::BlockSupport((s - spec.reactions()..s).collect());
                    let rot = constrained_rotation(&moment()?, last)?;
                    timed(t);
                    boxed(ClePreint::new(spec.clone(), rot.u)?)
                }
                _ => unreachable!(),
            }
        }
    };
    Ok(Estimator { integrand, sampler: method.sampler(), scale: problem.scale(), setup })
}
