//! Experiment configuration, presets and the `key = value` file format.

use std::collections::BTreeMap;
use std::path::Path;

use casqmc_core::greeks::GreekKind;
use casqmc_core::models::{BasketSpec, CleSpec, GbmSpec, SvKind, SvSpec};

use crate::error::{HarnessError, Result};
use crate::method::Method;
use crate::problem::Problem;

/// Which experiment to run.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Spread,
    Sv(SvKind),
    Greeks(Vec<GreekKind>),
    Cle,
    Cde,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Spread => "spread",
            Family::Sv(_) => "sv",
            Family::Greeks(_) => "greeks",
            Family::Cle => "cle",
            Family::Cde => "cde",
        }
    }
}

/// Market and discretization parameters shared by the finance families.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub s0: f64,
    pub r: f64,
    pub sigma: f64,
    pub t: f64,
    pub d: usize,
    pub v0: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self { s0: 100.0, r: 0.05, sigma: 0.2, t: 1.0, d: 32, v0: 0.2 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub family: Family,
    pub rhos: Vec<f64>,
    pub strikes: Vec<f64>,
    /// Methods to report; MC is always run as the ERF baseline.
    pub methods: Vec<Method>,
    pub n: usize,
    pub reps: usize,
    pub m_grad: usize,
    pub eps_fd: f64,
    pub base_seed: u64,
    pub workers: usize,
    pub model: ModelParams,
}

impl ExperimentConfig {
    /// Full-scale defaults for a family.
    pub fn preset(family: Family) -> Self {
        let (rhos, strikes, n) = match &family {
            Family::Spread => (vec![-0.5, 0.5], vec![-10.0, 0.0, 10.0], 1 << 14),
            Family::Sv(_) => (vec![-0.5, 0.5], vec![90.0, 100.0, 110.0], 1 << 14),
            Family::Greeks(_) | Family::Cle => (vec![], vec![90.0, 100.0, 110.0], 1 << 14),
            Family::Cde => (vec![-0.5, 0.5], vec![], 1 << 10),
        };
        let methods = match &family {
            Family::Cle => Method::NETWORK.to_vec(),
            Family::Cde => vec![],
            _ => Method::FINANCE.to_vec(),
        };
        let model = match &family {
            Family::Cde => ModelParams { d: 10, ..ModelParams::default() },
            _ => ModelParams::default(),
        };
        Self {
            family,
            rhos,
            strikes,
            methods,
            n,
            reps: 50,
            m_grad: 256,
            eps_fd: 1e-6,
            base_seed: 2024,
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            model,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let usage = |m: &str| Err(HarnessError::Usage(m.into()));
        if self.n == 0 || !self.n.is_power_of_two() {
            return usage(&format!("--n must be a power of two (got {})", self.n));
        }
        if self.reps < 2 {
            return usage("--reps must be at least 2");
        }
        if self.m_grad == 0 || !self.m_grad.is_power_of_two() {
            return usage("--m-grad must be a power of two");
        }
        if !(self.eps_fd > 0.0) {
            return usage("--eps-fd must be positive");
        }
        if self.workers == 0 {
            return usage("--workers must be at least 1");
        }
        if self.model.d == 0 {
            return usage("d must be at least 1");
        }
        if self.rhos.iter().any(|r| !(r.abs() < 1.0)) {
            return usage("--rho must lie in (-1, 1)");
        }
        let needs_rho = matches!(self.family, Family::Spread | Family::Sv(_) | Family::Cde);
        if needs_rho && self.rhos.is_empty() {
            return usage("at least one --rho is required");
        }
        if self.family != Family::Cde && self.strikes.is_empty() {
            return usage("at least one --strike is required");
        }
        for p in self.settings()? {
            for &m in &self.methods {
                if !p.supports(m) {
                    return Err(HarnessError::Incompatible { method: m.tag().into(), problem: p.name() });
                }
            }
        }
        Ok(())
    }

    /// Every parameter setting, in report order.
    pub fn settings(&self) -> Result<Vec<Problem>> {
        let m = &self.model;
        let mut out = Vec::new();
        match &self.family {
            Family::Spread => {
                for &rho in &self.rhos {
                    for &k in &self.strikes {
                        out.push(Problem::Spread { spec: BasketSpec::spread(m.s0, m.sigma, rho, m.r, m.t, m.d, k)?, rho });
                    }
                }
            }
            Family::Sv(kind) => {
                for &rho in &self.rhos {
                    for &k in &self.strikes {
                        out.push(Problem::Sv(SvSpec { kind: *kind, r: m.r, s0: m.s0, k, v0: m.v0, rho, t: m.t, d: m.d }));
                    }
                }
            }
            Family::Greeks(kinds) => {
                for &kind in kinds {
                    for &k in &self.strikes {
                        out.push(Problem::Greek { spec: GbmSpec { s0: m.s0, r: m.r, sigma: m.sigma, t: m.t, d: m.d, k }, kind });
                    }
                }
            }
            Family::Cle => out.extend(self.strikes.iter().map(|&k| Problem::Cle(CleSpec::isomerization(k)))),
            Family::Cde => {}
        }
        Ok(out)
    }

    /// Applies `key = value` pairs (keys as the long flag names).
    pub fn apply(&mut self, kv: &BTreeMap<String, String>) -> Result<()> {
        for (key, value) in kv {
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || HarnessError::Usage(format!("invalid value `{value}` for `{key}`"));
        let float = |v: &str| v.trim().parse::<f64>().map_err(|_| bad());
        let list = |v: &str| v.split(',').filter(|s| !s.trim().is_empty()).map(float).collect::<Result<Vec<_>>>();
        match key.trim().replace('_', "-").as_str() {
            "n" => self.n = value.trim().parse().map_err(|_| bad())?,
            "reps" => self.reps = value.trim().parse().map_err(|_| bad())?,
            "m-grad" => self.m_grad = value.trim().parse().map_err(|_| bad())?,
            "eps-fd" => self.eps_fd = float(value)?,
            "seed" => self.base_seed = value.trim().parse().map_err(|_| bad())?,
            "workers" => self.workers = value.trim().parse().map_err(|_| bad())?,
            "rho" => self.rhos = list(value)?,
            "strike" => self.strikes = list(value)?,
            "methods" => self.methods = crate::method::parse_methods(value)?,
            "s0" => self.model.s0 = float(value)?,
            "r" => self.model.r = float(value)?,
            "sigma" => self.model.sigma = float(value)?,
            "t" => self.model.t = float(value)?,
            "d" => self.model.d = value.trim().parse().map_err(|_| bad())?,
            "v0" => self.model.v0 = float(value)?,
            "model" => {
                if let Family::Sv(kind) = &mut self.family {
                    *kind = value.parse().map_err(|_| bad())?;
                }
            }
            "kind" => {
                if let Family::Greeks(kinds) = &mut self.family {
                    *kinds = value.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>().map_err(|_| bad())?;
                }
            }
            _ => return Err(HarnessError::Usage(format!("unknown configuration key `{key}`"))),
        }
        Ok(())
    }
}

/// Reads a `key = value` file; blank lines and `#` comments are skipped.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.into(), source })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| HarnessError::Usage(format!("config line {}: expected `key = value`", i + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}
