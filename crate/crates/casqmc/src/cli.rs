//! Command-line front end.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{read_config_file, ExperimentConfig, Family};
use crate::error::{HarnessError, Result};
use crate::harness::erf_table;
use crate::report::{emit_csv, format_table};

#[derive(Debug, Parser)]
#[command(name = "casqmc", version, about = "Pre-integration with constrained active subspaces: ERF experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spread option on two correlated assets.
    Spread(Common),
    /// Asian call under stochastic volatility.
    Sv {
        /// hullwhite, heston or steinstein
        #[arg(long)]
        model: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Pathwise Greeks of the Asian call.
    Greeks {
        /// delta, gamma, rho, theta or vega (comma-separated); all by default
        #[arg(long)]
        kind: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Density of a sum of log-normals: direct versus CAS.
    Cde {
        /// Directory for per-ρ curve files (x, mean_density, var_density).
        #[arg(long)]
        curves: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Reaction network (chemical Langevin equation) CDF.
    Cle(Common),
}

#[derive(Debug, Args, Default)]
pub struct Common {
    /// Samples per replicate (power of two).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub reps: Option<usize>,
    /// Gradient samples for the active subspace (power of two).
    #[arg(long = "m-grad")]
    pub m_grad: Option<usize>,
    /// Finite-difference step for gradients.
    #[arg(long = "eps-fd")]
    pub eps_fd: Option<f64>,
    /// Correlation; repeat for several.
    #[arg(long, allow_negative_numbers = true)]
    pub rho: Vec<f64>,
    /// Strike or threshold; repeat for several.
    #[arg(long, allow_negative_numbers = true)]
    pub strike: Vec<f64>,
    /// Comma-separated methods, e.g. RQMC_STD,PRE_CAS.
    #[arg(long)]
    pub methods: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// CSV output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `key = value` file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Time steps per path (or dimension for cde).
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub s0: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    #[arg(long)]
    pub v0: Option<f64>,
}

impl Common {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut kv = Vec::new();
        let mut put = |k: &'static str, v: Option<String>| {
            if let Some(v) = v {
                kv.push((k, v));
            }
        };
        put("n", self.n.map(|x| x.to_string()));
        put("reps", self.reps.map(|x| x.to_string()));
        put("m-grad", self.m_grad.map(|x| x.to_string()));
        put("eps-fd", self.eps_fd.map(|x| x.to_string()));
        put("rho", (!self.rho.is_empty()).then(|| join(&self.rho)));
        put("strike", (!self.strike.is_empty()).then(|| join(&self.strike)));
        put("methods", self.methods.clone());
        put("seed", self.seed.map(|x| x.to_string()));
        put("workers", self.workers.map(|x| x.to_string()));
        put("d", self.d.map(|x| x.to_string()));
        put("t", self.t.map(|x| x.to_string()));
        put("s0", self.s0.map(|x| x.to_string()));
        put("sigma", self.sigma.map(|x| x.to_string()));
        put("r", self.r.map(|x| x.to_string()));
        put("v0", self.v0.map(|x| x.to_string()));
        kv
    }
}

/// Preset, then config file, then flags.
pub fn build_config(command: &Command) -> Result<(ExperimentConfig, &Common)> {
    let (family, common, selector) = match command {
        Command::Spread(c) => (Family::Spread, c, None),
        Command::Sv { model, common } => (Family::Sv("heston".parse()?), common, Some(("model", model.clone()))),
        Command::Greeks { kind, common } => {
            (Family::Greeks(casqmc_core::greeks::GreekKind::ALL.to_vec()), common, Some(("kind", kind.clone())))
        }
        Command::Cde { common, .. } => (Family::Cde, common, None),
        Command::Cle(c) => (Family::Cle, c, None),
    };
    let mut cfg = ExperimentConfig::preset(family);
    let file = match &common.config {
        Some(p) => read_config_file(p)?,
        None => Default::default(),
    };
    cfg.apply(&file)?;
    if let Some((key, flag)) = selector {
        match flag {
            Some(v) => cfg.set(key, &v)?,
            None if key == "model" && !file.contains_key("model") => {
                return Err(HarnessError::Usage("sv needs --model {hullwhite|heston|steinstein}".into()))
            }
            None => {}
        }
    }
    for (k, v) in common.overrides() {
        cfg.set(k, &v)?;
    }
    cfg.validate()?;
    Ok((cfg, common))
}

fn execute(cli: &Cli) -> Result<()> {
    let (cfg, common) = build_config(&cli.command)?;
    let report = if let Command::Cde { curves, .. } = &cli.command {
        let grid = casqmc_core::cde::default_grid();
        let (report, runs) = crate::density::cde_experiment(&cfg, &grid)?;
        if let Some(dir) = curves {
            std::fs::create_dir_all(dir).map_err(|source| HarnessError::Io { path: dir.clone(), source })?;
            for run in &runs {
                crate::density::write_curves(&dir.join(format!("cde_direct_rho{}.csv", run.rho)), &run.direct)?;
                crate::density::write_curves(&dir.join(format!("cde_cas_rho{}.csv", run.rho)), &run.cas)?;
            }
        }
        report
    } else {
        erf_table(&cfg)?
    };
    print!("{}", format_table(&report));
    if let Some(path) = &common.out {
        emit_csv(&report, path)?;
    }
    Ok(())
}

/// Runs the CLI and returns the process exit status: 0 on success, 2 on a
/// usage error, 1 on a runtime error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}
