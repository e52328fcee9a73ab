//! Experiment harness for pre-integration along constrained active
//! subspaces: estimator assembly, replicated runs, error-reduction tables,
//! CSV reports and the `casqmc` command line.

pub mod cli;
pub mod config;
pub mod density;
pub mod error;
pub mod harness;
pub mod method;
pub mod problem;
pub mod report;

pub use config::{ExperimentConfig, Family, ModelParams};
pub use error::{HarnessError, Result};
pub use harness::{erf_table, run_estimator, ErfReport, ErfRow, MethodRun};
pub use method::Method;
pub use problem::{assemble, Problem};
