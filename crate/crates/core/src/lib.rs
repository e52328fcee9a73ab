//! Pre-integration (conditional Monte Carlo) along constrained active-subspace
//! directions, combined with scrambled Sobol' randomized quasi-Monte Carlo.
//!
//! The crate is `no_std` with `alloc`; every routine is a pure function of its
//! inputs so replicates can be evaluated independently. IO, the command line
//! and experiment orchestration live in the companion `casqmc` crate.
//!
//! Module map:
//!
//! * [`rqmc`]: Sobol' points, nested uniform scrambling, Gaussian mapping.
//! * [`linalg`]: dense matrices, Jacobi eigensolver, Cholesky, Brownian
//!   constructions and the Householder complement basis.
//! * [`subspace`]: gradient moment estimation and (constrained) active
//!   subspace rotations.
//! * [`models`]: integrands for the option, reaction-network and
//!   log-normal-sum problems.
//! * [`preint`]: closed-form conditional expectations over one direction.
//! * [`greeks`]: pathwise Greeks, the separation-of-variable transform and
//!   their pre-integrated forms.
//! * [`cde`]: conditional density estimation and MISE.
//! * [`estimate`]: replicate-level MC / RQMC averaging of an [`Integrand`].

#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::needless_range_loop, clippy::many_single_char_names)]

extern crate alloc;

pub mod cde;
pub mod error;
pub mod estimate;
pub mod greeks;
pub mod integrand;
pub mod linalg;
pub mod math;
pub mod models;
pub mod preint;
pub mod rng;
pub mod rqmc;
pub mod subspace;

pub use error::{Error, Result};
pub use integrand::{from_fn, FnIntegrand, Integrand};
pub use linalg::{Matrix, PathConstruction, PathKind, SymmetricMatrix};
pub use subspace::{FirstDirectionConstraint, GradientMoment, Rotation};
