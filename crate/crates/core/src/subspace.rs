//! Gradient moment estimation and active-subspace rotations, unconstrained
//! and with a constrained first column.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::integrand::Integrand;
use crate::linalg::{householder_complement, solve, sym_eig, Matrix, PathConstruction, SymmetricMatrix};
use crate::math;
use crate::rqmc::{ScrambleKeys, Sobol};

pub const DEFAULT_M: usize = 256;
pub const DEFAULT_EPS: f64 = 1e-6;

/// Forward-difference gradient `(f(x + ε e_j) − f(x)) / ε`.
///
/// A non-finite value at the base point reports no coordinate; one at a
/// shifted point reports the shifted coordinate.
pub fn fd_gradient<F: Integrand + ?Sized>(f: &F, x: &[f64], eps: f64) -> Result<Vec<f64>> {
    let mut g = vec![0.0; x.len()];
    fd_gradient_into(f, x, eps, &mut g)?;
    Ok(g)
}

fn fd_gradient_into<F: Integrand + ?Sized>(f: &F, x: &[f64], eps: f64, g: &mut [f64]) -> Result<()> {
    let f0 = f.eval(x).map_err(|_| Error::Evaluation { coordinate: None })?;
    if !f0.is_finite() {
        return Err(Error::Evaluation { coordinate: None });
    }
    let mut xp = x.to_vec();
    for j in 0..x.len() {
        xp[j] = x[j] + eps;
        let fj = f.eval(&xp).map_err(|_| Error::Evaluation { coordinate: Some(j) })?;
        if !fj.is_finite() {
            return Err(Error::Evaluation { coordinate: Some(j) });
        }
        g[j] = (fj - f0) / eps;
        xp[j] = x[j];
    }
    Ok(())
}

/// Ĉ ≈ E[∇f ∇fᵀ] from `m` gradient samples.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientMoment {
    pub c_hat: SymmetricMatrix,
    pub m: usize,
    pub eps: f64,
}

impl GradientMoment {
    /// Wraps a known matrix (m = 0 marks it as not sampled).
    pub fn from_matrix(c: SymmetricMatrix) -> Self {
        Self { c_hat: c, m: 0, eps: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.c_hat.order()
    }
}

/// Averages `∇f ∇fᵀ` over `m` scrambled Sobol' points mapped to N(0, I).
///
/// `m` must be a power of two.
pub fn estimate_c<F: Integrand + ?Sized>(f: &F, m: usize, eps: f64, seed: u64) -> Result<GradientMoment> {
    if m == 0 || !m.is_power_of_two() {
        return Err(Error::invalid(format!("gradient sample count must be a power of two, got {m}")));
    }
    if !(eps > 0.0) {
        return Err(Error::invalid("finite-difference step must be positive"));
    }
    let s = f.dim();
    if s == 0 {
        return Err(Error::invalid("cannot estimate a gradient moment in dimension 0"));
    }
    let gen = Sobol::new(s)?;
    let keys = ScrambleKeys::new(seed, s);
    let mut acc = Matrix::zeros(s, s);
    let mut x = vec![0.0; s];
    let mut g = vec![0.0; s];
    for i in 0..m {
        gen.gaussian_point_into(i as u32, &keys, &mut x);
        fd_gradient_into(f, &x, eps, &mut g)?;
        for a in 0..s {
            if g[a] == 0.0 {
                continue;
            }
            for b in a..s {
                acc[(a, b)] += g[a] * g[b];
            }
        }
    }
    let inv = 1.0 / m as f64;
    let c = Matrix::from_fn(s, s, |a, b| if a <= b { acc[(a, b)] * inv } else { acc[(b, a)] * inv });
    Ok(GradientMoment { c_hat: SymmetricMatrix::new(c)?, m, eps })
}

/// How the first column of a rotation was chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum FirstDirectionConstraint {
    Unconstrained,
    FixedVector(Vec<f64>),
    /// The first column is supported on these coordinates.
    BlockSupport(Vec<usize>),
    /// `signs_j · (R0 u1)_j ≥ 0` for every j.
    SignPattern { r0: PathConstruction, signs: Vec<f64> },
}

/// An orthogonal matrix with the record of how its first column was chosen.
#[derive(Clone, Debug, PartialEq)]
pub struct Rotation {
    pub u: Matrix,
    pub constraint: FirstDirectionConstraint,
    pub source: GradientMoment,
}

impl Rotation {
    pub fn first_column(&self) -> Vec<f64> {
        self.u.column(0)
    }
}

/// Eigenvectors of Ĉ in descending eigenvalue order.
pub fn as_rotation(c: &GradientMoment) -> Rotation {
    let eig = sym_eig(&c.c_hat);
    Rotation { u: eig.vectors, constraint: FirstDirectionConstraint::Unconstrained, source: c.clone() }
}

/// Rotation with first column exactly `u1` and the remaining columns
/// `V Ũ`, where V spans u1⊥ (Householder) and Ũ diagonalizes VᵀĈV.
pub fn cas_rotation(c: &GradientMoment, u1: &[f64]) -> Result<Rotation> {
    let s = c.dim();
    if u1.len() != s {
        return Err(Error::invalid(format!("u1 has length {}, expected {s}", u1.len())));
    }
    let v = householder_complement(u1)?;
    let mut u = Matrix::zeros(s, s);
    u.set_column(0, u1);
    if s > 1 {
        let tilde = sym_eig(&c.c_hat.congruence(&v));
        let rest = v.matmul(&tilde.vectors);
        for i in 0..s {
            for j in 1..s {
                u[(i, j)] = rest[(i, j - 1)];
            }
        }
    }
    Ok(Rotation { u, constraint: FirstDirectionConstraint::FixedVector(u1.to_vec()), source: c.clone() })
}

/// First column chosen under a block-support or sign-pattern constraint.
pub fn constrained_first_direction(c: &GradientMoment, constraint: &FirstDirectionConstraint) -> Result<Vec<f64>> {
    let s = c.dim();
    match constraint {
        FirstDirectionConstraint::BlockSupport(idx) => {
            if idx.is_empty() {
                return Err(Error::invalid("empty support set"));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= s) {
                return Err(Error::invalid(format!("support index {bad} out of range for order {s}")));
            }
            let sub = c.c_hat.principal(idx);
            if sub.matrix().max_abs() == 0.0 {
                return Err(Error::DegenerateDirection("gradient moment vanishes on the support block".into()));
            }
            let top = sym_eig(&sub).vectors.column(0);
            let mut u1 = vec![0.0; s];
            for (k, &i) in idx.iter().enumerate() {
                u1[i] = top[k];
            }
            Ok(u1)
        }
        FirstDirectionConstraint::SignPattern { r0, signs } => {
            if r0.dim() != s || signs.len() != s {
                return Err(Error::invalid("sign pattern and R0 must match the order of C"));
            }
            if signs.iter().any(|&x| x != 1.0 && x != -1.0) {
                return Err(Error::invalid("signs must be +1 or -1"));
            }
            let v1 = sym_eig(&c.c_hat).vectors.column(0);
            let mut r1 = r0.r.mul_vec(&v1);
            let (mut good, mut bad) = (0.0, 0.0);
            for (x, sg) in r1.iter().zip(signs) {
                if sg * x >= 0.0 {
                    good += x * x;
                } else {
                    bad += x * x;
                }
            }
            if bad > good {
                for x in &mut r1 {
                    *x = -*x;
                }
            }
            for (x, sg) in r1.iter_mut().zip(signs) {
                if sg * *x < 0.0 {
                    *x = 0.0;
                }
            }
            if math::max_abs(&r1) == 0.0 {
                return Err(Error::DegenerateDirection("sign truncation removed every entry".into()));
            }
            let mut u1 = solve(&r0.r, &r1)?;
            let nrm = math::norm2(&u1);
            if !(nrm > 0.0) || !nrm.is_finite() {
                return Err(Error::DegenerateDirection("R0⁻¹ r1 is not a usable direction".into()));
            }
            for x in &mut u1 {
                *x /= nrm;
            }
            Ok(u1)
        }
        FirstDirectionConstraint::FixedVector(u1) => Ok(u1.clone()),
        FirstDirectionConstraint::Unconstrained => Ok(sym_eig(&c.c_hat).vectors.column(0)),
    }
}

/// Full rotation under any constraint: the first column per
/// [`constrained_first_direction`], the rest by [`cas_rotation`].
pub fn constrained_rotation(c: &GradientMoment, constraint: FirstDirectionConstraint) -> Result<Rotation> {
    if constraint == FirstDirectionConstraint::Unconstrained {
        return Ok(as_rotation(c));
    }
    let u1 = constrained_first_direction(c, &constraint)?;
    let mut rot = cas_rotation(c, &u1)?;
    rot.constraint = constraint;
    Ok(rot)
}

/// Normalizes `v` in place and returns it; errors on a zero vector.
pub fn unit(mut v: Vec<f64>) -> Result<Vec<f64>> {
    let n = math::norm2(&v);
    if !(n > 0.0) {
        return Err(Error::DegenerateDirection("zero vector".into()));
    }
    for x in &mut v {
        *x /= n;
    }
    Ok(v)
}

/// Rotation that maps the coordinates of one Brownian construction onto
/// another: `Q = R_from⁻¹ R_to`, orthogonal when both factor the same Σ.
pub fn change_of_construction(from: &PathConstruction, to: &PathConstruction) -> Result<Matrix> {
    let d = from.dim();
    let mut q = Matrix::zeros(d, d);
    for j in 0..d {
        q.set_column(j, &solve(&from.r, &to.r.column(j))?);
    }
    Ok(q)
}

/// `diag(a, a)` for a square `a`.
pub fn block_diag2(a: &Matrix) -> Matrix {
    Matrix::block_diag(a, a)
}
