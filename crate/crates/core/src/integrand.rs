//! Integrands over the standard Gaussian space R^s.

use alloc::boxed::Box;
use alloc::vec;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// A real function of a standard normal vector.
///
/// Implementations must be pure: the same input gives the same bits, and
/// concurrent calls are allowed.
pub trait Integrand: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, z: &[f64]) -> Result<f64>;
}

impl<T: Integrand + ?Sized> Integrand for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, z: &[f64]) -> Result<f64> {
        (**self).eval(z)
    }
}

impl<T: Integrand + ?Sized + Send> Integrand for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, z: &[f64]) -> Result<f64> {
        (**self).eval(z)
    }
}

/// Closure-backed integrand; non-finite outputs become evaluation errors.
#[derive(Clone, Copy)]
pub struct FnIntegrand<F> {
    dim: usize,
    f: F,
}

pub fn from_fn<F: Fn(&[f64]) -> f64 + Sync>(dim: usize, f: F) -> FnIntegrand<F> {
    FnIntegrand { dim, f }
}

impl<F: Fn(&[f64]) -> f64 + Sync> Integrand for FnIntegrand<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, z: &[f64]) -> Result<f64> {
        let v = (self.f)(z);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation { coordinate: None })
        }
    }
}

/// `f(U z)` for an orthogonal `U`.
pub struct Rotated<I> {
    pub inner: I,
    pub u: Matrix,
}

impl<I: Integrand> Rotated<I> {
    pub fn new(inner: I, u: Matrix) -> Result<Self> {
        if u.rows() != inner.dim() || u.cols() != inner.dim() {
            return Err(Error::invalid("rotation order does not match the integrand dimension"));
        }
        Ok(Self { inner, u })
    }
}

impl<I: Integrand> Integrand for Rotated<I> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, z: &[f64]) -> Result<f64> {
        let mut x = vec![0.0; z.len()];
        self.u.mul_vec_into(z, &mut x);
        self.inner.eval(&x)
    }
}

/// `c · f(z)`.
pub struct Scaled<I> {
    pub inner: I,
    pub factor: f64,
}

impl<I: Integrand> Integrand for Scaled<I> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, z: &[f64]) -> Result<f64> {
        Ok(self.factor * self.inner.eval(z)?)
    }
}
