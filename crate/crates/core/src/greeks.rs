//! Pathwise Greeks of the GBM Asian call, their separation-of-variable
//! smoothing and their pre-integrated forms.
//!
//! Each Greek has the shape G(z) · 1{S̄ ≥ K} with G smooth, and is
//! discounted (it estimates a derivative of e^{−rT} E[(S̄ − K)₊]). Theta is
//! the negative maturity derivative.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::integrand::Integrand;
use crate::linalg::{Matrix, PathConstruction, PathKind};
use crate::math::{self, exp, norm_sf, ppf_unchecked, sqrt};
use crate::models::GbmSpec;
use crate::preint::{exp_moment0, exp_moment1, GbmPreint, RootResult};
use crate::subspace::{as_rotation, cas_rotation, change_of_construction, estimate_c, unit, FirstDirectionConstraint, Rotation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GreekKind {
    Delta,
    Gamma,
    Rho,
    Theta,
    Vega,
}

impl GreekKind {
    pub const ALL: [GreekKind; 5] = [GreekKind::Delta, GreekKind::Gamma, GreekKind::Rho, GreekKind::Theta, GreekKind::Vega];

    pub fn name(&self) -> &'static str {
        match self {
            GreekKind::Delta => "delta",
            GreekKind::Gamma => "gamma",
            GreekKind::Rho => "rho",
            GreekKind::Theta => "theta",
            GreekKind::Vega => "vega",
        }
    }
}

impl FromStr for GreekKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GreekKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown Greek `{s}`")))
    }
}

/// Path quantities shared by the pathwise formulas.
struct Path {
    /// S_j for j = 1..d.
    s: Vec<f64>,
    /// B = R z.
    b: Vec<f64>,
    avg: f64,
}

fn simulate(spec: &GbmSpec, drift: &[f64], r: &Matrix, z: &[f64]) -> Path {
    let b = r.mul_vec(z);
    let s: Vec<f64> = drift.iter().zip(&b).map(|(m, bj)| exp(m + spec.sigma * bj)).collect();
    let avg = s.iter().sum::<f64>() / spec.d as f64;
    Path { s, b, avg }
}

/// The smooth factor G of the Greek, so the estimator is G · 1{S̄ ≥ K}.
fn smooth_factor(spec: &GbmSpec, kind: GreekKind, p: &Path) -> f64 {
    let d = spec.d as f64;
    let dt = spec.dt();
    let disc = spec.discount();
    let sig = spec.sigma;
    match kind {
        GreekKind::Delta => disc * p.avg / spec.s0,
        GreekKind::Gamma => {
            disc * p.avg / (spec.s0 * spec.s0 * sig * sig * dt) * (sig * p.b[0] - sig * sig * dt)
        }
        GreekKind::Vega => {
            let mut acc = 0.0;
            for j in 0..spec.d {
                acc += p.s[j] * (p.b[j] - sig * (j + 1) as f64 * dt);
            }
            disc * acc / d
        }
        GreekKind::Rho => {
            let mut acc = 0.0;
            for j in 0..spec.d {
                acc += (j + 1) as f64 * dt * p.s[j];
            }
            disc * (-spec.t * (p.avg - spec.k) + acc / d)
        }
        GreekKind::Theta => {
            let mut acc = 0.0;
            for j in 0..spec.d {
                let dlog = (spec.r - 0.5 * sig * sig) * (j + 1) as f64 / d + sig * p.b[j] / (2.0 * spec.t);
                acc += p.s[j] * dlog;
            }
            -disc * (-spec.r * (p.avg - spec.k) + acc / d)
        }
    }
}

/// Discounted pathwise Greek estimator at `z`. For gamma, x₁ = B₁/√Δt is
/// the Gaussian generating S₁.
pub fn greek_pathwise(spec: &GbmSpec, kind: GreekKind, r: &PathConstruction, z: &[f64]) -> f64 {
    let p = simulate(spec, &spec.log_drift(), &r.r, z);
    if p.avg >= spec.k {
        smooth_factor(spec, kind, &p)
    } else {
        0.0
    }
}

/// [`greek_pathwise`] as an integrand.
#[derive(Clone, Debug)]
pub struct Greek {
    spec: GbmSpec,
    kind: GreekKind,
    r: Matrix,
    drift: Vec<f64>,
}

impl Greek {
    pub fn new(spec: GbmSpec, kind: GreekKind, r: &PathConstruction) -> Result<Self> {
        spec.validate()?;
        if r.dim() != spec.d {
            return Err(Error::invalid("construction order must equal d"));
        }
        let drift = spec.log_drift();
        Ok(Self { spec, kind, r: r.r.clone(), drift })
    }
}

impl Integrand for Greek {
    fn dim(&self) -> usize {
        self.spec.d
    }
    fn eval(&self, z: &[f64]) -> Result<f64> {
        let p = simulate(&self.spec, &self.drift, &self.r, z);
        Ok(if p.avg >= self.spec.k { smooth_factor(&self.spec, self.kind, &p) } else { 0.0 })
    }
}

/// T(z₁) = Φ⁻¹(Φ(α) + Φ̄(α) Φ(z₁)), computed as −Φ⁻¹(Φ̄(α) Φ̄(z₁)) to keep
/// the upper tail accurate. The result lies in [α, ∞).
pub fn sov_map(alpha: f64, z1: f64) -> f64 {
    if alpha == f64::NEG_INFINITY {
        return z1;
    }
    let q = (norm_sf(alpha) * norm_sf(z1)).max(f64::MIN_POSITIVE);
    let t = -ppf_unchecked(q);
    t.max(alpha)
}

/// Continuous SOV version of a Greek: with α the root of S̄ = K in z₁ and
/// β = +∞, returns Φ̄(α) · G(T(z₁), z_{−1}).
#[derive(Clone, Debug)]
pub struct SovGreek {
    kind: GreekKind,
    ctx: GbmPreint,
    drift: Vec<f64>,
}

impl SovGreek {
    /// Needs R_{·1} ≥ 0 so S̄ is increasing in z₁.
    pub fn new(spec: GbmSpec, kind: GreekKind, r: &PathConstruction) -> Result<Self> {
        let drift = spec.log_drift();
        Ok(Self { kind, ctx: GbmPreint::new(spec, r)?, drift })
    }
}

impl Integrand for SovGreek {
    fn dim(&self) -> usize {
        self.ctx.spec.d
    }
    fn eval(&self, z: &[f64]) -> Result<f64> {
        let spec = &self.ctx.spec;
        let alpha = match self.ctx.exp_sum(&z[1..]).root(None)? {
            RootResult::AllBelow => return Ok(0.0),
            r => r.gamma(),
        };
        let mut x = z.to_vec();
        x[0] = sov_map(alpha, z[0]);
        let p = simulate(spec, &self.drift, self.ctx.matrix(), &x);
        Ok(norm_sf(alpha) * smooth_factor(spec, self.kind, &p))
    }
}

/// Same signature as [`greek_pathwise`] for the SOV integrand.
pub fn sov_transform(spec: &GbmSpec, kind: GreekKind, r: &PathConstruction, z: &[f64]) -> Result<f64> {
    SovGreek::new(spec.clone(), kind, r)?.eval(z)
}

/// Greek pre-integrated over z₁ in closed form.
#[derive(Clone, Debug)]
pub struct PreintGreek {
    kind: GreekKind,
    ctx: GbmPreint,
}

impl PreintGreek {
    pub fn new(spec: GbmSpec, kind: GreekKind, r: &PathConstruction) -> Result<Self> {
        Ok(Self { kind, ctx: GbmPreint::new(spec, r)? })
    }

    /// E[G(z) 1{S̄ ≥ K} | z_{2:d}].
    pub fn conditional(&self, z_rest: &[f64]) -> Result<f64> {
        let spec = &self.ctx.spec;
        let sum = self.ctx.exp_sum(z_rest);
        let gamma = match sum.root(None)? {
            RootResult::AllBelow => return Ok(0.0),
            r => r.gamma(),
        };
        let r = self.ctx.matrix();
        let col1 = self.ctx.first_column();
        let sig = spec.sigma;
        let dt = spec.dt();
        let disc = spec.discount();
        let d = spec.d;
        // coef_j e^{s_j z₁} = S_j / d with s_j = σ R_j1; b_j = Σ_{k≥2} R_jk z_k.
        let b = |j: usize| math::dot(&r.row(j)[1..], z_rest);
        let m0 = |j: usize| sum.coef[j] * exp_moment0(sum.slope[j], gamma);
        let m1 = |j: usize| sum.coef[j] * exp_moment1(sum.slope[j], gamma);
        let call = || (0..d).map(m0).sum::<f64>() - spec.k * norm_sf(gamma);
        Ok(match self.kind {
            GreekKind::Delta => disc * (0..d).map(m0).sum::<f64>() / spec.s0,
            GreekKind::Gamma => {
                let b1 = b(0);
                let mut acc = 0.0;
                for j in 0..d {
                    acc += sig * col1[0] * m1(j) + (sig * b1 - sig * sig * dt) * m0(j);
                }
                disc * acc / (spec.s0 * spec.s0 * sig * sig * dt)
            }
            GreekKind::Vega => {
                let mut acc = 0.0;
                for j in 0..d {
                    acc += col1[j] * m1(j) + (b(j) - sig * (j + 1) as f64 * dt) * m0(j);
                }
                disc * acc
            }
            GreekKind::Rho => {
                let mut acc = 0.0;
                for j in 0..d {
                    acc += (j + 1) as f64 * dt * m0(j);
                }
                disc * (-spec.t * call() + acc)
            }
            GreekKind::Theta => {
                let mut acc = 0.0;
                for j in 0..d {
                    let lin = (spec.r - 0.5 * sig * sig) * (j + 1) as f64 / d as f64;
                    let half = sig / (2.0 * spec.t);
                    acc += lin * m0(j) + half * (col1[j] * m1(j) + b(j) * m0(j));
                }
                -disc * (-spec.r * call() + acc)
            }
        })
    }
}

impl Integrand for PreintGreek {
    fn dim(&self) -> usize {
        self.ctx.spec.d - 1
    }
    fn eval(&self, z: &[f64]) -> Result<f64> {
        self.conditional(z)
    }
}

/// Functional form of [`PreintGreek::conditional`].
pub fn preint_greek(spec: &GbmSpec, kind: GreekKind, r: &PathConstruction, z_rest: &[f64]) -> Result<f64> {
    PreintGreek::new(spec.clone(), kind, r)?.conditional(z_rest)
}

/// Rotation chosen for pre-integrating a Greek and the resulting
/// construction R = R_std U, whose first column is nonnegative.
#[derive(Clone, Debug)]
pub struct GreekRotation {
    pub rotation: Rotation,
    pub construction: PathConstruction,
}

/// Active subspace of the SOV integrand under the standard construction.
///
/// Gamma always fixes U₁ = e₁ so the pre-integrated variable is the one
/// generating S₁. For the other Greeks the unconstrained first column is
/// kept when R_std U₁ is sign-definite (flipped to be nonnegative), and
/// otherwise replaced by the direction of the PCA first column.
pub fn greek_rotation(spec: &GbmSpec, kind: GreekKind, m: usize, eps: f64, seed: u64) -> Result<GreekRotation> {
    let std = spec.construction(PathKind::Standard)?;
    let sov = SovGreek::new(spec.clone(), kind, &std)?;
    let c = estimate_c(&sov, m, eps, seed)?;
    let d = spec.d;

    let rotation = if kind == GreekKind::Gamma {
        let mut e1 = vec![0.0; d];
        e1[0] = 1.0;
        cas_rotation(&c, &e1)?
    } else {
        let mut rot = as_rotation(&c);
        let col = std.r.mul_vec(&rot.u.column(0));
        let scale = math::max_abs(&col);
        let tol = crate::preint::SIGN_TOL * scale;
        if col.iter().all(|&x| x >= -tol) {
            rot
        } else if col.iter().all(|&x| x <= tol) {
            for i in 0..d {
                rot.u[(i, 0)] = -rot.u[(i, 0)];
            }
            rot
        } else {
            let pca = spec.construction(PathKind::Pca)?;
            let u1 = unit(change_of_construction(&std, &pca)?.column(0))?;
            let mut r = cas_rotation(&c, &u1)?;
            r.constraint = FirstDirectionConstraint::FixedVector(u1);
            r
        }
    };
    let mut construction = std.rotated(&rotation.u);
    for i in 0..d {
        if construction.r[(i, 0)] < 0.0 && -construction.r[(i, 0)] <= 1e-12 * sqrt(spec.dt()) {
            construction.r[(i, 0)] = 0.0;
        }
    }
    Ok(GreekRotation { rotation, construction })
}
