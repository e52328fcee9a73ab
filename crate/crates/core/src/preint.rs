//! Closed-form conditional expectations over one Gaussian direction.
//!
//! Every family reduces, conditional on the remaining coordinates, to a
//! monotone sum of exponentials in the pre-integrated variable (or to an
//! affine function for the reaction network), so one safeguarded root
//! search and the identity E[e^{cZ} 1{Z > γ}] = e^{c²/2} Φ̄(γ − c) cover
//! all cases.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::integrand::Integrand;
use crate::linalg::{Matrix, PathConstruction};
use crate::math::{self, exp, norm_cdf, norm_pdf, norm_sf, sqrt};
use crate::models::{BasketSpec, CleSpec, GbmSpec, LognormalSumSpec, SvSpec};

/// Outcome of a monotone root search for g(z) = 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RootResult {
    Root(f64),
    /// g > 0 on the whole bracket; γ = −∞.
    AllAbove,
    /// g < 0 on the whole bracket; γ = +∞.
    AllBelow,
}

impl RootResult {
    /// γ with the infinite cases mapped to ±∞.
    pub fn gamma(&self) -> f64 {
        match *self {
            RootResult::Root(g) => g,
            RootResult::AllAbove => f64::NEG_INFINITY,
            RootResult::AllBelow => f64::INFINITY,
        }
    }

    pub fn root(&self) -> Option<f64> {
        match *self {
            RootResult::Root(g) => Some(g),
            _ => None,
        }
    }
}

pub const TOL_X: f64 = 1e-12;
const BRACKETS: [f64; 3] = [12.0, 24.0, 40.0];
const MAX_ITER: usize = 100;

/// Root of a nondecreasing `g`, which returns `(g(z), g'(z))`.
///
/// Newton steps safeguarded by bisection inside the first of the brackets
/// [−12, 12], [−24, 24], [−40, 40] that changes sign. `hint` seeds the
/// iteration when it lies inside that bracket. Endpoints ordered the wrong
/// way round are reported as a contract violation.
pub fn find_root_monotone<G: FnMut(f64) -> (f64, f64)>(
    mut g: G,
    tol_x: f64,
    tol_f: f64,
    hint: Option<f64>,
) -> Result<RootResult> {
    let mut bracket = None;
    let mut last_lo = 0.0;
    for &b in &BRACKETS {
        let (flo, _) = g(-b);
        let (fhi, _) = g(b);
        if flo.is_nan() || fhi.is_nan() {
            return Err(Error::Evaluation { coordinate: None });
        }
        if flo > fhi {
            return Err(Error::ContractViolation(format!("g(-{b}) = {flo:e} exceeds g({b}) = {fhi:e}")));
        }
        if flo <= 0.0 && fhi >= 0.0 {
            bracket = Some((-b, b, flo, fhi));
            break;
        }
        last_lo = flo;
    }
    let Some((mut lo, mut hi, flo, fhi)) = bracket else {
        return Ok(if last_lo > 0.0 { RootResult::AllAbove } else { RootResult::AllBelow });
    };
    if flo == 0.0 {
        return Ok(RootResult::Root(lo));
    }
    if fhi == 0.0 {
        return Ok(RootResult::Root(hi));
    }

    let mut x = match hint {
        Some(h) if h > lo && h < hi => h,
        _ => 0.5 * (lo + hi),
    };
    let mut dx_old = hi - lo;
    let mut dx = dx_old;
    let (mut f, mut df) = g(x);
    for _ in 0..MAX_ITER {
        if f == 0.0 {
            return Ok(RootResult::Root(x));
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let xn = x - f / df;
        let newton = df > 0.0 && xn > lo && xn < hi && (2.0 * f).abs() <= (dx_old * df).abs();
        dx_old = dx;
        if newton {
            dx = f / df;
            x = xn;
        } else {
            dx = 0.5 * (hi - lo);
            x = lo + dx;
        }
        if dx.abs() < tol_x || hi - lo < tol_x {
            return Ok(RootResult::Root(x));
        }
        let (fx, dfx) = g(x);
        if fx.is_nan() {
            return Err(Error::Evaluation { coordinate: None });
        }
        f = fx;
        df = dfx;
        if f.abs() <= tol_f && df > 0.0 && (f / df).abs() <= tol_x {
            return Ok(RootResult::Root(x - f / df));
        }
    }
    Ok(RootResult::Root(x))
}

/// g(z) = Σ_j coef_j e^{slope_j z} − K, nondecreasing when every
/// coef_j · slope_j ≥ 0.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpSum {
    pub coef: Vec<f64>,
    pub slope: Vec<f64>,
    pub k: f64,
}

impl ExpSum {
    /// (g(z), g'(z))
    #[inline]
    pub fn eval(&self, z: f64) -> (f64, f64) {
        let (mut v, mut dv) = (0.0, 0.0);
        for (c, s) in self.coef.iter().zip(&self.slope) {
            let t = c * exp(s * z);
            v += t;
            dv += s * t;
        }
        (v - self.k, dv)
    }

    pub fn tol_f(&self) -> f64 {
        1e-12 * self.k.abs().max(1.0)
    }

    pub fn root(&self, hint: Option<f64>) -> Result<RootResult> {
        find_root_monotone(|z| self.eval(z), TOL_X, self.tol_f(), hint)
    }

    /// E[(g(Z))₊] for Z ~ N(0, 1) given the root of g.
    pub fn positive_part(&self, root: RootResult) -> f64 {
        let gamma = match root {
            RootResult::AllBelow => return 0.0,
            r => r.gamma(),
        };
        let mut v = 0.0;
        for (c, s) in self.coef.iter().zip(&self.slope) {
            v += c * exp(0.5 * s * s) * norm_sf(gamma - s);
        }
        v - self.k * norm_sf(gamma)
    }

    /// Root search plus [`ExpSum::positive_part`].
    pub fn expected_call(&self, hint: Option<f64>) -> Result<(f64, RootResult)> {
        let root = self.root(hint)?;
        Ok((self.positive_part(root), root))
    }
}

/// ∫_γ^∞ e^{cz} φ(z) dz = e^{c²/2} Φ̄(γ − c)
#[inline]
pub fn exp_moment0(c: f64, gamma: f64) -> f64 {
    exp(0.5 * c * c) * norm_sf(gamma - c)
}

/// ∫_γ^∞ z e^{cz} φ(z) dz = e^{c²/2} [c Φ̄(γ − c) + φ(γ − c)]
#[inline]
pub fn exp_moment1(c: f64, gamma: f64) -> f64 {
    let shifted = gamma - c;
    let tail = if shifted == f64::NEG_INFINITY { 0.0 } else { norm_pdf(shifted) };
    exp(0.5 * c * c) * (c * norm_sf(shifted) + tail)
}

/// Relative tolerance for treating a wrong-signed entry as rounding noise.
pub const SIGN_TOL: f64 = 1e-12;

/// Checks `sign(j) · col_j ≥ 0` for every j, zeroing entries that violate it
/// by no more than [`SIGN_TOL`] of the largest entry.
pub fn feasible_column(col: &[f64], sign: impl Fn(usize) -> f64) -> Result<Vec<f64>> {
    let scale = math::max_abs(col);
    if !(scale > 0.0) {
        return Err(Error::DegenerateDirection("pre-integration column is zero".into()));
    }
    let mut out = col.to_vec();
    for (j, x) in out.iter_mut().enumerate() {
        let s = sign(j) * *x;
        if s < 0.0 {
            if -s <= SIGN_TOL * scale {
                *x = 0.0;
            } else {
                return Err(Error::SignCondition { index: j, value: *x });
            }
        }
    }
    Ok(out)
}

/// Rows of `exp(drift_i + Σ_{k≥2} R_ik z_k) · scale_i`, the building block
/// for GBM and basket pre-integration.
#[derive(Clone, Debug)]
struct LinearExp {
    r: Matrix,
    /// First column of R with rounding noise removed.
    col1: Vec<f64>,
    drift: Vec<f64>,
    coef: Vec<f64>,
    /// Multiplies R (σ for a single GBM, 1 when R already carries σ).
    vol: f64,
}

impl LinearExp {
    fn exp_sum(&self, z_rest: &[f64], k: f64) -> ExpSum {
        let n = self.coef.len();
        let mut coef = Vec::with_capacity(n);
        let mut slope = Vec::with_capacity(n);
        for i in 0..n {
            let b = math::dot(&self.r.row(i)[1..], z_rest);
            coef.push(self.coef[i] * exp(self.drift[i] + self.vol * b));
            slope.push(self.vol * self.col1[i]);
        }
        ExpSum { coef, slope, k }
    }
}

/// Asian call under GBM pre-integrated over z₁.
#[derive(Clone, Debug)]
pub struct GbmPreint {
    pub spec: GbmSpec,
    inner: LinearExp,
}

impl GbmPreint {
    /// Needs R_{·1} ≥ 0 with at least one positive entry.
    pub fn new(spec: GbmSpec, r: &PathConstruction) -> Result<Self> {
        spec.validate()?;
        if r.dim() != spec.d {
            return Err(Error::invalid("construction order must equal d"));
        }
        let col1 = feasible_column(&r.first_column(), |_| 1.0)?;
        let d = spec.d;
        let inner = LinearExp {
            r: r.r.clone(),
            col1,
            drift: spec.log_drift(),
            coef: vec![1.0 / d as f64; d],
            vol: spec.sigma,
        };
        Ok(Self { spec, inner })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.inner.r
    }

    pub fn first_column(&self) -> &[f64] {
        &self.inner.col1
    }

    /// S̄ − K as a function of z₁, given z_{2:d}.
    pub fn exp_sum(&self, z_rest: &[f64]) -> ExpSum {
        self.inner.exp_sum(z_rest, self.spec.k)
    }

    /// E[(S̄ − K)₊ | z_{2:d}], undiscounted.
    pub fn conditional(&self, z_rest: &[f64]) -> Result<f64> {
        Ok(self.exp_sum(z_rest).expected_call(None)?.0)
    }
}

impl Integrand for GbmPreint {
    fn dim(&self) -> usize {
        self.spec.d - 1
    }
    fn eval(&self, z: &[f64]) -> Result<f64> {
        self.conditional(z)
    }
}

/// Weighted basket call pre-integrated over z₁.
#[derive(Clone, Debug)]
pub struct BasketPreint {
    pub spec: BasketSpec,
    inner: LinearExp,
}

impl BasketPreint {
    /// Needs w_{⌈j/d⌉} R_{j1} ≥ 0 for every row j.
    pub fn new(spec: BasketSpec, r: &PathConstruction) -> Result<Self> {
        spec.validate()?;
        if r.dim() != spec.dim() {
            return Err(Error::invalid("construction order must equal dL"));
        }
        let col1 = feasible_column(&r.first_column(), |j| spec.weight_of_row(j).signum())?;
        let (coef, drift) = spec.row_terms();
        let inner = LinearExp { r: r.r.clone(), col1, drift, coef, vol: 1.0 };
        Ok(Self { spec, inner })
    }

    pub fn exp_sum(&self, z_rest: &[f64]) -> ExpSum {
        self.inner.exp_sum(z_rest, self.spec.k)
    }

    /// E[(S̄ − K)₊ | z_{−1}], undiscounted. No crossing with S̄ < K
    /// throughout gives 0; S̄ > K throughout gives E[S̄ | z_{−1}] − K.
    pub fn conditional(&self, z_rest: &[f64]) -> Result<f64> {
        Ok(self.exp_sum(z_rest).expected_call(None)?.0)
    }
}

impl Integrand for BasketPreint {
    fn dim(&self) -> usize {
        self.spec.dim() - 1
    }
    fn eval(&self, z: &[f64]) -> Result<f64> {
        self.conditional(z)
    }
}

/// Stochastic-volatility Asian call pre-integrated over z_{1,1} under a
/// rotation with U_{1:d,1} ≥ 0 and U_{d+1:2d,1} = 0.
#[derive(Clone, Debug)]
pub struct SvPreint {
    pub spec: SvSpec,
    u: Matrix,
    u1: Vec<f64>,
}

impl SvPreint {
    pub fn new(spec: SvSpec, u: Matrix) -> Result<Self> {
        spec.validate()?;
        let d = spec.d;
        if u.rows() != 2 * d || u.cols() != 2 * d {
            return Err(Error::invalid("rotation must have order 2d"));
        }
        let col = u.column(0);
        let scale = math::max_abs(&col);
        for j in d..2 * d {
            if col[j].abs() > SIGN_TOL * scale {
                return Err(Error::SignCondition { index: j, value: col[j] });
            }
        }
        let u1 = feasible_column(&col[..d], |_| 1.0)?;
        Ok(Self { spec, u, u1 })
    }

    /// Σ_j ζ_j e^{c_j z} / d − K as a function of z_{1,1}.
    pub fn exp_sum(&self, z_rest: &[f64]) -> ExpSum {
        let d = self.spec.d;
        let mut x = vec![0.0; 2 * d];
        self.u.mul_vec_tail_into(1, z_rest, &mut x);
        let mut v = vec![0.0; d];
        let mut ls = vec![0.0; d];
        self.spec.variance_path(&x[d..], &mut v);
        self.spec.log_prices(&x[..d], &x[d..], &v, &mut ls);
        let a = sqrt(1.0 - self.spec.rho * self.spec.rho);
        let dt = self.spec.dt();
        let mut c = 0.0;
        let mut slope = Vec::with_capacity(d);
        for j in 0..d {
            c += sqrt(v[j].max(0.0) * dt) * a * self.u1[j];
            slope.push(c);
        }
        let coef = ls.iter().map(|&l| exp(l) / d as f64).collect();
        ExpSum { coef, slope, k: self.spec.k }
    }

    /// E[(S̄ − K)₊ | z_{1,2:d}, z_2], undiscounted.
    pub fn conditional(&self, z_rest: &[f64]) -> Result<f64> {
        Ok(self.exp_sum(z_rest).expected_call(None)?.0)
    }
}

impl Integrand for SvPreint {
    fn dim(&self) -> usize {
        2 * self.spec.d - 1
    }
    fn eval(&self, z: &[f64]) -> Result<f64> {
        self.conditional(z)
    }
}

/// P(X_{d,1} ≤ K) for the reaction network, pre-integrated along the first
/// column of `u`, which must be supported on the last step's Gaussians.
#[derive(Clone, Debug)]
pub struct ClePreint {
    pub spec: CleSpec,
    u: Matrix,
    u1_last: Vec<f64>,
}

impl ClePreint {
    pub fn new(spec: CleSpec, u: Matrix) -> Result<Self> {
        spec.validate()?;
        let s = spec.dim();
        if u.rows() != s || u.cols() != s {
            return Err(Error::invalid("rotation order must equal dJ"));
        }
        let col = u.column(0);
        let first_last = s - spec.reactions();
        let scale = math::max_abs(&col);
        if let Some(j) = (0..first_last).find(|&j| col[j].abs() > SIGN_TOL * scale) {
            return Err(Error::invalid(format!(
                "pre-integration direction has weight {:e} on coordinate {j}, outside the last step",
                col[j]
            )));
        }
        Ok(Self { u1_last: col[first_last..].to_vec(), spec, u })
    }

    /// (intercept m, slope c) of X_{d,1} = m + c y₁ given y_{2:s}, plus the
    /// total last-step noise scale of species 1.
    pub fn affine(&self, y_rest: &[f64]) -> (f64, f64, f64) {
        let mut z = vec![0.0; self.spec.dim()];
        self.u.mul_vec_tail_into(1, y_rest, &mut z);
        last_step_affine(&self.spec, &z, Some(&self.u1_last))
    }

    pub fn conditional(&self, y_rest: &[f64]) -> Result<f64> {
        let (m, c, noise) = self.affine(y_rest);
        threshold_probability(m, c, noise, self.spec.k)
    }
}

/// Runs the first d−1 steps on `z`, then returns the last step's intercept
/// for species 1 (using `z`'s last-step entries), the slope along `dir`
/// (last-step weights), and Σ_j |ν_1j| a_j.
fn last_step_affine(spec: &CleSpec, z: &[f64], dir: Option<&[f64]>) -> (f64, f64, f64) {
    let jn = spec.reactions();
    let mut x = spec.x0.clone();
    let mut a = vec![0.0; jn];
    for k in 0..spec.d - 1 {
        spec.step(&mut x, &z[k * jn..(k + 1) * jn], &mut a);
    }
    spec.propensities(&x, &mut a);
    let last = &z[(spec.d - 1) * jn..];
    let mut m = x[0];
    let mut c = 0.0;
    let mut noise = 0.0;
    for j in 0..jn {
        let nu = spec.nu[(0, j)];
        let vol = sqrt(a[j] * spec.tau);
        m += nu * (spec.tau * a[j] + vol * last[j]);
        noise += nu.abs() * a[j];
        if let Some(u) = dir {
            c += nu * vol * u[j];
        } else {
            c += nu * nu * a[j] * spec.tau;
        }
    }
    if dir.is_none() {
        c = sqrt(c);
    }
    (m, c, noise)
}

fn threshold_probability(m: f64, c: f64, noise: f64, k: f64) -> Result<f64> {
    if c == 0.0 {
        if noise == 0.0 {
            return Ok(if m <= k { 1.0 } else { 0.0 });
        }
        return Err(Error::DegenerateDirection("pre-integrated direction does not move X_{d,1}".into()));
    }
    let t = (k - m) / c;
    Ok(if c > 0.0 { norm_cdf(t) } else { norm_sf(t) })
}

/// P(X_{d,1} ≤ K) with both last-step Gaussians integrated out: given the
/// history, X_{d,1} is normal with variance τ Σ_j ν_1j² a_j.
#[derive(Clone, Debug)]
pub struct CleLastStep {
    pub spec: CleSpec,
}

impl CleLastStep {
    pub fn new(spec: CleSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self { spec })
    }

    pub fn conditional(&self, z_hist: &[f64]) -> Result<f64> {
        let mut z = z_hist.to_vec();
        z.resize(self.spec.dim(), 0.0);
        let (m, sd, noise) = last_step_affine(&self.spec, &z, None);
        threshold_probability(m, sd, noise, self.spec.k)
    }
}

impl Integrand for ClePreint {
    fn dim(&self) -> usize {
        self.spec.dim() - 1
    }
    fn eval(&self, z: &[f64]) -> Result<f64> {
        self.conditional(z)
    }
}

impl Integrand for CleLastStep {
    fn dim(&self) -> usize {
        self.spec.dim() - self.spec.reactions()
    }
    fn eval(&self, z: &[f64]) -> Result<f64> {
        self.conditional(z)
    }
}

/// Conditional CDF and density of h(y) = Σ exp(μ_j + (Ry)_j) at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionalDensity {
    pub cdf: f64,
    pub density: f64,
    pub root: RootResult,
}

/// Log-normal-sum conditioning on y_{−1}, needing R_{·1} ≥ 0.
#[derive(Clone, Debug)]
pub struct LognormalPreint {
    pub spec: LognormalSumSpec,
    r: Matrix,
    col1: Vec<f64>,
}

impl LognormalPreint {
    pub fn new(spec: LognormalSumSpec, r: &PathConstruction) -> Result<Self> {
        if r.dim() != spec.dim() {
            return Err(Error::invalid("construction order must equal d"));
        }
        let col1 = feasible_column(&r.first_column(), |_| 1.0)?;
        Ok(Self { spec, r: r.r.clone(), col1 })
    }

    /// h(y₁, y_{−1}) − x as a function of y₁ (with x = 0; set `k` later).
    pub fn exp_sum(&self, y_rest: &[f64]) -> ExpSum {
        let d = self.spec.dim();
        let coef = (0..d).map(|j| exp(self.spec.mu[j] + math::dot(&self.r.row(j)[1..], y_rest))).collect();
        ExpSum { coef, slope: self.col1.clone(), k: 0.0 }
    }

    /// (Φ(y₁*), φ(y₁*) / ∂h/∂y₁(y₁*)); x below every attainable value
    /// gives (0, 0) and above gives (1, 0).
    pub fn at(&self, sum: &mut ExpSum, x: f64, hint: Option<f64>) -> Result<ConditionalDensity> {
        sum.k = x;
        let root = sum.root(hint)?;
        Ok(match root {
            RootResult::Root(y) => {
                let (_, dh) = sum.eval(y);
                let density = if dh > 0.0 { norm_pdf(y) / dh } else { 0.0 };
                ConditionalDensity { cdf: norm_cdf(y), density, root }
            }
            RootResult::AllAbove => ConditionalDensity { cdf: 0.0, density: 0.0, root },
            RootResult::AllBelow => ConditionalDensity { cdf: 1.0, density: 0.0, root },
        })
    }
}

/// One-shot form of [`LognormalPreint::at`].
pub fn lognormal_conditional(
    spec: &LognormalSumSpec,
    r: &PathConstruction,
    x: f64,
    y_rest: &[f64],
) -> Result<ConditionalDensity> {
    let ctx = LognormalPreint::new(spec.clone(), r)?;
    let mut sum = ctx.exp_sum(y_rest);
    ctx.at(&mut sum, x, None)
}
