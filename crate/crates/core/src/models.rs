//! Problem specifications and their integrands over N(0, I).
//!
//! Prices are returned undiscounted; callers apply e^{−rT}.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::integrand::Integrand;
use crate::linalg::{self, bm_construction, Matrix, PathConstruction, PathKind, SymmetricMatrix};
use crate::math::{exp, ln, sqrt, tanh};

/// Asian call under geometric Brownian motion.
#[derive(Clone, Debug, PartialEq)]
pub struct GbmSpec {
    pub s0: f64,
    pub r: f64,
    pub sigma: f64,
    pub t: f64,
    pub d: usize,
    pub k: f64,
}

impl GbmSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.s0 > 0.0) || !(self.sigma >= 0.0) || !(self.t > 0.0) || self.d == 0 {
            return Err(Error::invalid("GBM spec needs S0 > 0, sigma >= 0, T > 0, d >= 1"));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.t / self.d as f64
    }

    pub fn discount(&self) -> f64 {
        exp(-self.r * self.t)
    }

    /// ln S0 + (r − σ²/2) t_j for j = 1..d.
    pub fn log_drift(&self) -> Vec<f64> {
        let dt = self.dt();
        (1..=self.d).map(|j| ln(self.s0) + (self.r - 0.5 * self.sigma * self.sigma) * j as f64 * dt).collect()
    }

    pub fn construction(&self, kind: PathKind) -> Result<PathConstruction> {
        bm_construction(self.d, self.dt(), kind)
    }
}

/// S̄ = (1/d) Σ_j S0 exp((r − σ²/2) t_j + σ (Rz)_j).
pub fn asian_average(spec: &GbmSpec, r: &Matrix, z: &[f64]) -> f64 {
    let drift = spec.log_drift();
    let mut b = vec![0.0; spec.d];
    r.mul_vec_into(z, &mut b);
    drift.iter().zip(&b).map(|(m, bj)| exp(m + spec.sigma * bj)).sum::<f64>() / spec.d as f64
}

/// (S̄ − K)₊, undiscounted.
pub fn asian_call(spec: &GbmSpec, r: &PathConstruction, z: &[f64]) -> f64 {
    (asian_average(spec, &r.r, z) - spec.k).max(0.0)
}

/// [`asian_call`] as an integrand.
#[derive(Clone, Debug)]
pub struct AsianCall {
    spec: GbmSpec,
    r: Matrix,
    drift: Vec<f64>,
}

impl AsianCall {
    pub fn new(spec: GbmSpec, r: &PathConstruction) -> Result<Self> {
        spec.validate()?;
        if r.dim() != spec.d {
            return Err(Error::invalid("construction order must equal d"));
        }
        let drift = spec.log_drift();
        Ok(Self { spec, r: r.r.clone(), drift })
    }
}

impl Integrand for AsianCall {
    fn dim(&self) -> usize {
        self.spec.d
    }
    fn eval(&self, z: &[f64]) -> Result<f64> {
        let mut sum = 0.0;
        for j in 0..self.spec.d {
            sum += exp(self.drift[j] + self.spec.sigma * linalg_row_dot(&self.r, j, z));
        }
        Ok((sum / self.spec.d as f64 - self.spec.k).max(0.0))
    }
}

#[inline]
pub(crate) fn linalg_row_dot(m: &Matrix, i: usize, z: &[f64]) -> f64 {
    crate::math::dot(m.row(i), z)
}

/// Variance dynamics for the stochastic-volatility models.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SvKind {
    /// dV = ν V dt + ξ V dW, simulated in log space.
    HullWhite { nu: f64, xi: f64 },
    /// dV = κ(θ − V) dt + σ_v √V dW.
    Heston { kappa: f64, theta: f64, sigma_v: f64 },
    /// dV = κ(θ − V) dt + σ_v V dW.
    SteinStein { kappa: f64, theta: f64, sigma_v: f64 },
}

impl SvKind {
    pub fn name(&self) -> &'static str {
        match self {
            SvKind::HullWhite { .. } => "hullwhite",
            SvKind::Heston { .. } => "heston",
            SvKind::SteinStein { .. } => "steinstein",
        }
    }
}

/// Parses a model name into its preset parameters.
impl FromStr for SvKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "hullwhite" => Ok(SvKind::HullWhite { nu: 0.0, xi: 0.5 }),
            "heston" => Ok(SvKind::Heston { kappa: 1.0, theta: 0.2, sigma_v: 0.05 }),
            "steinstein" => Ok(SvKind::SteinStein { kappa: 1.0, theta: 0.2, sigma_v: 0.1 }),
            other => Err(Error::invalid(format!("unknown volatility model `{other}`"))),
        }
    }
}

/// Asian call under stochastic volatility, Euler scheme on 2d Gaussians.
#[derive(Clone, Debug, PartialEq)]
pub struct SvSpec {
    pub kind: SvKind,
    pub r: f64,
    pub s0: f64,
    pub k: f64,
    pub v0: f64,
    pub rho: f64,
    pub t: f64,
    pub d: usize,
}

impl SvSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho.abs() < 1.0) || !(self.v0 > 0.0) || !(self.s0 > 0.0) || !(self.t > 0.0) || self.d == 0 {
            return Err(Error::invalid("SV spec needs |rho| < 1, V0 > 0, S0 > 0, T > 0, d >= 1"));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.t / self.d as f64
    }

    pub fn discount(&self) -> f64 {
        exp(-self.r * self.t)
    }

    /// 2κθ ≥ σ_v² for Heston; `None` for the other models.
    pub fn feller(&self) -> Option<bool> {
        match self.kind {
            SvKind::Heston { kappa, theta, sigma_v } => Some(2.0 * kappa * theta >= sigma_v * sigma_v),
            _ => None,
        }
    }

    /// V_0..V_{d−1} driven by the variance block `x2` (length d).
    pub fn variance_path(&self, x2: &[f64], out: &mut [f64]) {
        let dt = self.dt();
        let sdt = sqrt(dt);
        let mut v = self.v0;
        for j in 0..self.d {
            out[j] = v;
            if j + 1 == self.d {
                break;
            }
            v = match self.kind {
                SvKind::HullWhite { nu, xi } => v * exp((nu - 0.5 * xi * xi) * dt + xi * sdt * x2[j]),
                SvKind::Heston { kappa, theta, sigma_v } => {
                    v + kappa * (theta - v) * dt + sigma_v * sqrt(v.max(0.0) * dt) * x2[j]
                }
                SvKind::SteinStein { kappa, theta, sigma_v } => {
                    v + kappa * (theta - v) * dt + sigma_v * v * sdt * x2[j]
                }
            };
        }
    }

    /// log S_1..log S_d from x = (x1, x2) and the variance path.
    pub fn log_prices(&self, x1: &[f64], x2: &[f64], v: &[f64], out: &mut [f64]) {
        let dt = self.dt();
        let a = sqrt(1.0 - self.rho * self.rho);
        let mut ls = ln(self.s0);
        for j in 0..self.d {
            let vp = v[j].max(0.0);
            ls += (self.r - 0.5 * vp) * dt + sqrt(vp * dt) * (a * x1[j] + self.rho * x2[j]);
            out[j] = ls;
        }
    }
}

/// ((1/d) Σ S_j − K)₊ with x = U z split into price and variance blocks.
pub fn sv_asian(spec: &SvSpec, u: &Matrix, z: &[f64]) -> Result<f64> {
    let d = spec.d;
    if z.len() != 2 * d || u.rows() != 2 * d || u.cols() != 2 * d {
        return Err(Error::invalid("sv_asian needs z and U of order 2d"));
    }
    let x = u.mul_vec(z);
    sv_payoff_from_x(spec, &x)
}

pub(crate) fn sv_payoff_from_x(spec: &SvSpec, x: &[f64]) -> Result<f64> {
    let d = spec.d;
    let mut v = vec![0.0; d];
    let mut ls = vec![0.0; d];
    spec.variance_path(&x[d..], &mut v);
    spec.log_prices(&x[..d], &x[d..], &v, &mut ls);
    let mean = ls.iter().map(|&l| exp(l)).sum::<f64>() / d as f64;
    if !mean.is_finite() {
        return Err(Error::Evaluation { coordinate: None });
    }
    Ok((mean - spec.k).max(0.0))
}

/// [`sv_asian`] as an integrand.
#[derive(Clone, Debug)]
pub struct SvAsian {
    spec: SvSpec,
    u: Option<Matrix>,
}

impl SvAsian {
    /// `u = None` means the identity rotation.
    pub fn new(spec: SvSpec, u: Option<Matrix>) -> Result<Self> {
        spec.validate()?;
        if let Some(m) = &u {
            if m.rows() != 2 * spec.d || m.cols() != 2 * spec.d {
                return Err(Error::invalid("rotation must have order 2d"));
            }
        }
        Ok(Self { spec, u })
    }
}

impl Integrand for SvAsian {
    fn dim(&self) -> usize {
        2 * self.spec.d
    }
    fn eval(&self, z: &[f64]) -> Result<f64> {
        match &self.u {
            None => sv_payoff_from_x(&self.spec, z),
            Some(u) => sv_payoff_from_x(&self.spec, &u.mul_vec(z)),
        }
    }
}

/// Weighted basket of L correlated GBM assets.
#[derive(Clone, Debug, PartialEq)]
pub struct BasketSpec {
    pub weights: Vec<f64>,
    pub s0: Vec<f64>,
    pub sigma: Vec<f64>,
    pub corr: SymmetricMatrix,
    pub r: f64,
    pub t: f64,
    pub d: usize,
    pub k: f64,
}

impl BasketSpec {
    /// Two-asset spread S̄⁽¹⁾ − S̄⁽²⁾ with correlation ρ.
    pub fn spread(s0: f64, sigma: f64, rho: f64, r: f64, t: f64, d: usize, k: f64) -> Result<Self> {
        let corr = SymmetricMatrix::new(Matrix::from_rows(&[&[1.0, rho], &[rho, 1.0]])?)?;
        let spec = Self { weights: vec![1.0, -1.0], s0: vec![s0; 2], sigma: vec![sigma; 2], corr, r, t, d, k };
        spec.validate()?;
        Ok(spec)
    }

    pub fn assets(&self) -> usize {
        self.weights.len()
    }

    pub fn dim(&self) -> usize {
        self.assets() * self.d
    }

    pub fn dt(&self) -> f64 {
        self.t / self.d as f64
    }

    pub fn discount(&self) -> f64 {
        exp(-self.r * self.t)
    }

    pub fn validate(&self) -> Result<()> {
        let l = self.assets();
        if l == 0 || self.s0.len() != l || self.sigma.len() != l || self.corr.order() != l {
            return Err(Error::invalid("basket spec arrays must all have length L"));
        }
        if self.d == 0 || !(self.t > 0.0) {
            return Err(Error::invalid("basket spec needs d >= 1 and T > 0"));
        }
        if (0..l).any(|i| (self.corr[(i, i)] - 1.0).abs() > 1e-12) {
            return Err(Error::invalid("correlation matrix must have a unit diagonal"));
        }
        if linalg::sym_eig(&self.corr).values.iter().any(|&v| v < -1e-12) {
            return Err(Error::invalid("correlation matrix must be positive semi-definite"));
        }
        Ok(())
    }

    /// Weight of the asset that row `j` of a dL-vector belongs to.
    pub fn weight_of_row(&self, j: usize) -> f64 {
        self.weights[j / self.d]
    }

    /// Λ: block (k, ℓ) is ρ_kℓ σ_k σ_ℓ Σ.
    pub fn lambda(&self) -> SymmetricMatrix {
        let d = self.d;
        let sigma = linalg::brownian_covariance(d, self.dt());
        let n = self.dim();
        let m = Matrix::from_fn(n, n, |i, j| {
            let (a, b) = (i / d, j / d);
            self.corr[(a, b)] * self.sigma[a] * self.sigma[b] * sigma[(i % d, j % d)]
        });
        SymmetricMatrix::new(m).expect("Λ is symmetric by construction")
    }

    /// A square root of Λ.
    ///
    /// `Standard` and `Pca` use (diag σ · G) ⊗ R with G the upper-triangular
    /// factor of the correlation matrix and R the single-path construction,
    /// so the first asset is driven by all Gaussians and the last by its own
    /// block only. `Cholesky` factors Λ directly. The first column is negated
    /// if needed so that it is pre-integration feasible.
    pub fn construction(&self, kind: PathKind) -> Result<PathConstruction> {
        let lambda = self.lambda();
        let mut pc = match kind {
            PathKind::Standard | PathKind::Pca => {
                let single = bm_construction(self.d, self.dt(), kind)?;
                let g = linalg::reverse_cholesky(&self.corr)?;
                let l = self.assets();
                let sg = Matrix::from_fn(l, l, |a, b| self.sigma[a] * g[(a, b)]);
                PathConstruction { r: Matrix::kron(&sg, &single.r), kind, sigma: lambda }
            }
            PathKind::Cholesky => PathConstruction::cholesky(lambda)?,
            PathKind::Rotated => return Err(Error::invalid("a rotated construction needs an explicit rotation")),
        };
        if self.weights[0] < 0.0 {
            for i in 0..pc.r.rows() {
                pc.r[(i, 0)] = -pc.r[(i, 0)];
            }
        }
        Ok(pc)
    }

    /// Per-row coefficient w_ℓ S0_ℓ / d and deterministic exponent
    /// (r − σ_ℓ²/2) t_j.
    pub(crate) fn row_terms(&self) -> (Vec<f64>, Vec<f64>) {
        let d = self.d;
        let dt = self.dt();
        let mut coef = Vec::with_capacity(self.dim());
        let mut drift = Vec::with_capacity(self.dim());
        for l in 0..self.assets() {
            for j in 1..=d {
                coef.push(self.weights[l] * self.s0[l] / d as f64);
                drift.push((self.r - 0.5 * self.sigma[l] * self.sigma[l]) * j as f64 * dt);
            }
        }
        (coef, drift)
    }
}

/// Σ_ℓ w_ℓ S̄⁽ℓ⁾ with B̃ = R z.
pub fn basket_average(spec: &BasketSpec, r: &Matrix, z: &[f64]) -> f64 {
    let (coef, drift) = spec.row_terms();
    let b = r.mul_vec(z);
    (0..spec.dim()).map(|i| coef[i] * exp(drift[i] + b[i])).sum()
}

/// (Σ_ℓ w_ℓ S̄⁽ℓ⁾ − K)₊, undiscounted.
pub fn basket_payoff(spec: &BasketSpec, r: &PathConstruction, z: &[f64]) -> f64 {
    (basket_average(spec, &r.r, z) - spec.k).max(0.0)
}

/// [`basket_payoff`] as an integrand.
#[derive(Clone, Debug)]
pub struct Basket {
    spec: BasketSpec,
    r: Matrix,
    coef: Vec<f64>,
    drift: Vec<f64>,
}

impl Basket {
    pub fn new(spec: BasketSpec, r: &PathConstruction) -> Result<Self> {
        spec.validate()?;
        if r.dim() != spec.dim() {
            return Err(Error::invalid("construction order must equal dL"));
        }
        let (coef, drift) = spec.row_terms();
        Ok(Self { spec, r: r.r.clone(), coef, drift })
    }
}

impl Integrand for Basket {
    fn dim(&self) -> usize {
        self.spec.dim()
    }
    fn eval(&self, z: &[f64]) -> Result<f64> {
        let mut sum = 0.0;
        for i in 0..self.coef.len() {
            sum += self.coef[i] * exp(self.drift[i] + linalg_row_dot(&self.r, i, z));
        }
        Ok((sum - self.spec.k).max(0.0))
    }
}

/// Chemical Langevin equation with mass-action propensities.
#[derive(Clone, Debug, PartialEq)]
pub struct CleSpec {
    /// N×J state-change vectors; column j is ν_j.
    pub nu: Matrix,
    /// J×N reactant orders for the mass-action propensities.
    pub reactants: Matrix,
    pub rates: Vec<f64>,
    pub x0: Vec<f64>,
    pub tau: f64,
    pub d: usize,
    pub k: f64,
}

impl CleSpec {
    /// Reversible isomerization S1 ⇄ S2 with ν₁ = [1, −1]ᵀ, ν₂ = [−1, 1]ᵀ,
    /// a₁ = c₁X₁, a₂ = c₂X₂, X0 = [100, 1e6], c = (1, 1e-4), T = 1.6, τ = 0.2.
    pub fn isomerization(k: f64) -> Self {
        Self {
            nu: Matrix::from_rows(&[&[1.0, -1.0], &[-1.0, 1.0]]).unwrap(),
            reactants: Matrix::identity(2),
            rates: vec![1.0, 1e-4],
            x0: vec![100.0, 1e6],
            tau: 0.2,
            d: 8,
            k,
        }
    }

    pub fn species(&self) -> usize {
        self.nu.rows()
    }

    pub fn reactions(&self) -> usize {
        self.nu.cols()
    }

    pub fn dim(&self) -> usize {
        self.d * self.reactions()
    }

    pub fn validate(&self) -> Result<()> {
        let (n, j) = (self.species(), self.reactions());
        if self.reactants.rows() != j || self.reactants.cols() != n || self.rates.len() != j || self.x0.len() != n {
            return Err(Error::invalid("CLE spec shapes disagree"));
        }
        if self.d == 0 || !(self.tau > 0.0) {
            return Err(Error::invalid("CLE spec needs d >= 1 and tau > 0"));
        }
        Ok(())
    }

    /// Mass-action propensities clamped at zero.
    pub fn propensities(&self, x: &[f64], out: &mut [f64]) {
        for j in 0..self.reactions() {
            let mut a = self.rates[j];
            for i in 0..self.species() {
                let order = self.reactants[(j, i)];
                if order != 0.0 {
                    a *= libm::pow(x[i].max(0.0), order);
                }
            }
            out[j] = a.max(0.0);
        }
    }

    /// One Euler–Maruyama step with Gaussians `z` (length J).
    pub fn step(&self, x: &mut [f64], z: &[f64], a: &mut [f64]) {
        self.propensities(x, a);
        for i in 0..self.species() {
            let mut dx = 0.0;
            for j in 0..self.reactions() {
                let nu = self.nu[(i, j)];
                if nu != 0.0 {
                    dx += nu * (self.tau * a[j] + sqrt(a[j] * self.tau) * z[j]);
                }
            }
            x[i] += dx;
        }
    }
}

/// Final state X_d and the path X_0..X_d. The Gaussian for reaction j at
/// step k (0-based) is `z[k·J + j]`.
pub fn cle_trajectory(spec: &CleSpec, z: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    spec.validate()?;
    if z.len() != spec.dim() {
        return Err(Error::invalid(format!("CLE needs {} Gaussians, got {}", spec.dim(), z.len())));
    }
    let jn = spec.reactions();
    let mut x = spec.x0.clone();
    let mut a = vec![0.0; jn];
    let mut hist = Vec::with_capacity(spec.d + 1);
    hist.push(x.clone());
    for k in 0..spec.d {
        spec.step(&mut x, &z[k * jn..(k + 1) * jn], &mut a);
        hist.push(x.clone());
    }
    Ok((x, hist))
}

pub(crate) fn cle_final_first(spec: &CleSpec, z: &[f64]) -> f64 {
    let jn = spec.reactions();
    let mut x = spec.x0.clone();
    let mut a = vec![0.0; jn];
    for k in 0..spec.d {
        spec.step(&mut x, &z[k * jn..(k + 1) * jn], &mut a);
    }
    x[0]
}

/// Which functional of X_{d,1} a [`Cle`] integrand returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CleOutput {
    /// 1{X_{d,1} ≤ K}
    Indicator,
    /// ½(1 + tanh((X_{d,1} − K)/5))
    Smoothed,
}

#[derive(Clone, Debug)]
pub struct Cle {
    spec: CleSpec,
    output: CleOutput,
}

impl Cle {
    pub fn new(spec: CleSpec, output: CleOutput) -> Result<Self> {
        spec.validate()?;
        Ok(Self { spec, output })
    }
}

impl Integrand for Cle {
    fn dim(&self) -> usize {
        self.spec.dim()
    }
    fn eval(&self, z: &[f64]) -> Result<f64> {
        let x = cle_final_first(&self.spec, z);
        if !x.is_finite() {
            return Err(Error::Evaluation { coordinate: None });
        }
        Ok(match self.output {
            CleOutput::Indicator => {
                if x <= self.spec.k {
                    1.0
                } else {
                    0.0
                }
            }
            CleOutput::Smoothed => 0.5 * (1.0 + tanh((x - self.spec.k) / 5.0)),
        })
    }
}

/// X = Σ_j exp(z_j), z ~ N(μ, Σ).
#[derive(Clone, Debug, PartialEq)]
pub struct LognormalSumSpec {
    pub mu: Vec<f64>,
    pub sigma: SymmetricMatrix,
}

impl LognormalSumSpec {
    /// μ = 0 and Σ_ij = ρ^|i−j|.
    pub fn autocorrelated(d: usize, rho: f64) -> Result<Self> {
        if d == 0 || !(rho.abs() < 1.0) {
            return Err(Error::invalid("need d >= 1 and |rho| < 1"));
        }
        let sigma = SymmetricMatrix::from_fn(d, |i, j| libm::pow(rho, (i as f64 - j as f64).abs()))?;
        Ok(Self { mu: vec![0.0; d], sigma })
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }
}

/// h(y) = Σ_j exp(μ_j + (R y)_j).
pub fn lognormal_sum(spec: &LognormalSumSpec, r: &PathConstruction, y: &[f64]) -> f64 {
    let b = r.r.mul_vec(y);
    spec.mu.iter().zip(&b).map(|(m, x)| exp(m + x)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gbm(k: f64) -> GbmSpec {
        GbmSpec { s0: 100.0, r: 0.05, sigma: 0.2, t: 1.0, d: 32, k }
    }

    #[test]
    fn asian_at_origin() {
        let spec = gbm(100.0);
        let r = spec.construction(PathKind::Standard).unwrap();
        let expect: f64 = (1..=32).map(|j| exp(0.03 * j as f64 / 32.0)).sum::<f64>() * 100.0 / 32.0 - 100.0;
        assert!((asian_call(&spec, &r, &[0.0; 32]) - expect).abs() < 1e-12);
    }

    #[test]
    fn frozen_volatility() {
        let mut spec = gbm(0.0);
        spec.sigma = 0.0;
        let r = spec.construction(PathKind::Standard).unwrap();
        let z: Vec<f64> = (0..32).map(|i| (i as f64).sin()).collect();
        let expect: f64 = (1..=32).map(|j| exp(0.05 * j as f64 / 32.0)).sum::<f64>() * 100.0 / 32.0;
        assert!((asian_call(&spec, &r, &z) - expect).abs() < 1e-12);
    }

    #[test]
    fn heston_without_vol_of_vol_is_deterministic() {
        let spec = SvSpec {
            kind: SvKind::Heston { kappa: 1.0, theta: 0.3, sigma_v: 0.0 },
            r: 0.05,
            s0: 100.0,
            k: 100.0,
            v0: 0.2,
            rho: -0.5,
            t: 1.0,
            d: 8,
        };
        let x2: Vec<f64> = (0..8).map(|i| i as f64 - 3.0).collect();
        let mut v = vec![0.0; 8];
        spec.variance_path(&x2, &mut v);
        let mut expect = 0.2;
        for j in 0..8 {
            assert!((v[j] - expect).abs() < 1e-15);
            expect += (0.3 - expect) * spec.dt();
        }
    }

    #[test]
    fn isomerization_conserves_mass() {
        let spec = CleSpec::isomerization(100.0);
        let z: Vec<f64> = (0..16).map(|i| ((i * 7) as f64).cos() * 2.0).collect();
        let (_, hist) = cle_trajectory(&spec, &z).unwrap();
        for x in &hist {
            assert!((x[0] + x[1] - 1_000_100.0).abs() < 1e-6);
        }
    }

    #[test]
    fn zero_rates_freeze_state() {
        let mut spec = CleSpec::isomerization(100.0);
        spec.rates = vec![0.0, 0.0];
        let (x, _) = cle_trajectory(&spec, &[1.0; 16]).unwrap();
        assert_eq!(x, spec.x0);
    }

    #[test]
    fn spread_construction_factors_lambda() {
        for rho in [-0.5, 0.5] {
            let spec = BasketSpec::spread(100.0, 0.2, rho, 0.05, 1.0, 8, 0.0).unwrap();
            for kind in [PathKind::Standard, PathKind::Pca, PathKind::Cholesky] {
                let pc = spec.construction(kind).unwrap();
                assert!(pc.factorization_residual() < 1e-12, "{kind:?}");
                if kind == PathKind::Cholesky {
                    continue;
                }
                for j in 0..16 {
                    assert!(spec.weight_of_row(j) * pc.r[(j, 0)] >= -1e-15);
                }
            }
        }
    }

    #[test]
    fn lognormal_scalar() {
        let spec = LognormalSumSpec::autocorrelated(1, 0.0).unwrap();
        let r = PathConstruction::cholesky(spec.sigma.clone()).unwrap();
        assert!((lognormal_sum(&spec, &r, &[0.7]) - exp(0.7)).abs() < 1e-15);
    }
}
