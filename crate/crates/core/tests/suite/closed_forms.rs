//! Closed-form conditional expectations against one-dimensional adaptive
//! quadrature (or conditional Monte Carlo) at random conditioning points.

use casqmc_core::greeks::{greek_pathwise, GreekKind, PreintGreek, SovGreek};
use casqmc_core::linalg::{householder_complement, Matrix, PathConstruction, PathKind};
use casqmc_core::models::{
    asian_average, basket_average, cle_trajectory, lognormal_sum, sv_asian, BasketSpec, CleSpec, GbmSpec,
    LognormalSumSpec, SvKind, SvSpec,
};
use casqmc_core::preint::{BasketPreint, CleLastStep, ClePreint, GbmPreint, LognormalPreint, SvPreint};
use casqmc_core::subspace::{constrained_rotation, estimate_c, FirstDirectionConstraint};
use casqmc_core::{Integrand, SymmetricMatrix};
use casqmc_oracles::{bisect, cdf, gaussian_expectation, TestRng};

const POINTS: usize = 100;
const CUT: f64 = 40.0;

fn close(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs().max(1e-10)
}

/// E[(a(z₁) − K)₊] over z₁ for an increasing `a`, by bisection for the
/// kink and quadrature above it.
fn call_oracle(a: impl Fn(f64) -> f64, k: f64) -> f64 {
    let lo = if a(-CUT) >= k { -CUT } else if a(CUT) <= k { return 0.0 } else { bisect(|z| a(z) - k, -CUT, CUT, 1e-14) };
    gaussian_expectation(|z| (a(z) - k).max(0.0), lo, f64::INFINITY, CUT)
}

/// Orthogonal matrix whose first column is `u1`.
fn with_first(u1: &[f64]) -> Matrix {
    let d = u1.len();
    let v = householder_complement(u1).unwrap();
    Matrix::from_fn(d, d, |i, j| if j == 0 { u1[i] } else { v[(i, j - 1)] })
}

fn nonneg_unit(rng: &mut TestRng, d: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..d).map(|_| rng.uniform()).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

fn with_z1(z1: f64, rest: &[f64]) -> Vec<f64> {
    let mut z = Vec::with_capacity(rest.len() + 1);
    z.push(z1);
    z.extend_from_slice(rest);
    z
}

pub fn asian_call_preintegration() {
    let mut rng = TestRng::new(11);
    for &k in &[90.0, 100.0, 110.0] {
        let spec = GbmSpec { s0: 100.0, r: 0.05, sigma: 0.2, t: 1.0, d: 16, k };
        let std = spec.construction(PathKind::Standard).unwrap();
        let mut constructions = vec![std.clone(), spec.construction(PathKind::Pca).unwrap()];
        constructions.push(std.rotated(&with_first(&nonneg_unit(&mut rng, 16))));
        for pc in &constructions {
            let ctx = GbmPreint::new(spec.clone(), pc).unwrap();
            for _ in 0..POINTS / 3 + 1 {
                let rest = rng.normals(15);
                let got = ctx.conditional(&rest).unwrap();
                let want = call_oracle(|z| asian_average(&spec, &pc.r, &with_z1(z, &rest)), k);
                assert!(close(got, want, 1e-6), "K={k} {:?}: {got} vs {want}", pc.kind);
            }
        }
    }
}

pub fn spread_preintegration() {
    let mut rng = TestRng::new(12);
    for &rho in &[-0.5, 0.5] {
        for &k in &[-10.0, 0.0, 10.0] {
            let spec = BasketSpec::spread(100.0, 0.2, rho, 0.05, 1.0, 8, k).unwrap();
            let r0 = spec.construction(PathKind::Cholesky).unwrap();
            let payoff = casqmc_core::from_fn(16, |z| (basket_average(&spec, &r0.r, z) - spec.k).max(0.0));
            let c = estimate_c(&payoff, 64, 1e-6, 5).unwrap();
            let signs = (0..16).map(|j| spec.weight_of_row(j).signum()).collect();
            let rot = constrained_rotation(&c, FirstDirectionConstraint::SignPattern { r0: r0.clone(), signs }).unwrap();
            let cas = r0.rotated(&rot.u);
            for pc in [spec.construction(PathKind::Standard).unwrap(), cas] {
                let ctx = BasketPreint::new(spec.clone(), &pc).unwrap();
                for _ in 0..POINTS / 6 + 1 {
                    let rest = rng.normals(15);
                    let got = ctx.conditional(&rest).unwrap();
                    let want = call_oracle(|z| basket_average(&spec, &pc.r, &with_z1(z, &rest)), k);
                    assert!(close(got, want, 1e-6), "rho={rho} K={k}: {got} vs {want}");
                }
            }
        }
    }
}

pub fn stochastic_volatility_preintegration() {
    let mut rng = TestRng::new(13);
    let d = 8;
    for name in ["hullwhite", "heston", "steinstein"] {
        let kind: SvKind = name.parse().unwrap();
        let spec = SvSpec { kind, r: 0.05, s0: 100.0, k: 100.0, v0: 0.2, rho: -0.5, t: 1.0, d };
        let mut u1 = nonneg_unit(&mut rng, d);
        u1.resize(2 * d, 0.0);
        for u in [Matrix::identity(2 * d), with_first(&u1)] {
            let ctx = SvPreint::new(spec.clone(), u.clone()).unwrap();
            let avg = |z: &[f64]| sv_asian(&SvSpec { k: 0.0, ..spec.clone() }, &u, z).unwrap();
            for _ in 0..POINTS / 2 {
                let rest = rng.normals(2 * d - 1);
                let got = ctx.conditional(&rest).unwrap();
                let want = call_oracle(|z| avg(&with_z1(z, &rest)), spec.k);
                assert!(close(got, want, 1e-6), "{name}: {got} vs {want}");
            }
        }
    }
}

pub fn greek_preintegration_and_sov() {
    let mut rng = TestRng::new(14);
    let spec = GbmSpec { s0: 100.0, r: 0.05, sigma: 0.2, t: 1.0, d: 8, k: 100.0 };
    let pc = spec.construction(PathKind::Pca).unwrap();
    let ctx = GbmPreint::new(spec.clone(), &pc).unwrap();
    for kind in GreekKind::ALL {
        let pre = PreintGreek::new(spec.clone(), kind, &pc).unwrap();
        let sov = SovGreek::new(spec.clone(), kind, &pc).unwrap();
        for _ in 0..POINTS / 5 {
            let rest = rng.normals(7);
            let alpha = ctx.exp_sum(&rest).root(None).unwrap().gamma();
            let want = gaussian_expectation(|z| greek_pathwise(&spec, kind, &pc, &with_z1(z, &rest)), alpha, f64::INFINITY, CUT);
            let got = pre.conditional(&rest).unwrap();
            assert!(close(got, want, 1e-6), "{kind:?}: {got} vs {want}");
            let smooth = gaussian_expectation(|z| sov.eval(&with_z1(z, &rest)).unwrap(), f64::NEG_INFINITY, f64::INFINITY, CUT);
            assert!(close(smooth, want, 1e-6), "SOV {kind:?}: {smooth} vs {want}");
        }
    }
}

pub fn reaction_network_last_step() {
    let mut rng = TestRng::new(15);
    let spec = CleSpec::isomerization(100.0);
    let s = spec.dim();
    let jn = spec.reactions();
    let mut u1 = vec![0.0; s];
    u1[s - jn] = 0.6;
    u1[s - 1] = -0.8;
    let u = with_first(&u1);
    let ctx = ClePreint::new(spec.clone(), u.clone()).unwrap();
    let joint = CleLastStep::new(spec.clone()).unwrap();
    for _ in 0..POINTS {
        let rest = rng.normals(s - 1);
        let (m, c, _) = ctx.affine(&rest);
        // X_{d,1} is affine in y₁ along a last-step direction.
        for y1 in [-2.0, 0.3, 1.7] {
            let (x, _) = cle_trajectory(&spec, &u.mul_vec(&with_z1(y1, &rest))).unwrap();
            assert!((x[0] - (m + c * y1)).abs() <= 1e-9 * x[0].abs());
        }
        let p = ctx.conditional(&rest).unwrap();
        let want = if c > 0.0 { cdf((spec.k - m) / c) } else { casqmc_oracles::sf((spec.k - m) / c) };
        assert!(close(p, want, 1e-9), "{p} vs {want}");
    }

    // conditional MC over both last-step Gaussians for the joint version
    for _ in 0..10 {
        let hist = rng.normals(s - jn);
        let p = joint.conditional(&hist).unwrap();
        let draws = 20_000;
        let mut hits = 0usize;
        for _ in 0..draws {
            let mut z = hist.clone();
            z.extend(rng.normals(jn));
            if cle_trajectory(&spec, &z).unwrap().0[0] <= spec.k {
                hits += 1;
            }
        }
        let est = hits as f64 / draws as f64;
        let se = (p * (1.0 - p) / draws as f64).sqrt().max(1e-4);
        assert!((est - p).abs() <= 4.0 * se, "{est} vs {p}");
    }
}

pub fn lognormal_conditional_density() {
    let mut rng = TestRng::new(16);
    for &rho in &[-0.5, 0.5] {
        let spec = LognormalSumSpec::autocorrelated(10, rho).unwrap();
        let r0 = PathConstruction::cholesky(spec.sigma.clone()).unwrap();
        let pcs = [casqmc_core::cde::direct_construction(&spec).unwrap(), r0.rotated(&with_first(&{
            // a direction with R0 v ≥ 0: v = R0⁻¹ w for positive w
            let w: Vec<f64> = (0..10).map(|_| rng.range(0.1, 1.0)).collect();
            let v = r0.solve(&w).unwrap();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / n).collect::<Vec<_>>()
        }))];
        for pc in &pcs {
            let ctx = LognormalPreint::new(spec.clone(), pc).unwrap();
            for _ in 0..POINTS / 4 {
                let rest = rng.normals(9);
                let x = rng.range(1.0, 30.0);
                let mut sum = ctx.exp_sum(&rest);
                let got = ctx.at(&mut sum, x, None).unwrap();
                let h = |y1: f64| lognormal_sum(&spec, pc, &with_z1(y1, &rest));
                let cdf_at = |x: f64| {
                    if h(-CUT) >= x {
                        0.0
                    } else if h(CUT) <= x {
                        1.0
                    } else {
                        cdf(bisect(|y| h(y) - x, -CUT, CUT, 1e-15))
                    }
                };
                assert!(close(got.cdf, cdf_at(x), 1e-6));
                let diff = |dx: f64| (cdf_at(x + dx) - cdf_at(x - dx)) / (2.0 * dx);
                let dx = 1e-5 * x;
                let want = (4.0 * diff(0.5 * dx) - diff(dx)) / 3.0;
                assert!((got.density - want).abs() <= 1e-6 * want.abs().max(1e-8) + 1e-9, "{} vs {want}", got.density);
            }
        }
    }
}

pub fn scalar_lognormal_density_is_exact() {
    let spec = LognormalSumSpec { mu: vec![0.3], sigma: SymmetricMatrix::from_fn(1, |_, _| 0.64).unwrap() };
    let pc = casqmc_core::cde::direct_construction(&spec).unwrap();
    let grid = casqmc_core::cde::default_grid();
    let curve = casqmc_core::cde::cde_curve(&spec, &pc, &grid, 1, 0).unwrap();
    for (x, f) in grid.iter().zip(curve) {
        let exact = casqmc_oracles::phi((x.ln() - 0.3) / 0.8) / (x * 0.8);
        assert!((f - exact).abs() <= 1e-9 * exact.max(1e-300), "{x}: {f} vs {exact}");
    }
}
