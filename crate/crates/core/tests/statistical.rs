use casqmc_core::cde::{cde_replicates, default_grid, direct_construction};
use casqmc_core::estimate::{replicate, Sampler};
use casqmc_core::greeks::{Greek, GreekKind, SovGreek};
use casqmc_core::linalg::PathKind;
use casqmc_core::math::norm_ppf;
use casqmc_core::models::{asian_call, cle_trajectory, lognormal_sum, CleSpec, GbmSpec, LognormalSumSpec};
use casqmc_core::preint::{exp_moment0, exp_moment1, GbmPreint};
use casqmc_core::rqmc::scrambled_sobol;
use casqmc_core::Integrand;
use casqmc_oracles::{cdf, gaussian_expectation, gaussian_kde, integrate, ks_uniform_pvalue, silverman_bandwidth, TestRng};

/// Sample mean and its standard error.
fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

fn mc_samples<F: Integrand>(f: &F, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = TestRng::new(seed);
    (0..n).map(|_| f.eval(&rng.normals(f.dim())).unwrap()).collect()
}

fn gbm(d: usize, k: f64) -> GbmSpec {
    GbmSpec { s0: 100.0, r: 0.05, sigma: 0.2, t: 1.0, d, k }
}

#[test]
fn first_coordinate_is_uniform_across_seeds() {
    let u: Vec<f64> = (0..1000u64).map(|s| scrambled_sobol(1, 1, s).unwrap().point(0)[0]).collect();
    let p = ks_uniform_pvalue(&u);
    assert!(p > 0.01, "p = {p}");
}

#[test]
fn quantiles_against_independent_cdf() {
    assert!((norm_ppf(0.975).unwrap() - 1.959964).abs() < 1e-5);
    let mut rng = TestRng::new(11);
    for _ in 0..1000 {
        let u = rng.uniform();
        let back = cdf(norm_ppf(u).unwrap());
        assert!((back - u).abs() < 1e-9, "{u} -> {back}");
    }
}

#[test]
fn one_step_price_converges_to_black_scholes() {
    let spec = gbm(1, 95.0);
    let pc = spec.construction(PathKind::Standard).unwrap();
    let mut rng = TestRng::new(3);
    let xs: Vec<f64> = (0..1 << 16).map(|_| spec.discount() * asian_call(&spec, &pc, &[rng.normal()])).collect();
    let (m, se) = mean_se(&xs);
    let bs = casqmc_oracles::black_scholes_call(100.0, 95.0, 0.05, 0.2, 1.0);
    assert!((m - bs).abs() < 3.0 * se, "{m} ± {se} vs {bs}");
}

#[test]
fn preintegrated_asian_agrees_with_plain_mc() {
    let spec = gbm(32, 100.0);
    let pc = spec.construction(PathKind::Standard).unwrap();
    let mc_f = casqmc_core::models::AsianCall::new(spec.clone(), &pc).unwrap();
    let (m, se) = mean_se(&mc_samples(&mc_f, 1 << 15, 5));
    let pre = GbmPreint::new(spec.clone(), &pc).unwrap();
    let st = replicate(&pre, Sampler::Rqmc, 1 << 10, 16, 9, 0).unwrap();
    let disc = spec.discount();
    let z = (disc * m - disc * st.mean).abs() / (disc * (se * se + st.stderr * st.stderr).sqrt());
    assert!(z < 3.0, "z = {z}");
}

#[test]
fn delta_at_zero_strike_is_discounted_forward_slope() {
    let spec = gbm(32, 0.0);
    let pc = spec.construction(PathKind::Standard).unwrap();
    let g = Greek::new(spec.clone(), GreekKind::Delta, &pc).unwrap();
    let (m, se) = mean_se(&mc_samples(&g, 1 << 16, 21));
    let dt = spec.dt();
    let fwd = (1..=32).map(|j| (spec.r * j as f64 * dt).exp()).sum::<f64>() / 32.0;
    let want = spec.discount() * fwd;
    assert!((m - want).abs() < 3.0 * se.max(1e-15), "{m} ± {se} vs {want}");
}

#[test]
fn sov_delta_has_the_raw_mean() {
    let spec = gbm(32, 100.0);
    let pc = spec.construction(PathKind::Standard).unwrap();
    let raw = mean_se(&mc_samples(&Greek::new(spec.clone(), GreekKind::Delta, &pc).unwrap(), 1 << 16, 31));
    let sov = mean_se(&mc_samples(&SovGreek::new(spec, GreekKind::Delta, &pc).unwrap(), 1 << 16, 32));
    let se = (raw.1 * raw.1 + sov.1 * sov.1).sqrt();
    assert!((raw.0 - sov.0).abs() < 3.0 * se, "{raw:?} vs {sov:?}");
}

#[test]
fn exponential_moments_against_quadrature() {
    let mut rng = TestRng::new(41);
    for _ in 0..100 {
        let c = rng.range(-3.0, 3.0);
        let gamma = rng.range(-6.0, 6.0);
        let q0 = gaussian_expectation(|z| (c * z).exp(), gamma, f64::INFINITY, 40.0);
        let q1 = gaussian_expectation(|z| z * (c * z).exp(), gamma, f64::INFINITY, 40.0);
        let m0 = exp_moment0(c, gamma);
        let m1 = exp_moment1(c, gamma);
        assert!((m0 - q0).abs() <= 1e-10 * q0.abs().max(1e-300), "c={c} γ={gamma}: {m0} vs {q0}");
        let scale = integrate(|z| (z * (c * z).exp()).abs() * casqmc_oracles::phi(z), gamma, gamma.max(0.0) + 40.0, 0.0, 1e-12);
        assert!((m1 - q1).abs() <= 1e-10 * scale, "c={c} γ={gamma}: {m1} vs {q1}");
    }
}

#[test]
fn isomerization_mean_follows_the_linear_ode() {
    // With ν₁ = −ν₂ = [1, −1] and a = (c₁X₁, c₂X₂), the drift is linear and
    // vanishes at X0 = [100, 1e6], so E[X_{k,1}] = 100 for every k.
    let spec = CleSpec::isomerization(100.0);
    let mut rng = TestRng::new(17);
    let xs: Vec<f64> = (0..1 << 14).map(|_| cle_trajectory(&spec, &rng.normals(spec.dim())).unwrap().0[0]).collect();
    let (m, se) = mean_se(&xs);
    assert!((m - 100.0).abs() < 3.0 * se, "{m} ± {se}");
}

#[test]
fn conditional_density_matches_large_sample_kde() {
    let spec = LognormalSumSpec::autocorrelated(10, 0.5).unwrap();
    let pc = direct_construction(&spec).unwrap();
    let grid = default_grid();
    let est = cde_replicates(&spec, &pc, &grid, 1 << 12, 50, 2024, 1).unwrap();
    let curve = est.pointwise();

    let mut rng = TestRng::new(99);
    let mut samples: Vec<f64> = (0..10_000_000).map(|_| lognormal_sum(&spec, &pc, &rng.normals(10))).collect();
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = silverman_bandwidth(&samples);
    let kde = gaussian_kde(&samples, &grid);

    // E[KDE] = f + h²f''/2 + O(h⁴); the curvature term is taken from the CDE
    // curve so the comparison is against the same smoothed target.
    let dx = grid[1] - grid[0];
    for i in 2..grid.len() - 2 {
        let f2 = (curve[i + 1].0 - 2.0 * curve[i].0 + curve[i - 1].0) / (dx * dx);
        let f4 = (curve[i + 2].0 - 4.0 * curve[i + 1].0 + 6.0 * curve[i].0 - 4.0 * curve[i - 1].0 + curve[i - 2].0)
            / dx.powi(4);
        let smoothed = curve[i].0 + 0.5 * h * h * f2;
        let se = (kde[i].1 * kde[i].1 + curve[i].1 / 50.0).sqrt();
        let band = 4.0 * se + 0.125 * h.powi(4) * f4.abs();
        assert!(
            (smoothed - kde[i].0).abs() <= band,
            "x={} cde={} kde={} band={band}",
            grid[i],
            smoothed,
            kde[i].0
        );
    }
}
