mod suite;

use casqmc_core::cde::{cde_curve, mise, uniform_grid};
use casqmc_core::linalg::{
    bm_construction, brownian_covariance, cholesky, householder_complement, reverse_cholesky, sym_eig, Matrix,
    PathConstruction, PathKind, SymmetricMatrix,
};
use casqmc_core::models::{GbmSpec, LognormalSumSpec};
use casqmc_core::preint::{ExpSum, GbmPreint, LognormalPreint};
use casqmc_core::subspace::{constrained_first_direction, FirstDirectionConstraint, GradientMoment};
use casqmc_oracles::TestRng;
use proptest::prelude::*;
use suite::foundations::{self, random_moment, random_unit};

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn cas_rotation_structure(seed in any::<u64>(), d in 2usize..=8) {
        let checked = foundations::cas_case(seed, d);
        prop_assert!(checked.is_ok(), "{:?}", checked);
    }

    #[test]
    fn eigen_decomposition(seed in any::<u64>(), d in 1usize..=10) {
        let mut rng = TestRng::new(seed);
        let c = random_moment(&mut rng, d, d + 2);
        let e = sym_eig(&c);
        prop_assert!(e.vectors.orthogonality_defect() < 1e-12);
        prop_assert!(e.reconstruct().max_abs_diff(c.matrix()) <= 1e-12 * c.matrix().max_abs());
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn triangular_factors(seed in any::<u64>(), d in 1usize..=10) {
        let mut rng = TestRng::new(seed);
        let a = random_moment(&mut rng, d, 2 * d + 2);
        let s = SymmetricMatrix::new(a.matrix().sub(&Matrix::identity(d).scale(-1e-3))).unwrap();
        for l in [cholesky(&s).unwrap(), reverse_cholesky(&s).unwrap()] {
            let back = l.matmul(&l.transpose());
            prop_assert!(back.max_abs_diff(s.matrix()) <= 1e-12 * s.matrix().max_abs());
        }
        let rc = reverse_cholesky(&s).unwrap();
        for i in 1..d {
            prop_assert_eq!(rc[(i, 0)], 0.0);
        }
    }

    #[test]
    fn householder_basis(seed in any::<u64>(), d in 2usize..=12) {
        let mut rng = TestRng::new(seed);
        let u1 = random_unit(&mut rng, d);
        let v = householder_complement(&u1).unwrap();
        prop_assert!(v.orthogonality_defect() < 1e-12);
        for x in v.tr_mul_vec(&u1) {
            prop_assert!(x.abs() < 1e-12);
        }
    }

    #[test]
    fn sign_pattern_is_respected(seed in any::<u64>(), d in 2usize..=8) {
        let mut rng = TestRng::new(seed);
        let c = random_moment(&mut rng, d, 3 * d);
        let sigma = random_moment(&mut rng, d, 2 * d + 1);
        let r0 = PathConstruction::cholesky(sigma).unwrap();
        let signs: Vec<f64> = (0..d).map(|_| if rng.uniform() < 0.5 { -1.0 } else { 1.0 }).collect();
        let constraint = FirstDirectionConstraint::SignPattern { r0: r0.clone(), signs: signs.clone() };
        match constrained_first_direction(&GradientMoment::from_matrix(c), &constraint) {
            Ok(u1) => {
                let r1 = r0.r.mul_vec(&u1);
                let scale = r1.iter().fold(0.0f64, |a, x| a.max(x.abs()));
                for (x, s) in r1.iter().zip(&signs) {
                    prop_assert!(s * x >= -1e-10 * scale);
                }
            }
            Err(e) => prop_assert!(matches!(e, casqmc_core::Error::DegenerateDirection(_))),
        }
    }

    #[test]
    fn quantile_round_trip(u in 1e-15f64..1.0) {
        prop_assume!(u < 1.0 - 1e-15);
        let checked = foundations::quantile_round_trip(u);
        prop_assert!(checked.is_ok(), "{:?}", checked);
    }

    #[test]
    fn expected_call_is_nonnegative_and_decreasing(seed in any::<u64>(), k in -50.0f64..200.0) {
        let mut rng = TestRng::new(seed);
        let n = 1 + (rng.next_u64() % 6) as usize;
        let coef: Vec<f64> = (0..n).map(|_| rng.range(1.0, 50.0)).collect();
        let slope: Vec<f64> = (0..n).map(|_| rng.range(0.0, 0.5)).collect();
        let lo = ExpSum { coef: coef.clone(), slope: slope.clone(), k };
        let hi = ExpSum { coef, slope, k: k + 1.0 };
        let a = lo.expected_call(None).unwrap().0;
        let b = hi.expected_call(None).unwrap().0;
        prop_assert!(a >= 0.0 && b >= 0.0);
        prop_assert!(b <= a + 1e-12 * a.abs());
    }

    #[test]
    fn brownian_constructions_factor_the_covariance(d in 1usize..=16) {
        let sigma = brownian_covariance(d, 1.0 / d as f64);
        for kind in [PathKind::Standard, PathKind::Pca, PathKind::Cholesky] {
            let pc = bm_construction(d, 1.0 / d as f64, kind).unwrap();
            prop_assert!(pc.r.matmul(&pc.r.transpose()).max_abs_diff(sigma.matrix()) < 1e-12);
            prop_assert!(pc.first_column().iter().all(|&x| x >= 0.0));
        }
    }
}

#[test]
fn scrambled_net_stratification() {
    for m in [6, 10] {
        foundations::stratification(m, 64, 2024).unwrap();
    }
}

#[test]
fn gaussian_mapping_is_deterministic() {
    foundations::gaussian_mapping_is_deterministic().unwrap();
}

#[test]
fn mise_of_white_noise() {
    let grid = uniform_grid(0.0, 10.0, 101).unwrap();
    let mut rng = TestRng::new(5);
    let sigma = 0.3;
    let curves: Vec<Vec<f64>> = (0..50).map(|_| grid.iter().map(|_| sigma * rng.normal()).collect()).collect();
    let got = mise(&curves, &grid, None).unwrap();
    let want = sigma * sigma * 10.0;
    assert!((got / want - 1.0).abs() < 0.1, "{got} vs {want}");
}

#[test]
fn warm_and_cold_roots_agree() {
    let spec = LognormalSumSpec::autocorrelated(10, 0.5).unwrap();
    let pc = casqmc_core::cde::direct_construction(&spec).unwrap();
    let ctx = LognormalPreint::new(spec, &pc).unwrap();
    let grid = casqmc_core::cde::default_grid();
    let mut rng = TestRng::new(8);
    for _ in 0..20 {
        let rest = rng.normals(9);
        let mut warm = ctx.exp_sum(&rest);
        let mut cold = ctx.exp_sum(&rest);
        let mut hint = None;
        for &x in &grid {
            let w = ctx.at(&mut warm, x, hint).unwrap();
            let c = ctx.at(&mut cold, x, None).unwrap();
            if let (Some(a), Some(b)) = (w.root.root(), c.root.root()) {
                assert!((a - b).abs() < 1e-9);
                hint = Some(a);
            } else {
                assert_eq!(w.root, c.root);
            }
        }
    }
}

#[test]
fn cde_curve_has_unit_mass() {
    let spec = LognormalSumSpec::autocorrelated(10, 0.5).unwrap();
    let pc = casqmc_core::cde::direct_construction(&spec).unwrap();
    let grid = casqmc_core::cde::default_grid();
    let curve = cde_curve(&spec, &pc, &grid, 1 << 10, 1).unwrap();
    assert!(curve.iter().all(|&f| f >= 0.0));
    let mass = casqmc_core::cde::trapezoid(&grid, &curve);
    assert!((mass - 1.0).abs() < 0.02, "mass {mass}");
}

#[test]
fn preintegrated_price_matches_black_scholes_when_d_is_one() {
    let spec = GbmSpec { s0: 100.0, r: 0.05, sigma: 0.2, t: 1.0, d: 1, k: 95.0 };
    let pc = spec.construction(PathKind::Standard).unwrap();
    let ctx = GbmPreint::new(spec.clone(), &pc).unwrap();
    let price = spec.discount() * ctx.conditional(&[]).unwrap();
    let bs = casqmc_oracles::black_scholes_call(100.0, 95.0, 0.05, 0.2, 1.0);
    assert!((price - bs).abs() < 1e-10 * bs);
}
