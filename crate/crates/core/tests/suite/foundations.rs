use casqmc_core::linalg::{Matrix, SymmetricMatrix};
use casqmc_core::math::{norm_cdf, norm_ppf, norm_sf};
use casqmc_core::rqmc::{scrambled_sobol, to_gaussian};
use casqmc_core::subspace::{cas_rotation, GradientMoment};
use casqmc_oracles::{constrained_rayleigh_max, line_angle, TestRng};

/// Random PSD matrix Σ g gᵀ over `m` random gradients with uneven scales.
pub fn random_moment(rng: &mut TestRng, d: usize, m: usize) -> SymmetricMatrix {
    let scales: Vec<f64> = (0..d).map(|_| (3.0 * rng.normal()).exp()).collect();
    let mut c = vec![0.0; d * d];
    for _ in 0..m {
        let g: Vec<f64> = (0..d).map(|i| scales[i] * rng.normal()).collect();
        for i in 0..d {
            for j in 0..d {
                c[i * d + j] += g[i] * g[j] / m as f64;
            }
        }
    }
    SymmetricMatrix::new(Matrix::from_row_major(d, d, c).unwrap()).unwrap()
}

pub fn random_unit(rng: &mut TestRng, d: usize) -> Vec<f64> {
    let v = rng.normals(d);
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

fn as_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// One random (Ĉ, u1) of order `d`: orthogonality, exact first column,
/// diagonal complement with descending diagonal, and agreement of the
/// second column with a brute-force constrained Rayleigh maximizer.
pub fn cas_case(seed: u64, d: usize) -> Result<(), String> {
    let mut rng = TestRng::new(seed);
    let c = random_moment(&mut rng, d, 3 * d);
    let u1 = random_unit(&mut rng, d);
    let rot = cas_rotation(&GradientMoment::from_matrix(c.clone()), &u1).map_err(|e| e.to_string())?;
    let defect = rot.u.orthogonality_defect();
    if defect >= 1e-10 {
        return Err(format!("orthogonality defect {defect}"));
    }
    if rot.u.column(0) != u1 {
        return Err("first column differs from u1".into());
    }
    let v = rot.u.columns_from(1);
    let reduced = c.congruence(&v);
    let scale = c.matrix().max_abs().max(1e-300);
    for i in 0..d - 1 {
        for j in 0..d - 1 {
            if i != j && reduced[(i, j)].abs() > 1e-10 * scale {
                return Err(format!("off-diagonal ({i},{j}) = {}", reduced[(i, j)]));
            }
        }
        if i + 1 < d - 1 && reduced[(i, i)] < reduced[(i + 1, i + 1)] - 1e-12 * scale {
            return Err(format!("diagonal not descending at {i}"));
        }
    }
    let best = constrained_rayleigh_max(&as_rows(c.matrix()), &u1, 100_000);
    let angle = line_angle(&best, &rot.u.column(1));
    if angle >= 1e-3 {
        return Err(format!("second column {angle} rad from the grid maximizer"));
    }
    Ok(())
}

/// Every one-dimensional projection of a scrambled net with n = 2^m points
/// has one point per interval of length 1/n, and the first two coordinates
/// form a (0, m, 2)-net.
pub fn stratification(m: u32, dims: usize, seed: u64) -> Result<(), String> {
    let n = 1usize << m;
    let p = scrambled_sobol(n, dims, seed).map_err(|e| e.to_string())?;
    for j in 0..dims {
        let mut seen = vec![false; n];
        for u in p.projection(j) {
            if !(u > 0.0 && u < 1.0) {
                return Err(format!("dim {j}: {u} outside (0, 1)"));
            }
            let cell = (u * n as f64) as usize;
            if seen[cell] {
                return Err(format!("dim {j} n {n}: two points in cell {cell}"));
            }
            seen[cell] = true;
        }
    }
    for a in 0..=m {
        let (nx, ny) = (1usize << a, 1usize << (m - a));
        let mut count = vec![0u32; n];
        for i in 0..n {
            let q = p.point(i);
            count[(q[0] * nx as f64) as usize * ny + (q[1] * ny as f64) as usize] += 1;
        }
        if count.iter().any(|&c| c != 1) {
            return Err(format!("m={m}: elementary intervals {nx}x{ny} unevenly filled"));
        }
    }
    Ok(())
}

/// Φ(Φ⁻¹(u)) = u to 1e-9 (relative in the tails) for a random `u`.
pub fn quantile_round_trip(u: f64) -> Result<(), String> {
    let x = norm_ppf(u).map_err(|e| e.to_string())?;
    let back = if u < 0.5 { norm_cdf(x) } else { 1.0 - norm_sf(x) };
    let tol = 1e-9 * u.min(1.0 - u).max(1e-300) + 1e-16;
    if (back - u).abs() > tol {
        return Err(format!("{u} -> {x} -> {back}"));
    }
    Ok(())
}

/// Same seed gives the same Gaussian points; another seed does not.
pub fn gaussian_mapping_is_deterministic() -> Result<(), String> {
    let a = to_gaussian(&scrambled_sobol(256, 8, 3).unwrap()).unwrap();
    let b = to_gaussian(&scrambled_sobol(256, 8, 3).unwrap()).unwrap();
    let c = to_gaussian(&scrambled_sobol(256, 8, 4).unwrap()).unwrap();
    if a.values != b.values || a.values == c.values {
        return Err("scrambled Gaussian points are not a function of the seed".into());
    }
    Ok(())
}
