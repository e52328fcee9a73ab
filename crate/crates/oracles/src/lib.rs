//! Reference implementations used only by tests. Nothing here shares code
//! with `casqmc-core`: normal functions come from `statrs`, integrals from
//! adaptive Gauss–Kronrod, roots from plain bisection.

use statrs::distribution::{Continuous, ContinuousCDF, Normal};

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).unwrap()
}

pub fn phi(x: f64) -> f64 {
    std_normal().pdf(x)
}

pub fn cdf(x: f64) -> f64 {
    std_normal().cdf(x)
}

pub fn sf(x: f64) -> f64 {
    std_normal().sf(x)
}

/// Normal quantile, polished by Newton steps on the statrs CDF (or SF in
/// the upper half, to keep relative accuracy in both tails).
pub fn ppf(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0);
    let mut x = std_normal().inverse_cdf(p);
    for _ in 0..4 {
        let step = if p < 0.5 { (cdf(x) - p) / phi(x) } else { -(sf(x) - (1.0 - p)) / phi(x) };
        if !step.is_finite() {
            break;
        }
        x -= step;
    }
    x
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive G7K15 quadrature of `f` on a finite `[a, b]` to absolute
/// tolerance `abs_tol` or relative tolerance `rel_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    assert!(a.is_finite() && b.is_finite());
    if a == b {
        return 0.0;
    }
    let mut stack = vec![(a, b, gk15(&f, a, b))];
    let mut total = 0.0;
    let mut guard = 0;
    let whole = stack[0].2 .0.abs();
    while let Some((lo, hi, (val, err))) = stack.pop() {
        guard += 1;
        let tol = (abs_tol.max(rel_tol * whole)) * (hi - lo) / (b - a);
        if err <= tol || guard > 200_000 || hi - lo < 1e-12 * (b - a) {
            total += val;
            continue;
        }
        let mid = 0.5 * (lo + hi);
        stack.push((lo, mid, gk15(&f, lo, mid)));
        stack.push((mid, hi, gk15(&f, mid, hi)));
    }
    total
}

/// ∫_lo^hi g(z) φ(z) dz; infinite limits are truncated at ±`cut`.
pub fn gaussian_expectation<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64, cut: f64) -> f64 {
    let a = lo.max(-cut);
    let b = hi.min(cut);
    if b <= a {
        return 0.0;
    }
    // split at 0 and ±5 so peaks are resolved
    let mut knots = vec![a];
    for k in [-5.0, 0.0, 5.0] {
        if k > a && k < b {
            knots.push(k);
        }
    }
    knots.push(b);
    knots.windows(2).map(|w| integrate(|z| g(z) * phi(z), w[0], w[1], 1e-300, 1e-12)).sum()
}

/// Bisection root of an increasing function on `[lo, hi]`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let flo = f(lo);
    assert!(flo <= 0.0 && f(hi) >= 0.0, "root not bracketed");
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol {
            return mid;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Black–Scholes European call.
pub fn black_scholes_call(s0: f64, k: f64, r: f64, sigma: f64, t: f64) -> f64 {
    let sq = sigma * t.sqrt();
    let d1 = ((s0 / k).ln() + (r + 0.5 * sigma * sigma) * t) / sq;
    let d2 = d1 - sq;
    s0 * cdf(d1) - k * (-r * t).exp() * cdf(d2)
}

/// Asymptotic Kolmogorov–Smirnov p-value for uniformity on (0, 1).
pub fn ks_uniform_pvalue(samples: &[f64]) -> f64 {
    let mut x = samples.to_vec();
    x.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = x.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &v) in x.iter().enumerate() {
        d = d.max((i as f64 + 1.0) / n - v).max(v - i as f64 / n);
    }
    let lam = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    let mut p = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = 2.0 * (-1.0f64).powi(j - 1) * (-2.0 * jf * jf * lam * lam).exp();
        p += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    p.clamp(0.0, 1.0)
}

/// 0.9 · min(sd, IQR/1.34) · n^(−1/5); `sorted` must be ascending.
pub fn silverman_bandwidth(sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / n;
    let sd = (sorted.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt();
    let q = |p: f64| sorted[((n - 1.0) * p) as usize];
    let iqr = q(0.75) - q(0.25);
    0.9 * sd.min(iqr / 1.34) * n.powf(-0.2)
}

/// Gaussian KDE with Silverman's bandwidth. Returns (estimate, standard
/// error) at each query point.
pub fn gaussian_kde(samples: &[f64], at: &[f64]) -> Vec<(f64, f64)> {
    let n = samples.len() as f64;
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = silverman_bandwidth(&sorted);
    at.iter()
        .map(|&x| {
            let (mut s1, mut s2) = (0.0, 0.0);
            let lo = sorted.partition_point(|&v| v < x - 10.0 * h);
            let hi = sorted.partition_point(|&v| v <= x + 10.0 * h);
            for &v in &sorted[lo..hi] {
                let k = phi((x - v) / h) / h;
                s1 += k;
                s2 += k * k;
            }
            let m = s1 / n;
            let var = (s2 / n - m * m) / n;
            (m, var.max(0.0).sqrt())
        })
        .collect()
}

/// Orthonormal basis of the complement of unit `u1`, by Gram–Schmidt on
/// `u1, e_1, …, e_d`.
pub fn complement_basis(u1: &[f64]) -> Vec<Vec<f64>> {
    let d = u1.len();
    let mut basis: Vec<Vec<f64>> = vec![u1.to_vec()];
    for i in 0..d {
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let p: f64 = b.iter().zip(&v).map(|(x, y)| x * y).sum();
                for (vk, bk) in v.iter_mut().zip(b) {
                    *vk -= p * bk;
                }
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 && basis.len() < d {
            basis.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    basis.remove(0);
    basis
}

fn quad_form(c: &[Vec<f64>], v: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, row) in c.iter().enumerate() {
        acc += v[i] * row.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    }
    acc
}

/// Maximizer of vᵀCv over unit v ⟂ u1 by repeated grid search along great
/// circles, zooming in on the best angle; stops after `budget` quotient
/// evaluations. Returns the maximizer in the original coordinates.
pub fn constrained_rayleigh_max(c: &[Vec<f64>], u1: &[f64], budget: usize) -> Vec<f64> {
    let basis = complement_basis(u1);
    let k = basis.len();
    let d = u1.len();
    let lift = |x: &[f64]| -> Vec<f64> {
        let mut v = vec![0.0; d];
        for (xi, b) in x.iter().zip(&basis) {
            for (vk, bk) in v.iter_mut().zip(b) {
                *vk += xi * bk;
            }
        }
        v
    };
    let q = |x: &[f64]| quad_form(c, &lift(x));
    let mut evals = 0usize;
    let mut x = vec![0.0; k];
    let mut best = f64::NEG_INFINITY;
    for i in 0..k {
        let mut e = vec![0.0; k];
        e[i] = 1.0;
        let v = q(&e);
        evals += 1;
        if v > best {
            best = v;
            x = e;
        }
    }
    if k == 1 {
        return lift(&x);
    }
    let grid = 24;
    'outer: loop {
        for i in 0..k {
            let mut p = vec![0.0; k];
            p[i] = 1.0;
            let dotp = x[i];
            for (pk, xk) in p.iter_mut().zip(&x) {
                *pk -= dotp * xk;
            }
            let n = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            if n < 1e-12 {
                continue;
            }
            p.iter_mut().for_each(|v| *v /= n);
            let at = |t: f64| -> Vec<f64> { x.iter().zip(&p).map(|(a, b)| a * t.cos() + b * t.sin()).collect() };
            let (mut center, mut half) = (0.0, std::f64::consts::FRAC_PI_2);
            for _ in 0..6 {
                let mut bt = center;
                let mut bv = q(&at(center));
                for g in 0..=grid {
                    let t = center - half + 2.0 * half * g as f64 / grid as f64;
                    let v = q(&at(t));
                    if v > bv {
                        bv = v;
                        bt = t;
                    }
                }
                evals += grid + 2;
                center = bt;
                half *= 4.0 / grid as f64;
            }
            x = at(center);
            if evals >= budget {
                break 'outer;
            }
        }
    }
    lift(&x)
}

/// Angle between two lines, in radians.
pub fn line_angle(a: &[f64], b: &[f64]) -> f64 {
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let c: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / (na * nb);
    c.abs().min(1.0).acos()
}

/// Small SplitMix64 generator for drawing oracle test inputs.
#[derive(Clone, Debug)]
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) / 9_007_199_254_740_992.0
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Box–Muller.
    pub fn normal(&mut self) -> f64 {
        let u = self.uniform();
        let v = self.uniform();
        (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
    }

    pub fn normals(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.normal()).collect()
    }
}
