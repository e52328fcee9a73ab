//! Dense real linear algebra for the small (d ≤ 128) matrices used here.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::math::{self, sqrt};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid(format!("expected {} entries, got {}", rows * cols, data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid("ragged rows"));
        }
        Ok(Self { rows: rows.len(), cols, data: rows.iter().flat_map(|r| r.iter().copied()).collect() })
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[f64]) {
        assert_eq!(v.len(), self.rows);
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    /// Columns `from..` as a new matrix.
    pub fn columns_from(&self, from: usize) -> Matrix {
        Matrix::from_fn(self.rows, self.cols - from, |i, j| self[(i, j + from)])
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self * x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        self.mul_vec_into(x, &mut out);
        out
    }

    pub fn mul_vec_into(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.cols);
        assert_eq!(out.len(), self.rows);
        for (i, o) in out.iter_mut().enumerate() {
            *o = math::dot(self.row(i), x);
        }
    }

    /// `self[:, from..] * x` with `x.len() == cols - from`.
    pub fn mul_vec_tail_into(&self, from: usize, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len() + from, self.cols);
        for (i, o) in out.iter_mut().enumerate() {
            *o = math::dot(&self.row(i)[from..], x);
        }
    }

    /// `selfᵀ * x`.
    pub fn tr_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * xi;
            }
        }
        out
    }

    pub fn scale(&self, c: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        math::max_abs(&self.data)
    }

    /// max |self - other|
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.sub(other).max_abs()
    }

    /// max |AᵀA − I|
    pub fn orthogonality_defect(&self) -> f64 {
        let g = self.transpose().matmul(self);
        g.max_abs_diff(&Matrix::identity(self.cols))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == 0.0))
    }

    /// Block-diagonal matrix `diag(a, b)`.
    pub fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
        Matrix::from_fn(a.rows + b.rows, a.cols + b.cols, |i, j| {
            if i < a.rows && j < a.cols {
                a[(i, j)]
            } else if i >= a.rows && j >= a.cols {
                b[(i - a.rows, j - a.cols)]
            } else {
                0.0
            }
        })
    }

    /// Kronecker product `a ⊗ b`.
    pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
        Matrix::from_fn(a.rows * b.rows, a.cols * b.cols, |i, j| {
            a[(i / b.rows, j / b.cols)] * b[(i % b.rows, j % b.cols)]
        })
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// A square matrix checked to be symmetric to 1e-12 relative.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix(Matrix);

impl SymmetricMatrix {
    pub const TOLERANCE: f64 = 1e-12;

    /// Validates symmetry and stores the exactly symmetrized matrix.
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::invalid("symmetric matrix must be square"));
        }
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        let mut asym = 0.0_f64;
        for i in 0..m.rows {
            for j in 0..i {
                asym = asym.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        if asym > Self::TOLERANCE * scale {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        let n = m.rows;
        Ok(Self(Matrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))))
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        Self::new(Matrix::from_fn(n, n, f))
    }

    pub fn order(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// Principal submatrix on `idx`.
    pub fn principal(&self, idx: &[usize]) -> SymmetricMatrix {
        SymmetricMatrix(Matrix::from_fn(idx.len(), idx.len(), |i, j| self.0[(idx[i], idx[j])]))
    }

    /// `Vᵀ S V`, symmetrized.
    pub fn congruence(&self, v: &Matrix) -> SymmetricMatrix {
        let m = v.transpose().matmul(&self.0).matmul(v);
        let n = m.rows;
        SymmetricMatrix(Matrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)])))
    }

    pub fn scale(&self, c: f64) -> SymmetricMatrix {
        SymmetricMatrix(self.0.scale(c))
    }

    pub fn trace(&self) -> f64 {
        (0..self.order()).map(|i| self.0[(i, i)]).sum()
    }
}

impl Index<(usize, usize)> for SymmetricMatrix {
    type Output = f64;
    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

/// Eigenvalues in descending order with matching eigenvector columns.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl SpectralDecomposition {
    /// `Q Λ Qᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.values.len();
        let ql = Matrix::from_fn(n, n, |i, j| self.vectors[(i, j)] * self.values[j]);
        ql.matmul(&self.vectors.transpose())
    }
}

/// Flips `v` so its largest-magnitude entry is positive (lowest index wins
/// ties).
pub fn canonical_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|&x| x < 0.0) {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius norm falls below 1e-15 of the
/// matrix norm (or 100 sweeps). Eigenvalues are sorted descending with a
/// stable sort; each eigenvector follows [`canonical_sign`].
pub fn sym_eig(s: &SymmetricMatrix) -> SpectralDecomposition {
    let n = s.order();
    let mut a = s.matrix().clone();
    let mut v = Matrix::identity(n);
    let fro = sqrt(a.data.iter().map(|x| x * x).sum::<f64>());
    let target = 1e-15 * fro;

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += 2.0 * a[(p, q)] * a[(p, q)];
            }
        }
        if sqrt(off) <= target || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / sqrt(1.0 + t * t);
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap_or(core::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let mut q = v.column(src);
        canonical_sign(&mut q);
        vectors.set_column(col, &q);
    }
    SpectralDecomposition { values, vectors }
}

/// Lower Cholesky factor with positive diagonal.
pub fn cholesky(s: &SymmetricMatrix) -> Result<Matrix> {
    let n = s.order();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = s[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { row: j, pivot: d });
        }
        let djj = sqrt(d);
        l[(j, j)] = djj;
        for i in j + 1..n {
            let mut x = s[(i, j)];
            for k in 0..j {
                x -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = x / djj;
        }
    }
    Ok(l)
}

/// Square root of `s` whose first column is supported on the first row only.
///
/// This is the Cholesky factor taken in reversed variable order, so the first
/// Gaussian drives only the first variable.
pub fn reverse_cholesky(s: &SymmetricMatrix) -> Result<Matrix> {
    let n = s.order();
    let rev = SymmetricMatrix::from_fn(n, |i, j| s[(n - 1 - i, n - 1 - j)])?;
    let l = cholesky(&rev)?;
    Ok(Matrix::from_fn(n, n, |i, j| l[(n - 1 - i, n - 1 - j)]))
}

/// Solves `L x = b` for lower-triangular `L`.
pub fn solve_lower(l: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = l.rows();
    let mut x = vec![0.0; n];
    for i in 0..n {
        let mut acc = b[i];
        for k in 0..i {
            acc -= l[(i, k)] * x[k];
        }
        if l[(i, i)] == 0.0 {
            return Err(Error::invalid("singular triangular system"));
        }
        x[i] = acc / l[(i, i)];
    }
    Ok(x)
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    if a.is_lower_triangular() {
        return solve_lower(a, b);
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut x = b.to_vec();
    for c in 0..n {
        let mut piv = c;
        for r in c + 1..n {
            if m[(r, c)].abs() > m[(piv, c)].abs() {
                piv = r;
            }
        }
        if m[(piv, c)] == 0.0 {
            return Err(Error::invalid("singular system"));
        }
        if piv != c {
            for k in 0..n {
                let t = m[(c, k)];
                m[(c, k)] = m[(piv, k)];
                m[(piv, k)] = t;
            }
            x.swap(c, piv);
        }
        for r in c + 1..n {
            let f = m[(r, c)] / m[(c, c)];
            if f == 0.0 {
                continue;
            }
            for k in c..n {
                m[(r, k)] -= f * m[(c, k)];
            }
            x[r] -= f * x[c];
        }
    }
    for c in (0..n).rev() {
        let mut acc = x[c];
        for k in c + 1..n {
            acc -= m[(c, k)] * x[k];
        }
        x[c] = acc / m[(c, c)];
    }
    Ok(x)
}

/// How a covariance square root was built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathKind {
    Standard,
    Pca,
    Cholesky,
    /// Another construction post-multiplied by an orthogonal matrix.
    Rotated,
}

impl FromStr for PathKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" | "std" => Ok(PathKind::Standard),
            "pca" => Ok(PathKind::Pca),
            "cholesky" | "chol" => Ok(PathKind::Cholesky),
            "rotated" => Ok(PathKind::Rotated),
            other => Err(Error::invalid(format!("unknown construction kind `{other}`"))),
        }
    }
}

/// A square root `R` of a covariance `Σ` (R Rᵀ = Σ).
#[derive(Clone, Debug, PartialEq)]
pub struct PathConstruction {
    pub r: Matrix,
    pub kind: PathKind,
    pub sigma: SymmetricMatrix,
}

impl PathConstruction {
    pub fn dim(&self) -> usize {
        self.r.rows()
    }

    /// max |R Rᵀ − Σ| / max |Σ|.
    pub fn factorization_residual(&self) -> f64 {
        let rrt = self.r.matmul(&self.r.transpose());
        rrt.max_abs_diff(self.sigma.matrix()) / self.sigma.matrix().max_abs().max(f64::MIN_POSITIVE)
    }

    /// `R U` for orthogonal `U`.
    pub fn rotated(&self, u: &Matrix) -> PathConstruction {
        PathConstruction { r: self.r.matmul(u), kind: PathKind::Rotated, sigma: self.sigma.clone() }
    }

    pub fn first_column(&self) -> Vec<f64> {
        self.r.column(0)
    }

    /// Applies `R⁻¹` (triangular solve when `R` is lower triangular).
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        solve(&self.r, b)
    }

    /// Cholesky construction for an arbitrary positive-definite covariance.
    pub fn cholesky(sigma: SymmetricMatrix) -> Result<Self> {
        Ok(Self { r: cholesky(&sigma)?, kind: PathKind::Cholesky, sigma })
    }

    /// Eigen (PCA) construction: columns are √λ-scaled eigenvectors, the first
    /// one flipped to be componentwise nonnegative when it is sign-definite.
    pub fn pca(sigma: SymmetricMatrix) -> Self {
        let eig = sym_eig(&sigma);
        let n = sigma.order();
        let mut r = Matrix::from_fn(n, n, |i, j| eig.vectors[(i, j)] * sqrt(eig.values[j].max(0.0)));
        if n > 0 && (0..n).map(|i| r[(i, 0)]).sum::<f64>() < 0.0 {
            for i in 0..n {
                r[(i, 0)] = -r[(i, 0)];
            }
        }
        Self { r, kind: PathKind::Pca, sigma }
    }
}

/// Discrete Brownian covariance Σ_ij = Δt·min(i, j) (1-based).
pub fn brownian_covariance(d: usize, dt: f64) -> SymmetricMatrix {
    SymmetricMatrix(Matrix::from_fn(d, d, |i, j| dt * (i.min(j) + 1) as f64))
}

/// Standard (forward-increment) or PCA construction of discrete Brownian
/// motion on `d` steps of size `dt`.
pub fn bm_construction(d: usize, dt: f64, kind: PathKind) -> Result<PathConstruction> {
    if d == 0 || !(dt > 0.0) {
        return Err(Error::invalid("bm_construction needs d >= 1 and dt > 0"));
    }
    let sigma = brownian_covariance(d, dt);
    match kind {
        PathKind::Standard | PathKind::Cholesky => {
            let h = sqrt(dt);
            Ok(PathConstruction {
                r: Matrix::from_fn(d, d, |i, j| if i >= j { h } else { 0.0 }),
                kind,
                sigma,
            })
        }
        PathKind::Pca => Ok(PathConstruction::pca(sigma)),
        PathKind::Rotated => Err(Error::invalid("a rotated construction needs an explicit rotation")),
    }
}

/// Columns 2..d of the Householder reflector H = I − 2wwᵀ with
/// w = (u1 − e1)/‖u1 − e1‖, which maps e1 to u1. When u1 ≈ e1 the reflector
/// is taken to be the identity.
pub fn householder_complement(u1: &[f64]) -> Result<Matrix> {
    let d = u1.len();
    if d == 0 {
        return Err(Error::invalid("empty vector"));
    }
    let nrm = math::norm2(u1);
    if (nrm - 1.0).abs() > 1e-10 {
        return Err(Error::invalid(format!("u1 must be a unit vector (norm {nrm})")));
    }
    let mut w = u1.to_vec();
    w[0] -= 1.0;
    let wn = math::norm2(&w);
    if wn < 1e-12 {
        return Ok(Matrix::identity(d).columns_from(1));
    }
    for x in &mut w {
        *x /= wn;
    }
    Ok(Matrix::from_fn(d, d - 1, |i, j| {
        let j = j + 1;
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - 2.0 * w[i] * w[j]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_eigen() {
        let s = SymmetricMatrix::new(Matrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap()).unwrap();
        let e = sym_eig(&s);
        assert!((e.values[0] - 3.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((e.vectors[(0, 0)] - h).abs() < 1e-14 && (e.vectors[(1, 0)] - h).abs() < 1e-14);
    }

    #[test]
    fn identity_eigen_is_identity() {
        let e = sym_eig(&SymmetricMatrix::new(Matrix::identity(5)).unwrap());
        assert_eq!(e.values, vec![1.0; 5]);
        assert_eq!(e.vectors, Matrix::identity(5));
    }

    #[test]
    fn asymmetric_rejected() {
        let m = Matrix::from_rows(&[&[1.0, 2.0], &[2.1, 1.0]]).unwrap();
        assert!(matches!(SymmetricMatrix::new(m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn cholesky_small() {
        let s = SymmetricMatrix::new(Matrix::from_rows(&[&[4.0, 2.0], &[2.0, 5.0]]).unwrap()).unwrap();
        let l = cholesky(&s).unwrap();
        assert_eq!(l, Matrix::from_rows(&[&[2.0, 0.0], &[1.0, 2.0]]).unwrap());
        assert_eq!(cholesky(&SymmetricMatrix::new(Matrix::identity(3)).unwrap()).unwrap(), Matrix::identity(3));
        let bad = SymmetricMatrix::new(Matrix::from_rows(&[&[1.0, 2.0], &[2.0, 1.0]]).unwrap()).unwrap();
        assert!(matches!(cholesky(&bad), Err(Error::NotPositiveDefinite { row: 1, .. })));
    }

    #[test]
    fn reverse_cholesky_first_column() {
        let s = SymmetricMatrix::from_fn(4, |i, j| 0.5f64.powi((i as i32 - j as i32).abs())).unwrap();
        let r = reverse_cholesky(&s).unwrap();
        assert!(r.matmul(&r.transpose()).max_abs_diff(s.matrix()) < 1e-14);
        assert!(r[(0, 0)] > 0.0);
        for i in 1..4 {
            assert_eq!(r[(i, 0)], 0.0);
        }
    }

    #[test]
    fn one_step_constructions() {
        for kind in [PathKind::Standard, PathKind::Pca] {
            let c = bm_construction(1, 0.25, kind).unwrap();
            assert!((c.r[(0, 0)] - 0.5).abs() < 1e-15);
        }
        assert!(bm_construction(4, 0.1, PathKind::Rotated).is_err());
        assert!("bridge".parse::<PathKind>().is_err());
    }

    #[test]
    fn householder_degenerate_and_swap() {
        let v = householder_complement(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(v, Matrix::identity(4).columns_from(1));
        let v = householder_complement(&[0.0, 1.0]).unwrap();
        assert!((v[(0, 0)] - 1.0).abs() < 1e-15 && v[(1, 0)].abs() < 1e-15);
        assert!(householder_complement(&[0.5, 0.5]).is_err());
    }

    #[test]
    fn general_solve() {
        let a = Matrix::from_rows(&[&[0.0, 2.0, 1.0], &[1.0, 1.0, 0.0], &[3.0, 0.0, 1.0]]).unwrap();
        let x = [1.0, -2.0, 0.5];
        let b = a.mul_vec(&x);
        let got = solve(&a, &b).unwrap();
        for i in 0..3 {
            assert!((got[i] - x[i]).abs() < 1e-14);
        }
    }
}
