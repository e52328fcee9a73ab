//! Sobol' point sets with nested uniform (Owen) scrambling.
//!
//! Direction numbers are read from the whitespace-separated table format
//! `d s a m_1 .. m_s` (one dimension per line, first dimension implicit); a
//! 1024-dimension table is bundled. Points are produced in natural index
//! order. Scrambling permutes dyadic intervals down to 53 bits, with every
//! swap bit drawn from a keyed hash of (seed, dimension, node path) so no
//! permutation tree is stored.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::rng::{self, hash};

const BITS: usize = 32;
const OUT_BITS: u32 = 53;

/// Smallest value a point coordinate can take; zero maps here.
pub const INTERIOR_EPS: f64 = 1.0 / 18_014_398_509_481_984.0; // 2^-54

static BUNDLED_TABLE: &str = include_str!("../data/joe_kuo_d1024.txt");

/// Generator-matrix columns for each supported dimension.
///
/// `columns[j][k]` is the 32-bit direction number v_{k+1} of dimension j,
/// MSB-aligned. Each generator matrix is upper triangular with unit
/// diagonal because every initial m_k is odd and below 2^k.
#[derive(Clone, Debug)]
pub struct DirectionNumbers {
    columns: Vec<[u32; BITS]>,
}

impl DirectionNumbers {
    /// Parses a table in the published `d s a m_i` format, keeping at most
    /// `max_dim` dimensions (dimension 1 is the implicit van der Corput
    /// column).
    pub fn parse(text: &str, max_dim: usize) -> Result<Self> {
        let mut columns = Vec::with_capacity(max_dim.min(4096));
        if max_dim == 0 {
            return Ok(Self { columns });
        }
        let mut first = [0u32; BITS];
        for (k, v) in first.iter_mut().enumerate() {
            *v = 1u32 << (BITS - 1 - k);
        }
        columns.push(first);

        for (lineno, line) in text.lines().enumerate() {
            if columns.len() >= max_dim {
                break;
            }
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields[0].parse::<u64>().is_err() {
                // Header row.
                continue;
            }
            let err = |reason: &str| Error::DirectionTable { line: lineno + 1, reason: reason.into() };
            let nums: Vec<u64> = fields
                .iter()
                .map(|f| f.parse::<u64>())
                .collect::<core::result::Result<_, _>>()
                .map_err(|_| err("non-integer field"))?;
            if nums.len() < 3 {
                return Err(err("expected at least `d s a`"));
            }
            let degree = nums[1] as usize;
            let poly = nums[2];
            if degree == 0 || degree > BITS || nums.len() != 3 + degree {
                return Err(err("degree does not match the number of initial direction numbers"));
            }
            let m = &nums[3..];
            let mut v = [0u32; BITS];
            for k in 0..degree {
                let mk = m[k];
                if mk % 2 == 0 || mk >= (1u64 << (k + 1)) {
                    return Err(err("initial direction numbers must be odd and below 2^k"));
                }
                v[k] = (mk as u32) << (BITS - 1 - k);
            }
            for k in degree..BITS {
                let mut x = v[k - degree] ^ (v[k - degree] >> degree);
                for i in 1..degree {
                    if (poly >> (degree - 1 - i)) & 1 == 1 {
                        x ^= v[k - i];
                    }
                }
                v[k] = x;
            }
            columns.push(v);
        }
        Ok(Self { columns })
    }

    /// The bundled table, truncated to `max_dim` dimensions.
    pub fn bundled(max_dim: usize) -> Result<Self> {
        let table = Self::parse(BUNDLED_TABLE, max_dim)?;
        if table.max_dim() < max_dim {
            return Err(Error::UnsupportedDimension { requested: max_dim, available: table.max_dim() });
        }
        Ok(table)
    }

    /// Number of dimensions in the bundled table.
    pub fn bundled_max_dim() -> usize {
        1 + BUNDLED_TABLE.lines().filter(|l| l.trim().starts_with(|c: char| c.is_ascii_digit())).count()
    }

    pub fn max_dim(&self) -> usize {
        self.columns.len()
    }

    /// Column k of the generator matrix for `dim`, as an MSB-aligned word.
    pub fn column(&self, dim: usize, k: usize) -> u32 {
        self.columns[dim][k]
    }
}

/// Raw 32-bit digits of Sobol' point `index` in dimension `dim`.
#[inline]
fn sobol_digits(columns: &[u32; BITS], index: u32) -> u32 {
    let mut x = 0u32;
    let mut i = index;
    let mut k = 0;
    while i != 0 {
        if i & 1 == 1 {
            x ^= columns[k];
        }
        i >>= 1;
        k += 1;
    }
    x
}

/// Nested uniform scramble of 32 input digits, extended to 53 output bits.
///
/// Output bit k is input bit k flipped by a hash of the k leading input bits.
/// Below the 32nd digit the input is all zeros, so the remaining 21 bits are
/// one hash of the full 32-bit path.
#[inline]
pub(crate) fn owen_scramble(digits: u32, key: u64) -> u64 {
    let mut out = 0u64;
    for k in 0..BITS {
        let prefix = if k == 0 { 0 } else { (digits >> (BITS - k)) as u64 };
        let node = ((k as u64) << 32) | prefix;
        let flip = hash(key, node) & 1;
        let bit = ((digits >> (BITS - 1 - k)) & 1) as u64;
        out |= (bit ^ flip) << (OUT_BITS as usize - 1 - k);
    }
    let tail_bits = OUT_BITS as usize - BITS;
    let tail = hash(key, (32u64 << 32) | digits as u64 | (1u64 << 40)) & ((1u64 << tail_bits) - 1);
    out | tail
}

#[inline]
fn scramble_key(seed: u64, dim: usize) -> u64 {
    rng::derive(seed, rng::stream::SCRAMBLE, dim as u64)
}

#[inline]
fn to_unit_53(bits: u64) -> f64 {
    let u = bits as f64 * (1.0 / 9_007_199_254_740_992.0);
    u.max(INTERIOR_EPS)
}

#[inline]
fn to_unit_32(digits: u32) -> f64 {
    (digits as f64 * (1.0 / 4_294_967_296.0)).max(INTERIOR_EPS)
}

/// An n×s array of points in (0,1)^s, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct LowDiscrepancySet {
    pub n: usize,
    pub s: usize,
    pub values: Vec<f64>,
    pub scrambled: bool,
    pub seed: u64,
}

impl LowDiscrepancySet {
    pub fn point(&self, i: usize) -> &[f64] {
        &self.values[i * self.s..(i + 1) * self.s]
    }

    /// Column `j` (one-dimensional projection).
    pub fn projection(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.values[i * self.s + j]).collect()
    }
}

/// Where a [`GaussianMatrix`] came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Rqmc { seed: u64, scrambled: bool },
    Pseudorandom { seed: u64 },
}

/// n×s standard normal samples, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianMatrix {
    pub n: usize,
    pub s: usize,
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

impl GaussianMatrix {
    pub fn point(&self, i: usize) -> &[f64] {
        &self.values[i * self.s..(i + 1) * self.s]
    }
}

/// A Sobol' generator over a fixed number of dimensions.
///
/// Holds only the direction-number columns; points are computed directly
/// from their index, so any subset of points can be produced in any order.
#[derive(Clone, Debug)]
pub struct Sobol {
    columns: Vec<[u32; BITS]>,
}

impl Sobol {
    /// Generator over the first `s` dimensions of the bundled table.
    pub fn new(s: usize) -> Result<Self> {
        Self::with_directions(&DirectionNumbers::bundled(s)?, s)
    }

    pub fn with_directions(dirs: &DirectionNumbers, s: usize) -> Result<Self> {
        if s > dirs.max_dim() {
            return Err(Error::UnsupportedDimension { requested: s, available: dirs.max_dim() });
        }
        Ok(Self { columns: dirs.columns[..s].to_vec() })
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    /// Unscrambled 32-bit digits of point `index` in dimension `dim`.
    pub fn digits(&self, index: u32, dim: usize) -> u32 {
        sobol_digits(&self.columns[dim], index)
    }

    /// Writes point `index` of the scrambled sequence into `out`.
    pub fn scrambled_point_into(&self, index: u32, keys: &ScrambleKeys, out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate() {
            let d = sobol_digits(&self.columns[j], index);
            *o = to_unit_53(owen_scramble(d, keys.keys[j]));
        }
    }

    /// Writes the scrambled point mapped through Φ⁻¹.
    pub fn gaussian_point_into(&self, index: u32, keys: &ScrambleKeys, out: &mut [f64]) {
        self.scrambled_point_into(index, keys, out);
        for o in out.iter_mut() {
            *o = math::ppf_unchecked(*o);
        }
    }
}

/// Per-dimension scramble keys derived from one seed.
#[derive(Clone, Debug)]
pub struct ScrambleKeys {
    keys: Vec<u64>,
}

impl ScrambleKeys {
    pub fn new(seed: u64, s: usize) -> Self {
        Self { keys: (0..s).map(|j| scramble_key(seed, j)).collect() }
    }
}

/// The first `n` points of the s-dimensional Sobol' sequence, unscrambled,
/// in index order. The origin is stored as [`INTERIOR_EPS`].
pub fn sobol_points(n: usize, s: usize) -> Result<LowDiscrepancySet> {
    if n == 0 || s == 0 {
        return Err(Error::invalid("sobol_points needs n >= 1 and s >= 1"));
    }
    if n as u64 > 1u64 << 32 {
        return Err(Error::invalid("at most 2^32 Sobol' points"));
    }
    let gen = Sobol::new(s)?;
    let mut values = Vec::with_capacity(n * s);
    for i in 0..n {
        for j in 0..s {
            values.push(to_unit_32(gen.digits(i as u32, j)));
        }
    }
    Ok(LowDiscrepancySet { n, s, values, scrambled: false, seed: 0 })
}

/// Nested uniform scrambling of an unscrambled set, independently per
/// dimension, to 53 bits.
///
/// # Panics
///
/// Panics if `points` is already scrambled.
pub fn scramble(points: &LowDiscrepancySet, seed: u64) -> LowDiscrepancySet {
    assert!(!points.scrambled, "scramble expects an unscrambled point set");
    let keys = ScrambleKeys::new(seed, points.s);
    let values = points
        .values
        .iter()
        .enumerate()
        .map(|(idx, &v)| {
            // Unscrambled values are exact multiples of 2^-32 (or the interior
            // epsilon standing in for zero).
            let digits = (v * 4_294_967_296.0) as u32;
            to_unit_53(owen_scramble(digits, keys.keys[idx % points.s]))
        })
        .collect();
    LowDiscrepancySet { n: points.n, s: points.s, values, scrambled: true, seed }
}

/// Scrambled Sobol' points; `scramble(sobol_points(n, s), seed)`.
pub fn scrambled_sobol(n: usize, s: usize, seed: u64) -> Result<LowDiscrepancySet> {
    Ok(scramble(&sobol_points(n, s)?, seed))
}

/// Applies Φ⁻¹ componentwise.
pub fn to_gaussian(points: &LowDiscrepancySet) -> Result<GaussianMatrix> {
    let values = points.values.iter().map(|&u| math::norm_ppf(u)).collect::<Result<Vec<_>>>()?;
    Ok(GaussianMatrix {
        n: points.n,
        s: points.s,
        values,
        provenance: Provenance::Rqmc { seed: points.seed, scrambled: points.scrambled },
    })
}

/// Plain Monte Carlo normals from the counter-based generator.
pub fn pseudo_gaussian(n: usize, s: usize, seed: u64) -> GaussianMatrix {
    let mut values = Vec::with_capacity(n * s);
    for i in 0..n {
        for j in 0..s {
            values.push(math::ppf_unchecked(rng::uniform(seed, i as u64, j as u64)));
        }
    }
    GaussianMatrix { n, s, values, provenance: Provenance::Pseudorandom { seed } }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn van_der_corput(mut i: u32) -> f64 {
        let mut x = 0.0;
        let mut base = 0.5;
        while i != 0 {
            if i & 1 == 1 {
                x += base;
            }
            base *= 0.5;
            i >>= 1;
        }
        x
    }

    #[test]
    fn first_dimension_is_van_der_corput() {
        let p = sobol_points(64, 1).unwrap();
        for i in 1..64 {
            assert_eq!(p.values[i], van_der_corput(i as u32));
        }
    }

    #[test]
    fn four_points_one_per_quarter() {
        let p = sobol_points(4, 1).unwrap();
        let mut cells: Vec<usize> = p.values.iter().map(|&u| (u * 4.0) as usize).collect();
        cells.sort_unstable();
        assert_eq!(cells, [0, 1, 2, 3]);
    }

    #[test]
    fn first_point_is_origin() {
        let gen = Sobol::new(3).unwrap();
        for j in 0..3 {
            assert_eq!(gen.digits(0, j), 0);
        }
        let p = sobol_points(1, 3).unwrap();
        assert!(p.values.iter().all(|&v| v == INTERIOR_EPS));
    }

    #[test]
    fn known_second_dimension() {
        // Dimension 2 (d=2, s=1, a=0, m=1), natural order: 0, 1/2, 3/4, 1/4, 5/8, 1/8, 3/8, 7/8.
        let p = sobol_points(8, 2).unwrap();
        let got: Vec<f64> = (1..8).map(|i| p.values[i * 2 + 1]).collect();
        assert_eq!(got, [0.5, 0.75, 0.25, 0.625, 0.125, 0.375, 0.875]);
    }

    #[test]
    fn generator_matrices_upper_unit_triangular() {
        let dirs = DirectionNumbers::bundled(1024).unwrap();
        for j in 0..dirs.max_dim() {
            for k in 0..BITS {
                let v = dirs.column(j, k);
                // lowest set bit of column k sits on the diagonal digit k
                assert_eq!(v.trailing_zeros() as usize, BITS - 1 - k, "dim {j} col {k}");
            }
        }
    }

    #[test]
    fn dimension_limit() {
        assert_eq!(DirectionNumbers::bundled_max_dim(), 1024);
        assert!(matches!(Sobol::new(1025), Err(Error::UnsupportedDimension { .. })));
    }

    #[test]
    fn scramble_is_deterministic_and_seed_dependent() {
        let p = sobol_points(32, 4).unwrap();
        let a = scramble(&p, 42);
        let b = scramble(&p, 42);
        let c = scramble(&p, 43);
        assert_eq!(a, b);
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn streaming_matches_batch() {
        let set = scrambled_sobol(16, 5, 7).unwrap();
        let gen = Sobol::new(5).unwrap();
        let keys = ScrambleKeys::new(7, 5);
        let mut buf = [0.0; 5];
        for i in 0..16 {
            gen.scrambled_point_into(i as u32, &keys, &mut buf);
            assert_eq!(&buf[..], set.point(i));
        }
    }

    #[test]
    fn parse_rejects_bad_rows() {
        assert!(DirectionNumbers::parse("2 1 0 2\n", 2).is_err());
        assert!(DirectionNumbers::parse("2 2 0 1\n", 2).is_err());
        assert!(DirectionNumbers::parse("2 x 0 1\n", 2).is_err());
        let ok = DirectionNumbers::parse("d s a m_i\n2 1 0 1\n", 2).unwrap();
        assert_eq!(ok.max_dim(), 2);
    }

    #[test]
    fn gaussian_domain() {
        let bad = LowDiscrepancySet { n: 1, s: 1, values: alloc::vec![0.0], scrambled: true, seed: 0 };
        assert!(matches!(to_gaussian(&bad), Err(Error::Domain { .. })));
        let mid = LowDiscrepancySet { n: 1, s: 1, values: alloc::vec![0.5], scrambled: true, seed: 0 };
        assert_eq!(to_gaussian(&mid).unwrap().values[0], 0.0);
    }
}
