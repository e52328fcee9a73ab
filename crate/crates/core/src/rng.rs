//! Counter-based pseudorandom functions.
//!
//! There is no generator state anywhere in the crate: every random bit is a
//! hash of (key, counter), so point sets, scrambles and plain-MC draws are
//! reproducible in any evaluation order.

/// SplitMix64 finalizer; a bijection on `u64` with full avalanche.
#[inline]
pub const fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// Derives an independent 64-bit key from a parent key and two labels.
///
/// Used for replicate seeds `(base_seed, replicate, stream)` and for the
/// per-dimension scramble keys.
#[inline]
pub const fn derive(parent: u64, a: u64, b: u64) -> u64 {
    let inner = mix64(a.wrapping_mul(GOLDEN) ^ mix64(b.wrapping_add(0x632b_e59b_d9b4_e019)));
    mix64(parent ^ inner.rotate_left(23) ^ GOLDEN)
}

/// Keyed hash of a single counter.
#[inline]
pub const fn hash(key: u64, counter: u64) -> u64 {
    mix64(key ^ mix64(counter ^ 0xd6e8_feb8_6659_fd93))
}

/// Stream tags keep unrelated consumers of one seed apart.
pub mod stream {
    pub const SCRAMBLE: u64 = 0x5343_5241_4d42_4c45;
    pub const PLAIN_MC: u64 = 0x504c_4149_4e4d_4300;
    pub const GRADIENT: u64 = 0x4752_4144_4945_4e54;
    pub const REPLICATE: u64 = 0x5245_504c_4943_4154;
}

/// Plain Monte Carlo uniform in the open interval (0, 1) for coordinate
/// `(index, dim)` under `seed`.
#[inline]
pub fn uniform(seed: u64, index: u64, dim: u64) -> f64 {
    let key = derive(seed, stream::PLAIN_MC, dim);
    let bits = hash(key, index) >> 11;
    (bits as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}
