//! Seeded random sources shared by every randomized construction.
//!
//! All randomness flows through [`ChaCha8Rng`], whose output stream is fixed
//! across platforms and releases, so a seed pins down every slice, patch and
//! start system bit for bit.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives the `k`-th child seed of `master` (splitmix64 finalizer).
pub fn derive_seed(master: u64, k: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(k.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform sample from the open unit disk.
pub fn unit_disk(rng: &mut SeededRng) -> Complex64 {
    loop {
        let re: f64 = rng.random_range(-1.0..1.0);
        let im: f64 = rng.random_range(-1.0..1.0);
        let r2 = re * re + im * im;
        if r2 < 1.0 && r2 > 1e-4 {
            return Complex64::new(re, im);
        }
    }
}

/// Uniform sample from the unit circle.
pub fn unit_circle(rng: &mut SeededRng) -> Complex64 {
    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(1.0, theta)
}

/// Nonzero integer in `[-bound, bound]`, as a rational.
pub fn small_rational(rng: &mut SeededRng, bound: i64) -> BigRational {
    loop {
        let v = rng.random_range(-bound..=bound);
        if v != 0 {
            return BigRational::from_integer(BigInt::from(v));
        }
    }
}

/// Integer in `[-bound, bound]` (zero allowed), as a rational.
pub fn any_small_rational(rng: &mut SeededRng, bound: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(rng.random_range(-bound..=bound)))
}
