//! Seeded random positive rational points.
//!
//! Point `i` of seed `s` is drawn from its own ChaCha stream, so any subset
//! of points can be regenerated (or checked in parallel) independently.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Numerators and denominators are uniform in `1..=MAX_PART`.
pub const MAX_PART: u32 = 1000;

/// Offset separating verification points from the points used to build a
/// result, so the two never coincide.
pub const FRESH_OFFSET: u64 = 1 << 32;

pub fn random_point(seed: u64, index: u64, dim: usize) -> Vec<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..dim)
        .map(|_| {
            let n: u32 = rng.random_range(1..=MAX_PART);
            let d: u32 = rng.random_range(1..=MAX_PART);
            BigRational::new(BigInt::from(n), BigInt::from(d))
        })
        .collect()
}

pub fn random_points(seed: u64, count: usize, dim: usize) -> Vec<Vec<BigRational>> {
    (0..count as u64).map(|i| random_point(seed, i, dim)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn reproducible_and_positive() {
        let a = random_points(42, 5, 4);
        assert_eq!(a, random_points(42, 5, 4));
        assert_ne!(a, random_points(43, 5, 4));
        assert!(a.iter().flatten().all(|q| q.is_positive()));
        assert_eq!(random_point(42, 3, 4), a[3]);
    }
}
