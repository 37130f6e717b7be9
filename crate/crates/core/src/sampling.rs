//! Deterministic low-discrepancy sample points in a parameter box.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::jet::NVARS;

const BASES: [u64; NVARS] = [2, 3, 5];

/// Default number of sample points per check.
pub const DEFAULT_SAMPLES: usize = 50;

/// Radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let (mut f, mut r) = (inv, 0.0);
    while i > 0 {
        r += f * (i % b) as f64;
        i /= b;
        f *= inv;
    }
    r
}

/// `count` Halton points in `domain`, shifted modulo one by a random offset
/// drawn from `seed`. Unused trailing coordinates are zero.
pub fn halton_points(domain: &[(f64, f64)], count: usize, seed: u64) -> Vec<[f64; NVARS]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: [f64; NVARS] = std::array::from_fn(|_| rng.random::<f64>());
    (1..=count as u64)
        .map(|i| {
            std::array::from_fn(|k| match domain.get(k) {
                Some(&(lo, hi)) => {
                    let t = (radical_inverse(i, BASES[k]) + shift[k]).fract();
                    lo + t * (hi - lo)
                }
                None => 0.0,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(5, 3) - (2.0 / 3.0 + 1.0 / 9.0)).abs() < 1e-15);
    }

    #[test]
    fn points_stay_in_box_and_are_reproducible() {
        let dom = [(0.1, 3.0), (-1.0, 1.0)];
        let a = halton_points(&dom, 40, 7);
        assert_eq!(a, halton_points(&dom, 40, 7));
        assert_ne!(a, halton_points(&dom, 40, 8));
        for p in &a {
            assert!(p[0] >= 0.1 && p[0] < 3.0);
            assert!(p[1] >= -1.0 && p[1] < 1.0);
            assert_eq!(p[2], 0.0);
        }
    }
}
