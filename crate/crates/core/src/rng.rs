//! Deterministic randomness.
//!
//! Every random draw in the crate comes from a ChaCha8 stream seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`. Derived variates use fixed, portable
//! recipes so that another implementation can replay them bit for bit:
//!
//! * unit interval: `(next_u64 >> 11) * 2^-53`, in `[0, 1)`;
//! * integer below `bound`: Lemire's multiply-shift with rejection;
//! * standard normal: Box-Muller cosine branch from two unit draws
//!   `u1, u2` as `sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[inline]
pub fn unit_f64(rng: &mut StreamRng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform integer in `[0, bound)`.
pub fn below(rng: &mut StreamRng, bound: u64) -> u64 {
    assert!(bound > 0);
    let mut m = rng.next_u64() as u128 * bound as u128;
    let mut low = m as u64;
    if low < bound {
        let threshold = bound.wrapping_neg() % bound;
        while low < threshold {
            m = rng.next_u64() as u128 * bound as u128;
            low = m as u64;
        }
    }
    (m >> 64) as u64
}

pub fn standard_normal(rng: &mut StreamRng) -> f64 {
    let u1 = unit_f64(rng);
    let u2 = unit_f64(rng);
    (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn below_is_in_range_and_roughly_uniform() {
        let mut rng = seeded(3);
        let mut hits = [0u32; 7];
        for _ in 0..70_000 {
            hits[below(&mut rng, 7) as usize] += 1;
        }
        for h in hits {
            assert!((9_500..10_500).contains(&h), "{h}");
        }
    }

    #[test]
    fn streams_replay() {
        let a: Vec<u64> = (0..5)
            .map({
                let mut r = seeded(11);
                move |_| below(&mut r, 1000)
            })
            .collect();
        let b: Vec<u64> = (0..5)
            .map({
                let mut r = seeded(11);
                move |_| below(&mut r, 1000)
            })
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn normal_moments() {
        let mut rng = seeded(5);
        let xs: Vec<f64> = (0..100_000).map(|_| standard_normal(&mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.02);
        assert!((var - 1.0).abs() < 0.02);
    }
}
