use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point scalar the estimators are generic over: `f32` or `f64`.
///
/// Counts are stored in the same scalar type as data values, because the
/// data-aligned histogram produces fractional counts. With `f32` the
/// observation total stops being exact beyond 2^24 observations.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from a literal or count.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable in every Scalar")
    }

    #[inline]
    fn of_count(n: u64) -> Self {
        Self::from_u64(n).expect("u64 is representable in every Scalar")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `x * ln(x)` with the convention `0 * ln(0) = 0`.
#[inline]
pub fn xlogx<F: Scalar>(x: F) -> F {
    if x > F::zero() {
        x * x.ln()
    } else {
        F::zero()
    }
}

/// 1-based rank of the `q`-quantile in a multiset of `n` values: `ceil(q * n)`,
/// clamped to `[1, n]`.
///
/// The product `q * n` is taken with a small relative slack so that
/// `0.3 * 10 = 3.0000000000000004` still maps to rank 3.
pub fn quantile_rank(q: f64, n: usize) -> usize {
    debug_assert!(n > 0);
    let x = q * n as f64;
    let r = (x - 1e-9 * x.abs().max(1.0)).ceil();
    (r.max(1.0) as usize).min(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_handles_inexact_products() {
        assert_eq!(quantile_rank(0.3, 10), 3);
        assert_eq!(quantile_rank(0.35, 10), 4);
        assert_eq!(quantile_rank(1.0, 10), 10);
        assert_eq!(quantile_rank(1e-6, 10), 1);
        assert_eq!(quantile_rank(0.5, 1), 1);
        for n in 1..200usize {
            for r in 1..=n {
                assert_eq!(quantile_rank(r as f64 / n as f64, n), r);
            }
        }
    }

    #[test]
    fn xlogx_zero_convention() {
        assert_eq!(xlogx(0.0f64), 0.0);
        assert!((xlogx(2.0f64) - 2.0 * 2.0f64.ln()).abs() < 1e-15);
        assert_eq!(xlogx(1.0f32), 0.0);
    }
}
