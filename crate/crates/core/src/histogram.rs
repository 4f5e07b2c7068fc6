//! Piecewise-uniform histogram shared by the histogram-based estimators.
//!
//! Bin `j` (1-based) covers `(b[j-1], b[j]]` with `b[0]` the lower origin, and
//! its count is spread uniformly over that interval. The first bin may have
//! zero width (`lower_origin == b[1]`); it then holds a point mass at the
//! stream minimum, which is how a histogram built from raw data values
//! represents its smallest value.

use crate::error::{Error, Result, Side};
use crate::scalar::{xlogx, Scalar};

/// Relative tolerance for count conservation checks.
pub const COUNT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram<F> {
    lower_origin: F,
    boundaries: Vec<F>,
    counts: Vec<F>,
    total: F,
}

impl<F: Scalar> Histogram<F> {
    /// Builds a histogram and checks every structural invariant.
    pub fn new(lower_origin: F, boundaries: Vec<F>, counts: Vec<F>) -> Result<Self> {
        let total = counts.iter().fold(F::zero(), |acc, &c| acc + c);
        let h = Self {
            lower_origin,
            boundaries,
            counts,
            total,
        };
        h.validate()?;
        Ok(h)
    }

    /// A histogram with no bins; every query on it fails with [`Error::Empty`].
    pub fn empty() -> Self {
        Self {
            lower_origin: F::zero(),
            boundaries: Vec::new(),
            counts: Vec::new(),
            total: F::zero(),
        }
    }

    /// Skips validation. Callers in this crate uphold the invariants and tests
    /// re-check them through [`Histogram::validate`].
    pub(crate) fn from_parts(
        lower_origin: F,
        boundaries: Vec<F>,
        counts: Vec<F>,
        total: F,
    ) -> Self {
        Self {
            lower_origin,
            boundaries,
            counts,
            total,
        }
    }

    pub fn lower_origin(&self) -> F {
        self.lower_origin
    }

    pub fn boundaries(&self) -> &[F] {
        &self.boundaries
    }

    pub fn counts(&self) -> &[F] {
        &self.counts
    }

    pub fn total(&self) -> F {
        self.total
    }

    /// Number of bins.
    pub fn len(&self) -> usize {
        self.boundaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundaries.is_empty()
    }

    /// Upper edge of the last bin.
    pub fn upper(&self) -> Option<F> {
        self.boundaries.last().copied()
    }

    pub(crate) fn heap_bytes(&self) -> usize {
        crate::estimator::vec_bytes(&self.boundaries) + crate::estimator::vec_bytes(&self.counts)
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut F, &mut Vec<F>, &mut Vec<F>, &mut F) {
        (
            &mut self.lower_origin,
            &mut self.boundaries,
            &mut self.counts,
            &mut self.total,
        )
    }

    /// Checks ordering, non-negativity and count conservation.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidHistogram(msg));
        if self.boundaries.len() != self.counts.len() {
            return bad(format!(
                "{} boundaries but {} counts",
                self.boundaries.len(),
                self.counts.len()
            ));
        }
        if !self.lower_origin.is_finite() {
            return bad("non-finite lower origin".into());
        }
        let mut prev = self.lower_origin;
        for (j, &b) in self.boundaries.iter().enumerate() {
            let ordered = if j == 0 { b >= prev } else { b > prev };
            if !b.is_finite() || !ordered {
                return bad(format!(
                    "boundary {} = {} does not exceed {}",
                    j + 1,
                    b,
                    prev
                ));
            }
            prev = b;
        }
        let mut sum = F::zero();
        for (j, &c) in self.counts.iter().enumerate() {
            if !c.is_finite() || c < F::zero() {
                return bad(format!("count {} = {} is negative or non-finite", j + 1, c));
            }
            sum = sum + c;
        }
        let tol = F::of(COUNT_TOLERANCE) * self.total.abs().max(F::one());
        if (sum - self.total).abs() > tol {
            return bad(format!("counts sum to {} but total is {}", sum, self.total));
        }
        Ok(())
    }

    /// 0-based index of the bin containing `x`, i.e. the first `j` with `x <= b[j]`.
    /// `x` must lie in `[lower_origin, upper]`.
    pub(crate) fn bin_index(&self, x: F) -> usize {
        self.boundaries.partition_point(|&b| b < x)
    }

    /// Lower edge of the 0-based bin `j`.
    #[inline]
    pub(crate) fn lower_edge(&self, j: usize) -> F {
        if j == 0 {
            self.lower_origin
        } else {
            self.boundaries[j - 1]
        }
    }

    /// Cumulative distribution of the piecewise-uniform approximation.
    ///
    /// Right-continuous, so a zero-width first bin contributes its whole
    /// mass at `x == lower_origin`.
    pub fn cdf(&self, x: F) -> Result<F> {
        let upper = self.upper().ok_or(Error::Empty)?;
        if self.total <= F::zero() {
            return Err(Error::Empty);
        }
        if x < self.lower_origin {
            return Err(Error::OutOfRange {
                value: x.as_f64(),
                side: Side::Below,
            });
        }
        if x > upper {
            return Err(Error::OutOfRange {
                value: x.as_f64(),
                side: Side::Above,
            });
        }
        if x == upper {
            return Ok(F::one());
        }
        let j = self.bin_index(x);
        let before = self.counts[..j].iter().fold(F::zero(), |acc, &c| acc + c);
        let lo = self.lower_edge(j);
        let width = self.boundaries[j] - lo;
        let frac = if width > F::zero() {
            (x - lo) / width
        } else {
            F::one()
        };
        Ok(((before + self.counts[j] * frac) / self.total).min(F::one()))
    }

    /// Smallest `x` whose CDF reaches `u`, for `u` in `[0, 1]`.
    ///
    /// Inside a bin the inverse is linear. A level that coincides with a
    /// cumulative count (up to rounding) maps to that bin's upper boundary.
    pub fn inverse_cdf(&self, u: F) -> Result<F> {
        let upper = self.upper().ok_or(Error::Empty)?;
        if self.total <= F::zero() {
            return Err(Error::Empty);
        }
        if !(u >= F::zero() && u <= F::one()) {
            return Err(Error::InvalidQuantile(u.as_f64()));
        }
        if u <= F::zero() {
            return Ok(self.lower_origin);
        }
        let target = u * self.total;
        let tol = F::epsilon() * F::of(64.0) * self.total;
        let mut before = F::zero();
        for (j, &c) in self.counts.iter().enumerate() {
            let through = before + c;
            if through >= target - tol && c > F::zero() {
                let hi = self.boundaries[j];
                if (through - target).abs() <= tol {
                    return Ok(hi);
                }
                let lo = self.lower_edge(j);
                let frac = ((target - before) / c).max(F::zero()).min(F::one());
                return Ok((lo + frac * (hi - lo)).min(hi));
            }
            before = through;
        }
        Ok(upper)
    }

    /// Quantile of the approximated distribution for `q` in `(0, 1]`.
    pub fn quantile(&self, q: F) -> Result<F> {
        if !(q > F::zero() && q <= F::one()) {
            return Err(Error::InvalidQuantile(q.as_f64()));
        }
        self.inverse_cdf(q)
    }

    /// Discrete entropy of the bin probabilities, in nats.
    pub fn entropy(&self) -> Result<F> {
        entropy_discrete(&self.counts)
    }
}

/// Piecewise-linear CDF of `h` at `x`.
pub fn cdf_eval<F: Scalar>(h: &Histogram<F>, x: F) -> Result<F> {
    h.cdf(x)
}

/// Value at which the CDF of `h` reaches `q`.
pub fn quantile_from_histogram<F: Scalar>(h: &Histogram<F>, q: F) -> Result<F> {
    h.quantile(q)
}

/// `-sum p ln p` over the normalised counts, with `0 ln 0 = 0`.
pub fn entropy_discrete<F: Scalar>(counts: &[F]) -> Result<F> {
    let total = counts.iter().fold(F::zero(), |acc, &c| acc + c);
    if counts.iter().any(|&c| c < F::zero() || !c.is_finite()) {
        return Err(Error::Domain(
            "counts must be finite and non-negative".into(),
        ));
    }
    if total.is_nan() || total <= F::zero() {
        return Err(Error::Domain("entropy of an all-zero count vector".into()));
    }
    // -sum (c/T) ln(c/T) = ln T - (1/T) sum c ln c
    let s = counts.iter().fold(F::zero(), |acc, &c| acc + xlogx(c));
    Ok((total.ln() - s / total).max(F::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn two_bins() -> Histogram<f64> {
        Histogram::new(0.0, vec![2.0, 4.0], vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn cdf_examples() {
        let h = two_bins();
        assert_eq!(cdf_eval(&h, 2.0).unwrap(), 0.5);
        assert_eq!(cdf_eval(&h, 1.0).unwrap(), 0.25);
        assert_eq!(cdf_eval(&h, 4.0).unwrap(), 1.0);
        assert_eq!(cdf_eval(&h, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn cdf_out_of_range_names_side() {
        let h = two_bins();
        assert_eq!(
            h.cdf(-1.0),
            Err(Error::OutOfRange {
                value: -1.0,
                side: Side::Below
            })
        );
        assert_eq!(
            h.cdf(4.5),
            Err(Error::OutOfRange {
                value: 4.5,
                side: Side::Above
            })
        );
    }

    #[test]
    fn quantile_examples() {
        let h = two_bins();
        assert_eq!(quantile_from_histogram(&h, 0.5).unwrap(), 2.0);
        assert_eq!(quantile_from_histogram(&h, 0.25).unwrap(), 1.0);
        assert_eq!(quantile_from_histogram(&h, 1.0).unwrap(), 4.0);
    }

    #[test]
    fn quantile_rejects_bad_levels_and_empty() {
        let h = two_bins();
        assert!(matches!(h.quantile(0.0), Err(Error::InvalidQuantile(_))));
        assert!(matches!(h.quantile(1.5), Err(Error::InvalidQuantile(_))));
        assert_eq!(Histogram::<f64>::empty().quantile(0.5), Err(Error::Empty));
        let zero = Histogram::new(0.0, vec![1.0], vec![0.0]).unwrap();
        assert_eq!(zero.quantile(0.5), Err(Error::Empty));
    }

    #[test]
    fn unequal_counts_use_cumulative_mass() {
        let h = Histogram::new(0.0, vec![2.0, 4.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(h.quantile(1.0 / 3.0).unwrap(), 2.0);
        assert_relative_eq!(h.quantile(2.0 / 3.0).unwrap(), 3.0, max_relative = 1e-12);
    }

    #[test]
    fn zero_count_bins_are_skipped() {
        let h = Histogram::new(0.0, vec![1.0, 2.0, 3.0], vec![1.0, 0.0, 1.0]).unwrap();
        assert_eq!(h.quantile(0.5).unwrap(), 1.0);
        assert_relative_eq!(h.quantile(0.75).unwrap(), 2.5);
    }

    #[test]
    fn point_bin_at_origin() {
        let h = Histogram::new(1.0, vec![1.0, 2.0, 3.0], vec![1.0, 1.0, 1.0]).unwrap();
        assert_relative_eq!(h.cdf(1.0).unwrap(), 1.0 / 3.0);
        assert_eq!(h.quantile(1.0 / 3.0).unwrap(), 1.0);
        assert_eq!(h.quantile(0.1).unwrap(), 1.0);
        assert_eq!(h.quantile(2.0 / 3.0).unwrap(), 2.0);
    }

    #[test]
    fn validate_rejects_broken_structure() {
        assert!(Histogram::new(0.0, vec![2.0, 2.0], vec![1.0, 1.0]).is_err());
        assert!(Histogram::new(3.0, vec![2.0], vec![1.0]).is_err());
        assert!(Histogram::new(0.0, vec![2.0], vec![-1.0]).is_err());
        assert!(Histogram::new(0.0, vec![2.0], vec![1.0, 1.0]).is_err());
        let mut h = two_bins();
        h.total = 5.0;
        assert!(h.validate().is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_relative_eq!(
            entropy_discrete(&[1.0, 1.0, 1.0, 1.0]).unwrap(),
            4f64.ln(),
            max_relative = 1e-12
        );
        assert_eq!(entropy_discrete(&[5.0, 0.0, 0.0]).unwrap(), 0.0);
        let expected = -(1.0f64 / 3.0) * (1.0f64 / 3.0).ln() - (2.0f64 / 3.0) * (2.0f64 / 3.0).ln();
        assert_relative_eq!(
            entropy_discrete(&[2.0, 4.0]).unwrap(),
            expected,
            max_relative = 1e-12
        );
        assert_relative_eq!(expected, 0.6365, epsilon = 1e-4);
        assert!(matches!(
            entropy_discrete(&[0.0, 0.0]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            entropy_discrete::<f64>(&[]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn works_with_f32() {
        let h = Histogram::new(0.0f32, vec![2.0, 4.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(h.cdf(1.0).unwrap(), 0.25);
        assert_eq!(h.quantile(0.25).unwrap(), 1.0);
    }

    fn arb_histogram() -> impl Strategy<Value = Histogram<f64>> {
        (1usize..30)
            .prop_flat_map(|n| {
                (
                    -100.0f64..100.0,
                    prop::collection::vec(0.01f64..10.0, n),
                    prop::collection::vec(0.1f64..50.0, n),
                )
            })
            .prop_map(|(origin, widths, counts)| {
                let mut b = Vec::with_capacity(widths.len());
                let mut edge = origin;
                for w in widths {
                    edge += w;
                    b.push(edge);
                }
                Histogram::new(origin, b, counts).unwrap()
            })
    }

    proptest! {
        #[test]
        fn cdf_is_monotone_and_pinned(h in arb_histogram(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let lo = h.lower_origin();
            let hi = h.upper().unwrap();
            prop_assert_eq!(h.cdf(lo).unwrap(), 0.0);
            prop_assert_eq!(h.cdf(hi).unwrap(), 1.0);
            let (x1, x2) = if a <= b { (a, b) } else { (b, a) };
            let x1 = lo + x1 * (hi - lo);
            let x2 = lo + x2 * (hi - lo);
            prop_assert!(h.cdf(x1).unwrap() <= h.cdf(x2).unwrap());
        }

        #[test]
        fn quantile_inverts_cdf(h in arb_histogram(), bin in 0usize..30, t in 0.05f64..0.95) {
            let j = bin % h.len();
            let lo = h.lower_edge(j);
            let x = lo + t * (h.boundaries()[j] - lo);
            let u = h.cdf(x).unwrap();
            let back = h.quantile(u).unwrap();
            prop_assert!((back - x).abs() <= 1e-9 * x.abs().max(1.0), "x={} back={}", x, back);
        }

        #[test]
        fn entropy_is_scale_invariant(counts in prop::collection::vec(0.0f64..100.0, 1..40), k in 0.001f64..1000.0) {
            prop_assume!(counts.iter().any(|&c| c > 0.0));
            let scaled: Vec<f64> = counts.iter().map(|c| c * k).collect();
            let h1 = entropy_discrete(&counts).unwrap();
            let h2 = entropy_discrete(&scaled).unwrap();
            prop_assert!((h1 - h2).abs() <= 1e-9 * h1.max(1.0));
        }

        #[test]
        fn uniform_counts_maximise_entropy(n in 2usize..50, j in 0usize..50, delta in 0.01f64..0.99) {
            let uniform = vec![1.0f64; n];
            let max = entropy_discrete(&uniform).unwrap();
            prop_assert!((max - (n as f64).ln()).abs() < 1e-12);
            let mut perturbed = uniform.clone();
            perturbed[j % n] += delta;
            prop_assert!(entropy_discrete(&perturbed).unwrap() < max);
        }
    }
}
