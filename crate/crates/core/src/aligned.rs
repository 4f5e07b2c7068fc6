//! Data-aligned estimator.
//!
//! Boundaries only ever take values that were observed. Each new datum opens
//! an extra bin ending at the datum, then the one neighbouring pair whose
//! merge costs the least entropy is fused, bringing the histogram back to
//! its budget of `n` bins.
//!
//! Until the budget is first reached the histogram is lossless: every bin
//! holds exactly the copies of its upper boundary value. New values are then
//! inserted as atoms, with no mass taken from the bin they split.

use crate::error::{check_datum, check_level, Error, Result};
use crate::estimator::QuantileEstimator;
use crate::histogram::Histogram;
use crate::scalar::{xlogx, Scalar};

/// Entropy used to rank candidate merges.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum MergeEntropy {
    /// Entropy of the bin probabilities alone.
    #[default]
    Discrete,
    /// Differential entropy of the piecewise-uniform density, which also
    /// accounts for bin widths.
    Differential,
}

impl MergeEntropy {
    /// Entropy lost (in count units, i.e. scaled by the total) when two
    /// adjacent bins with the given counts and widths are fused.
    #[inline]
    pub fn merge_loss<F: Scalar>(self, left: F, right: F, left_width: F, right_width: F) -> F {
        let sum = left + right;
        let discrete = xlogx(sum) - (xlogx(left) + xlogx(right));
        match self {
            MergeEntropy::Discrete => discrete,
            MergeEntropy::Differential => {
                let wlog = |c: F, w: F| {
                    if c <= F::zero() {
                        F::zero()
                    } else if w <= F::zero() {
                        F::neg_infinity()
                    } else {
                        c * w.ln()
                    }
                };
                discrete + (wlog(left, left_width) + wlog(right, right_width))
                    - wlog(sum, left_width + right_width)
            }
        }
    }
}

/// Opens the bin for datum `d` and returns the resulting `n + 1`-bin
/// histogram.
///
/// If `d` is above the last boundary a bin `(b_n, d]` with count 1 is
/// appended. Otherwise the bin `(b_{j-1}, b_j]` containing `d` is split at
/// `d`: the new left part receives `c_j (d - b_{j-1}) / (b_j - b_{j-1}) + 1`
/// and the right part keeps the remainder, so the total grows by exactly one.
/// A datum equal to an existing boundary only increments that bin.
pub fn insert_temporary_bin<F: Scalar>(h: &Histogram<F>, d: F) -> Result<Histogram<F>> {
    check_datum(d.as_f64())?;
    let mut out = h.clone();
    insert_datum(&mut out, d, true);
    Ok(out)
}

/// Inserts `d` in place. With `split_mass == false` the split bin keeps all
/// of its mass, which is exact while every bin is a single atom.
fn insert_datum<F: Scalar>(h: &mut Histogram<F>, d: F, split_mass: bool) {
    let (origin, bounds, counts, total) = h.parts_mut();
    *total = *total + F::one();
    if bounds.is_empty() {
        *origin = d;
        bounds.push(d);
        counts.push(F::one());
        return;
    }
    if d < *origin {
        *origin = d;
        bounds.insert(0, d);
        counts.insert(0, F::one());
        return;
    }
    let last = bounds.len() - 1;
    if d > bounds[last] {
        bounds.push(d);
        counts.push(F::one());
        return;
    }
    let j = bounds.partition_point(|&b| b < d);
    if bounds[j] == d {
        counts[j] = counts[j] + F::one();
        return;
    }
    let lo = if j == 0 { *origin } else { bounds[j - 1] };
    let moved = if split_mass {
        let frac = (d - lo) / (bounds[j] - lo);
        (counts[j] * frac).min(counts[j])
    } else {
        F::zero()
    };
    counts[j] = (counts[j] - moved).max(F::zero());
    bounds.insert(j, d);
    counts.insert(j, moved + F::one());
}

/// 0-based index `k` such that fusing bins `k` and `k + 1` leaves the
/// histogram with maximal discrete entropy. Ties go to the smallest `k`.
pub fn choose_merge<F: Scalar>(counts: &[F]) -> Result<usize> {
    if counts.len() < 2 {
        return Err(Error::Domain("need at least two bins to merge".into()));
    }
    Ok(argmin_loss(counts.len() - 1, |k| {
        MergeEntropy::Discrete.merge_loss(counts[k], counts[k + 1], F::zero(), F::zero())
    }))
}

/// Like [`choose_merge`] but with a selectable entropy, using `h`'s bin widths.
pub fn choose_merge_by<F: Scalar>(h: &Histogram<F>, entropy: MergeEntropy) -> Result<usize> {
    if h.len() < 2 {
        return Err(Error::Domain("need at least two bins to merge".into()));
    }
    let c = h.counts();
    let width = |j: usize| h.boundaries()[j] - h.lower_edge(j);
    Ok(argmin_loss(h.len() - 1, |k| {
        entropy.merge_loss(c[k], c[k + 1], width(k), width(k + 1))
    }))
}

fn argmin_loss<F: Scalar>(pairs: usize, loss: impl Fn(usize) -> F) -> usize {
    let mut best = 0;
    let mut best_loss = loss(0);
    for k in 1..pairs {
        let l = loss(k);
        if l < best_loss {
            best = k;
            best_loss = l;
        }
    }
    best
}

/// Fuses bins `k` and `k + 1` (0-based): boundary `k` disappears and the
/// merged bin carries the summed count.
pub fn merge_bins<F: Scalar>(h: &Histogram<F>, k: usize) -> Result<Histogram<F>> {
    let mut out = h.clone();
    merge_in_place(&mut out, k)?;
    Ok(out)
}

fn merge_in_place<F: Scalar>(h: &mut Histogram<F>, k: usize) -> Result<()> {
    if k + 1 >= h.len() {
        return Err(Error::Domain(format!(
            "merge index {} out of range for {} bins",
            k,
            h.len()
        )));
    }
    let (_, bounds, counts, _) = h.parts_mut();
    let left = counts.remove(k);
    counts[k] = counts[k] + left;
    bounds.remove(k);
    Ok(())
}

#[derive(Debug, Clone)]
pub struct AlignedEstimator<F> {
    bins: usize,
    entropy: MergeEntropy,
    hist: Histogram<F>,
    seen: u64,
}

impl<F: Scalar> AlignedEstimator<F> {
    pub fn new(bins: usize) -> Result<Self> {
        Self::with_entropy(bins, MergeEntropy::Discrete)
    }

    pub fn with_entropy(bins: usize, entropy: MergeEntropy) -> Result<Self> {
        if bins == 0 {
            return Err(Error::Domain("bin budget must be positive".into()));
        }
        let mut hist = Histogram::empty();
        {
            let (_, b, c, _) = hist.parts_mut();
            b.reserve_exact(bins + 1);
            c.reserve_exact(bins + 1);
        }
        Ok(Self {
            bins,
            entropy,
            hist,
            seen: 0,
        })
    }

    /// Resumes from a histogram that already has `hist.len()` bins as budget.
    pub fn from_histogram(hist: Histogram<F>) -> Result<Self> {
        hist.validate()?;
        if hist.is_empty() {
            return Err(Error::Empty);
        }
        let seen = hist.total().round().to_u64().unwrap_or(0);
        let mut hist = hist;
        let bins = hist.len();
        {
            let (_, b, c, _) = hist.parts_mut();
            b.reserve_exact(1);
            c.reserve_exact(1);
        }
        Ok(Self {
            bins,
            entropy: MergeEntropy::Discrete,
            hist,
            seen,
        })
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn entropy(&self) -> MergeEntropy {
        self.entropy
    }

    pub fn histogram(&self) -> &Histogram<F> {
        &self.hist
    }
}

impl<F: Scalar> QuantileEstimator<F> for AlignedEstimator<F> {
    fn name(&self) -> &'static str {
        "aligned"
    }

    fn observe(&mut self, d: F) -> Result<()> {
        check_datum(d.as_f64())?;
        self.seen += 1;
        let full = self.hist.len() >= self.bins;
        insert_datum(&mut self.hist, d, full);
        if self.hist.len() > self.bins {
            let k = match self.entropy {
                MergeEntropy::Discrete => choose_merge(self.hist.counts()),
                e => choose_merge_by(&self.hist, e),
            }
            .expect("at least two bins");
            merge_in_place(&mut self.hist, k).expect("k in range");
        }
        Ok(())
    }

    fn query(&self, q: F) -> Result<F> {
        check_level(q.as_f64())?;
        match self.hist.quantile(q) {
            Err(Error::Empty) => Err(Error::NotWarmedUp { needed: 1 }),
            r => r,
        }
    }

    fn count(&self) -> u64 {
        self.seen
    }

    fn warmup(&self) -> usize {
        self.bins
    }

    fn footprint(&self) -> usize {
        std::mem::size_of::<Self>() + self.hist.heap_bytes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::histogram::entropy_discrete;
    use proptest::prelude::*;

    fn two_bins() -> Histogram<f64> {
        Histogram::new(0.0, vec![2.0, 4.0], vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn insert_inside_splits_mass() {
        let h = insert_temporary_bin(&two_bins(), 3.0).unwrap();
        assert_eq!(h.boundaries(), &[2.0, 3.0, 4.0]);
        assert_eq!(h.counts(), &[1.0, 1.5, 0.5]);
        assert_eq!(h.total(), 3.0);
        h.validate().unwrap();
    }

    #[test]
    fn insert_above_appends_unit_bin() {
        let h = insert_temporary_bin(&two_bins(), 7.0).unwrap();
        assert_eq!(h.boundaries(), &[2.0, 4.0, 7.0]);
        assert_eq!(h.counts(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn insert_on_boundary_increments() {
        let h = insert_temporary_bin(&two_bins(), 4.0).unwrap();
        assert_eq!(h.boundaries(), &[2.0, 4.0]);
        assert_eq!(h.counts(), &[1.0, 2.0]);
        assert_eq!(h.total(), 3.0);
    }

    #[test]
    fn insert_below_origin_moves_origin() {
        let h = insert_temporary_bin(&two_bins(), -1.0).unwrap();
        assert_eq!(h.lower_origin(), -1.0);
        assert_eq!(h.boundaries(), &[-1.0, 2.0, 4.0]);
        assert_eq!(h.counts(), &[1.0, 1.0, 1.0]);
        h.validate().unwrap();
    }

    #[test]
    fn insert_rejects_non_finite() {
        assert!(matches!(
            insert_temporary_bin(&two_bins(), f64::NAN),
            Err(Error::NonFiniteDatum(_))
        ));
    }

    #[test]
    fn choose_merge_examples() {
        assert_eq!(choose_merge(&[1.0, 1.0, 4.0]).unwrap(), 0);
        assert_eq!(choose_merge(&[2.0, 2.0, 2.0]).unwrap(), 0);
        assert_eq!(choose_merge(&[1.0, 1.5, 0.5]).unwrap(), 1);
        assert!(choose_merge(&[1.0]).is_err());
        // the two candidate entropies behind the first example
        let a: f64 = entropy_discrete(&[2.0, 4.0]).unwrap();
        let b: f64 = entropy_discrete(&[1.0, 5.0]).unwrap();
        assert!((a - 0.6365).abs() < 1e-4 && (b - 0.4506).abs() < 1e-4);
    }

    #[test]
    fn merge_examples() {
        let h = Histogram::new(0.0, vec![2.0, 3.0, 4.0], vec![1.0, 1.5, 0.5]).unwrap();
        let m = merge_bins(&h, 1).unwrap();
        assert_eq!(m.boundaries(), &[2.0, 4.0]);
        assert_eq!(m.counts(), &[1.0, 2.0]);
        assert_eq!(m.total(), 3.0);

        let h = Histogram::new(0.0, vec![1.0, 2.0], vec![1.0, 1.0]).unwrap();
        let m = merge_bins(&h, 0).unwrap();
        assert_eq!(m.boundaries(), &[2.0]);
        assert_eq!(m.counts(), &[2.0]);

        assert!(merge_bins(&h, 1).is_err());
    }

    #[test]
    fn observe_composes_insert_choose_merge() {
        let mut e = AlignedEstimator::from_histogram(two_bins()).unwrap();
        e.observe(3.0).unwrap();
        assert_eq!(e.histogram().boundaries(), &[2.0, 4.0]);
        assert_eq!(e.histogram().counts(), &[1.0, 2.0]);
        assert_eq!(e.count(), 3);
    }

    #[test]
    fn monotone_stream_fills_budget_exactly() {
        let n = 10;
        let mut e = AlignedEstimator::<f64>::new(n).unwrap();
        for i in 1..=n {
            e.observe(i as f64).unwrap();
        }
        let expected: Vec<f64> = (1..=n).map(|i| i as f64).collect();
        assert_eq!(e.histogram().boundaries(), expected.as_slice());
        assert_eq!(e.histogram().counts(), vec![1.0; n].as_slice());
    }

    #[test]
    fn query_examples() {
        let h = Histogram::new(0.0, vec![2.0, 4.0], vec![1.0, 2.0]).unwrap();
        let e = AlignedEstimator::from_histogram(h).unwrap();
        assert_eq!(e.query(1.0 / 3.0).unwrap(), 2.0);
        assert_eq!(e.query(1.0).unwrap(), 4.0);
        let empty = AlignedEstimator::<f64>::new(4).unwrap();
        assert_eq!(empty.query(0.5), Err(Error::NotWarmedUp { needed: 1 }));
    }

    #[test]
    fn equal_counts_agree_with_interpolated_query() {
        use crate::interpolated::InterpolatedEstimator;
        let h = Histogram::new(0.0, vec![1.0, 2.5, 4.0, 8.0], vec![3.0; 4]).unwrap();
        let a = AlignedEstimator::from_histogram(h.clone()).unwrap();
        let i = InterpolatedEstimator::from_histogram(h).unwrap();
        for q in [0.1, 0.25, 0.4, 0.5, 0.77, 1.0] {
            assert_eq!(a.query(q).unwrap(), i.query(q).unwrap());
        }
    }

    #[test]
    fn differential_entropy_prefers_point_bins() {
        assert_eq!(
            MergeEntropy::Differential.merge_loss(1.0, 1.0, 0.0, 1.0),
            f64::NEG_INFINITY
        );
        let mut e = AlignedEstimator::<f64>::with_entropy(3, MergeEntropy::Differential).unwrap();
        for d in [1.0, 2.0, 3.0, 10.0, 2.5, 0.5] {
            e.observe(d).unwrap();
            e.histogram().validate().unwrap();
        }
        assert_eq!(e.histogram().len(), 3);
        assert_eq!(e.histogram().total(), 6.0);
    }

    fn brute_force_merge(counts: &[f64]) -> usize {
        let scores: Vec<f64> = (0..counts.len() - 1)
            .map(|k| {
                let mut merged = counts.to_vec();
                let left = merged.remove(k);
                merged[k] += left;
                entropy_discrete(&merged).unwrap()
            })
            .collect();
        let best = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        scores
            .iter()
            .position(|&s| s >= best - 1e-12 * best.abs().max(1.0))
            .unwrap()
    }

    proptest! {
        #[test]
        fn choose_merge_matches_full_recompute(counts in prop::collection::vec(0.0f64..20.0, 2..40)) {
            prop_assume!(counts.iter().any(|&c| c > 0.0));
            prop_assert_eq!(choose_merge(&counts).unwrap(), brute_force_merge(&counts));
        }

        #[test]
        fn observe_invariants(data in prop::collection::vec(-50i32..50, 1..400), bins in 1usize..16) {
            let mut e = AlignedEstimator::<f64>::new(bins).unwrap();
            let mut seen = std::collections::BTreeSet::new();
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for (k, &raw) in data.iter().enumerate() {
                let d = raw as f64 * 0.5;
                e.observe(d).unwrap();
                seen.insert(raw);
                lo = lo.min(d);
                hi = hi.max(d);
                let h = e.histogram();
                h.validate().unwrap();
                prop_assert!(h.len() <= bins);
                prop_assert_eq!(h.total(), (k + 1) as f64);
                prop_assert_eq!(h.lower_origin(), lo);
                prop_assert_eq!(h.upper().unwrap(), hi);
                for b in h.boundaries() {
                    prop_assert!(seen.contains(&((b * 2.0) as i32)) && (b * 2.0).fract() == 0.0);
                }
            }
        }
    }
}
