use crate::error::{check_datum, check_level, Error, Result};
use crate::estimator::{vec_bytes, QuantileEstimator};
use crate::histogram::Histogram;
use crate::scalar::Scalar;

/// Adaptive histogram with equal-width bins whose range
/// grows to cover every datum.
///
/// The range is initialised from the first `n` observations. A datum above
/// the range doubles the width with the lower edge fixed, a datum below it
/// doubles the width with the upper edge fixed, as many times as needed.
/// Doubling maps old bins pairwise onto new ones, so counts move exactly.
#[derive(Debug, Clone)]
pub struct EquispacedEstimator<F> {
    bins: usize,
    low: F,
    high: F,
    counts: Vec<F>,
    total: F,
    warmup: Vec<F>,
    seen: u64,
}

impl<F: Scalar> EquispacedEstimator<F> {
    pub fn new(bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::Domain("bin budget must be positive".into()));
        }
        Ok(Self {
            bins,
            low: F::zero(),
            high: F::zero(),
            counts: Vec::new(),
            total: F::zero(),
            warmup: Vec::with_capacity(bins),
            seen: 0,
        })
    }

    /// Starts from an explicit range and counts.
    pub fn from_counts(low: F, high: F, counts: Vec<F>) -> Result<Self> {
        if counts.is_empty() || high.is_nan() || low.is_nan() || high <= low {
            return Err(Error::Domain("need at least one bin and high > low".into()));
        }
        if counts.iter().any(|&c| c.is_nan() || c < F::zero()) {
            return Err(Error::Domain("counts must be non-negative".into()));
        }
        let total = counts.iter().fold(F::zero(), |a, &c| a + c);
        Ok(Self {
            bins: counts.len(),
            low,
            high,
            seen: total.round().to_u64().unwrap_or(0),
            counts,
            total,
            warmup: Vec::new(),
        })
    }

    pub fn range(&self) -> (F, F) {
        (self.low, self.high)
    }

    pub fn counts(&self) -> &[F] {
        &self.counts
    }

    pub fn total(&self) -> F {
        self.total
    }

    pub fn is_warm(&self) -> bool {
        !self.counts.is_empty()
    }

    fn width(&self) -> F {
        (self.high - self.low) / F::of_count(self.bins as u64)
    }

    fn bin_of(&self, x: F) -> usize {
        let k = ((x - self.low) / self.width()).floor();
        k.to_usize().unwrap_or(0).min(self.bins - 1)
    }

    fn finish_warmup(&mut self) {
        let values = std::mem::take(&mut self.warmup);
        let lo = values.iter().copied().fold(F::infinity(), F::min);
        let hi = values.iter().copied().fold(F::neg_infinity(), F::max);
        self.low = lo;
        self.high = if hi > lo {
            hi
        } else {
            lo + F::of(1e-6) * lo.abs().max(F::one())
        };
        self.counts = vec![F::zero(); self.bins];
        for v in values {
            let k = self.bin_of(v);
            self.counts[k] = self.counts[k] + F::one();
            self.total = self.total + F::one();
        }
    }

    fn double_upward(&mut self) {
        let n = self.bins;
        for k in 0..n {
            let a = 2 * k;
            self.counts[k] = if a >= n {
                F::zero()
            } else if a + 1 < n {
                self.counts[a] + self.counts[a + 1]
            } else {
                self.counts[a]
            };
        }
        self.high = self.low + (self.high - self.low) * F::of(2.0);
    }

    fn double_downward(&mut self) {
        self.counts.reverse();
        let n = self.bins;
        for k in 0..n {
            let a = 2 * k;
            self.counts[k] = if a >= n {
                F::zero()
            } else if a + 1 < n {
                self.counts[a] + self.counts[a + 1]
            } else {
                self.counts[a]
            };
        }
        self.counts.reverse();
        self.low = self.high - (self.high - self.low) * F::of(2.0);
    }

    /// The equal-width histogram currently represented.
    pub fn histogram(&self) -> Result<Histogram<F>> {
        if !self.is_warm() {
            return Err(Error::NotWarmedUp {
                needed: self.bins - self.warmup.len(),
            });
        }
        let w = self.width();
        let mut bounds: Vec<F> = (1..self.bins)
            .map(|k| self.low + w * F::of_count(k as u64))
            .collect();
        bounds.push(self.high);
        Ok(Histogram::from_parts(
            self.low,
            bounds,
            self.counts.clone(),
            self.total,
        ))
    }
}

impl<F: Scalar> QuantileEstimator<F> for EquispacedEstimator<F> {
    fn name(&self) -> &'static str {
        "equispaced"
    }

    fn observe(&mut self, x: F) -> Result<()> {
        check_datum(x.as_f64())?;
        self.seen += 1;
        if !self.is_warm() {
            self.warmup.push(x);
            if self.warmup.len() == self.bins {
                self.finish_warmup();
            }
            return Ok(());
        }
        while x > self.high {
            self.double_upward();
        }
        while x < self.low {
            self.double_downward();
        }
        let k = self.bin_of(x);
        self.counts[k] = self.counts[k] + F::one();
        self.total = self.total + F::one();
        Ok(())
    }

    fn query(&self, q: F) -> Result<F> {
        check_level(q.as_f64())?;
        self.histogram()?.quantile(q)
    }

    fn count(&self) -> u64 {
        self.seen
    }

    fn warmup(&self) -> usize {
        self.bins
    }

    fn footprint(&self) -> usize {
        std::mem::size_of::<Self>() + vec_bytes(&self.counts) + vec_bytes(&self.warmup)
    }
}
