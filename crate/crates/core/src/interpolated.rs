//! Equiprobable ("interpolated bins") estimator.
//!
//! Every bin holds `total / n` observations at all times after warm-up.
//! Each new datum adds a jump of `1 / (i + 1)` to the CDF while scaling the
//! previous piecewise-linear CDF by `i / (i + 1)`; the boundaries are then
//! moved to the points where that stepped CDF first reaches `1/n, 2/n, ...`,
//! found by inverting it linearly within each bin.

use crate::error::{check_datum, check_level, Error, Result};
use crate::estimator::{vec_bytes, QuantileEstimator};
use crate::histogram::{Histogram, COUNT_TOLERANCE};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct InterpolatedEstimator<F> {
    bins: usize,
    hist: Histogram<F>,
    warmup: Vec<F>,
    scratch: Vec<F>,
    seen: u64,
}

/// Smallest value strictly above `b` that keeps adjacent boundaries apart.
pub(crate) fn separated_above<F: Scalar>(b: F) -> F {
    let rel = F::of(1e-12).max(F::epsilon() * F::of(4.0));
    b + rel * b.abs().max(F::one())
}

impl<F: Scalar> InterpolatedEstimator<F> {
    pub fn new(bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::Domain("bin budget must be positive".into()));
        }
        Ok(Self {
            bins,
            hist: Histogram::empty(),
            warmup: Vec::with_capacity(bins),
            scratch: Vec::new(),
            seen: 0,
        })
    }

    /// Resumes from an existing equiprobable histogram whose total is the
    /// number of observations already absorbed.
    pub fn from_histogram(hist: Histogram<F>) -> Result<Self> {
        hist.validate()?;
        if hist.is_empty() || hist.total() <= F::zero() {
            return Err(Error::Empty);
        }
        let share = hist.total() / F::of_count(hist.len() as u64);
        let tol = F::of(COUNT_TOLERANCE) * share;
        if hist.counts().iter().any(|&c| (c - share).abs() > tol) {
            return Err(Error::InvalidHistogram("bins are not equiprobable".into()));
        }
        let bins = hist.len();
        let seen = hist.total().round().to_u64().unwrap_or(0);
        Ok(Self {
            bins,
            hist,
            warmup: Vec::new(),
            scratch: Vec::with_capacity(bins),
            seen,
        })
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    /// The maintained histogram; empty until warm-up completes.
    pub fn histogram(&self) -> &Histogram<F> {
        &self.hist
    }

    pub fn is_warm(&self) -> bool {
        !self.hist.is_empty()
    }

    fn finish_warmup(&mut self) {
        let mut values = std::mem::take(&mut self.warmup);
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite data"));
        let n = values.len();
        for j in 1..n {
            if values[j] <= values[j - 1] {
                values[j] = separated_above(values[j - 1]);
            }
        }
        let total = F::of_count(n as u64);
        let counts = vec![total / F::of_count(n as u64); n];
        self.hist = Histogram::from_parts(values[0], values, counts, total);
        self.scratch = Vec::with_capacity(n);
    }

    /// Inverse CDF of the current histogram, whose bins hold equal counts.
    /// Agrees with [`Histogram::inverse_cdf`] but runs in constant time.
    fn equiprobable_inverse(&self, u: F) -> F {
        let bounds = self.hist.boundaries();
        let n = bounds.len();
        let nf = F::of_count(n as u64);
        let edge = |j: usize| {
            if j == 0 {
                self.hist.lower_origin()
            } else {
                bounds[j - 1]
            }
        };
        let x = u.max(F::zero()).min(F::one()) * nf;
        let tol = F::epsilon() * F::of(64.0) * nf;
        let whole = x.floor();
        let frac = x - whole;
        let j = whole.to_usize().unwrap_or(0);
        if j >= n || F::one() - frac <= tol {
            return edge((j + 1).min(n));
        }
        if frac <= tol {
            return edge(j);
        }
        let (lo, hi) = (edge(j), bounds[j]);
        (lo + frac * (hi - lo)).min(hi)
    }

    fn absorb(&mut self, d: F) {
        let n = self.bins;
        let old_total = self.hist.total();
        let new_total = old_total + F::one();
        let scale = old_total / new_total;
        let step = F::one() / new_total;

        {
            let (origin, bounds, _, _) = self.hist.parts_mut();
            if d < *origin {
                *origin = d;
            }
            let last = bounds.len() - 1;
            if d > bounds[last] {
                bounds[last] = d;
            }
        }
        let origin = self.hist.lower_origin();
        let upper = self.hist.upper().expect("warm histogram");

        // Stepped CDF: scale * F(x) for x < d, scale * F(x) + step for x >= d.
        let below = if d <= origin {
            F::zero()
        } else {
            scale * self.hist.cdf(d).expect("d inside extended range")
        };
        let above = below + step;

        self.scratch.clear();
        let nf = F::of_count(n as u64);
        for j in 1..n {
            let level = F::of_count(j as u64) / nf;
            let b = if level <= below {
                self.equiprobable_inverse(level / scale)
            } else if level <= above {
                d
            } else {
                self.equiprobable_inverse((level - step) / scale)
            };
            self.scratch.push(b);
        }
        self.scratch.push(upper);

        for j in 1..n {
            if self.scratch[j] <= self.scratch[j - 1] {
                self.scratch[j] = separated_above(self.scratch[j - 1]);
            }
        }

        let (_, bounds, counts, total) = self.hist.parts_mut();
        std::mem::swap(bounds, &mut self.scratch);
        let share = new_total / nf;
        counts.iter_mut().for_each(|c| *c = share);
        *total = new_total;
    }
}

impl<F: Scalar> QuantileEstimator<F> for InterpolatedEstimator<F> {
    fn name(&self) -> &'static str {
        "interpolated"
    }

    fn observe(&mut self, d: F) -> Result<()> {
        check_datum(d.as_f64())?;
        self.seen += 1;
        if self.is_warm() {
            self.absorb(d);
        } else {
            self.warmup.push(d);
            if self.warmup.len() == self.bins {
                self.finish_warmup();
            }
        }
        Ok(())
    }

    fn query(&self, q: F) -> Result<F> {
        check_level(q.as_f64())?;
        if !self.is_warm() {
            return Err(Error::NotWarmedUp {
                needed: self.bins - self.warmup.len(),
            });
        }
        self.hist.quantile(q)
    }

    fn count(&self) -> u64 {
        self.seen
    }

    fn warmup(&self) -> usize {
        self.bins
    }

    fn footprint(&self) -> usize {
        std::mem::size_of::<Self>()
            + vec_bytes(&self.warmup)
            + vec_bytes(&self.scratch)
            + self.hist.heap_bytes()
    }
}
