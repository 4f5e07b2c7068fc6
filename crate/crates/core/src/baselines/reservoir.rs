use crate::error::{check_datum, check_level, Error, Result};
use crate::estimator::{vec_bytes, QuantileEstimator};
use crate::rng::{below, seeded, StreamRng};
use crate::scalar::{quantile_rank, Scalar};

/// Uniform reservoir sample (algorithm R).
///
/// The first `capacity` items fill the buffer; item `i > capacity` then
/// replaces slot `j` when a uniform draw `j` from `[0, i)` is below the
/// capacity, so each item is admitted with probability `capacity / i`.
/// A sorted copy of the buffer is kept for order-statistic queries.
#[derive(Debug, Clone)]
pub struct ReservoirEstimator<F> {
    capacity: usize,
    buffer: Vec<F>,
    sorted: Vec<F>,
    seen: u64,
    rng: StreamRng,
}

impl<F: Scalar> ReservoirEstimator<F> {
    pub fn new(capacity: usize, seed: u64) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::Domain("reservoir capacity must be positive".into()));
        }
        Ok(Self {
            capacity,
            buffer: Vec::with_capacity(capacity),
            sorted: Vec::with_capacity(capacity),
            seen: 0,
            rng: seeded(seed),
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Sample in slot order.
    pub fn buffer(&self) -> &[F] {
        &self.buffer
    }

    fn sorted_insert(&mut self, x: F) {
        let at = self.sorted.partition_point(|&v| v < x);
        self.sorted.insert(at, x);
    }

    fn sorted_remove(&mut self, x: F) {
        let at = self.sorted.partition_point(|&v| v < x);
        debug_assert!(self.sorted[at] == x);
        self.sorted.remove(at);
    }
}

impl<F: Scalar> QuantileEstimator<F> for ReservoirEstimator<F> {
    fn name(&self) -> &'static str {
        "reservoir"
    }

    fn observe(&mut self, x: F) -> Result<()> {
        check_datum(x.as_f64())?;
        self.seen += 1;
        if self.buffer.len() < self.capacity {
            self.buffer.push(x);
            self.sorted_insert(x);
            return Ok(());
        }
        let slot = below(&mut self.rng, self.seen) as usize;
        if slot < self.capacity {
            let old = std::mem::replace(&mut self.buffer[slot], x);
            self.sorted_remove(old);
            self.sorted_insert(x);
        }
        Ok(())
    }

    /// The `ceil(q * m)`-th smallest of the `m` buffered values.
    fn query(&self, q: F) -> Result<F> {
        check_level(q.as_f64())?;
        if self.sorted.is_empty() {
            return Err(Error::NotWarmedUp { needed: 1 });
        }
        Ok(self.sorted[quantile_rank(q.as_f64(), self.sorted.len()) - 1])
    }

    fn count(&self) -> u64 {
        self.seen
    }

    fn warmup(&self) -> usize {
        self.capacity
    }

    fn footprint(&self) -> usize {
        std::mem::size_of::<Self>() + vec_bytes(&self.buffer) + vec_bytes(&self.sorted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fills_before_replacing() {
        let mut r = ReservoirEstimator::new(3, 1).unwrap();
        for x in [5.0f64, 1.0, 9.0] {
            r.observe(x).unwrap();
        }
        assert_eq!(r.buffer(), &[5.0, 1.0, 9.0]);
        assert_eq!(r.query(0.5).unwrap(), 5.0);
        assert_eq!(r.query(1.0).unwrap(), 9.0);
        assert_eq!(r.query(0.1).unwrap(), 1.0);
    }

    #[test]
    fn identical_values() {
        let mut r = ReservoirEstimator::new(4, 9).unwrap();
        for _ in 0..50 {
            r.observe(2.5f64).unwrap();
        }
        for q in [0.01, 0.5, 1.0] {
            assert_eq!(r.query(q).unwrap(), 2.5);
        }
    }

    #[test]
    fn seed_determinism() {
        let run = |seed| {
            let mut r = ReservoirEstimator::new(10, seed).unwrap();
            for i in 0..1000 {
                r.observe(i as f64).unwrap();
            }
            r.buffer().to_vec()
        };
        assert_eq!(run(7), run(7));
        assert_ne!(run(7), run(8));
    }

    #[test]
    fn size_invariant_and_sorted_mirror() {
        let mut r = ReservoirEstimator::new(16, 3).unwrap();
        for i in 0..5000u32 {
            r.observe(((i * 7919) % 1013) as f64).unwrap();
            assert_eq!(r.buffer().len(), (i as usize + 1).min(16));
            let mut b = r.buffer().to_vec();
            b.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_eq!(b, r.sorted);
        }
    }

    #[test]
    fn errors() {
        let r = ReservoirEstimator::<f64>::new(2, 0).unwrap();
        assert_eq!(r.query(0.5), Err(Error::NotWarmedUp { needed: 1 }));
        assert!(ReservoirEstimator::<f64>::new(0, 0).is_err());
        let mut r = r;
        assert!(r.observe(f64::INFINITY).is_err());
        assert_eq!(r.count(), 0);
    }
}
