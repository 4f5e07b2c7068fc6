use crate::error::{check_datum, check_level, Error, Result};
use crate::estimator::QuantileEstimator;
use crate::scalar::Scalar;

const MARKERS: usize = 5;

/// The P² estimator for a single quantile level.
///
/// Five markers track the minimum, the `q/2`, `q` and `(1+q)/2` quantiles and
/// the maximum. Interior markers that drift at least one rank away from their
/// desired position are moved by one rank with the piecewise-parabolic
/// formula, or linearly when the parabola would break marker ordering.
#[derive(Debug, Clone)]
pub struct P2Estimator<F> {
    q: F,
    heights: [F; MARKERS],
    positions: [u64; MARKERS],
    levels: [F; MARKERS],
    seen: u64,
}

impl<F: Scalar> P2Estimator<F> {
    pub fn new(q: F) -> Result<Self> {
        check_level(q.as_f64())?;
        let half = F::of(0.5);
        Ok(Self {
            q,
            heights: [F::zero(); MARKERS],
            positions: [1, 2, 3, 4, 5],
            levels: [F::zero(), q * half, q, (F::one() + q) * half, F::one()],
            seen: 0,
        })
    }

    pub fn level(&self) -> F {
        self.q
    }

    /// Marker heights; meaningful once five observations have been seen.
    pub fn markers(&self) -> &[F; MARKERS] {
        &self.heights
    }

    /// Actual 1-based ranks of the markers.
    pub fn positions(&self) -> &[u64; MARKERS] {
        &self.positions
    }

    /// The centre marker, i.e. the estimate of the configured quantile.
    pub fn estimate(&self) -> Result<F> {
        if self.seen < MARKERS as u64 {
            return Err(Error::NotWarmedUp {
                needed: MARKERS - self.seen as usize,
            });
        }
        Ok(self.heights[2])
    }

    fn desired(&self, i: usize) -> F {
        F::one() + F::of_count(self.seen - 1) * self.levels[i]
    }

    fn parabolic(&self, i: usize, step: F) -> F {
        let h = &self.heights;
        let n = |j: usize| F::of_count(self.positions[j]);
        let (np, ni, nn) = (n(i - 1), n(i), n(i + 1));
        h[i] + step / (nn - np)
            * ((ni - np + step) * (h[i + 1] - h[i]) / (nn - ni)
                + (nn - ni - step) * (h[i] - h[i - 1]) / (ni - np))
    }

    fn linear(&self, i: usize, step: F) -> F {
        let j = if step > F::zero() { i + 1 } else { i - 1 };
        let h = &self.heights;
        let dn = F::of_count(self.positions[j]) - F::of_count(self.positions[i]);
        h[i] + step * (h[j] - h[i]) / dn
    }
}

impl<F: Scalar> QuantileEstimator<F> for P2Estimator<F> {
    fn name(&self) -> &'static str {
        "p2"
    }

    fn observe(&mut self, x: F) -> Result<()> {
        check_datum(x.as_f64())?;
        if self.seen < MARKERS as u64 {
            self.heights[self.seen as usize] = x;
            self.seen += 1;
            if self.seen == MARKERS as u64 {
                self.heights
                    .sort_by(|a, b| a.partial_cmp(b).expect("finite data"));
            }
            return Ok(());
        }
        self.seen += 1;

        let h = &mut self.heights;
        let cell = if x < h[0] {
            h[0] = x;
            0
        } else if x >= h[4] {
            h[4] = x;
            3
        } else {
            (1..MARKERS).find(|&i| x < h[i]).expect("x below max") - 1
        };
        for p in &mut self.positions[cell + 1..] {
            *p += 1;
        }

        for i in 1..MARKERS - 1 {
            let drift = self.desired(i) - F::of_count(self.positions[i]);
            let room_up = self.positions[i + 1] - self.positions[i] > 1;
            let room_down = self.positions[i] - self.positions[i - 1] > 1;
            let step = if drift >= F::one() && room_up {
                F::one()
            } else if drift <= -F::one() && room_down {
                -F::one()
            } else {
                continue;
            };
            let candidate = self.parabolic(i, step);
            let h = &self.heights;
            self.heights[i] = if h[i - 1] < candidate && candidate < h[i + 1] {
                candidate
            } else {
                self.linear(i, step)
            };
            if step > F::zero() {
                self.positions[i] += 1;
            } else {
                self.positions[i] -= 1;
            }
        }
        Ok(())
    }

    fn query(&self, q: F) -> Result<F> {
        check_level(q.as_f64())?;
        if (q - self.q).abs() > F::of(1e-12) {
            return Err(Error::UnsupportedQuantile {
                configured: self.q.as_f64(),
                requested: q.as_f64(),
            });
        }
        self.estimate()
    }

    fn count(&self) -> u64 {
        self.seen
    }

    fn warmup(&self) -> usize {
        MARKERS
    }

    fn footprint(&self) -> usize {
        std::mem::size_of::<Self>()
    }
}
