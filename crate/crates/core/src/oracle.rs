//! Exact ground truth by full retention.
//!
//! The `q`-quantile of a multiset `D` is its `ceil(q |D|)`-th smallest value.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{check_datum, check_level, Error, Result};
use crate::scalar::{quantile_rank, Scalar};

/// The `ceil(q |D|)`-th order statistic of `data`.
pub fn exact_quantile<F: Scalar>(data: &[F], q: F) -> Result<F> {
    check_level(q.as_f64())?;
    if data.is_empty() {
        return Err(Error::Empty);
    }
    let mut scratch = data.to_vec();
    let r = quantile_rank(q.as_f64(), scratch.len());
    let (_, nth, _) =
        scratch.select_nth_unstable_by(r - 1, |a, b| a.partial_cmp(b).expect("finite data"));
    Ok(*nth)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key<F>(F);

impl<F: PartialOrd> Eq for Key<F> {}

impl<F: PartialOrd> PartialOrd for Key<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: PartialOrd> Ord for Key<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).expect("finite data")
    }
}

/// Running exact quantile at a fixed level.
///
/// The `ceil(q N)` smallest values sit in a max-heap and the rest in a
/// min-heap, so the answer is always the top of the lower heap and each
/// observation costs `O(log N)`.
#[derive(Debug, Clone)]
pub struct ExactOracle<F> {
    q: f64,
    lower: BinaryHeap<Key<F>>,
    upper: BinaryHeap<Reverse<Key<F>>>,
}

impl<F: Scalar> ExactOracle<F> {
    pub fn new(q: F) -> Result<Self> {
        check_level(q.as_f64())?;
        Ok(Self {
            q: q.as_f64(),
            lower: BinaryHeap::new(),
            upper: BinaryHeap::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.lower.len() + self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn observe(&mut self, x: F) -> Result<()> {
        check_datum(x.as_f64())?;
        match self.lower.peek() {
            Some(top) if x <= top.0 => self.lower.push(Key(x)),
            _ => self.upper.push(Reverse(Key(x))),
        }
        let want = quantile_rank(self.q, self.len());
        while self.lower.len() > want {
            let moved = self.lower.pop().expect("non-empty");
            self.upper.push(Reverse(moved));
        }
        while self.lower.len() < want {
            let Reverse(moved) = self.upper.pop().expect("non-empty");
            self.lower.push(moved);
        }
        Ok(())
    }

    /// Exact quantile at the configured level.
    pub fn current(&self) -> Result<F> {
        self.lower.peek().map(|k| k.0).ok_or(Error::Empty)
    }

    /// Exact quantile at an arbitrary level; linear time.
    pub fn quantile(&self, q: F) -> Result<F> {
        let all: Vec<F> = self
            .lower
            .iter()
            .map(|k| k.0)
            .chain(self.upper.iter().map(|r| r.0 .0))
            .collect();
        exact_quantile(&all, q)
    }
}
