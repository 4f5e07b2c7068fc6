use crate::error::Result;
use crate::scalar::Scalar;

/// Uniform observe/query interface shared by every estimator.
///
/// Instances are single-writer: `observe` takes `&mut self`, and nothing is
/// shared between instances, so each can live on its own thread.
pub trait QuantileEstimator<F: Scalar>: Send {
    /// Short identifier used in trace and summary columns.
    fn name(&self) -> &'static str;

    /// Feeds one datum. Non-finite input is rejected and leaves the state untouched.
    fn observe(&mut self, datum: F) -> Result<()>;

    /// Current estimate of the `q`-quantile.
    fn query(&self, q: F) -> Result<F>;

    /// Number of accepted observations.
    fn count(&self) -> u64;

    /// Observations needed before `query` is guaranteed to succeed.
    fn warmup(&self) -> usize;

    /// Bytes of state held by the estimator, heap allocations included.
    /// Depends on the configuration only, never on how much has been observed
    /// past warm-up.
    fn footprint(&self) -> usize;
}

pub(crate) fn vec_bytes<T>(v: &Vec<T>) -> usize {
    v.capacity() * std::mem::size_of::<T>()
}
