//! Streaming quantile estimation in bounded memory.
//!
//! Two estimators keep a fixed-size histogram of everything seen so far and
//! adjust it so the histogram's bin-probability entropy stays as high as
//! possible:
//!
//! * [`InterpolatedEstimator`] keeps all bins equiprobable, moving every
//!   boundary after each datum by inverting the updated CDF.
//! * [`AlignedEstimator`] only places boundaries on observed values, adding a
//!   bin per datum and fusing the neighbouring pair whose merge loses the
//!   least entropy.
//!
//! [`baselines`] holds P², reservoir sampling and an equal-width adaptive
//! histogram for comparison, [`oracle`] the exact ground truth, and
//! [`metrics`] the error summaries used to score runs.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below name the usual double-precision instantiations.

pub mod aligned;
pub mod baselines;
pub mod error;
pub mod estimator;
pub mod histogram;
pub mod interpolated;
pub mod metrics;
pub mod oracle;
pub mod rng;
pub mod scalar;
pub mod streamgen;

pub use aligned::{AlignedEstimator, MergeEntropy};
pub use baselines::{EquispacedEstimator, P2Estimator, ReservoirEstimator};
pub use error::{Error, Result};
pub use estimator::QuantileEstimator;
pub use histogram::Histogram;
pub use interpolated::InterpolatedEstimator;
pub use metrics::ErrorSummary;
pub use oracle::ExactOracle;
pub use scalar::Scalar;

pub type Histogram64 = Histogram<f64>;
pub type Histogram32 = Histogram<f32>;
pub type InterpolatedEstimator64 = InterpolatedEstimator<f64>;
pub type AlignedEstimator64 = AlignedEstimator<f64>;
pub type AlignedEstimator32 = AlignedEstimator<f32>;
pub type P2Estimator64 = P2Estimator<f64>;
pub type ReservoirEstimator64 = ReservoirEstimator<f64>;
pub type EquispacedEstimator64 = EquispacedEstimator<f64>;
pub type ExactOracle64 = ExactOracle<f64>;
pub type ErrorSummary64 = ErrorSummary<f64>;
