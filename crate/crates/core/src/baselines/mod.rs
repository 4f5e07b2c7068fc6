//! Comparison estimators from the streaming-quantile literature.

mod equispaced;
mod p2;
mod reservoir;

pub use equispaced::EquispacedEstimator;
pub use p2::P2Estimator;
pub use reservoir::ReservoirEstimator;
