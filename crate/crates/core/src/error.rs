use thiserror::Error;

/// Which side of the histogram support a query fell outside of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Below => f.write_str("below the lower origin"),
            Side::Above => f.write_str("above the last boundary"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value {value} is {side} of the histogram support")]
    OutOfRange { value: f64, side: Side },

    #[error("estimator not warmed up: {needed} more observation(s) required")]
    NotWarmedUp { needed: usize },

    #[error("histogram is empty")]
    Empty,

    #[error("non-finite datum {0} rejected")]
    NonFiniteDatum(f64),

    #[error("quantile level {0} outside (0, 1]")]
    InvalidQuantile(f64),

    #[error("estimator tracks q = {configured}, cannot answer q = {requested}")]
    UnsupportedQuantile { configured: f64, requested: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid histogram: {0}")]
    InvalidHistogram(String),

    #[error("invalid stream spec: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_level(q: f64) -> Result<()> {
    if q > 0.0 && q <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidQuantile(q))
    }
}

pub(crate) fn check_datum(d: f64) -> Result<()> {
    if d.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteDatum(d))
    }
}
