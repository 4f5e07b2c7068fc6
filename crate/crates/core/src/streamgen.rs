//! Seeded synthetic streams with regime changes and spikes.
//!
//! A [`StreamSpec`] is a program of consecutive segments, each drawing from
//! one distribution family, plus a schedule of spikes. A spike at position
//! `k` overrides the drawn value with `multiplier * max(output[..k])`, i.e. a
//! datum far above anything seen so far.
//!
//! Specs (de)serialise to TOML:
//!
//! ```toml
//! length = 6
//! seed = 1
//!
//! [[segment]]
//! family = "log-normal"
//! scale = 100.0
//! sigma = 0.5
//! duration = 6
//!
//! [[spike]]
//! position = 4
//! multiplier = 10.0
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{seeded, standard_normal, unit_f64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Constant {
        value: f64,
    },
    Uniform {
        low: f64,
        high: f64,
    },
    /// `scale * exp(sigma * z)` with `z` standard normal. With `end_scale` set
    /// the scale moves geometrically from `scale` to `end_scale` over the
    /// segment.
    LogNormal {
        scale: f64,
        sigma: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        end_scale: Option<f64>,
    },
}

impl Family {
    /// Typical magnitude, used to describe level shifts between segments.
    pub fn scale(&self) -> f64 {
        match *self {
            Family::Constant { value } => value,
            Family::Uniform { low, high } => 0.5 * (low + high),
            Family::LogNormal { scale, .. } => scale,
        }
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let ok = match *self {
            Family::Constant { value } => value > 0.0 && value.is_finite(),
            Family::Uniform { low, high } => low > 0.0 && high > low && high.is_finite(),
            Family::LogNormal {
                scale,
                sigma,
                end_scale,
            } => {
                scale > 0.0
                    && scale.is_finite()
                    && sigma >= 0.0
                    && sigma.is_finite()
                    && end_scale.is_none_or(|e| e > 0.0 && e.is_finite())
            }
        };
        if ok {
            Ok(())
        } else {
            Err(format!("non-positive or non-finite parameters in {self:?}"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(flatten)]
    pub family: Family,
    pub duration: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spike {
    /// 0-based index in the output.
    pub position: usize,
    pub multiplier: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamSpec {
    pub length: usize,
    pub seed: u64,
    #[serde(rename = "segment")]
    pub segments: Vec<Segment>,
    #[serde(rename = "spike", default, skip_serializing_if = "Vec::is_empty")]
    pub spikes: Vec<Spike>,
}

impl StreamSpec {
    pub fn validate(&self) -> Result<()> {
        if self.length == 0 {
            return Err(Error::Config("stream length must be positive".into()));
        }
        if self.segments.is_empty() {
            return Err(Error::Config("at least one segment is required".into()));
        }
        for (i, seg) in self.segments.iter().enumerate() {
            if seg.duration == 0 {
                return Err(Error::Config(format!(
                    "segment {} has zero duration",
                    i + 1
                )));
            }
            seg.family
                .validate()
                .map_err(|m| Error::Config(format!("segment {}: {}", i + 1, m)))?;
        }
        let sum: usize = self.segments.iter().map(|s| s.duration).sum();
        if sum != self.length {
            return Err(Error::Config(format!(
                "segment durations sum to {} but length is {}",
                sum, self.length
            )));
        }
        for (i, s) in self.spikes.iter().enumerate() {
            if s.position == 0 || s.position >= self.length {
                return Err(Error::Config(format!(
                    "spike {} at position {} outside 1..{}",
                    i + 1,
                    s.position,
                    self.length
                )));
            }
            if !(s.multiplier > 0.0 && s.multiplier.is_finite()) {
                return Err(Error::Config(format!(
                    "spike {} has non-positive multiplier {}",
                    i + 1,
                    s.multiplier
                )));
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("stream specs always serialise")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }
}

/// Materialises the stream described by `spec`.
pub fn generate(spec: &StreamSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut rng = seeded(spec.seed);
    let mut out = Vec::with_capacity(spec.length);
    for seg in &spec.segments {
        let steps = seg.duration;
        for t in 0..steps {
            let v = match seg.family {
                Family::Constant { value } => value,
                Family::Uniform { low, high } => low + (high - low) * unit_f64(&mut rng),
                Family::LogNormal {
                    scale,
                    sigma,
                    end_scale,
                } => {
                    let s = match end_scale {
                        Some(end) if steps > 1 => {
                            scale * (end / scale).powf(t as f64 / (steps - 1) as f64)
                        }
                        _ => scale,
                    };
                    s * (sigma * standard_normal(&mut rng)).exp()
                }
            };
            out.push(v);
        }
    }
    let mut spikes: Vec<&Spike> = spec.spikes.iter().collect();
    spikes.sort_by_key(|s| s.position);
    let mut running_max = f64::NEG_INFINITY;
    let mut next = 0;
    for (k, v) in out.iter_mut().enumerate() {
        if next < spikes.len() && spikes[next].position == k {
            *v = spikes[next].multiplier * running_max;
            while next < spikes.len() && spikes[next].position == k {
                next += 1;
            }
        }
        running_max = running_max.max(*v);
    }
    Ok(out)
}

fn lognormal(scale: f64, sigma: f64, duration: usize) -> Segment {
    Segment {
        family: Family::LogNormal {
            scale,
            sigma,
            end_scale: None,
        },
        duration,
    }
}

fn drifting(scale: f64, end_scale: f64, sigma: f64, duration: usize) -> Segment {
    Segment {
        family: Family::LogNormal {
            scale,
            sigma,
            end_scale: Some(end_scale),
        },
        duration,
    }
}

/// Length of every preset stream.
pub const PRESET_LENGTH: usize = 100_000;

/// Fixed benchmark streams, by name.
///
/// * `spiky`: moderate log-normal regimes interrupted by data points an order
///   of magnitude above everything before them.
/// * `shifting`: the level drops in steps, each new regime under a quarter of
///   the previous one.
/// * `heavy-tail-drift`: a slowly drifting log-normal whose tail thickens
///   and thins, for high quantiles.
pub fn preset_streams() -> Vec<(&'static str, StreamSpec)> {
    vec![
        (
            "spiky",
            StreamSpec {
                length: PRESET_LENGTH,
                seed: 0x5eed_0001,
                segments: vec![
                    lognormal(10.0, 0.5, 25_000),
                    drifting(10.0, 25.0, 0.6, 25_000),
                    lognormal(15.0, 0.4, 25_000),
                    drifting(15.0, 8.0, 0.5, 25_000),
                ],
                spikes: vec![
                    Spike {
                        position: 15_000,
                        multiplier: 20.0,
                    },
                    Spike {
                        position: 40_000,
                        multiplier: 10.0,
                    },
                    Spike {
                        position: 65_000,
                        multiplier: 10.0,
                    },
                    Spike {
                        position: 85_000,
                        multiplier: 5.0,
                    },
                ],
            },
        ),
        (
            "shifting",
            StreamSpec {
                length: PRESET_LENGTH,
                seed: 0x5eed_0002,
                segments: vec![
                    lognormal(100.0, 0.3, 20_000),
                    lognormal(20.0, 0.3, 30_000),
                    lognormal(4.0, 0.3, 50_000),
                ],
                spikes: Vec::new(),
            },
        ),
        (
            "heavy-tail-drift",
            StreamSpec {
                length: PRESET_LENGTH,
                seed: 0x5eed_0003,
                segments: vec![
                    drifting(5.0, 10.0, 0.5, 30_000),
                    drifting(10.0, 10.0, 1.0, 30_000),
                    drifting(10.0, 4.0, 0.7, 40_000),
                ],
                spikes: Vec::new(),
            },
        ),
    ]
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Option<StreamSpec> {
    preset_streams()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(length: usize) -> StreamSpec {
        StreamSpec {
            length,
            seed: 1,
            segments: vec![Segment {
                family: Family::Constant { value: 5.0 },
                duration: length,
            }],
            spikes: Vec::new(),
        }
    }

    #[test]
    fn constant_segment() {
        assert_eq!(generate(&constant(4)).unwrap(), vec![5.0; 4]);
    }

    #[test]
    fn deterministic_for_seed() {
        let spec = preset("spiky").unwrap();
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let mut other = spec.clone();
        other.seed += 1;
        assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn spike_is_multiple_of_running_max() {
        let mut spec = StreamSpec {
            length: 50,
            seed: 3,
            segments: vec![Segment {
                family: Family::Uniform {
                    low: 1.0,
                    high: 2.0,
                },
                duration: 50,
            }],
            spikes: vec![
                Spike {
                    position: 20,
                    multiplier: 10.0,
                },
                Spike {
                    position: 30,
                    multiplier: 2.0,
                },
            ],
        };
        let out = generate(&spec).unwrap();
        let max_before = |k: usize| out[..k].iter().cloned().fold(f64::MIN, f64::max);
        assert_eq!(out[20], 10.0 * max_before(20));
        assert_eq!(out[30], 2.0 * max_before(30));
        spec.spikes.clear();
        let plain = generate(&spec).unwrap();
        assert_eq!(plain[..20], out[..20]);
        assert_eq!(plain[21..30], out[21..30]);
    }

    #[test]
    fn validation_names_segment() {
        let mut spec = constant(4);
        spec.segments.push(Segment {
            family: Family::LogNormal {
                scale: -1.0,
                sigma: 1.0,
                end_scale: None,
            },
            duration: 2,
        });
        spec.length = 6;
        let err = generate(&spec).unwrap_err().to_string();
        assert!(err.contains("segment 2"), "{err}");

        let mut spec = constant(4);
        spec.segments[0].duration = 0;
        assert!(generate(&spec)
            .unwrap_err()
            .to_string()
            .contains("segment 1 has zero duration"));

        let mut spec = constant(4);
        spec.length = 5;
        assert!(generate(&spec).is_err());

        let mut spec = constant(4);
        spec.spikes.push(Spike {
            position: 0,
            multiplier: 3.0,
        });
        assert!(generate(&spec).is_err());
    }

    #[test]
    fn presets_by_construction() {
        let presets = preset_streams();
        assert_eq!(presets.len(), 3);
        for (name, spec) in &presets {
            spec.validate().unwrap();
            assert!(spec.length >= 100_000, "{name}");
            let data = generate(spec).unwrap();
            assert_eq!(data.len(), spec.length);
            assert!(data.iter().all(|&v| v > 0.0 && v.is_finite()), "{name}");
        }
        assert!(preset("spiky").unwrap().spikes.len() >= 3);
        let shifting = preset("shifting").unwrap();
        assert!(shifting
            .segments
            .windows(2)
            .any(|w| w[1].family.scale() < 0.25 * w[0].family.scale()));
        assert!(preset("nope").is_none());
    }

    #[test]
    fn toml_round_trip() {
        for (_, spec) in preset_streams() {
            let text = spec.to_toml();
            assert_eq!(StreamSpec::from_toml(&text).unwrap(), spec);
        }
    }
}
