//! Experiment configuration.
//!
//! A config file is TOML: top-level `key = value` lines, plus an optional
//! `[stream]` table with repeated `[[stream.segment]]` / `[[stream.spike]]`
//! blocks describing a synthetic source. Every top-level key has a matching
//! command-line flag that overrides the file.
//!
//! ```toml
//! q = 0.99
//! bins = [500, 100, 50, 25, 12]
//! estimators = ["aligned", "p2", "reservoir", "equispaced", "oracle"]
//! source = "preset:heavy-tail-drift"
//! seed = 7
//! stride = 1
//! out_trace = "trace.csv"
//! out_summary = "summary.csv"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use maxent_quantile::streamgen::StreamSpec;
use maxent_quantile::MergeEntropy;
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    Interpolated,
    Aligned,
    P2,
    Reservoir,
    Equispaced,
    Oracle,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 6] = [
        EstimatorKind::Interpolated,
        EstimatorKind::Aligned,
        EstimatorKind::P2,
        EstimatorKind::Reservoir,
        EstimatorKind::Equispaced,
        EstimatorKind::Oracle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorKind::Interpolated => "interpolated",
            EstimatorKind::Aligned => "aligned",
            EstimatorKind::P2 => "p2",
            EstimatorKind::Reservoir => "reservoir",
            EstimatorKind::Equispaced => "equispaced",
            EstimatorKind::Oracle => "oracle",
        }
    }

    /// The two maximal-entropy histogram methods.
    pub fn is_proposed(self) -> bool {
        matches!(self, EstimatorKind::Interpolated | EstimatorKind::Aligned)
    }

    /// Whether memory scales with the bin budget (P² always uses 5 markers).
    pub fn uses_bins(self) -> bool {
        !matches!(self, EstimatorKind::P2 | EstimatorKind::Oracle)
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimatorKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s.trim())
            .ok_or_else(|| BenchError::Config(format!("unknown estimator {s:?}")))
    }
}

/// Where the data come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Preset(String),
    /// A file, optionally restricted to one named CSV column.
    File {
        path: PathBuf,
        column: Option<String>,
    },
    /// The `[stream]` table of the config file.
    Inline,
}

impl FromStr for Source {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(name) = s.strip_prefix("preset:") {
            return Ok(Source::Preset(name.to_string()));
        }
        if s == "stream" {
            return Ok(Source::Inline);
        }
        let path = s.strip_prefix("file:").unwrap_or(s);
        if path.is_empty() {
            return Err(BenchError::Config("empty source".into()));
        }
        Ok(match path.rsplit_once('#') {
            Some((p, col)) if !col.is_empty() => Source::File {
                path: PathBuf::from(p),
                column: Some(col.to_string()),
            },
            _ => Source::File {
                path: PathBuf::from(path),
                column: None,
            },
        })
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Preset(n) => write!(f, "preset:{n}"),
            Source::File { path, column: None } => write!(f, "file:{}", path.display()),
            Source::File {
                path,
                column: Some(c),
            } => write!(f, "file:{}#{c}", path.display()),
            Source::Inline => f.write_str("stream"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every estimator at every bin budget.
    Run,
    /// Proposed estimators at every budget, baselines at the largest only.
    Sweep,
}

/// Contents of a config file; every field optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub q: Option<f64>,
    pub bins: Option<Vec<usize>>,
    pub estimators: Option<Vec<EstimatorKind>>,
    pub source: Option<String>,
    pub seed: Option<u64>,
    pub stride: Option<usize>,
    pub warmup_skip: Option<usize>,
    pub threads: Option<usize>,
    pub merge_entropy: Option<String>,
    pub out_trace: Option<PathBuf>,
    pub out_summary: Option<PathBuf>,
    pub out_plot: Option<PathBuf>,
    pub stream: Option<StreamSpec>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| BenchError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| BenchError::Config(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))
    }

    /// Fields set in `other` replace those set here.
    pub fn overridden_by(self, other: ConfigFile) -> ConfigFile {
        ConfigFile {
            q: other.q.or(self.q),
            bins: other.bins.or(self.bins),
            estimators: other.estimators.or(self.estimators),
            source: other.source.or(self.source),
            seed: other.seed.or(self.seed),
            stride: other.stride.or(self.stride),
            warmup_skip: other.warmup_skip.or(self.warmup_skip),
            threads: other.threads.or(self.threads),
            merge_entropy: other.merge_entropy.or(self.merge_entropy),
            out_trace: other.out_trace.or(self.out_trace),
            out_summary: other.out_summary.or(self.out_summary),
            out_plot: other.out_plot.or(self.out_plot),
            stream: other.stream.or(self.stream),
        }
    }
}

pub const TABLE_BINS: [usize; 5] = [500, 100, 50, 25, 12];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub q: f64,
    pub bins: Vec<usize>,
    pub estimators: Vec<EstimatorKind>,
    pub source: Source,
    pub stream: Option<StreamSpec>,
    /// Seeds the reservoir sampler.
    pub seed: u64,
    pub stride: usize,
    /// Leading stream steps excluded from scoring; defaults to the largest
    /// warm-up among the compared estimators.
    pub warmup_skip: Option<usize>,
    /// Worker threads for advancing estimators; 1 runs everything inline.
    pub threads: usize,
    pub merge_entropy: MergeEntropy,
    pub out_trace: Option<PathBuf>,
    pub out_summary: Option<PathBuf>,
    pub out_plot: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Applies defaults for `mode` and validates.
    pub fn resolve(mode: Mode, file: ConfigFile) -> Result<Self> {
        let bins = file.bins.unwrap_or_else(|| match mode {
            Mode::Run => vec![500],
            Mode::Sweep => TABLE_BINS.to_vec(),
        });
        let estimators = file
            .estimators
            .unwrap_or_else(|| EstimatorKind::ALL.to_vec());
        let source: Source = file
            .source
            .as_deref()
            .ok_or_else(|| BenchError::Config("no source given (--source or `source =`)".into()))?
            .parse()?;
        let merge_entropy = match file.merge_entropy.as_deref() {
            None | Some("discrete") => MergeEntropy::Discrete,
            Some("differential") => MergeEntropy::Differential,
            Some(other) => {
                return Err(BenchError::Config(format!(
                    "merge_entropy must be discrete or differential, got {other:?}"
                )))
            }
        };
        let cfg = ExperimentConfig {
            mode,
            q: file.q.unwrap_or(0.95),
            bins,
            estimators,
            source,
            stream: file.stream,
            seed: file.seed.unwrap_or(0),
            stride: file.stride.unwrap_or(1),
            warmup_skip: file.warmup_skip,
            threads: file.threads.unwrap_or(1),
            merge_entropy,
            out_trace: file.out_trace,
            out_summary: file.out_summary,
            out_plot: file.out_plot,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(BenchError::Config(m));
        if !(self.q > 0.0 && self.q <= 1.0) {
            return bad(format!("q = {} outside (0, 1]", self.q));
        }
        if self.estimators.is_empty() {
            return bad("at least one estimator is required".into());
        }
        if self.bins.is_empty() || self.bins.contains(&0) {
            return bad("bin budgets must be a non-empty list of positive integers".into());
        }
        if self.stride == 0 {
            return bad("stride must be at least 1".into());
        }
        if self.threads == 0 {
            return bad("threads must be at least 1".into());
        }
        if self.source == Source::Inline && self.stream.is_none() {
            return bad("source = \"stream\" needs a [stream] table".into());
        }
        Ok(())
    }

    /// Estimator instances to run, as (kind, bin budget) in column order.
    /// The oracle is implicit and never listed.
    pub fn instances(&self) -> Vec<(EstimatorKind, Option<usize>)> {
        let max_bins = *self.bins.iter().max().expect("validated");
        let mut out = Vec::new();
        for &kind in &self.estimators {
            if kind == EstimatorKind::Oracle {
                continue;
            }
            if !kind.uses_bins() {
                out.push((kind, None));
                continue;
            }
            match self.mode {
                Mode::Sweep if !kind.is_proposed() => out.push((kind, Some(max_bins))),
                _ => out.extend(self.bins.iter().map(|&b| (kind, Some(b)))),
            }
        }
        out.dedup();
        out
    }
}
