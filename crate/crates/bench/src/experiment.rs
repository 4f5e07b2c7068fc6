//! Running estimators side by side over one series.

use log::{debug, info};
use maxent_quantile::metrics::compute_errors;
use maxent_quantile::streamgen::{generate, preset, preset_streams};
use maxent_quantile::{
    AlignedEstimator, EquispacedEstimator, Error as CoreError, ErrorSummary, ExactOracle,
    InterpolatedEstimator, P2Estimator, QuantileEstimator, ReservoirEstimator,
};

use crate::config::{EstimatorKind, ExperimentConfig, Source};
use crate::error::{BenchError, Result};
use crate::ingest::ingest_column;

/// One estimator's running estimates, aligned with [`RunTrace::indices`].
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub kind: EstimatorKind,
    pub bins: Option<usize>,
    /// Steps the estimator needs before it can answer.
    pub warmup: usize,
    /// `None` until the estimator is warm.
    pub values: Vec<Option<f64>>,
}

impl Column {
    /// Column header, e.g. `aligned_500` or `p2`.
    pub fn label(&self) -> String {
        match self.bins {
            Some(b) => format!("{}_{b}", self.kind),
            None => self.kind.to_string(),
        }
    }
}

/// Evaluated steps of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub q: f64,
    pub stride: usize,
    /// 1-based stream positions: `stride, 2*stride, ...`.
    pub indices: Vec<usize>,
    pub data: Vec<f64>,
    pub truth: Vec<f64>,
    pub columns: Vec<Column>,
}

impl RunTrace {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub kind: EstimatorKind,
    pub bins: Option<usize>,
    pub summary: ErrorSummary<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub trace: RunTrace,
    pub summaries: Vec<SummaryRow>,
    /// Stream steps excluded from every summary.
    pub warmup_skip: usize,
}

impl Outcome {
    pub fn summary(&self, kind: EstimatorKind, bins: Option<usize>) -> Option<&ErrorSummary<f64>> {
        self.summaries
            .iter()
            .find(|r| r.kind == kind && r.bins == bins)
            .map(|r| &r.summary)
    }
}

/// Materialises the configured source.
pub fn load_source(cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    match &cfg.source {
        Source::Preset(name) => {
            let spec = preset(name).ok_or_else(|| {
                let known: Vec<_> = preset_streams().into_iter().map(|(n, _)| n).collect();
                BenchError::Config(format!(
                    "unknown preset {name:?} (known: {})",
                    known.join(", ")
                ))
            })?;
            Ok(generate(&spec)?)
        }
        Source::File { path, column } => ingest_column(path, column.as_deref()),
        Source::Inline => {
            let spec = cfg
                .stream
                .as_ref()
                .ok_or_else(|| BenchError::Config("no [stream] table".into()))?;
            Ok(generate(spec)?)
        }
    }
}

fn build(
    kind: EstimatorKind,
    bins: Option<usize>,
    cfg: &ExperimentConfig,
) -> Result<Box<dyn QuantileEstimator<f64>>> {
    let n = bins.unwrap_or(0);
    Ok(match kind {
        EstimatorKind::Interpolated => Box::new(InterpolatedEstimator::new(n)?),
        EstimatorKind::Aligned => Box::new(AlignedEstimator::with_entropy(n, cfg.merge_entropy)?),
        EstimatorKind::P2 => Box::new(P2Estimator::new(cfg.q)?),
        EstimatorKind::Reservoir => Box::new(ReservoirEstimator::new(n, cfg.seed)?),
        EstimatorKind::Equispaced => Box::new(EquispacedEstimator::new(n)?),
        EstimatorKind::Oracle => unreachable!("the oracle is not a column"),
    })
}

enum Task {
    Truth,
    Estimator(Box<dyn QuantileEstimator<f64>>),
}

fn replay(task: Task, data: &[f64], stride: usize, q: f64) -> Result<Vec<Option<f64>>> {
    let mut out = Vec::with_capacity(data.len() / stride);
    match task {
        Task::Truth => {
            let mut oracle = ExactOracle::new(q)?;
            for (i, &x) in data.iter().enumerate() {
                oracle.observe(x)?;
                if (i + 1) % stride == 0 {
                    out.push(Some(oracle.current()?));
                }
            }
        }
        Task::Estimator(mut est) => {
            for (i, &x) in data.iter().enumerate() {
                est.observe(x)?;
                if (i + 1) % stride == 0 {
                    out.push(match est.query(q) {
                        Ok(v) => Some(v),
                        Err(CoreError::NotWarmedUp { .. }) => None,
                        Err(e) => return Err(e.into()),
                    });
                }
            }
        }
    }
    Ok(out)
}

fn replay_all(
    tasks: Vec<Task>,
    data: &[f64],
    cfg: &ExperimentConfig,
) -> Result<Vec<Vec<Option<f64>>>> {
    let (stride, q) = (cfg.stride, cfg.q);
    if cfg.threads <= 1 || tasks.len() <= 1 {
        return tasks
            .into_iter()
            .map(|t| replay(t, data, stride, q))
            .collect();
    }
    let workers = cfg.threads.min(tasks.len());
    let mut shares: Vec<Vec<(usize, Task)>> = (0..workers).map(|_| Vec::new()).collect();
    for (i, t) in tasks.into_iter().enumerate() {
        shares[i % workers].push((i, t));
    }
    let mut results: Vec<(usize, Result<Vec<Option<f64>>>)> = std::thread::scope(|s| {
        let handles: Vec<_> = shares
            .into_iter()
            .map(|share| {
                s.spawn(move || {
                    share
                        .into_iter()
                        .map(|(i, t)| (i, replay(t, data, stride, q)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("estimator thread panicked"))
            .collect()
    });
    results.sort_by_key(|(i, _)| *i);
    results.into_iter().map(|(_, r)| r).collect()
}

/// Feeds `data` to the oracle and every configured estimator, querying all
/// of them at each `stride`-th step, and scores each estimator against the
/// oracle over the steps after the shared warm-up skip.
pub fn run_experiment(cfg: &ExperimentConfig, data: &[f64]) -> Result<Outcome> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(BenchError::Config("source produced no values".into()));
    }
    let instances = cfg.instances();
    let mut tasks = vec![Task::Truth];
    let mut columns = Vec::with_capacity(instances.len());
    for &(kind, bins) in &instances {
        let est = build(kind, bins, cfg)?;
        columns.push(Column {
            kind,
            bins,
            warmup: est.warmup(),
            values: Vec::new(),
        });
        tasks.push(Task::Estimator(est));
    }
    info!(
        "replaying {} values through {} estimators (q = {}, stride = {})",
        data.len(),
        columns.len(),
        cfg.q,
        cfg.stride
    );
    let mut series = replay_all(tasks, data, cfg)?.into_iter();
    let truth: Vec<f64> = series
        .next()
        .expect("truth task")
        .into_iter()
        .map(|v| v.expect("oracle answers once it has data"))
        .collect();
    for (col, values) in columns.iter_mut().zip(series) {
        col.values = values;
    }

    let indices: Vec<usize> = (1..=data.len() / cfg.stride)
        .map(|k| k * cfg.stride)
        .collect();
    let trace = RunTrace {
        q: cfg.q,
        stride: cfg.stride,
        data: indices.iter().map(|&t| data[t - 1]).collect(),
        indices,
        truth,
        columns,
    };

    let warmup_skip = cfg
        .warmup_skip
        .unwrap_or_else(|| trace.columns.iter().map(|c| c.warmup).max().unwrap_or(0));
    let first_scored = trace.indices.partition_point(|&t| t <= warmup_skip);
    let mut summaries = Vec::with_capacity(trace.columns.len());
    for col in &trace.columns {
        let estimates = col.values[first_scored..]
            .iter()
            .map(|v| {
                v.ok_or_else(|| {
                    BenchError::Config(format!(
                        "{} is not warm after the warm-up skip of {warmup_skip} steps",
                        col.label()
                    ))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let summary = compute_errors(&trace.truth[first_scored..], &estimates, 0).map_err(|_| {
            BenchError::Config(format!(
                "no evaluated steps after the warm-up skip of {warmup_skip} (stream of {} values, stride {})",
                data.len(),
                cfg.stride
            ))
        })?;
        debug!(
            "{}: mean relative error {:.4}%, L-inf {:.4}",
            col.label(),
            summary.mean_relative_error_pct(),
            summary.max_absolute_error
        );
        summaries.push(SummaryRow {
            kind: col.kind,
            bins: col.bins,
            summary,
        });
    }
    Ok(Outcome {
        trace,
        summaries,
        warmup_skip,
    })
}
