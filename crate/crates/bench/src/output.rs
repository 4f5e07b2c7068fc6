//! Trace, summary and plot-data files.
//!
//! Every file is written to a temporary sibling and renamed into place, so a
//! reader never sees a partial file.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{BenchError, Result};
use crate::experiment::{RunTrace, SummaryRow};

pub const SUMMARY_HEADER: &str = "estimator,bins,mean_relative_error_pct,linf_error";

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let err = |source| BenchError::Write {
        path: path.to_path_buf(),
        source,
    };
    let name = path
        .file_name()
        .ok_or_else(|| err(std::io::Error::other("not a file path")))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp: PathBuf = path.with_file_name(tmp_name);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(err)
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV with header `index,datum,truth,<column labels>`; cells of estimators
/// that are not yet warm are empty.
pub fn render_trace(trace: &RunTrace) -> String {
    let mut out = String::from("index,datum,truth");
    for c in &trace.columns {
        out.push(',');
        out.push_str(&c.label());
    }
    out.push('\n');
    for (r, &t) in trace.indices.iter().enumerate() {
        let _ = write!(out, "{t},{},{}", trace.data[r], trace.truth[r]);
        for c in &trace.columns {
            out.push(',');
            out.push_str(&cell(c.values[r]));
        }
        out.push('\n');
    }
    out
}

/// CSV with one row per estimator and budget. P² has no budget, so its
/// `bins` cell is empty.
pub fn render_summary(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        let bins = r.bins.map(|b| b.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{bins},{:.6},{:.6}",
            r.kind,
            r.summary.mean_relative_error_pct(),
            r.summary.max_absolute_error
        );
    }
    out
}

/// Whitespace-separated columns for gnuplot, `NaN` marking missing values.
///
/// ```text
/// gnuplot> plot "trace.dat" using 1:2 with dots, "" using 1:3 with lines
/// ```
pub fn render_plot(trace: &RunTrace) -> String {
    let mut out = String::from("# index datum truth");
    for c in &trace.columns {
        out.push(' ');
        out.push_str(&c.label());
    }
    out.push('\n');
    for (r, &t) in trace.indices.iter().enumerate() {
        let _ = write!(out, "{t} {} {}", trace.data[r], trace.truth[r]);
        for c in &trace.columns {
            let _ = write!(out, " {}", c.values[r].unwrap_or(f64::NAN));
        }
        out.push('\n');
    }
    out
}

/// Table for the terminal.
pub fn render_table(rows: &[SummaryRow]) -> String {
    let mut out = format!(
        "{:<14}{:>6}{:>14}{:>14}\n",
        "estimator", "bins", "mean rel %", "L-inf"
    );
    for r in rows {
        let bins = r.bins.map(|b| b.to_string()).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:<14}{:>6}{:>14.4}{:>14.4}",
            r.kind.as_str(),
            bins,
            r.summary.mean_relative_error_pct(),
            r.summary.max_absolute_error
        );
    }
    out
}

/// Writes whichever of the trace, summary and plot files are configured.
pub fn emit_outputs(
    trace: &RunTrace,
    rows: &[SummaryRow],
    out_trace: Option<&Path>,
    out_summary: Option<&Path>,
    out_plot: Option<&Path>,
) -> Result<()> {
    if let Some(p) = out_trace {
        write_atomic(p, &render_trace(trace))?;
    }
    if let Some(p) = out_summary {
        write_atomic(p, &render_summary(rows))?;
    }
    if let Some(p) = out_plot {
        write_atomic(p, &render_plot(trace))?;
    }
    Ok(())
}
