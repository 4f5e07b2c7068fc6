//! Reading value series from text files.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use crate::error::{BenchError, Result};

/// Streams the values of a one-value-per-line file.
///
/// Blank lines are ignored. A first line that is not a number is taken as a
/// header and skipped. With `column` set the file is read as comma-separated
/// with a header row, and only that column is returned.
pub struct ValueReader<R> {
    path: PathBuf,
    lines: std::io::Lines<R>,
    line: usize,
    column: Option<usize>,
}

impl ValueReader<BufReader<File>> {
    pub fn open(path: &Path, column: Option<&str>) -> Result<Self> {
        let file = File::open(path).map_err(|source| BenchError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        ValueReader::new(path, BufReader::new(file), column)
    }
}

impl<R: BufRead> ValueReader<R> {
    pub fn new(path: &Path, reader: R, column: Option<&str>) -> Result<Self> {
        let mut out = ValueReader {
            path: path.to_path_buf(),
            lines: reader.lines(),
            line: 0,
            column: None,
        };
        if let Some(name) = column {
            let header = match out.next_line()? {
                Some(h) => h,
                None => return Err(BenchError::EmptyInput(out.path)),
            };
            let idx = header
                .split(',')
                .position(|c| c.trim() == name)
                .ok_or_else(|| {
                    BenchError::Config(format!("{}: no column {name:?}", path.display()))
                })?;
            out.column = Some(idx);
        }
        Ok(out)
    }

    fn next_line(&mut self) -> Result<Option<String>> {
        loop {
            let Some(line) = self.lines.next() else {
                return Ok(None);
            };
            self.line += 1;
            let line = line.map_err(|source| BenchError::Read {
                path: self.path.clone(),
                source,
            })?;
            if !line.trim().is_empty() {
                return Ok(Some(line));
            }
        }
    }

    fn parse(&self, line: &str) -> Option<f64> {
        let field = match self.column {
            Some(i) => line.split(',').nth(i)?,
            None => line,
        };
        let field = field.trim().trim_matches('"');
        field.parse::<f64>().ok().filter(|v| v.is_finite())
    }
}

impl<R: BufRead> Iterator for ValueReader<R> {
    type Item = Result<f64>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.next_line() {
                Ok(Some(l)) => l,
                Ok(None) => return None,
                Err(e) => return Some(Err(e)),
            };
            match self.parse(&line) {
                Some(v) => return Some(Ok(v)),
                None if self.line == 1 && self.column.is_none() => continue,
                None => {
                    return Some(Err(BenchError::Parse {
                        path: self.path.clone(),
                        line: self.line,
                        content: line,
                    }))
                }
            }
        }
    }
}

/// Reads every value of `path` in order.
pub fn ingest_file(path: &Path) -> Result<Vec<f64>> {
    ingest_column(path, None)
}

/// Like [`ingest_file`], restricted to one named column of a CSV file.
pub fn ingest_column(path: &Path, column: Option<&str>) -> Result<Vec<f64>> {
    let values = ValueReader::open(path, column)?.collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(BenchError::EmptyInput(path.to_path_buf()));
    }
    Ok(values)
}
