// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::sample::{Sample, MIN_SAMPLE_SIZE};

/// Which two columns of a comma-separated file to read, and which field
/// values mean "missing".
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub path: PathBuf,
    pub x_column: String,
    pub y_column: String,
    pub na_markers: Vec<String>,
}

impl DatasetSpec {
    /// Spec with the default missing-value markers `NA` and the empty field.
    pub fn new(path: impl Into<PathBuf>, x_column: &str, y_column: &str) -> Self {
        DatasetSpec {
            path: path.into(),
            x_column: x_column.to_string(),
            y_column: y_column.to_string(),
            na_markers: vec!["NA".to_string(), String::new()],
        }
    }
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub sample: Sample,
    pub rows_read: usize,
    /// Rows with a missing marker in the covariate or response column.
    pub rows_dropped: usize,
}

pub fn read_csv(spec: &DatasetSpec) -> Result<Dataset> {
    let file = std::fs::File::open(&spec.path).map_err(|e| Error::io(&spec.path, e))?;
    read_csv_from(file, spec)
}

/// Same as [`read_csv`], reading from an arbitrary source; `spec.path` is
/// only used in error messages.
pub fn read_csv_from(source: impl std::io::Read, spec: &DatasetSpec) -> Result<Dataset> {
    let path = spec.path.as_path();
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(source);
    let headers = reader.headers().map_err(|e| Error::csv(path, e))?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::MissingColumn {
                path: path.to_path_buf(),
                column: name.to_string(),
            })
    };
    let xi = column(&spec.x_column)?;
    let yi = column(&spec.y_column)?;

    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut rows_read = 0;
    let mut rows_dropped = 0;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::csv(path, e))?;
        rows_read += 1;
        // header is row 1
        let row = i + 2;
        let xs = record.get(xi).unwrap_or("").trim();
        let ys = record.get(yi).unwrap_or("").trim();
        if is_missing(xs, &spec.na_markers) || is_missing(ys, &spec.na_markers) {
            rows_dropped += 1;
            continue;
        }
        x.push(parse_field(xs, row, &spec.x_column)?);
        y.push(parse_field(ys, row, &spec.y_column)?);
    }
    if x.len() < MIN_SAMPLE_SIZE {
        return Err(Error::TooFewRows {
            path: path.to_path_buf(),
            rows: x.len(),
            required: MIN_SAMPLE_SIZE,
        });
    }
    Ok(Dataset {
        sample: Sample::new(x, y)?,
        rows_read,
        rows_dropped,
    })
}

fn is_missing(field: &str, markers: &[String]) -> bool {
    markers.iter().any(|m| m == field)
}

fn parse_field(field: &str, row: usize, column: &str) -> Result<f64> {
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse {
            row,
            column: column.to_string(),
            value: field.to_string(),
        }),
    }
}

/// Convenience for callers holding the text in memory.
pub fn read_csv_str(text: &str, spec: &DatasetSpec) -> Result<Dataset> {
    read_csv_from(text.as_bytes(), spec)
}
