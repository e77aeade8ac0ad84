//! Dataset ingestion: newline-delimited decimals or CSV with a column.

use std::path::Path;

use evtail_core::SampleData;

use crate::error::{CliError, CliResult};

/// Reads a sample from `path`.
///
/// Without a column the file must hold one decimal value per line (blank
/// lines are skipped). With a column the file is parsed as CSV; the column
/// is a 0-based index when it parses as an integer, otherwise a header
/// name.
pub fn ingest(path: &Path, column: Option<&str>) -> CliResult<SampleData> {
    let values = match column {
        None => read_plain(path)?,
        Some(col) => read_csv(path, col)?,
    };
    if values.is_empty() {
        return Err(CliError::Domain(evtail_core::Error::InvalidSample));
    }
    SampleData::new(values).map_err(CliError::Domain)
}

fn read_plain(path: &Path) -> CliResult<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let token = raw.trim();
        if token.is_empty() {
            continue;
        }
        let value: f64 = token.parse().map_err(|_| CliError::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("expected a decimal number, got {token:?}"),
        })?;
        if !value.is_finite() {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("non-finite value {token:?}"),
            });
        }
        values.push(value);
    }
    Ok(values)
}

fn read_csv(path: &Path, column: &str) -> CliResult<Vec<f64>> {
    let by_index: Option<usize> = column.parse().ok();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(by_index.is_none())
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;

    let col_idx = match by_index {
        Some(i) => i,
        None => {
            let headers = reader.headers().map_err(|e| csv_error(path, e))?;
            headers
                .iter()
                .position(|h| h.trim() == column)
                .ok_or_else(|| {
                    CliError::Usage(format!("column {column:?} not found in the CSV header"))
                })?
        }
    };

    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or_default();
        let token = record.get(col_idx).ok_or_else(|| CliError::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("row has no column {col_idx}"),
        })?;
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        let value: f64 = token.parse().map_err(|_| CliError::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("expected a decimal number, got {token:?}"),
        })?;
        if !value.is_finite() {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("non-finite value {token:?}"),
            });
        }
        values.push(value);
    }
    Ok(values)
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    let line = match e.position() {
        Some(p) => p.line() as usize,
        None => 0,
    };
    CliError::Parse {
        path: path.to_path_buf(),
        line,
        message: e.to_string(),
    }
}
