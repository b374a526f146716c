//! Matrix CSV files: one row per user, one column per carrier, no header.
//! Lines starting with `#` are comments.

use std::path::Path;

use mccdma::{ChannelMatrix, PowerAllocation};

use crate::error::CliError;

pub fn read_matrix(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_matrix(path, &text)
}

pub fn parse_matrix(path: &Path, text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::parse(path, e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(field, value)| {
                value.parse::<f64>().map_err(|_| {
                    CliError::parse(
                        path,
                        format!(
                            "line {line}, field {}: `{value}` is not a number",
                            field + 1
                        ),
                    )
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(CliError::parse(
                    path,
                    format!(
                        "line {line}: expected {} fields, found {}",
                        first.len(),
                        row.len()
                    ),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::parse(path, "no data rows"));
    }
    Ok(rows)
}

pub fn read_channels(path: &Path) -> Result<ChannelMatrix, CliError> {
    let rows = read_matrix(path)?;
    ChannelMatrix::from_rows(&rows).map_err(|e| CliError::parse(path, e.to_string()))
}

pub fn read_powers(path: &Path, p_max: f64) -> Result<PowerAllocation, CliError> {
    let rows = read_matrix(path)?;
    PowerAllocation::from_rows(&rows, p_max).map_err(|e| CliError::parse(path, e.to_string()))
}
