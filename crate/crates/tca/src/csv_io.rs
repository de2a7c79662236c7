//! Labeled matrices from comma-separated text.
//!
//! The first record holds column labels, optionally preceded by a corner
//! cell; every later record is a row label followed by one value per column.

use std::collections::HashSet;
use std::path::Path;

use taxicab_core::Matrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub values: Matrix,
}

impl LabeledMatrix {
    pub fn total(&self) -> f64 {
        self.values.sum()
    }

    pub fn column(&self, label: &str) -> Option<Vec<f64>> {
        let j = self.col_labels.iter().position(|l| l == label)?;
        Some(self.values.column(j).collect())
    }
}

/// Reads a count table: every cell must be a finite nonnegative number.
pub fn load_counts_csv(path: impl AsRef<Path>) -> Result<LabeledMatrix> {
    parse_counts_csv(&read(path.as_ref())?)
}

pub fn parse_counts_csv(text: &str) -> Result<LabeledMatrix> {
    parse_table(text, false)
}

/// Like [`parse_counts_csv`] but accepts negative values.
pub fn parse_table_csv(text: &str) -> Result<LabeledMatrix> {
    parse_table(text, true)
}

pub(crate) fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_table(text: &str, allow_negative: bool) -> Result<LabeledMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut records = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::input(line, None, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        records.push((line, record));
    }
    let Some(((_, header), body)) = records.split_first() else {
        return Err(Error::input(1, None, "empty table"));
    };
    if body.is_empty() {
        return Err(Error::input(1, None, "no data rows"));
    }

    let width = body[0].1.len();
    let col_labels: Vec<String> = match header.len() {
        h if h == width => header.iter().skip(1).map(str::to_owned).collect(),
        h if h + 1 == width => header.iter().map(str::to_owned).collect(),
        h => {
            return Err(Error::input(
                body[0].0,
                None,
                format!("{width} fields but the header has {h} labels"),
            ))
        }
    };
    if col_labels.is_empty() {
        return Err(Error::input(1, None, "no data columns"));
    }
    check_unique(&col_labels, 1, "column")?;

    let mut row_labels = Vec::with_capacity(body.len());
    let mut data = Vec::with_capacity(body.len() * col_labels.len());
    for (line, record) in body {
        if record.len() != width {
            return Err(Error::input(
                *line,
                None,
                format!("ragged row: {} fields, expected {width}", record.len()),
            ));
        }
        row_labels.push(record[0].to_owned());
        for (j, cell) in record.iter().enumerate().skip(1) {
            let value: f64 = cell
                .parse()
                .map_err(|_| Error::input(*line, Some(j + 1), format!("not a number: {cell:?}")))?;
            if !value.is_finite() {
                return Err(Error::input(*line, Some(j + 1), format!("not finite: {cell:?}")));
            }
            if value < 0.0 && !allow_negative {
                return Err(Error::input(*line, Some(j + 1), format!("negative count: {cell}")));
            }
            data.push(value);
        }
    }
    check_unique(&row_labels, 2, "row")?;
    let values = Matrix::from_vec(row_labels.len(), col_labels.len(), data)?;
    Ok(LabeledMatrix {
        row_labels,
        col_labels,
        values,
    })
}

fn check_unique(labels: &[String], first_line: usize, what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for (k, label) in labels.iter().enumerate() {
        if !seen.insert(label) {
            let (line, column) = if what == "column" {
                (first_line, Some(k + 2))
            } else {
                (first_line + k, Some(1))
            };
            return Err(Error::input(line, column, format!("duplicate {what} label {label:?}")));
        }
    }
    Ok(())
}

/// A bare list of numbers separated by commas or whitespace, or `None` when
/// the first line does not parse that way.
pub fn parse_number_list(text: &str) -> Option<Result<Vec<f64>>> {
    let first = text.lines().find(|l| !l.trim().is_empty())?;
    if split_numbers(first).any(|t| t.parse::<f64>().is_err()) {
        return None;
    }
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        for (k, token) in split_numbers(line).enumerate() {
            match token.parse::<f64>() {
                Ok(v) if v.is_finite() => out.push(v),
                _ => return Some(Err(Error::input(n + 1, Some(k + 1), format!("not a number: {token:?}")))),
            }
        }
    }
    Some(Ok(out))
}

fn split_numbers(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty())
}
