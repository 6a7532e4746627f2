//! CSV helpers. Floats are written with Rust's shortest round-trip formatting.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub(crate) fn create_file(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Writes a header row and one row per item.
pub fn write_csv<I>(path: &Path, headers: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<f64>>,
{
    let file = create_file(path)?;
    write_csv_to(file, path, headers, rows)
}

pub(crate) fn write_csv_to<W, I>(out: W, path: &Path, headers: &[&str], rows: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = Vec<f64>>,
{
    let mut w = csv::Writer::from_writer(out);
    let to_err = |e: csv::Error| Error::parse(path, e);
    w.write_record(headers).map_err(to_err)?;
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string()))
            .map_err(to_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a numeric CSV and returns the requested columns, in the requested order.
pub fn read_csv_columns(path: &Path, columns: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::parse(path, e))?;
    let headers = reader.headers().map_err(|e| Error::parse(path, e))?.clone();
    let index: Vec<usize> = columns
        .iter()
        .map(|c| {
            headers
                .iter()
                .position(|h| h.trim() == *c)
                .ok_or_else(|| Error::parse(path, format!("missing column '{c}'")))
        })
        .collect::<Result<_>>()?;
    let mut out = vec![Vec::new(); columns.len()];
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::parse(path, e))?;
        for (k, &i) in index.iter().enumerate() {
            let field = record.get(i).unwrap_or("").trim();
            let v: f64 = field.parse().map_err(|_| {
                Error::parse(path, format!("row {}: '{field}' is not a number", line + 2))
            })?;
            out[k].push(v);
        }
    }
    Ok(out)
}
