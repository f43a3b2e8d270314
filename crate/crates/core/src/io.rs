//! CSV input and output.
//!
//! Vectors are one value per line; matrices are one row per line. Lines starting with
//! `#` are comments, and a leading non-numeric row is taken as a header. Values are
//! written with Rust's shortest round-trip formatting, so write → read is lossless.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linear::DenseMatrix;
use crate::solver::ConvergenceTrace;

fn read_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if i == 0 => continue,
            Err(e) => {
                return Err(Error::Parse(format!(
                    "{}: line {}: {e}",
                    path.display(),
                    record.position().map_or(0, |p| p.line())
                )))
            }
        }
    }
    Ok(rows)
}

/// Reads a vector, one value per line.
pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let rows = read_rows(path)?;
    if let Some(r) = rows.iter().find(|r| r.len() != 1) {
        return Err(Error::Parse(format!(
            "{}: expected one value per line, found {}",
            path.display(),
            r.len()
        )));
    }
    Ok(rows.into_iter().map(|r| r[0]).collect())
}

/// Reads a row-major dense matrix.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    let rows = read_rows(path)?;
    if rows.is_empty() {
        return Err(Error::Parse(format!("{}: empty matrix", path.display())));
    }
    DenseMatrix::from_rows(&rows)
}

pub fn write_vector(path: impl AsRef<Path>, header: &str, v: &[f64]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    if !header.is_empty() {
        writeln!(out, "# {header}")?;
    }
    for x in v {
        writeln!(out, "{x:?}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_matrix(path: impl AsRef<Path>, m: &DenseMatrix) -> Result<()> {
    use crate::linear::LinearOperator;
    let mut w = csv::Writer::from_path(path)?;
    for row in m.data().chunks(m.cols()) {
        w.write_record(row.iter().map(|x| format!("{x:?}")))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `iter,value,gradnorm,alpha,sum_x,min_x`.
pub fn write_trace(path: impl AsRef<Path>, trace: &ConvergenceTrace) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["iter", "value", "gradnorm", "alpha", "sum_x", "min_x"])?;
    for r in &trace.records {
        w.write_record([
            r.iter.to_string(),
            format!("{:?}", r.value),
            format!("{:?}", r.grad_norm),
            format!("{:?}", r.alpha),
            format!("{:?}", r.sum_x),
            format!("{:?}", r.min_x),
        ])?;
    }
    w.flush()?;
    Ok(())
}
