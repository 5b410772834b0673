use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::args::{Format, OutputArgs};
use super::CliError;
use crate::matrix::ComplexMatrix;

/// 17 significant digits: round-trips every `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Real, imaginary and magnitude grids of a complex matrix, row-major.
#[derive(Debug, Clone, Serialize)]
pub struct Grids {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    pub abs: Vec<Vec<f64>>,
}

impl Grids {
    pub fn of(m: &ComplexMatrix) -> Self {
        let grid = |f: fn(num_complex::Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..m.rows()).map(|i| (0..m.cols()).map(|j| f(m.get(i, j))).collect()).collect()
        };
        Self { re: grid(|z| z.re), im: grid(|z| z.im), abs: grid(|z| z.norm()) }
    }
}

/// Long-format CSV of one or more same-shaped matrices: `row,col` then
/// `re,im,abs` per matrix, each group prefixed with its label.
pub fn matrix_csv(labels: &[&str], mats: &[&ComplexMatrix]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["row".to_string(), "col".to_string()];
    for label in labels {
        for part in ["re", "im", "abs"] {
            header.push(if label.is_empty() { part.to_string() } else { format!("{label}_{part}") });
        }
    }
    w.write_record(&header).map_err(csv_err)?;
    let m0 = mats[0];
    for i in 0..m0.rows() {
        for j in 0..m0.cols() {
            let mut rec = vec![i.to_string(), j.to_string()];
            for m in mats {
                let z = m.get(i, j);
                rec.extend([num(z.re), num(z.im), num(z.norm())]);
            }
            w.write_record(&rec).map_err(csv_err)?;
        }
    }
    finish(w)
}

pub fn table_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>, CliError> {
    w.into_inner().map_err(|e| CliError::Invalid(format!("csv: {e}")))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Invalid(format!("csv: {e}"))
}

pub fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Invalid(format!("json: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes `bytes` to `--output`, or stdout.
pub fn emit(out: &OutputArgs, bytes: &[u8]) -> Result<(), CliError> {
    match &out.output {
        Some(path) => write_file(path, bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))
}

/// In CSV mode metadata has no place in the table, so it goes to stderr.
pub fn note_metadata<T: Serialize>(format: Format, meta: &T) -> Result<(), CliError> {
    if format == Format::Csv {
        let line = serde_json::to_string(meta).map_err(|e| CliError::Invalid(format!("json: {e}")))?;
        eprintln!("{line}");
    }
    Ok(())
}
