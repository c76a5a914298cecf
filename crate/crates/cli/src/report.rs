//! JSON report envelope and the CSV written alongside it.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Envelope<'a, C: Serialize, B: Serialize> {
    pub schema_version: u32,
    pub command: &'a str,
    pub config: &'a C,
    #[serde(flatten)]
    pub body: &'a B,
}

/// Rows of a CSV file; every row has `header.len()` fields.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }
}

/// Full-precision number for CSV cells.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

/// `out` with its extension replaced by `.csv`.
pub fn csv_path(out: &Path) -> PathBuf {
    out.with_extension("csv")
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| CliError::Write { path: path.to_owned(), source })
}

/// Writes the JSON report to `out` (stdout when absent) and, when `out` is
/// a file, the table next to it.
pub fn emit<C: Serialize, B: Serialize>(
    command: &str,
    config: &C,
    body: &B,
    table: Option<&Table>,
    out: Option<&Path>,
) -> Result<()> {
    let envelope = Envelope { schema_version: SCHEMA_VERSION, command, config, body };
    let mut json = serde_json::to_vec_pretty(&envelope).expect("reports serialize");
    json.push(b'\n');
    match out {
        Some(path) => {
            write_file(path, &json)?;
            if let Some(t) = table {
                let csv = csv_path(path);
                write_file(&csv, &t.to_csv())?;
                log::info!("wrote {} and {}", path.display(), csv.display());
            }
        }
        None => {
            let stdout = std::io::stdout();
            stdout
                .lock()
                .write_all(&json)
                .map_err(|source| CliError::Write { path: PathBuf::from("<stdout>"), source })?;
        }
    }
    Ok(())
}
