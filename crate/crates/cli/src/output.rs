//! CSV and JSON writers. CSV columns are fixed per command; JSON carries the
//! same fields plus nested detail.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::input::{CliError, CliResult};
use crate::Format;

/// One table: header plus rows of already formatted cells.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Usage(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Usage(e.to_string()))
    }
}

pub fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn sci(v: f64) -> String {
    format!("{v:.3e}")
}

/// Writes the CSV table or the JSON value to `out` (stdout when None).
pub fn emit<T: Serialize>(format: Format, out: Option<&Path>, table: &Table, json: &T) -> CliResult<()> {
    let bytes = match format {
        Format::Csv => table.to_csv()?,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(json).map_err(|e| CliError::Usage(e.to_string()))?;
            s.push('\n');
            s.into_bytes()
        }
    };
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes)?;
            Ok(())
        }
    }
}
