//! CSV emission. Rows are written in sweep order and floats use the shortest
//! round-trip representation, so identical inputs produce byte-identical
//! files.

use std::fs::File;
use std::io::{BufWriter, Stdout, Write};
use std::path::Path;

pub enum CsvWriter {
    File(BufWriter<File>),
    Stdout(Stdout),
}

impl CsvWriter {
    pub fn create(path: Option<&Path>) -> Result<Self, String> {
        match path {
            Some(p) => {
                let f =
                    File::create(p).map_err(|e| format!("cannot create {}: {e}", p.display()))?;
                Ok(CsvWriter::File(BufWriter::new(f)))
            }
            None => Ok(CsvWriter::Stdout(std::io::stdout())),
        }
    }

    fn write_line(&mut self, line: &str) -> Result<(), String> {
        let res = match self {
            CsvWriter::File(w) => writeln!(w, "{line}"),
            CsvWriter::Stdout(w) => writeln!(w, "{line}"),
        };
        res.map_err(|e| format!("write failed: {e}"))
    }

    pub fn header(&mut self, columns: &str) -> Result<(), String> {
        self.write_line(columns)
    }

    pub fn row(&mut self, fields: &[String]) -> Result<(), String> {
        self.write_line(&fields.join(","))
    }

    pub fn finish(&mut self) -> Result<(), String> {
        let res = match self {
            CsvWriter::File(w) => w.flush(),
            CsvWriter::Stdout(w) => w.flush(),
        };
        res.map_err(|e| format!("flush failed: {e}"))
    }
}

/// Shortest round-trip float formatting (deterministic).
pub fn num(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{v}")
    }
}
