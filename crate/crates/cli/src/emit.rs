//! Output files. Every file is written to a temporary sibling and renamed
//! into place.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use tempfile::NamedTempFile;

use crate::config::Format;
use crate::error::CliError;

/// A table of rows whose cells are exact strings for JSONL and floats for
/// CSV.
pub struct Table {
    pub header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    pub json_rows: Vec<Value>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            csv_rows: Vec::new(),
            json_rows: Vec::new(),
        }
    }

    pub fn push(&mut self, csv: Vec<String>, json: Value) {
        self.csv_rows.push(csv);
        self.json_rows.push(json);
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| CliError::Io("csv buffer".into(), e.into());
                w.write_record(&self.header).map_err(io)?;
                for r in &self.csv_rows {
                    w.write_record(r).map_err(io)?;
                }
                w.into_inner().map_err(|e| CliError::Io("csv buffer".into(), e.into_error()))
            }
            Format::Jsonl => {
                let mut out = Vec::new();
                for r in &self.json_rows {
                    out.extend(serde_json::to_vec(r).expect("serializable"));
                    out.push(b'\n');
                }
                Ok(out)
            }
        }
    }
}

/// Shortest representation that round-trips.
pub fn float(x: f64) -> String {
    format!("{x}")
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(path.display().to_string(), e);
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("serializable");
    v.push(b'\n');
    v
}

/// Writes `bytes` to `out/name` when an output directory is given, and to
/// stdout otherwise.
pub fn emit(out: Option<&Path>, name: &str, bytes: &[u8]) -> Result<Option<PathBuf>, CliError> {
    match out {
        Some(dir) => {
            let path = dir.join(name);
            write_atomic(&path, bytes)?;
            Ok(Some(path))
        }
        None => {
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| CliError::Io("stdout".into(), e))?;
            Ok(None)
        }
    }
}

/// Data file plus a `.meta.json` sidecar carrying the seed and config.
pub fn emit_table<M: Serialize>(
    out: Option<&Path>,
    stem: &str,
    table: &Table,
    format: Format,
    meta: &M,
) -> Result<(), CliError> {
    let ext = match format {
        Format::Csv => "csv",
        Format::Jsonl => "jsonl",
    };
    let name = format!("{stem}.{ext}");
    emit(out, &name, &table.render(format)?)?;
    if let Some(dir) = out {
        write_atomic(&dir.join(format!("{name}.meta.json")), &json_bytes(meta))?;
    }
    Ok(())
}
