//! CSV tables and JSON run manifests.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Writes `rows` as CSV with a header row.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Creates `path` and any missing parent directories.
fn create(path: &Path) -> Result<File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path).map_err(|e| Error::io(path, e))
}

pub fn write_csv_file<T: Serialize>(rows: &[T], path: &Path) -> Result<()> {
    let file = create(path)?;
    write_csv(rows, io::BufWriter::new(file))
}

pub fn write_json_file<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let file = create(path)?;
    let mut w = io::BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

/// `results.csv` -> `results.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    output.with_extension("manifest.json")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest<S> {
    pub command: String,
    pub spec: S,
    pub library_version: String,
    pub started_unix_seconds: u64,
    pub wall_time_seconds: f64,
    pub rows: usize,
    pub output: PathBuf,
}

impl<S> Manifest<S> {
    pub fn new(command: &str, spec: S, started: SystemTime, elapsed: Duration, rows: usize, output: &Path) -> Self {
        Self {
            command: command.to_owned(),
            spec,
            library_version: env!("CARGO_PKG_VERSION").to_owned(),
            started_unix_seconds: started.duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            wall_time_seconds: elapsed.as_secs_f64(),
            rows,
            output: output.to_path_buf(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        name: &'static str,
        value: f64,
        extra: Option<f64>,
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(
            &[Row { name: "a", value: 0.5, extra: None }, Row { name: "b", value: 1.0, extra: Some(-2.5) }],
            &mut buf,
        )
        .unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "name,value,extra\na,0.5,\nb,1.0,-2.5\n");
    }

    #[test]
    fn manifest_sits_next_to_the_table() {
        assert_eq!(manifest_path(Path::new("out/rates.csv")), Path::new("out/rates.manifest.json"));
    }
}
