//! Run manifests and machine-readable reports.
//!
//! Every CLI run writes a manifest next to its outputs so a result can be
//! reproduced from the recorded command and parameters alone. Numeric CSV
//! output carries full double precision (17 significant digits).

use serde::Serialize;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub tool_version: String,
    pub timestamp: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value, outputs: &[&Path]) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
            outputs: outputs
                .iter()
                .map(|p| p.display().to_string())
                .collect(),
        }
    }

    /// Write `<stem>.manifest.json` next to the first output (or to the given
    /// path when there are none).
    pub fn write_beside(&self, primary: &Path) -> io::Result<PathBuf> {
        let mut path = primary.to_path_buf();
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into());
        path.set_file_name(format!("{stem}.manifest.json"));
        write_json(&path, self)?;
        Ok(path)
    }
}

/// Schema of `verify` reports: one record per executed check.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub test: String,
    pub params: serde_json::Value,
    pub residual_inf: f64,
    pub residual_l2: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let mut f = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    Ok(())
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let mut f = fs::File::create(path)?;
    writeln!(f, "{}", header.join(","))?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
        writeln!(f, "{}", line.join(","))?;
    }
    Ok(())
}
