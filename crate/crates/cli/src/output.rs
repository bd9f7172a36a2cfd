//! Number formatting and small file helpers.

use std::fs::File;
use std::path::{Path, PathBuf};

use crate::CliError;

/// 17 significant digits, enough to reparse the exact double.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// `results.csv` → `results.summary`.
pub fn summary_path(output: &Path) -> PathBuf {
    output.with_extension("summary")
}

pub fn csv_file(path: &Path) -> Result<csv::Writer<File>, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(csv::Writer::from_path(path)?)
}
