//! File emission: tables as CSV or JSON, reports as JSON.
//!
//! CSV payloads start with two comment lines carrying the command name and
//! the resolved configuration, so every artifact is self-describing. All
//! numeric text uses 17 significant digits and round-trips losslessly.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::config::Format;
use crate::CliError;

/// 17 significant digits; parses back to the identical f64.
pub fn sig(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Table {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<f64>>,
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|source| CliError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
        }
    }
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `stem.csv` or `stem.json` under `dir` and returns the path.
pub fn write_table(
    dir: &Path,
    stem: &str,
    command: &str,
    config: &impl Serialize,
    table: &Table,
    format: Format,
) -> Result<PathBuf, CliError> {
    let config_line = serde_json::to_string(config).expect("config serializes");
    match format {
        Format::Csv => {
            let mut text = format!("# windisc {command}\n# config: {config_line}\n");
            text.push_str(&table.columns.join(","));
            text.push('\n');
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(|&x| sig(x)).collect();
                text.push_str(&cells.join(","));
                text.push('\n');
            }
            let path = dir.join(format!("{stem}.csv"));
            write_bytes(&path, text.as_bytes())?;
            Ok(path)
        }
        Format::Json => {
            let value = json!({
                "command": command,
                "config": serde_json::to_value(config).expect("config serializes"),
                "columns": table.columns,
                "rows": table.rows,
            });
            let path = dir.join(format!("{stem}.json"));
            write_json_at(&path, &value)?;
            Ok(path)
        }
    }
}

/// Writes `stem.json` under `dir`, pretty-printed, and returns the path.
pub fn write_report(
    dir: &Path,
    stem: &str,
    value: &impl Serialize,
) -> Result<PathBuf, CliError> {
    let path = dir.join(format!("{stem}.json"));
    write_json_at(&path, value)?;
    Ok(path)
}

fn write_json_at(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|err| CliError::Config(format!("serialization: {err}")))?;
    text.push('\n');
    write_bytes(path, text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::sig;

    #[test]
    fn formatted_numbers_round_trip() {
        for &x in &[0.0, 1.0, -2.338107410459767, 1e-300, 6.02e23, 0.1 + 0.2] {
            let back: f64 = sig(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}
