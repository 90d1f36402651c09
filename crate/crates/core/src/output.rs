//! Deterministic file emission: CSV with a commented config header for
//! curves and fields, JSON for verification reports.

use std::path::Path;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Full float precision, 17 significant digits, '.' decimal separator.
pub fn float_cell(x: f64) -> String {
    format!("{x:.16e}")
}

/// Comment block recording provenance: toolkit version, then the complete
/// config the file was produced from.
pub fn comment_header(config: &RunConfig) -> String {
    let mut out = format!("# halfcyl {TOOLKIT_VERSION}\n# config:\n");
    for line in config.to_toml().lines() {
        out.push_str("#   ");
        out.push_str(line);
        out.push('\n');
    }
    out
}

/// Write a CSV file: comment header, column line, then the data rows.
pub fn write_csv(
    path: &Path,
    config: &RunConfig,
    columns: &[&str],
    rows: &[Vec<String>],
) -> Result<()> {
    let mut body = comment_header(config);
    body.push_str(&columns.join(","));
    body.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        body.push_str(&row.join(","));
        body.push('\n');
    }
    std::fs::write(path, body)?;
    Ok(())
}

/// Write a JSON report; provenance lives in the leading fields of the value
/// itself since JSON carries no comments.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidInput(format!("report serialization failed: {e}")))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// Split an emitted CSV into (comment header, body). The body is the
/// deterministic part: identical config and seed must reproduce it byte for
/// byte, while the header may carry version strings.
pub fn split_csv(text: &str) -> (String, String) {
    let mut header = String::new();
    let mut body = String::new();
    for line in text.lines() {
        if line.starts_with('#') {
            header.push_str(line);
            header.push('\n');
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    (header, body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_cells_have_full_precision() {
        let x = std::f64::consts::PI;
        let cell = float_cell(x);
        assert_eq!(cell.parse::<f64>().unwrap(), x);
        assert!(cell.contains('.'));
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let cfg = RunConfig::default();
        write_csv(
            &path,
            &cfg,
            &["a", "b"],
            &[vec!["1".into(), float_cell(2.5)]],
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let (header, body) = split_csv(&text);
        assert!(header.contains(TOOLKIT_VERSION));
        assert!(header.contains("n_cross"));
        assert_eq!(body, format!("a,b\n1,{}\n", float_cell(2.5)));
    }
}
