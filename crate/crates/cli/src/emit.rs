//! CSV and manifest emission. All CSVs are RFC 4180 (CRLF, mandatory
//! header); numbers carry 17 significant digits so emitted artifacts parse
//! back to the exact bit pattern.

use std::io::Write;
use std::path::Path;

use ambit_core::pricing::OptionQuote;
use ambit_core::simulate::{FieldPath, Panel};

use crate::config::ScenarioConfig;
use crate::CliError;

/// Decimal with 17 significant digits; round-trips f64 exactly.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Runtime(format!("writing {}: {e}", path.display()))
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut out = Vec::with_capacity(rows.len() * 32 + 64);
    out.extend_from_slice(header.join(",").as_bytes());
    out.extend_from_slice(b"\r\n");
    for row in rows {
        out.extend_from_slice(row.join(",").as_bytes());
        out.extend_from_slice(b"\r\n");
    }
    let mut file = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
    file.write_all(&out).map_err(|e| io_err(path, e))
}

fn panel_rows(times: &[f64], panel: &Panel) -> Vec<Vec<String>> {
    times
        .iter()
        .enumerate()
        .map(|(j, t)| {
            let mut row = Vec::with_capacity(panel.cols() + 1);
            row.push(format_value(*t));
            row.extend(panel.row(j).iter().map(|v| format_value(*v)));
            row
        })
        .collect()
}

fn theta_header(cols: usize) -> Vec<String> {
    let mut header = vec!["t".to_string()];
    header.extend((1..=cols).map(|l| format!("theta_{l}")));
    header
}

/// Field (and optional volatility) CSVs.
pub fn write_field_path(dir: &Path, path: &FieldPath) -> Result<(), CliError> {
    write_csv(
        &dir.join("field.csv"),
        &theta_header(path.values.cols()),
        &panel_rows(&path.times, &path.values),
    )?;
    if let Some(vol) = &path.volatility {
        write_csv(
            &dir.join("volatility.csv"),
            &theta_header(vol.cols()),
            &panel_rows(&path.times, vol),
        )?;
    }
    Ok(())
}

/// Price report: one row per quote.
pub fn write_price_report(path: &Path, quotes: &[OptionQuote]) -> Result<(), CliError> {
    let header = ["strike", "price", "stderr", "implied_vol"]
        .map(String::from)
        .to_vec();
    let rows: Vec<Vec<String>> = quotes
        .iter()
        .map(|q| {
            vec![
                format_value(q.strike),
                format_value(q.price),
                format_value(q.stderr),
                q.implied_vol.map(format_value).unwrap_or_default(),
            ]
        })
        .collect();
    write_csv(path, &header, &rows)
}

/// Diagnostics: `(name, index, value)` triples.
pub fn write_diagnostics(path: &Path, entries: &[(String, i64, f64)]) -> Result<(), CliError> {
    let header = ["diagnostic", "index", "value"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|(name, idx, value)| vec![name.clone(), idx.to_string(), format_value(*value)])
        .collect();
    write_csv(path, &header, &rows)
}

/// Correlation matrix CSV with a slot column and one column per slot.
pub fn write_correlation(path: &Path, corr: &Panel) -> Result<(), CliError> {
    let mut header = vec!["slot".to_string()];
    header.extend((1..=corr.cols()).map(|l| format!("theta_{l}")));
    let rows: Vec<Vec<String>> = (0..corr.rows())
        .map(|r| {
            let mut row = vec![format!("theta_{}", r + 1)];
            row.extend(corr.row(r).iter().map(|v| format_value(*v)));
            row
        })
        .collect();
    write_csv(path, &header, &rows)
}

/// Named scalar scores.
pub fn write_scores(path: &Path, scores: &[(String, f64)]) -> Result<(), CliError> {
    let header = ["metric", "value"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> = scores
        .iter()
        .map(|(name, value)| vec![name.clone(), format_value(*value)])
        .collect();
    write_csv(path, &header, &rows)
}

/// The run manifest: the fully resolved configuration as TOML. A run from
/// the manifest alone reproduces the outputs byte for byte.
pub fn write_manifest(dir: &Path, config: &ScenarioConfig) -> Result<(), CliError> {
    let body = toml::to_string_pretty(config)
        .map_err(|e| CliError::Runtime(format!("manifest serialization: {e}")))?;
    let path = dir.join("manifest.toml");
    std::fs::write(&path, body).map_err(|e| io_err(&path, e))
}

/// Sidecar run metadata for a price report.
pub fn write_price_sidecar(
    path: &Path,
    config: &ScenarioConfig,
    product: &str,
    paths: usize,
) -> Result<(), CliError> {
    #[derive(serde::Serialize)]
    struct Sidecar<'a> {
        product: &'a str,
        paths: usize,
        seed: u64,
        grid: &'a crate::config::GridConfig,
    }
    let body = toml::to_string_pretty(&Sidecar {
        product,
        paths,
        seed: config.seed,
        grid: &config.grid,
    })
    .map_err(|e| CliError::Runtime(format!("sidecar serialization: {e}")))?;
    std::fs::write(path, body).map_err(|e| io_err(path, e))
}

/// Parses a panel CSV (header `t,theta_1..theta_H`): returns times and the
/// value matrix. Ragged rows are reported with their line number.
pub fn read_panel_csv(path: &Path) -> Result<(Vec<f64>, Panel), CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .map_err(|e| CliError::Runtime(format!("reading {}: {e}", path.display())))?;
    let width = reader
        .headers()
        .map_err(|e| CliError::Runtime(format!("reading header of {}: {e}", path.display())))?
        .len();
    if width < 2 {
        return Err(CliError::Config(format!(
            "{}: need a time column plus at least one slot column",
            path.display()
        )));
    }
    let mut times = Vec::new();
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2; // header is line 1
        let record = record.map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        if record.len() != width {
            return Err(CliError::Config(format!(
                "{}: line {line} has {} fields, expected {width}",
                path.display(),
                record.len()
            )));
        }
        let parse = |s: &str, col: usize| -> Result<f64, CliError> {
            s.trim().parse::<f64>().map_err(|e| {
                CliError::Config(format!(
                    "{}: line {line}, column {col}: '{s}' is not a number ({e})",
                    path.display()
                ))
            })
        };
        times.push(parse(&record[0], 1)?);
        let mut row = Vec::with_capacity(width - 1);
        for c in 1..width {
            row.push(parse(&record[c], c + 1)?);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Config(format!(
            "{}: no data rows",
            path.display()
        )));
    }
    let panel = Panel::from_rows(rows).map_err(|e| CliError::Config(e.to_string()))?;
    Ok((times, panel))
}
