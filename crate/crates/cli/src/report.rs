//! Table, CSV and JSON renderings of reports.

use std::fs;
use std::io::Write;
use std::path::Path;

use agency_core::bridge::{IdentityReport, Reproduction};
use clap::ValueEnum;

use crate::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Fixed-width CSV header for identity reports.
pub const CSV_COLUMNS: [&str; 5] = ["identity_name", "seed", "residual", "tolerance", "pass"];

/// Formats a float with 12 significant digits, trailing zeros removed.
/// Magnitudes in `[1e-5, 1e12)` are written positionally, others in
/// scientific notation (`1.5e-13`).
pub fn fmt_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format has an exponent");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if (-5..12).contains(&exponent) {
        let decimals = (11 - exponent) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exponent.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Left-aligned text table; columns listed in `numeric` are right-aligned.
pub fn render_table(headers: &[&str], rows: &[Vec<String>], numeric: &[usize]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut text = String::new();
        for (i, cell) in cells.enumerate() {
            if i > 0 {
                text.push_str("  ");
            }
            let pad = widths[i].saturating_sub(cell.chars().count());
            if numeric.contains(&i) {
                text.push_str(&" ".repeat(pad));
                text.push_str(cell);
            } else {
                text.push_str(cell);
                text.push_str(&" ".repeat(pad));
            }
        }
        out.push_str(text.trim_end());
        out.push('\n');
    };
    line(&mut headers.iter().copied());
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(&mut rule.iter().map(String::as_str));
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

fn seed_cell(seed: Option<u64>) -> String {
    seed.map(|s| s.to_string()).unwrap_or_default()
}

fn pass_cell(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn csv_text(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).expect("writing CSV to memory");
    String::from_utf8(w.into_inner().expect("flushing CSV to memory")).expect("CSV is UTF-8")
}

fn json_text<T: serde::Serialize + ?Sized>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

/// Renders identity reports. CSV has exactly [`CSV_COLUMNS`]; JSON is the
/// full report list; the table adds the notes column.
pub fn render_reports(reports: &[IdentityReport], format: Format) -> Result<String, ConfigError> {
    if reports.is_empty() {
        return Err(ConfigError("no reports to emit".into()));
    }
    Ok(match format {
        Format::Json => json_text(reports),
        Format::Csv => csv_text(|w| {
            w.write_record(CSV_COLUMNS)?;
            for r in reports {
                w.write_record([
                    r.identity_name.clone(),
                    seed_cell(r.seed),
                    fmt_number(r.residual),
                    fmt_number(r.tolerance),
                    r.pass.to_string(),
                ])?;
            }
            Ok(())
        }),
        Format::Table => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.identity_name.clone(),
                        seed_cell(r.seed),
                        fmt_number(r.residual),
                        fmt_number(r.tolerance),
                        pass_cell(r.pass).into(),
                        r.notes.clone(),
                    ]
                })
                .collect();
            let mut text =
                render_table(&["identity", "seed", "residual", "tolerance", "pass", "notes"], &rows, &[1, 2, 3]);
            let passed = reports.iter().filter(|r| r.pass).count();
            text.push_str(&format!("\n{passed}/{} passed\n", reports.len()));
            text
        }
    })
}

/// Renders a reproduction: computed values and checks for tables, the
/// checks alone for CSV (same columns as identity reports), everything for JSON.
pub fn render_reproduction(r: &Reproduction, format: Format) -> Result<String, ConfigError> {
    Ok(match format {
        Format::Json => json_text(r),
        Format::Csv => render_reports(&r.checks, Format::Csv)?,
        Format::Table => {
            let values: Vec<Vec<String>> =
                r.values.iter().map(|v| vec![v.quantity.clone(), v.subject.clone(), fmt_number(v.value)]).collect();
            let mut text = format!("# {}\n\n", r.target);
            text.push_str(&render_table(&["quantity", "subject", "value"], &values, &[2]));
            text.push('\n');
            text.push_str(&render_reports(&r.checks, Format::Table)?);
            text
        }
    })
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn write_output(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// Renders `reports` in `format` and writes them to `path` (stdout if `None`).
pub fn emit_report(reports: &[IdentityReport], format: Format, path: Option<&Path>) -> anyhow::Result<()> {
    let text = render_reports(reports, format)?;
    write_output(&text, path)?;
    Ok(())
}
