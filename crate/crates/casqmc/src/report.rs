//! CSV export and the plain-text table.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{HarnessError, Result};
use crate::harness::{ErfReport, ErfRow};

pub const HEADER: [&str; 7] = ["problem", "param_rho", "param_K", "method", "mean", "stderr", "erf"];

/// 17 significant digits; `None` is an empty field.
pub fn fmt_float(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

fn parse_float(field: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        return Ok(None);
    }
    field.parse().map(Some).map_err(|_| HarnessError::Parse(format!("bad number `{field}`")))
}

pub fn write_csv<W: Write>(rows: &[ErfRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.problem.clone(),
            fmt_float(r.param_rho),
            fmt_float(r.param_k),
            r.method.clone(),
            fmt_float(Some(r.mean)),
            fmt_float(r.stderr),
            fmt_float(r.erf),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the report to `path`.
pub fn emit_csv(report: &ErfReport, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| HarnessError::Io { path: path.into(), source })?;
    write_csv(&report.rows, file).map_err(|source| HarnessError::Csv { path: path.into(), source })
}

pub fn parse_csv<R: Read>(input: R) -> Result<Vec<ErfRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(|e| HarnessError::Parse(e.to_string()))?;
    if header.iter().ne(HEADER) {
        return Err(HarnessError::Parse(format!("unexpected header `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| HarnessError::Parse(e.to_string()))?;
        if rec.len() != HEADER.len() {
            return Err(HarnessError::Parse(format!("expected {} fields, found {}", HEADER.len(), rec.len())));
        }
        rows.push(ErfRow {
            problem: rec[0].to_string(),
            param_rho: parse_float(&rec[1])?,
            param_k: parse_float(&rec[2])?,
            method: rec[3].to_string(),
            mean: parse_float(&rec[4])?.ok_or_else(|| HarnessError::Parse("missing mean".into()))?,
            stderr: parse_float(&rec[5])?,
            erf: parse_float(&rec[6])?,
        });
    }
    Ok(rows)
}

pub fn read_csv(path: &Path) -> Result<Vec<ErfRow>> {
    let file = std::fs::File::open(path).map_err(|source| HarnessError::Io { path: path.into(), source })?;
    parse_csv(file)
}

fn short(x: Option<f64>, prec: usize) -> String {
    match x {
        Some(v) if v.abs() >= 1e5 || (v != 0.0 && v.abs() < 1e-3) => format!("{v:.prec$e}"),
        Some(v) => format!("{v:.prec$}"),
        None => "-".into(),
    }
}

/// Human-readable table; timing columns appear when available.
pub fn format_table(report: &ErfReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<18} {:>6} {:>7} {:<10} {:>14} {:>11} {:>10} {:>9} {:>9}",
        "problem", "rho", "K", "method", "mean", "stderr", "ERF", "setup_s", "total_s"
    );
    for (i, r) in report.rows.iter().enumerate() {
        let (setup, total) = report
            .timings
            .get(i)
            .map(|(a, b)| (format!("{:.3}", a.as_secs_f64()), format!("{:.3}", b.as_secs_f64())))
            .unwrap_or_default();
        let _ = writeln!(
            s,
            "{:<18} {:>6} {:>7} {:<10} {:>14} {:>11} {:>10} {:>9} {:>9}",
            r.problem,
            short(r.param_rho, 2),
            short(r.param_k, 1),
            r.method,
            short(Some(r.mean), 6),
            short(r.stderr, 3),
            short(r.erf, 1),
            setup,
            total
        );
    }
    s
}
