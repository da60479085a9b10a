//! CSV and SVG output for ratio reports, plus the generic table writer used
//! by the command-line tool.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use csv::{Terminator, WriterBuilder};

use super::{RatioReport, RatioRow};
use crate::error::{Error, Result};

pub const NA: &str = "NA";

pub const RATIO_HEADER: [&str; 9] = [
    "n",
    "stat",
    "method",
    "b_frac",
    "mean_ratio",
    "se_ratio",
    "reps_used",
    "true_var",
    "mean_estimate",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Svg,
}

/// Round-trippable float formatting so identical runs give identical bytes.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| NA.to_string(), fmt_float)
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Input(format!("csv: {other:?}")),
    }
}

/// Writes a header and rows with `\n` line endings.
pub fn write_table<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::Argument(format!("row has {} fields, header {}", row.len(), header.len())));
        }
        w.write_record(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn ratio_record(r: &RatioRow) -> Vec<String> {
    vec![
        r.n.to_string(),
        r.stat.clone(),
        r.method.clone(),
        r.b_frac.map_or_else(|| NA.to_string(), |b| b.to_string()),
        fmt_opt(r.mean_ratio),
        fmt_opt(r.se_ratio),
        r.reps_used.to_string(),
        fmt_opt(r.true_var),
        fmt_opt(r.mean_estimate),
    ]
}

pub fn write_ratio_csv<W: Write>(report: &RatioReport, out: W) -> Result<()> {
    let rows: Vec<_> = report.rows.iter().map(ratio_record).collect();
    write_table(out, &RATIO_HEADER, &rows)
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn series_key(r: &RatioRow) -> String {
    match r.b_frac {
        Some(b) => format!("{} {} b={}", r.stat, r.method, b),
        None => format!("{} {}", r.stat, r.method),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Ratio against n, one series per (statistic, method); error bars span
/// two standard errors each way and a reference line marks ratio 1.
pub fn write_ratio_svg<W: Write>(report: &RatioReport, mut out: W) -> Result<()> {
    let pts: Vec<&RatioRow> = report.rows.iter().filter(|r| r.mean_ratio.is_some()).collect();
    let (mut n_lo, mut n_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_lo, mut y_hi) = (1.0_f64, 1.0_f64);
    for r in &report.rows {
        n_lo = n_lo.min(r.n as f64);
        n_hi = n_hi.max(r.n as f64);
    }
    for r in &pts {
        let m = r.mean_ratio.unwrap();
        let se = r.se_ratio.unwrap_or(0.0);
        y_lo = y_lo.min(m - 2.0 * se);
        y_hi = y_hi.max(m + 2.0 * se);
    }
    if !n_lo.is_finite() {
        (n_lo, n_hi) = (0.0, 1.0);
    }
    if n_hi <= n_lo {
        n_hi = n_lo + 1.0;
    }
    let pad = 0.05 * (y_hi - y_lo).max(0.1);
    y_lo -= pad;
    y_hi += pad;
    let sx = |n: f64| MARGIN + (n - n_lo) / (n_hi - n_lo) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, x1, yb, yt) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(s, r#"<line class="axis" x1="{x0}" y1="{yb}" x2="{x1}" y2="{yb}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line class="axis" x1="{x0}" y1="{yb}" x2="{x0}" y2="{yt}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">n</text>"#, WIDTH / 2.0, HEIGHT - 20.0);
    let _ = writeln!(
        s,
        r#"<text x="20" y="{}" transform="rotate(-90 20 {})" text-anchor="middle">estimate / true variance</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (v, anchor_y) in [(y_lo, yb), (y_hi, yt)] {
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{:.3}</text>"#, x0 - 5.0, anchor_y, v);
    }
    for (v, anchor_x) in [(n_lo, x0), (n_hi, x1)] {
        let _ = writeln!(s, r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#, anchor_x, yb + 18.0, v);
    }
    let yr = sy(1.0);
    let _ = writeln!(
        s,
        r#"<line class="reference" x1="{x0}" y1="{yr:.2}" x2="{x1}" y2="{yr:.2}" stroke="gray" stroke-dasharray="4 4"/>"#
    );

    let mut keys: Vec<String> = Vec::new();
    for r in &pts {
        let k = series_key(r);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    for (si, key) in keys.iter().enumerate() {
        let color = COLORS[si % COLORS.len()];
        let mut series: Vec<&&RatioRow> = pts.iter().filter(|r| &series_key(r) == key).collect();
        series.sort_by_key(|r| r.n);
        let coords: Vec<String> = series
            .iter()
            .map(|r| format!("{:.2},{:.2}", sx(r.n as f64), sy(r.mean_ratio.unwrap())))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="series" fill="none" stroke="{color}" points="{}"/>"#,
            coords.join(" ")
        );
        for r in &series {
            let (x, m) = (sx(r.n as f64), r.mean_ratio.unwrap());
            let se = r.se_ratio.unwrap_or(0.0);
            let _ = writeln!(
                s,
                r#"<line class="errorbar" x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="{color}"/>"#,
                sy(m - 2.0 * se),
                sy(m + 2.0 * se)
            );
            let _ = writeln!(
                s,
                r#"<circle class="marker" cx="{x:.2}" cy="{:.2}" r="4" fill="{color}"/>"#,
                sy(m)
            );
        }
        let ly = MARGIN + 16.0 * si as f64;
        let _ = writeln!(
            s,
            r#"<text class="legend" x="{}" y="{ly}" fill="{color}">{}</text>"#,
            x1 - 200.0,
            escape(key)
        );
    }
    s.push_str("</svg>\n");
    out.write_all(s.as_bytes())?;
    Ok(())
}

pub fn emit_report(report: &RatioReport, path: &Path, format: ReportFormat) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    match format {
        ReportFormat::Csv => write_ratio_csv(report, &mut out)?,
        ReportFormat::Svg => write_ratio_svg(report, &mut out)?,
    }
    out.flush()?;
    Ok(())
}
