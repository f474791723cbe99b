//! JSON and CSV output.
//!
//! CSV files always start with a header row, use `,` as delimiter and `.` as
//! decimal separator. Floats are written in shortest round-trip form.

use std::io::Write;
use std::path::Path;

use heavytail_core::classes::{ClassReport, ScanRow};
use heavytail_core::orders::ConvexityCertificate;
use heavytail_core::pooling::DiversificationReport;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Header plus rows of equal width.
pub fn csv_table<R: Serialize>(header: &[&str], rows: impl IntoIterator<Item = R>) -> csv::Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// `(x, φ(x))` of a convexity certificate.
pub fn certificate_csv(c: &ConvexityCertificate) -> csv::Result<String> {
    csv_table(&["x", "phi"], c.grid.iter().zip(&c.values))
}

/// Certificates of all applicable baselines, one `(baseline, x, φ(x))` row per
/// grid point.
pub fn class_report_csv(r: &ClassReport) -> csv::Result<String> {
    let certs = [
        ("pareto", &r.super_pareto.certificate),
        ("frechet", &r.super_frechet.certificate),
        ("cauchy", &r.super_cauchy.certificate),
    ];
    let rows = certs.into_iter().filter_map(|(name, c)| c.as_ref().map(|c| (name, c))).flat_map(|(name, c)| {
        c.grid.iter().zip(&c.values).map(move |(x, y)| (name, *x, *y))
    });
    csv_table(&["baseline", "x", "phi"], rows)
}

/// Label of a scan row: `alpha=<α>` for the α scan, `beta=<β₁>:<β₂>` for the
/// β scan.
pub fn scan_label(row: &ScanRow) -> String {
    if row.left.alpha == 1.0 && row.left.beta == 0.0 && row.right.alpha < 1.0 {
        format!("alpha={}", row.right.alpha)
    } else {
        format!("beta={}:{}", row.left.beta, row.right.beta)
    }
}

/// `(row, grid_point, second_difference)` for every interior grid point.
pub fn scan_csv(rows: &[ScanRow]) -> csv::Result<String> {
    let records = rows.iter().filter_map(|r| r.certificate.as_ref().map(|c| (scan_label(r), c))).flat_map(|(label, c)| {
        c.second_differences.iter().enumerate().map(move |(i, d)| (label.clone(), c.grid[i + 1], *d))
    });
    csv_table(&["row", "grid_point", "second_difference"], records)
}

/// Quantile penalty curve with the run header repeated on every row.
pub fn penalty_csv(r: &DiversificationReport) -> csv::Result<String> {
    let curve = r.penalty_curve.as_deref().unwrap_or(&[]);
    csv_table(
        &["u", "ratio", "seed", "n", "confidence"],
        curve.iter().map(|&(u, q)| (u, q, r.seed, r.n, r.confidence)),
    )
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let s = csv_table(&["a", "b"], [(1.5, 2.0), (0.1, 1e-9)]).unwrap();
        assert_eq!(s, "a,b\n1.5,2.0\n0.1,1e-9\n");
    }
}
