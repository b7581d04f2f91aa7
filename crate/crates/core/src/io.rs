//! CSV and JSON export of fields, series and reports.
//!
//! Formats are deliberately plain: comma-separated columns with a single
//! header line, full double precision. Readers skip the header by detecting
//! a non-numeric first field.

use crate::Result;
use num_complex::Complex64;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

/// Two-column CSV `x,value`.
pub fn write_field_csv(path: &Path, xs: &[f64], values: &[f64]) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "x,value")?;
    for (x, v) in xs.iter().zip(values) {
        writeln!(w, "{x:.17e},{v:.17e}")?;
    }
    Ok(())
}

/// Three-column CSV `x,re,im` for complex fields.
pub fn write_complex_field_csv(path: &Path, xs: &[f64], values: &[Complex64]) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "x,re,im")?;
    for (x, v) in xs.iter().zip(values) {
        writeln!(w, "{x:.17e},{:.17e},{:.17e}", v.re, v.im)?;
    }
    Ok(())
}

/// Two-column time series CSV with caller-named columns.
pub fn write_series_csv(
    path: &Path,
    columns: (&str, &str),
    times: &[f64],
    values: &[f64],
) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "{},{}", columns.0, columns.1)?;
    for (t, v) in times.iter().zip(values) {
        writeln!(w, "{t:.17e},{v:.17e}")?;
    }
    Ok(())
}

/// Projection series CSV `t,a,b,eta_norm`.
pub fn write_projections_csv(
    path: &Path,
    projections: &[crate::evolver::ProjectionSample],
) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "t,a,b,eta_norm")?;
    for p in projections {
        writeln!(
            w,
            "{:.17e},{:.17e},{:.17e},{:.17e}",
            p.t, p.a, p.b, p.eta_norm
        )?;
    }
    Ok(())
}

/// Pretty-printed JSON of any serializable report.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| crate::Error::Solver(format!("json: {e}")))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// Reads the first two numeric columns of a CSV, skipping header lines.
pub fn read_series_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let f = std::fs::File::open(path)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for line in std::io::BufReader::new(f).lines() {
        let line = line?;
        let mut parts = line.split(',');
        let (Some(a), Some(b)) = (parts.next(), parts.next()) else {
            continue;
        };
        if let (Ok(x), Ok(y)) = (a.trim().parse::<f64>(), b.trim().parse::<f64>()) {
            xs.push(x);
            ys.push(y);
        }
    }
    Ok((xs, ys))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_roundtrip_preserves_doubles() {
        let dir = std::env::temp_dir().join("kg_soliton_io_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("series.csv");
        let ts = vec![0.0, 0.125, std::f64::consts::PI];
        let us = vec![1.0, -3.5e-17, 0.3000000000000004];
        write_series_csv(&path, ("t", "u"), &ts, &us).unwrap();
        let (ts2, us2) = read_series_csv(&path).unwrap();
        assert_eq!(ts, ts2);
        assert_eq!(us, us2);
        std::fs::remove_dir_all(&dir).ok();
    }
}
