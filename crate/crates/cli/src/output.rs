//! CSV, JSON, SVG and matrix-dump writers. Every float goes out with 17
//! significant digits (`{:.16e}`) so that files round-trip exactly and two
//! runs with the same config are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use pants_core::resolvent::{GridPoint, GridSpec};
use pants_core::{DomainParams, OperatorMatrix};

use crate::config::DumpFormat;
use crate::CliError;

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

/// A float serialized as a JSON number in `{:.16e}` form; non-finite values
/// become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sci(pub f64);

impl Serialize for Sci {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(fmt_f64(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf, CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    w.write_record(header).map_err(|e| io_err(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))?;
    Ok(path.to_path_buf())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<PathBuf, CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io_err(path, e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))?;
    Ok(path.to_path_buf())
}

pub fn write_text(path: &Path, text: &str) -> Result<PathBuf, CliError> {
    fs::write(path, text).map_err(|e| io_err(path, e))?;
    Ok(path.to_path_buf())
}

pub fn dense_dump(m: &OperatorMatrix) -> String {
    let d = m.to_dense();
    let mut out = String::new();
    for r in 0..d.nrows() {
        let cells: Vec<String> =
            (0..d.ncols()).map(|c| format!("\"{},{}\"", fmt_f64(d[(r, c)].re), fmt_f64(d[(r, c)].im))).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn sparse_dump(m: &OperatorMatrix) -> String {
    let mut out = String::new();
    for (r, c, v) in m.triplets() {
        let _ = writeln!(out, "{r} {c} {} {}", fmt_f64(v.re), fmt_f64(v.im));
    }
    out
}

pub fn dump_matrix(dir: &Path, stem: &str, m: &OperatorMatrix, format: DumpFormat) -> Result<PathBuf, CliError> {
    match format {
        DumpFormat::Dense => write_text(&dir.join(format!("{stem}.csv")), &dense_dump(m)),
        DumpFormat::Sparse => write_text(&dir.join(format!("{stem}.txt")), &sparse_dump(m)),
    }
}

/// Piecewise-linear ramp from dark blue through teal to yellow, `t ∈ [0, 1]`.
fn ramp(t: f64) -> (u8, u8, u8) {
    const STOPS: [(f64, f64, f64); 3] = [(30.0, 30.0, 110.0), (30.0, 150.0, 140.0), (250.0, 230.0, 60.0)];
    let t = t.clamp(0.0, 1.0) * 2.0;
    let (i, f) = if t >= 2.0 { (1, 1.0) } else { (t as usize, t.fract()) };
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |x: f64, y: f64| (x + (y - x) * f).round() as u8;
    (mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

/// Heatmap of `log10 smin` over the grid with the domain boundary drawn on top.
pub fn pseudospectrum_svg(grid: &GridSpec, points: &[GridPoint], params: &DomainParams) -> String {
    const PX: f64 = 480.0;
    const LEGEND: f64 = 80.0;
    let logs: Vec<f64> = points.iter().map(|p| p.smin.max(1e-300).log10()).collect();
    let lo = logs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let (w, h) = (grid.x1 - grid.x0, grid.y1 - grid.y0);
    let cw = PX / grid.res as f64;
    let ch = PX / grid.res as f64;
    let sx = |x: f64| (x - grid.x0) / w * PX;
    let sy = |y: f64| PX - (y - grid.y0) / h * PX;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        PX + LEGEND,
        PX,
        PX + LEGEND,
        PX
    );
    for (k, l) in logs.iter().enumerate() {
        let (ix, iy) = (k % grid.res, k / grid.res);
        let (r, g, b) = ramp((l - lo) / span);
        let _ = writeln!(
            s,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="rgb({r},{g},{b})"/>"#,
            ix as f64 * cw,
            PX - (iy + 1) as f64 * ch,
            cw + 0.05,
            ch + 0.05
        );
    }
    let mut circle = |cx: f64, rad: f64| {
        let _ = writeln!(
            s,
            r#"<ellipse cx="{:.3}" cy="{:.3}" rx="{:.3}" ry="{:.3}" fill="none" stroke="white" stroke-width="1"/>"#,
            sx(cx),
            sy(0.0),
            rad / w * PX,
            rad / h * PX
        );
    };
    circle(0.0, 1.0);
    match *params {
        DomainParams::Disk => {}
        DomainParams::Annulus { r } => circle(0.0, r),
        DomainParams::Pants { a, r1, r2 } => {
            circle(0.0, r1);
            circle(a, r2);
        }
    }
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let (r, g, b) = ramp(t);
        let y = PX - (k + 1) as f64 * PX / 5.0;
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{y:.3}" width="20" height="{:.3}" fill="rgb({r},{g},{b})"/>"#,
            PX + 8.0,
            PX / 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.3}" font-size="11" font-family="monospace">{:.2}</text>"#,
            PX + 32.0,
            y + PX / 10.0,
            lo + t * span
        );
    }
    s.push_str("</svg>\n");
    s
}
