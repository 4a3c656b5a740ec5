//! CSV, JSON and SVG artifacts of an experiment, written atomically.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tempfile::NamedTempFile;

use crate::error::{Error, Result};
use crate::experiments::properties::PropertyReport;
use crate::experiments::sweep::{ExperimentOutput, Metadata, SweepRow};
use crate::experiments::ExperimentConfig;
use crate::measures::MeasureKind;

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

fn csv_bytes<T: Serialize>(items: impl IntoIterator<Item = T>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for it in items {
        w.serialize(it).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

#[derive(Serialize)]
struct MetadataFile<'a> {
    #[serde(flatten)]
    metadata: &'a Metadata,
    passed: bool,
    config: &'a ExperimentConfig,
}

/// Writes `<name>-<measure>.csv` (and `.svg`), `<name>-checks.csv` and
/// `<name>-metadata.json` into `dir`, creating it if needed.
pub fn write_outputs(out: &ExperimentOutput, dir: &Path, svg: bool) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let name = &out.config.name;
    let mut written = Vec::new();
    for &m in &out.config.measures {
        let rows: Vec<&SweepRow> = out.rows_for(m).collect();
        let p = dir.join(format!("{name}-{m}.csv"));
        write_atomic(&p, &csv_bytes(rows.iter().copied())?)?;
        written.push(p);
        if svg {
            let p = dir.join(format!("{name}-{m}.svg"));
            write_atomic(&p, render_svg(&format!("{name}: Δ {m}"), m, &rows).as_bytes())?;
            written.push(p);
        }
    }
    let p = dir.join(format!("{name}-checks.csv"));
    write_atomic(&p, &csv_bytes(&out.checks)?)?;
    written.push(p);
    let meta = MetadataFile { metadata: &out.metadata, passed: out.passed(), config: &out.config };
    let p = dir.join(format!("{name}-metadata.json"));
    let json = serde_json::to_string_pretty(&meta).map_err(|e| Error::Io(e.to_string()))?;
    write_atomic(&p, json.as_bytes())?;
    written.push(p);
    Ok(written)
}

/// Writes `properties.csv` into `dir`.
pub fn write_property_reports(reports: &[PropertyReport], dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let p = dir.join("properties.csv");
    write_atomic(&p, &csv_bytes(reports)?)?;
    Ok(p)
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn nice_ticks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if !(hi > lo) {
        return vec![lo];
    }
    let raw = (hi - lo) / n as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|s| s * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

/// Line plot of Δ against temperature, one series per ε.
pub fn render_svg(title: &str, measure: MeasureKind, rows: &[&SweepRow]) -> String {
    let (w, h, ml, mr, mt, mb) = (640.0, 420.0, 80.0, 130.0, 40.0, 50.0);
    let (pw, ph) = (w - ml - mr, h - mt - mb);
    let finite = |v: f64| v.is_finite();
    let ts: Vec<f64> = rows.iter().map(|r| r.temperature).filter(|v| finite(*v)).collect();
    let ds: Vec<f64> = rows.iter().map(|r| r.delta).filter(|v| finite(*v)).collect();
    let range = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi - lo < 1e-300 {
            (lo - 0.5 * lo.abs().max(1e-12), hi + 0.5 * hi.abs().max(1e-12))
        } else {
            (lo, hi)
        }
    };
    let (t0, t1) = range(&ts);
    let (d0, d1) = range(&ds);
    let pad = 0.05 * (d1 - d0);
    let (d0, d1) = (d0 - pad, d1 + pad);
    let x = |t: f64| ml + (t - t0) / (t1 - t0) * pw;
    let y = |d: f64| mt + ph - (d - d0) / (d1 - d0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        ml + pw / 2.0,
        escape(title)
    );
    let _ = writeln!(s, r#"<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for t in nice_ticks(t0, t1, 6) {
        let _ = writeln!(
            s,
            r#"<line x1="{0:.2}" y1="{1}" x2="{0:.2}" y2="{2}" stroke="black"/>"#,
            x(t),
            mt + ph,
            mt + ph + 5.0
        );
        let _ =
            writeln!(s, r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#, x(t), mt + ph + 18.0, fmt_tick(t));
    }
    for d in nice_ticks(d0, d1, 6) {
        let _ = writeln!(s, r#"<line x1="{}" y1="{1:.2}" x2="{ml}" y2="{1:.2}" stroke="black"/>"#, ml - 5.0, y(d));
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, ml - 8.0, y(d) + 4.0, fmt_tick(d));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">T</text>"#, ml + pw / 2.0, h - 10.0);
    let unit = if measure.unit().is_empty() { String::new() } else { format!(" [{}]", measure.unit()) };
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">Δ {1}{2}</text>"#,
        mt + ph / 2.0,
        measure,
        unit
    );

    let mut eps: Vec<f64> = rows.iter().map(|r| r.epsilon).collect();
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    for (k, e) in eps.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut pts: Vec<(f64, f64)> =
            rows.iter().filter(|r| r.epsilon == *e && finite(r.delta)).map(|r| (r.temperature, r.delta)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let path: Vec<String> = pts.iter().map(|(t, d)| format!("{:.2},{:.2}", x(*t), y(*d))).collect();
        let _ =
            writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, path.join(" "));
        for (t, d) in &pts {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, x(*t), y(*d));
        }
        let ly = mt + 14.0 + 18.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            w - mr + 12.0,
            w - mr + 32.0
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}">ε = {e}</text>"#, w - mr + 38.0, ly + 4.0);
    }
    s.push_str("</svg>\n");
    s
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() < 1e-3 || v.abs() >= 1e4 {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_cover_the_range() {
        let t = nice_ticks(3.0, 5.0, 6);
        assert!(t.first().unwrap() >= &3.0 && t.last().unwrap() <= &5.0 && t.len() >= 4);
        assert_eq!(nice_ticks(1.0, 1.0, 5), vec![1.0]);
    }

    #[test]
    fn svg_has_one_series_per_epsilon() {
        let row = |e: f64, t: f64| SweepRow {
            measure: MeasureKind::Discord,
            epsilon: e,
            temperature: t,
            unperturbed: 0.0,
            perturbed: e * t,
            delta: e * t,
            converged: Some(true),
            chi_bound: None,
        };
        let rows = [row(0.0, 1.0), row(0.0, 2.0), row(0.2, 1.0), row(0.2, 2.0)];
        let refs: Vec<&SweepRow> = rows.iter().collect();
        let svg = render_svg("x < y", MeasureKind::Discord, &refs);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("x &lt; y"));
    }
}
