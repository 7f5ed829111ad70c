//! CSV persistence and SVG scatter plots of trial records.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

use crate::harness::{BoundaryFit, TrialRecord};

/// Column order of the trial CSV.
pub const CSV_HEADER: [&str; 10] =
    ["trial_id", "n_true", "d_min", "sigma", "srf", "snr", "n_detected", "success", "max_location_error", "seed"];

pub fn write_csv(records: &[TrialRecord], path: &Path) -> Result<()> {
    if records.is_empty() {
        bail!("refusing to write an empty record set to {}", path.display());
    }
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<TrialRecord>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        bail!("unexpected CSV header {header:?}");
    }
    r.deserialize().map(|row| row.map_err(Into::into)).collect()
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

/// Scatter of `log₁₀(1/σ)` against `log₁₀(SRF)`, successes and failures in
/// separate marker classes, with the fitted boundary when given.
pub fn render_svg(records: &[TrialRecord], fit: Option<&BoundaryFit>, title: &str) -> Result<String> {
    if records.is_empty() {
        bail!("no records to plot");
    }
    let xs: Vec<f64> = records.iter().map(TrialRecord::log_srf).collect();
    let ys: Vec<f64> = records.iter().map(TrialRecord::log_inv_sigma).collect();
    let span = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, hi + 0.5)
        }
    };
    let (x0, x1) = span(&xs);
    let (y0, y1) = span(&ys);
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )?;
    writeln!(s, "<style>.ok{{fill:#1f77b4}} .fail{{fill:#d62728}} text{{font-family:sans-serif;font-size:12px}}</style>")?;
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(s, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(title))?;
    writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    )?;
    for k in 0..=4 {
        let x = x0 + (x1 - x0) * k as f64 / 4.0;
        let y = y0 + (y1 - y0) * k as f64 / 4.0;
        writeln!(s, r#"<text x="{:.1}" y="{}" text-anchor="middle">{x:.2}</text>"#, px(x), HEIGHT - MARGIN + 16.0)?;
        writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">{y:.1}</text>"#, MARGIN - 6.0, py(y) + 4.0)?;
    }
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">log10(SRF)</text>"#, WIDTH / 2.0, HEIGHT - 20.0)?;
    writeln!(
        s,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">log10(1/sigma)</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    )?;
    for (class, want) in [("ok", true), ("fail", false)] {
        writeln!(s, r#"<g class="{class}">"#)?;
        for ((r, &x), &y) in records.iter().zip(&xs).zip(&ys) {
            if r.success == want {
                writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2"/>"#, px(x), py(y))?;
            }
        }
        writeln!(s, "</g>")?;
    }
    if let Some(f) = fit {
        let (ya, yb) = (f.slope * x0 + f.intercept, f.slope * x1 + f.intercept);
        writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1.5"/>"#,
            px(x0),
            py(ya),
            px(x1),
            py(yb)
        )?;
        writeln!(s, r#"<text x="{}" y="{}">slope {:.2}</text>"#, MARGIN + 8.0, MARGIN + 16.0, f.slope)?;
    }
    writeln!(s, "</svg>")?;
    Ok(s)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn write_svg(records: &[TrialRecord], fit: Option<&BoundaryFit>, title: &str, path: &Path) -> Result<()> {
    let svg = render_svg(records, fit, title)?;
    fs::write(path, svg).with_context(|| format!("writing {}", path.display()))
}
