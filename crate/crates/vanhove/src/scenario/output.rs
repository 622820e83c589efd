//! Bit-stable run artifacts.
//!
//! CSV files use a fixed column order, 17-significant-digit scientific
//! floats, and `\n` line endings; the JSON summary is pretty-printed with a
//! fixed field order. Identical config + seed therefore reproduces every
//! file byte for byte. Plots are optional static SVG.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::evolution::DecayCurve;
use crate::pointer::PointerBasis;

use super::{RunSummary, ScenarioError, ScenarioRun};

/// 17 significant decimal digits, scientific.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// `t,re,im,abs,abs_over_ref` rows; the ratio column reads 0 for a
/// degenerate (zero-reference) curve.
pub fn decay_csv(curve: &DecayCurve) -> String {
    let mut out = String::from("t,re,im,abs,abs_over_ref\n");
    for ((&t, v), &m) in curve
        .times()
        .iter()
        .zip(curve.values())
        .zip(curve.magnitudes())
    {
        let ratio = if curve.reference() == 0.0 {
            0.0
        } else {
            m / curve.reference()
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt(t),
            fmt(v.re),
            fmt(v.im),
            fmt(m),
            fmt(ratio)
        ));
    }
    out
}

/// One row per pointer-basis entry: the multi-index coordinates
/// (omega, o1, …, oN), then sigma and rho_hat.
pub fn pointer_csv(basis: &PointerBasis) -> String {
    let dim = basis.grid().dim();
    let mut header = String::from("omega");
    for k in 1..dim {
        header.push_str(&format!(",o{k}"));
    }
    header.push_str(",sigma,rho_hat\n");
    let mut out = header;
    for k in 0..basis.len() {
        let coords = basis.coordinates(k);
        let mut row = String::new();
        for (i, &c) in coords.iter().enumerate() {
            if i > 0 {
                row.push(',');
            }
            row.push_str(&fmt(c));
        }
        row.push_str(&format!(
            ",{},{}\n",
            fmt(basis.sigma()[k]),
            fmt(basis.rho_hat()[k])
        ));
        out.push_str(&row);
    }
    out
}

/// Pretty-printed JSON summary with a trailing newline.
pub fn summary_json(summary: &RunSummary) -> String {
    let mut text = serde_json::to_string_pretty(summary).expect("summary serializes");
    text.push('\n');
    text
}

/// Minimal static line plot of |value| against t.
fn decay_svg(curve: &DecayCurve, log_scale: bool) -> String {
    const W: f64 = 800.0;
    const H: f64 = 500.0;
    const ML: f64 = 70.0;
    const MR: f64 = 20.0;
    const MT: f64 = 30.0;
    const MB: f64 = 50.0;

    let times = curve.times();
    let t_min = times[0];
    let t_max = times[times.len() - 1].max(t_min + 1e-12);

    let magnitudes: Vec<f64> = if log_scale {
        let top = curve
            .magnitudes()
            .iter()
            .cloned()
            .fold(f64::MIN_POSITIVE, f64::max);
        let floor = (top * 1e-30).max(1e-300);
        curve
            .magnitudes()
            .iter()
            .map(|&m| m.max(floor).log10())
            .collect()
    } else {
        curve.magnitudes().to_vec()
    };
    let mut y_min = magnitudes.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut y_max = magnitudes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if y_max - y_min < 1e-12 {
        y_max += 1.0;
        y_min -= 1.0;
    }

    let x_of = |t: f64| ML + (t - t_min) / (t_max - t_min) * (W - ML - MR);
    let y_of = |m: f64| H - MB - (m - y_min) / (y_max - y_min) * (H - MT - MB);

    let mut points = String::new();
    for (&t, &m) in times.iter().zip(&magnitudes) {
        points.push_str(&format!("{:.2},{:.2} ", x_of(t), y_of(m)));
    }

    let title = if log_scale {
        "log10 |value| vs t"
    } else {
        "|value| vs t"
    };
    format!(
        concat!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="500" viewBox="0 0 800 500">"#,
            "\n",
            r#"<rect width="800" height="500" fill="white"/>"#,
            "\n",
            r#"<line x1="{ml:.2}" y1="{hb:.2}" x2="{wr:.2}" y2="{hb:.2}" stroke="black"/>"#,
            "\n",
            r#"<line x1="{ml:.2}" y1="{mt:.2}" x2="{ml:.2}" y2="{hb:.2}" stroke="black"/>"#,
            "\n",
            r#"<text x="400" y="20" text-anchor="middle" font-family="monospace" font-size="14">{title}</text>"#,
            "\n",
            r#"<text x="{ml:.2}" y="{hb2:.2}" text-anchor="middle" font-family="monospace" font-size="12">{t0}</text>"#,
            "\n",
            r#"<text x="{wr:.2}" y="{hb2:.2}" text-anchor="middle" font-family="monospace" font-size="12">{t1}</text>"#,
            "\n",
            r#"<text x="{ml2:.2}" y="{hb:.2}" text-anchor="end" font-family="monospace" font-size="12">{y0}</text>"#,
            "\n",
            r#"<text x="{ml2:.2}" y="{mt2:.2}" text-anchor="end" font-family="monospace" font-size="12">{y1}</text>"#,
            "\n",
            r##"<polyline points="{points}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>"##,
            "\n</svg>\n",
        ),
        ml = ML,
        ml2 = ML - 6.0,
        mt = MT,
        mt2 = MT + 4.0,
        hb = H - MB,
        hb2 = H - MB + 18.0,
        wr = W - MR,
        title = title,
        t0 = format!("{t_min:.3}"),
        t1 = format!("{t_max:.3}"),
        y0 = format!("{y_min:.3e}"),
        y1 = format!("{y_max:.3e}"),
        points = points.trim_end(),
    )
}

/// Write decay.csv, pointer.csv, summary.json, and (optionally) the two SVG
/// plots under `dir`. Returns the written paths.
pub fn emit_outputs(
    run: &ScenarioRun,
    dir: &Path,
    plot: bool,
) -> Result<Vec<PathBuf>, ScenarioError> {
    fs::create_dir_all(dir).map_err(ScenarioError::Output)?;
    let mut written = Vec::new();
    let emit = |name: &str, contents: String| -> Result<PathBuf, ScenarioError> {
        let path = dir.join(name);
        let mut file = fs::File::create(&path).map_err(ScenarioError::Output)?;
        file.write_all(contents.as_bytes())
            .map_err(ScenarioError::Output)?;
        Ok(path)
    };

    written.push(emit("decay.csv", decay_csv(&run.curve))?);
    written.push(emit("pointer.csv", pointer_csv(&run.basis))?);
    written.push(emit("summary.json", summary_json(&run.summary))?);
    if plot {
        written.push(emit("decay_linear.svg", decay_svg(&run.curve, false))?);
        written.push(emit("decay_log.svg", decay_svg(&run.curve, true))?);
    }
    Ok(written)
}
