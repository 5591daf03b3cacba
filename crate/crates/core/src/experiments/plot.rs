//! Deterministic SVG line charts plus the CSV they are drawn from.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::sweep::{means_by_size, SweepRow};
use crate::error::{Error, Result};

pub struct Panel<'a> {
    pub title: &'a str,
    pub rows: &'a [SweepRow],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlotSummary {
    pub panels: usize,
    pub points: usize,
    pub legend_entries: usize,
}

const SERIES: [(&str, &str); 3] = [("measured", "#1b6ca8"), ("ours", "#d1495b"), ("Ben-David", "#66a182")];
const W: f64 = 360.0;
const H: f64 = 260.0;
const PAD: f64 = 44.0;

pub fn write_sweep_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Renders one panel per entry (mean of each series against |S|) to `svg`,
/// and writes all rows to the sibling `.csv`.
pub fn emit_plot(panels: &[Panel<'_>], svg: &Path) -> Result<PlotSummary> {
    if panels.is_empty() || panels.iter().any(|p| p.rows.is_empty()) {
        return Err(Error::InvalidInput("nothing to plot".into()));
    }
    let width = W * panels.len() as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{}\" viewBox=\"0 0 {width} {}\" font-family=\"sans-serif\" font-size=\"11\">",
        H + 30.0,
        H + 30.0
    );
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let mut points = 0;
    let mut all_rows = Vec::new();
    for (k, panel) in panels.iter().enumerate() {
        let x0 = W * k as f64;
        let means = means_by_size(panel.rows);
        let xs: Vec<f64> = means.iter().map(|m| m.0 as f64).collect();
        let (xmin, xmax) = (xs[0], xs[xs.len() - 1].max(xs[0] + 1.0));
        let ymax = means.iter().map(|m| m.1.max(m.2).max(m.3)).fold(1e-9, f64::max) * 1.05;
        let px = |x: f64| x0 + PAD + (x - xmin) / (xmax - xmin) * (W - 2.0 * PAD);
        let py = |y: f64| H - PAD + 10.0 - y / ymax * (H - 2.0 * PAD);
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">{}</text>",
            x0 + W / 2.0,
            panel.title
        );
        let _ = writeln!(
            out,
            "<path d=\"M{:.2},{:.2} L{:.2},{:.2} L{:.2},{:.2}\" fill=\"none\" stroke=\"black\"/>",
            px(xmin),
            py(ymax),
            px(xmin),
            py(0.0),
            px(xmax),
            py(0.0)
        );
        for &x in &xs {
            let _ =
                writeln!(out, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{x}</text>", px(x), py(0.0) + 14.0);
        }
        for t in 0..=4 {
            let y = ymax * t as f64 / 4.0;
            let _ = writeln!(
                out,
                "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{y:.2}</text>",
                px(xmin) - 4.0,
                py(y) + 4.0
            );
        }
        let _ =
            writeln!(out, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">|S|</text>", x0 + W / 2.0, H + 22.0);
        for (s, (name, color)) in SERIES.iter().enumerate() {
            let ys: Vec<f64> = means.iter().map(|m| [m.1, m.2, m.3][s]).collect();
            let pts: Vec<String> = xs.iter().zip(&ys).map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y))).collect();
            let _ = writeln!(
                out,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
                pts.join(" ")
            );
            for (x, y) in xs.iter().zip(&ys) {
                let _ = writeln!(out, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>", px(*x), py(*y));
                points += 1;
            }
            let ly = 34.0 + 14.0 * s as f64;
            let lx = x0 + W - PAD - 80.0;
            let _ = writeln!(out, "<g class=\"legend\"><rect x=\"{lx:.2}\" y=\"{:.2}\" width=\"10\" height=\"10\" fill=\"{color}\"/><text x=\"{:.2}\" y=\"{ly:.2}\">{name}</text></g>", ly - 9.0, lx + 14.0);
        }
        all_rows.extend_from_slice(panel.rows);
    }
    out.push_str("</svg>\n");
    fs::write(svg, out)?;
    write_sweep_csv(&all_rows, &svg.with_extension("csv"))?;
    Ok(PlotSummary { panels: panels.len(), points, legend_entries: SERIES.len() })
}
