//! Two-axis factor maps as SVG 1.1.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::report::AnalysisReport;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 70.0;

struct Point<'a> {
    label: &'a str,
    x: f64,
    y: f64,
    class: &'static str,
}

/// Scatter of row scores and column scores on axes `pair` (1-based).
pub fn render_map(report: &AnalysisReport, pair: (usize, usize)) -> Result<String> {
    if report.axes.len() < 2 {
        return Err(Error::Usage(format!(
            "a factor map needs at least 2 axes, the report has {}",
            report.axes.len()
        )));
    }
    let find = |k: usize| {
        report
            .axes
            .iter()
            .find(|a| a.index == k)
            .ok_or_else(|| Error::Usage(format!("axis {k} is not in the report")))
    };
    let (ax, ay) = (find(pair.0)?, find(pair.1)?);

    let mut points = Vec::new();
    for (i, (&x, &y)) in ax.row_scores.iter().zip(&ay.row_scores).enumerate() {
        points.push(Point {
            label: label(&report.inputs.row_labels, i),
            x,
            y,
            class: "row",
        });
    }
    for (j, (&x, &y)) in ax.col_scores.iter().zip(&ay.col_scores).enumerate() {
        points.push(Point {
            label: label(&report.inputs.col_labels, j),
            x,
            y,
            class: "col",
        });
    }

    let (x0, x1) = extent(points.iter().map(|p| p.x));
    let (y0, y1) = extent(points.iter().map(|p| p.y));
    let span = SIZE - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * span;
    let py = |y: f64| SIZE - MARGIN - (y - y0) / (y1 - y0) * span;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<line class="origin" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
        MARGIN,
        py(0.0),
        SIZE - MARGIN,
        py(0.0)
    )
    .unwrap();
    writeln!(
        s,
        r#"<line class="origin" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
        px(0.0),
        MARGIN,
        px(0.0),
        SIZE - MARGIN
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="13">Axis {} ({:.4})</text>"#,
        SIZE - MARGIN,
        SIZE - MARGIN / 3.0,
        ax.index,
        ax.value
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="13">Axis {} ({:.4})</text>"#,
        MARGIN / 3.0,
        MARGIN / 2.0,
        ay.index,
        ay.value
    )
    .unwrap();

    for p in &points {
        let (cx, cy) = (px(p.x), py(p.y));
        let (fill, shape) = match p.class {
            "row" => ("steelblue", format!(r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="4""#)),
            _ => (
                "firebrick",
                format!(r#"<rect x="{:.2}" y="{:.2}" width="8" height="8""#, cx - 4.0, cy - 4.0),
            ),
        };
        writeln!(
            s,
            r#"<g class="{}" data-label="{}" data-x="{:?}" data-y="{:?}">{shape} fill="{fill}"/><text x="{:.2}" y="{:.2}" font-size="11" fill="{fill}">{}</text></g>"#,
            p.class,
            escape(p.label),
            p.x,
            p.y,
            cx + 6.0,
            cy - 6.0,
            escape(p.label)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn label(labels: &[String], i: usize) -> &str {
    labels.get(i).map(String::as_str).unwrap_or("")
}

/// Range covering the values and the origin, padded by 10%.
fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((0.0_f64, 0.0_f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi - lo == 0.0 {
        return (-1.0, 1.0);
    }
    let pad = 0.1 * (hi - lo);
    (lo - pad, hi + pad)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
