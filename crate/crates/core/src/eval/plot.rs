//! Learning-curve SVG: F-measure against annotations, with one labeled
//! vertical line per stopping criterion.

use std::fmt::Write as _;

use crate::engine::RunTrace;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub annotations: f64,
    pub f_measure: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StopMarker {
    pub label: String,
    pub annotations: f64,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;
const LABEL_STEP: f64 = 14.0;
const COLLISION_PX: f64 = 48.0;
const PALETTE: [&str; 8] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

impl CurvePoint {
    pub fn from_trace<T: Scalar>(trace: &RunTrace<T>) -> Vec<CurvePoint> {
        trace
            .rows
            .iter()
            .map(|r| CurvePoint {
                annotations: r.labeled() as f64,
                f_measure: r.f_measure.as_f64(),
            })
            .collect()
    }

    pub fn to_csv(curve: &[CurvePoint]) -> String {
        let mut out = String::from("annotations,f_measure\n");
        for p in curve {
            let _ = writeln!(out, "{},{}", p.annotations, p.f_measure);
        }
        out
    }
}

/// Mean annotations and mean F at each iteration index, over the traces that
/// reached it.
pub fn average_curve<T: Scalar>(traces: &[RunTrace<T>]) -> Vec<CurvePoint> {
    let longest = traces.iter().map(|t| t.rows.len()).max().unwrap_or(0);
    (0..longest)
        .map(|i| {
            let rows: Vec<_> = traces.iter().filter_map(|t| t.rows.get(i)).collect();
            let n = rows.len() as f64;
            CurvePoint {
                annotations: rows.iter().map(|r| r.labeled() as f64).sum::<f64>() / n,
                f_measure: rows.iter().map(|r| r.f_measure.as_f64()).sum::<f64>() / n,
            }
        })
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn padded(lo: f64, hi: f64, pad: f64) -> (f64, f64) {
    if hi - lo < 1e-12 {
        (lo - pad, hi + pad)
    } else {
        (lo, hi)
    }
}

/// Renders the curve and markers as a standalone SVG document. Labels of
/// markers closer than a few pixels apart are stacked so none overlap.
pub fn render_learning_curve(curve: &[CurvePoint], markers: &[StopMarker], title: &str) -> String {
    let xs = curve.iter().map(|p| p.annotations).chain(markers.iter().map(|m| m.annotations));
    let (x_lo, x_hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    let (x_lo, x_hi) = if x_lo.is_finite() { padded(x_lo.min(0.0), x_hi, 1.0) } else { (0.0, 1.0) };
    let fs = curve.iter().map(|p| 100.0 * p.f_measure);
    let (f_lo, f_hi) = fs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), f| (lo.min(f), hi.max(f)));
    let (y_lo, y_hi) = if f_lo.is_finite() {
        padded((f_lo - 2.0).max(0.0).floor(), (f_hi + 2.0).min(100.0).ceil(), 1.0)
    } else {
        (0.0, 100.0)
    };

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#333"/>"##
    );
    for i in 0..=5 {
        let fx = x_lo + (x_hi - x_lo) * i as f64 / 5.0;
        let fy = y_lo + (y_hi - y_lo) * i as f64 / 5.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{:.0}</text>"#,
            sx(fx),
            TOP + plot_h + 16.0,
            fx
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{:.1}</text>"#,
            LEFT - 6.0,
            sy(fy) + 4.0,
            fy
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">Number of annotations</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">F-measure</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let points: Vec<String> = curve
        .iter()
        .map(|p| format!("{:.2},{:.2}", sx(p.annotations), sy(100.0 * p.f_measure)))
        .collect();
    let _ = writeln!(
        svg,
        r##"<polyline fill="none" stroke="#000" stroke-width="1.5" points="{}"/>"##,
        points.join(" ")
    );
    if curve.len() == 1 {
        let p = curve[0];
        let _ = writeln!(
            svg,
            r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#000"/>"##,
            sx(p.annotations),
            sy(100.0 * p.f_measure)
        );
    }

    let mut placed: Vec<f64> = Vec::new();
    for (i, m) in markers.iter().enumerate() {
        let x = sx(m.annotations);
        let slot = placed.iter().filter(|&&px| (px - x).abs() < COLLISION_PX).count();
        placed.push(x);
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="{color}" stroke-dasharray="4 3"/>"#,
            TOP + plot_h
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" fill="{color}">{}</text>"#,
            x + 3.0,
            TOP + 12.0 + LABEL_STEP * slot as f64,
            escape(&m.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
