//! Standalone SVG charts, written by hand so the output is stable text.

use std::fmt::Write as _;

use ndi_core::numerics::LinearFit;
use ndi_core::NdiReport;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;

const DISSIMILAR: &str = "#d62728";
const SIMILAR: &str = "#2ca02c";

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Maps data ranges onto the plotting area.
struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        Frame {
            x: padded(x),
            y: padded(y),
        }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

/// Widens a range by 5% on each side; a zero-width range gets a unit span.
fn padded((lo, hi): (f64, f64)) -> (f64, f64) {
    let span = hi - lo;
    if span <= f64::EPSILON * lo.abs().max(1.0) {
        return (lo - 0.5, hi + 0.5);
    }
    (lo - 0.05 * span, hi + 0.05 * span)
}

fn range(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

fn open(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        out,
        r#"<path d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" fill="none" stroke="black"/>"#
    );
    for t in 0..=4 {
        let f = t as f64 / 4.0;
        let xv = frame.x.0 + f * (frame.x.1 - frame.x.0);
        let yv = frame.y.0 + f * (frame.y.1 - frame.y.0);
        let (px, py) = (frame.px(xv), frame.py(yv));
        let _ = writeln!(
            out,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y0 + 16.0,
            tick(xv)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 6.0,
            py + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 14.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Node-level values in descending order, dissimilar points in red and
/// similar points in green, with a dashed marker at the elbow rank.
pub fn sorted_node_ndi(report: &NdiReport) -> String {
    let order = &report.elbow.order;
    let values: Vec<f64> = order.iter().map(|&i| report.node_ndi[i]).collect();
    let frame = Frame::new((0.0, (values.len().max(2) - 1) as f64), range(&values));

    let mut out = String::new();
    open(
        &mut out,
        &format!(
            "Sorted node-level NDI (network NDI {:.4})",
            report.network_ndi
        ),
    );
    axes(&mut out, &frame, "rank", "node-level NDI");

    let points: Vec<String> = values
        .iter()
        .enumerate()
        .map(|(r, &v)| format!("{:.2},{:.2}", frame.px(r as f64), frame.py(v)))
        .collect();
    let _ = writeln!(
        out,
        r##"<polyline class="curve" points="{}" fill="none" stroke="#555555"/>"##,
        points.join(" ")
    );

    if !report.elbow.flat && !report.is_degenerate() {
        let x = frame.px(report.elbow.elbow_index as f64);
        let _ = writeln!(
            out,
            r##"<line class="elbow" x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{}" stroke="#1f77b4" stroke-dasharray="4 3"/>"##,
            HEIGHT - BOTTOM
        );
    }

    for (r, (&node, &v)) in order.iter().zip(&values).enumerate() {
        let (class, color) = if report.is_dissimilar(node) {
            ("dissimilar", DISSIMILAR)
        } else {
            ("similar", SIMILAR)
        };
        let _ = writeln!(
            out,
            r#"<circle class="point {class}" cx="{:.2}" cy="{:.2}" r="3.5" fill="{color}"><title>{}</title></circle>"#,
            frame.px(r as f64),
            frame.py(v),
            escape(&report.labels()[node])
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Scatter of `ys` against `xs` with the fitted line and its R².
pub fn scatter(
    title: &str,
    x_label: &str,
    y_label: &str,
    xs: &[f64],
    ys: &[f64],
    names: &[String],
    fit: Option<&LinearFit>,
) -> String {
    let (xr, yr) = (range(xs), range(ys));
    let frame = Frame::new(xr, yr);
    let mut out = String::new();
    open(&mut out, title);
    axes(&mut out, &frame, x_label, y_label);

    if let Some(f) = fit {
        let (a, b) = (frame.x.0, frame.x.1);
        let _ = writeln!(
            out,
            r##"<line class="fit" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#1f77b4"/>"##,
            frame.px(a),
            frame.py(f.slope * a + f.intercept),
            frame.px(b),
            frame.py(f.slope * b + f.intercept)
        );
        let _ = writeln!(
            out,
            r#"<text class="r-squared" x="{:.2}" y="{:.2}" text-anchor="end">R² = {:.4}</text>"#,
            WIDTH - RIGHT - 4.0,
            TOP + 16.0,
            f.r_squared
        );
    }
    for ((&x, &y), name) in xs.iter().zip(ys).zip(names) {
        let _ = writeln!(
            out,
            r##"<circle class="point" cx="{:.2}" cy="{:.2}" r="3.5" fill="#333333"><title>{}</title></circle>"##,
            frame.px(x),
            frame.py(y),
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}
