//! Minimal static SVG charts. Output depends only on the data, so repeated
//! runs produce byte-identical files.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 4] = ["#1f4e9c", "#c0392b", "#16a085", "#e67e22"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bar {
    pub label: String,
    pub value: f64,
    /// Reference value drawn as a marker over the bar.
    pub reference: Option<f64>,
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if (hi - lo).abs() < 1e-12 {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.01 };
        (lo - pad, hi + pad)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tick_label(v: f64, span: f64) -> String {
    let decimals = if span >= 5.0 { 0 } else { ((-span.log10()).ceil() as i32 + 2).clamp(1, 8) as usize };
    format!("{v:.decimals$}")
}

fn header(out: &mut String, title: &str, x_label: &str, y_label: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        HEIGHT - 15.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
        (TOP + HEIGHT - BOTTOM) / 2.0,
        escape(y_label)
    );
}

fn axes(out: &mut String, f: &Frame, x_ticks: &[(f64, String)]) {
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(out, r#"<path d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" fill="none" stroke="black"/>"#);
    let span = f.y.1 - f.y.0;
    for i in 0..=5 {
        let v = f.y.0 + span * i as f64 / 5.0;
        let y = f.py(v);
        let _ = writeln!(out, r#"<line x1="{}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 8.0,
            y + 4.0,
            tick_label(v, span)
        );
    }
    for (v, label) in x_ticks {
        let x = f.px(*v);
        let _ = writeln!(out, r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{}" stroke="black"/>"#, y0 + 5.0);
        let _ = writeln!(out, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#, y0 + 20.0, escape(label));
    }
}

fn legend(out: &mut String, labels: &[(&str, &str)]) {
    for (i, (label, color)) in labels.iter().enumerate() {
        let y = TOP + 10.0 + 18.0 * i as f64;
        let x = WIDTH - RIGHT - 150.0;
        let _ = writeln!(out, r#"<rect x="{x}" y="{}" width="12" height="12" fill="{color}"/>"#, y - 10.0);
        let _ = writeln!(out, r#"<text x="{}" y="{y}">{}</text>"#, x + 18.0, escape(label));
    }
}

/// Scatter-and-line chart of one or more series.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let pts = series.iter().flat_map(|s| s.points.iter());
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    if !xmin.is_finite() {
        (xmin, xmax, ymin, ymax) = (0.0, 1.0, 0.0, 1.0);
    }
    let frame = Frame { x: padded(xmin, xmax), y: padded(ymin, ymax) };
    let mut out = String::new();
    header(&mut out, title, x_label, y_label);
    let mut xs: Vec<f64> = series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let stride = xs.len().div_ceil(12).max(1);
    let ticks: Vec<(f64, String)> = xs.iter().step_by(stride).map(|&x| (x, tick_label(x, xmax - xmin))).collect();
    axes(&mut out, &frame, &ticks);
    let mut labels = Vec::new();
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> =
            s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y))).collect();
        let _ =
            writeln!(out, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, path.join(" "));
        for &(x, y) in &s.points {
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, frame.px(x), frame.py(y));
        }
        labels.push((s.label.as_str(), color));
    }
    legend(&mut out, &labels);
    out.push_str("</svg>\n");
    out
}

/// Bar chart with optional per-bar reference markers.
pub fn bar_chart(title: &str, x_label: &str, y_label: &str, bars: &[Bar], reference_label: &str) -> String {
    let top = bars.iter().flat_map(|b| std::iter::once(b.value).chain(b.reference)).fold(0.0f64, f64::max);
    let frame = Frame { x: (-0.5, bars.len().max(1) as f64 - 0.5), y: (0.0, if top > 0.0 { top * 1.1 } else { 1.0 }) };
    let mut out = String::new();
    header(&mut out, title, x_label, y_label);
    let ticks: Vec<(f64, String)> = bars.iter().enumerate().map(|(i, b)| (i as f64, b.label.clone())).collect();
    axes(&mut out, &frame, &ticks);
    let half = 0.35 * (frame.px(1.0) - frame.px(0.0));
    for (i, b) in bars.iter().enumerate() {
        let x = frame.px(i as f64);
        let y = frame.py(b.value);
        let _ = writeln!(
            out,
            r#"<rect x="{:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{}" fill-opacity="0.7"/>"#,
            x - half,
            2.0 * half,
            frame.py(0.0) - y,
            PALETTE[3]
        );
        if let Some(r) = b.reference {
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{:.2}" r="4" fill="black"/>"#, frame.py(r));
        }
    }
    let mut labels = vec![("measured", PALETTE[3])];
    if bars.iter().any(|b| b.reference.is_some()) {
        labels.push((reference_label, "black"));
    }
    legend(&mut out, &labels);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_chart_is_well_formed() {
        let s = Series { label: "N=4".into(), points: vec![(6.0, 0.99), (7.0, 0.995), (8.0, 0.999)] };
        let svg = line_chart("fidelity", "M", "F", std::slice::from_ref(&s));
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg, line_chart("fidelity", "M", "F", &[s]));
    }

    #[test]
    fn bar_chart_has_markers() {
        let bars = vec![
            Bar { label: "0".into(), value: 0.5, reference: Some(0.4) },
            Bar { label: "1".into(), value: 0.5, reference: None },
        ];
        let svg = bar_chart("dist", "n", "p", &bars, "Poisson");
        assert_eq!(svg.matches("fill-opacity").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains("Poisson"));
    }

    #[test]
    fn empty_inputs_do_not_panic() {
        assert!(line_chart("t", "x", "y", &[]).contains("</svg>"));
        assert!(bar_chart("t", "x", "y", &[], "r").contains("</svg>"));
    }

    #[test]
    fn labels_are_escaped() {
        assert!(line_chart("a<b & c", "x", "y", &[]).contains("a&lt;b &amp; c"));
    }
}
