//! Minimal SVG line plots and heatmaps.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;

/// Axis-aligned plotting frame mapping data coordinates to pixels.
#[derive(Debug, Clone, Copy)]
struct Frame {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        let (lo, hi) = self.x_range;
        self.left + (x - lo) / (hi - lo) * self.width
    }

    fn py(&self, y: f64) -> f64 {
        let (lo, hi) = self.y_range;
        self.top + (hi - y) / (hi - lo) * self.height
    }

    fn bottom(&self) -> f64 {
        self.top + self.height
    }

    fn right(&self) -> f64 {
        self.left + self.width
    }
}

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#
    );
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..=count)
        .map(|i| lo + (hi - lo) * i as f64 / count as f64)
        .map(|t| {
            if t.abs() < 1e-9 * (hi - lo).abs() {
                0.0
            } else {
                t
            }
        })
        .collect()
}

fn axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str, tick_count: usize) {
    let _ = writeln!(
        out,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        f.left, f.top, f.width, f.height
    );
    for t in ticks(f.x_range.0, f.x_range.1, tick_count) {
        let x = f.px(t);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{b:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{t:.3}</text>"#,
            f.bottom() + 4.0,
            f.bottom() + 17.0,
            b = f.bottom()
        );
    }
    for t in ticks(f.y_range.0, f.y_range.1, 4) {
        let y = f.py(t);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{l:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{t:.3}</text>"#,
            f.left - 4.0,
            f.left - 6.0,
            y + 4.0,
            l = f.left
        );
    }
    if !x_label.is_empty() {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            f.left + f.width / 2.0,
            f.bottom() + 34.0,
            escape(x_label)
        );
    }
    if !y_label.is_empty() {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">{}</text>"#,
            f.left - 52.0,
            f.top + f.height / 2.0,
            f.left - 52.0,
            f.top + f.height / 2.0,
            escape(y_label)
        );
    }
}

fn polyline(out: &mut String, f: &Frame, xs: &[f64], ys: &[f64], stroke: &str, width: f64) {
    let mut points = String::new();
    for (&x, &y) in xs.iter().zip(ys) {
        if x >= f.x_range.0 && x <= f.x_range.1 {
            let _ = write!(points, "{:.2},{:.2} ", f.px(x), f.py(y));
        }
    }
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="{stroke}" stroke-width="{width}" points="{}"/>"#,
        points.trim_end()
    );
}

fn zero_line(out: &mut String, f: &Frame) {
    if f.y_range.0 < 0.0 && f.y_range.1 > 0.0 {
        let y = f.py(0.0);
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
            f.left,
            f.right()
        );
    }
}

fn symmetric_range(ys: &[f64]) -> (f64, f64) {
    let m = ys.iter().fold(0.0f64, |a, y| a.max(y.abs()));
    let m = if m > 0.0 { m * 1.05 } else { 1.0 };
    (-m, m)
}

/// A zoomed window drawn in the upper-right corner of a line plot.
#[derive(Debug, Clone)]
pub struct Inset {
    pub x_range: (f64, f64),
    pub label: String,
}

/// Line plot of `ys` against `xs` with an optional zoomed inset.
pub fn line_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    xs: &[f64],
    ys: &[f64],
    inset: Option<&Inset>,
) -> String {
    let mut out = String::new();
    header(&mut out, WIDTH, HEIGHT);
    let x_range = (
        xs.first().copied().unwrap_or(0.0),
        xs.last().copied().unwrap_or(1.0),
    );
    let frame = Frame {
        left: MARGIN + 24.0,
        top: MARGIN,
        width: WIDTH - 2.0 * MARGIN - 24.0,
        height: HEIGHT - 2.0 * MARGIN,
        x_range: if x_range.0 < x_range.1 {
            x_range
        } else {
            (x_range.0, x_range.0 + 1.0)
        },
        y_range: symmetric_range(ys),
    };
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        MARGIN / 2.0,
        escape(title)
    );
    axes(&mut out, &frame, x_label, y_label, 7);
    zero_line(&mut out, &frame);
    polyline(&mut out, &frame, xs, ys, "#1f4e99", 1.0);

    if let Some(inset) = inset {
        let (lo, hi) = inset.x_range;
        let inside: Vec<f64> = xs
            .iter()
            .zip(ys)
            .filter(|(x, _)| **x >= lo && **x <= hi)
            .map(|(_, y)| *y)
            .collect();
        if inside.len() >= 2 && lo < hi {
            let _ = writeln!(
                out,
                r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#1f4e99" fill-opacity="0.08" stroke="#1f4e99" stroke-dasharray="3 2"/>"##,
                frame.px(lo),
                frame.top,
                frame.px(hi) - frame.px(lo),
                frame.height
            );
            let w = frame.width * 0.34;
            let h = frame.height * 0.34;
            let sub = Frame {
                left: frame.right() - w - 10.0,
                top: frame.top + 10.0,
                width: w,
                height: h,
                x_range: (lo, hi),
                y_range: symmetric_range(&inside),
            };
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="white" stroke="black"/>"#,
                sub.left, sub.top, sub.width, sub.height
            );
            axes(&mut out, &sub, "", "", 2);
            zero_line(&mut out, &sub);
            polyline(&mut out, &sub, xs, ys, "#b2182b", 1.2);
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                sub.left + sub.width / 2.0,
                sub.top - 3.0,
                escape(&inset.label)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Diverging blue-white-red colour for `t ∈ [-1, 1]`.
pub fn diverging_colour(t: f64) -> (u8, u8, u8) {
    let t = if t.is_finite() {
        t.clamp(-1.0, 1.0)
    } else {
        0.0
    };
    let lerp = |a: f64, b: f64, s: f64| (a + (b - a) * s).round() as u8;
    let white = (247.0, 247.0, 247.0);
    let (end, s) = if t >= 0.0 {
        ((178.0, 24.0, 43.0), t)
    } else {
        ((33.0, 102.0, 172.0), -t)
    };
    (
        lerp(white.0, end.0, s),
        lerp(white.1, end.1, s),
        lerp(white.2, end.2, s),
    )
}

/// Heatmap of `values[i][j]` with `x1_axis[i]` horizontal and `x2_axis[j]`
/// vertical, on a symmetric colour scale centred at 0.
pub fn heatmap(title: &str, x1_axis: &[f64], x2_axis: &[f64], values: &[Vec<f64>]) -> String {
    let mut out = String::new();
    let side = HEIGHT - 2.0 * MARGIN;
    let width = side + 2.0 * MARGIN + 120.0;
    header(&mut out, width, HEIGHT);
    let span = |axis: &[f64]| {
        let lo = axis.first().copied().unwrap_or(0.0);
        let hi = axis.last().copied().unwrap_or(lo);
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, lo + 0.5)
        }
    };
    let frame = Frame {
        left: MARGIN + 24.0,
        top: MARGIN,
        width: side,
        height: side,
        x_range: span(x1_axis),
        y_range: span(x2_axis),
    };
    let scale = values.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">{}</text>"#,
        frame.left + side / 2.0,
        MARGIN / 2.0,
        escape(title)
    );
    let cell_w = side / x1_axis.len().max(1) as f64;
    let cell_h = side / x2_axis.len().max(1) as f64;
    for (i, row) in values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let (r, g, b) = diverging_colour(v / scale);
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb({r},{g},{b})"/>"#,
                frame.left + i as f64 * cell_w,
                frame.bottom() - (j + 1) as f64 * cell_h,
                cell_w + 0.05,
                cell_h + 0.05
            );
        }
    }
    axes(&mut out, &frame, "x1", "x2", 4);
    let bar_left = frame.right() + 30.0;
    let steps = 40;
    for k in 0..steps {
        let t = 1.0 - 2.0 * (k as f64 + 0.5) / steps as f64;
        let (r, g, b) = diverging_colour(t);
        let _ = writeln!(
            out,
            r#"<rect x="{bar_left:.2}" y="{:.2}" width="16" height="{:.2}" fill="rgb({r},{g},{b})"/>"#,
            frame.top + k as f64 * side / steps as f64,
            side / steps as f64 + 0.05
        );
    }
    for (t, y) in [
        (scale, frame.top),
        (0.0, frame.top + side / 2.0),
        (-scale, frame.bottom()),
    ] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}">{t:.3e}</text>"#,
            bar_left + 22.0,
            y + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colour_scale_is_centred() {
        assert_eq!(diverging_colour(0.0), (247, 247, 247));
        assert_eq!(diverging_colour(1.0), (178, 24, 43));
        assert_eq!(diverging_colour(-1.0), (33, 102, 172));
        assert_eq!(diverging_colour(5.0), diverging_colour(1.0));
        assert_eq!(diverging_colour(f64::NAN), diverging_colour(0.0));
    }

    #[test]
    fn line_plot_structure() {
        let xs: Vec<f64> = (0..100).map(|i| i as f64 * 0.07).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let inset = Inset {
            x_range: (1.0, 2.0),
            label: "twin <peaks>".into(),
        };
        let svg = line_plot("t", "x", "Y", &xs, &ys, Some(&inset));
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("twin &lt;peaks&gt;"));
        let plain = line_plot("t", "x", "Y", &xs, &ys, None);
        assert_eq!(plain.matches("<polyline").count(), 1);
    }

    #[test]
    fn heatmap_cells() {
        let axis = [0.0, 1.0, 2.0];
        let values = vec![vec![1.0, -1.0, 0.0]; 3];
        let svg = heatmap("h", &axis, &axis, &values);
        assert!(svg.contains("rgb(178,24,43)"));
        assert!(svg.contains("rgb(33,102,172)"));
        let single = heatmap("h", &[1.0], &[1.0], &[vec![2.0]]);
        assert!(single.contains("rgb(178,24,43)"));
    }
}
