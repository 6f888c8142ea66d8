//! Bare-bones SVG heatmaps and line plots.

use std::fmt::Write;

const CELL_AREA: f64 = 480.0;
const MARGIN_LEFT: f64 = 90.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 70.0;
const LEGEND_WIDTH: f64 = 90.0;

/// Maps values onto `[0, 1]` for coloring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColorScale {
    pub min: f64,
    pub max: f64,
    pub log: bool,
}

impl ColorScale {
    pub fn linear(min: f64, max: f64) -> Self {
        Self { min, max, log: false }
    }

    /// Logarithmic scale covering `decades` below `max`.
    pub fn log(max: f64, decades: f64) -> Self {
        Self {
            min: max * 10f64.powf(-decades),
            max,
            log: true,
        }
    }

    pub fn position(&self, v: f64) -> f64 {
        let p = if self.log {
            let lo = self.min.max(f64::MIN_POSITIVE).log10();
            (v.max(self.min).max(f64::MIN_POSITIVE).log10() - lo) / (self.max.log10() - lo)
        } else {
            (v - self.min) / (self.max - self.min)
        };
        if p.is_finite() {
            p.clamp(0.0, 1.0)
        } else {
            0.0
        }
    }
}

// Perceptually ordered stops, dark to light.
const STOPS: [(f64, f64, f64); 5] = [
    (68.0, 1.0, 84.0),
    (59.0, 82.0, 139.0),
    (33.0, 145.0, 140.0),
    (94.0, 201.0, 98.0),
    (253.0, 231.0, 37.0),
];

fn color(p: f64) -> String {
    let x = p * (STOPS.len() - 1) as f64;
    let i = (x.floor() as usize).min(STOPS.len() - 2);
    let f = x - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |u: f64, v: f64| (u + (v - u) * f).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Shows at most ~12 tick labels.
fn label_stride(n: usize) -> usize {
    n.div_ceil(12).max(1)
}

/// Heatmap with `values[row][col]`; row 0 is drawn at the bottom.
pub fn heatmap(values: &[Vec<f64>], row_labels: &[String], col_labels: &[String], title: &str, scale: ColorScale) -> String {
    let rows = values.len().max(1);
    let cols = values.first().map_or(1, |r| r.len().max(1));
    let cw = CELL_AREA / cols as f64;
    let ch = CELL_AREA / rows as f64;
    let width = MARGIN_LEFT + CELL_AREA + LEGEND_WIDTH;
    let height = MARGIN_TOP + CELL_AREA + MARGIN_BOTTOM;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<text x="{}" y="20" font-size="14">{}</text>"#, MARGIN_LEFT, escape(title));
    for (ri, row) in values.iter().enumerate() {
        let y = MARGIN_TOP + (rows - 1 - ri) as f64 * ch;
        for (ci, v) in row.iter().enumerate() {
            let x = MARGIN_LEFT + ci as f64 * cw;
            let _ = writeln!(
                s,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                cw + 0.05,
                ch + 0.05,
                color(scale.position(*v))
            );
        }
    }
    let rs = label_stride(row_labels.len());
    for (ri, l) in row_labels.iter().enumerate().filter(|(i, _)| i % rs == 0) {
        let y = MARGIN_TOP + (rows - 1 - ri) as f64 * ch + ch / 2.0 + 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{y:.2}" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 6.0,
            escape(l)
        );
    }
    let cs = label_stride(col_labels.len());
    let base = MARGIN_TOP + CELL_AREA + 14.0;
    for (ci, l) in col_labels.iter().enumerate().filter(|(i, _)| i % cs == 0) {
        let x = MARGIN_LEFT + ci as f64 * cw + cw / 2.0;
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{base:.2}" text-anchor="end" transform="rotate(-45 {x:.2} {base:.2})">{}</text>"#,
            escape(l)
        );
    }
    // legend
    let lx = MARGIN_LEFT + CELL_AREA + 20.0;
    for k in 0..50 {
        let p = k as f64 / 49.0;
        let y = MARGIN_TOP + CELL_AREA * (1.0 - p) - CELL_AREA / 50.0;
        let _ = writeln!(
            s,
            r#"<rect x="{lx:.2}" y="{y:.2}" width="16" height="{:.2}" fill="{}"/>"#,
            CELL_AREA / 50.0 + 0.05,
            color(p)
        );
    }
    let fmt = |v: f64| if scale.log { format!("{v:.0e}") } else { format!("{v:.3}") };
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 20.0, MARGIN_TOP + 8.0, fmt(scale.max));
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
        lx + 20.0,
        MARGIN_TOP + CELL_AREA,
        fmt(scale.min)
    );
    s.push_str("</svg>\n");
    s
}

/// One polyline per series over a shared x axis.
pub fn line_plot(x: &[f64], series: &[(String, Vec<f64>)], title: &str, x_label: &str, y_label: &str) -> String {
    let (x0, x1) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    let (mut y0, mut y1) = series
        .iter()
        .flat_map(|(_, ys)| ys.iter())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    if !(y1 > y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let span_x = if x1 > x0 { x1 - x0 } else { 1.0 };
    let px = |v: f64| MARGIN_LEFT + (v - x0) / span_x * CELL_AREA;
    let py = |v: f64| MARGIN_TOP + (1.0 - (v - y0) / (y1 - y0)) * CELL_AREA;
    let width = MARGIN_LEFT + CELL_AREA + LEGEND_WIDTH + 40.0;
    let height = MARGIN_TOP + CELL_AREA + MARGIN_BOTTOM;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<text x="{}" y="20" font-size="14">{}</text>"#, MARGIN_LEFT, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{CELL_AREA}" height="{CELL_AREA}" fill="none" stroke="black"/>"#
    );
    for k in 0..=4 {
        let xv = x0 + span_x * k as f64 / 4.0;
        let yv = y0 + (y1 - y0) * k as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{xv:.3}</text>"#,
            px(xv),
            MARGIN_TOP + CELL_AREA + 16.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.4}</text>"#,
            MARGIN_LEFT - 6.0,
            py(yv) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + CELL_AREA / 2.0,
        MARGIN_TOP + CELL_AREA + 40.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" transform="rotate(-90 16 {:.2})" text-anchor="middle">{}</text>"#,
        MARGIN_TOP + CELL_AREA / 2.0,
        MARGIN_TOP + CELL_AREA / 2.0,
        escape(y_label)
    );
    for (k, (name, ys)) in series.iter().enumerate() {
        let c = color(if series.len() > 1 { k as f64 / (series.len() - 1) as f64 * 0.85 } else { 0.0 });
        let pts: Vec<String> = x.iter().zip(ys).map(|(a, b)| format!("{:.2},{:.2}", px(*a), py(*b))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{c}" stroke-width="2" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = MARGIN_TOP + 16.0 * (k + 1) as f64;
        let lx = MARGIN_LEFT + CELL_AREA + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{c}" stroke-width="2"/>"#,
            lx + 18.0
        );
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 22.0, ly + 4.0, escape(name));
    }
    s.push_str("</svg>\n");
    s
}
