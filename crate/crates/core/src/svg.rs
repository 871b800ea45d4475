//! Minimal standalone SVG line charts with byte-stable output.

use std::fmt::Write;

use crate::format::{coord, num};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 2] = ["#1f4e9c", "#c0392b"];

pub struct Series<'a> {
    pub label: &'a str,
    pub y: &'a [f64],
}

pub struct Chart<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub x: &'a [f64],
    pub series: Vec<Series<'a>>,
    pub log_y: bool,
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if hi - lo < 1e-12 {
            lo -= 0.5;
            hi += 0.5;
        }
        Self { lo, hi, log }
    }

    fn frac(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    /// Tick positions in data units: integer decades on log axes, five even
    /// steps otherwise.
    fn ticks(&self) -> Vec<f64> {
        let (a, b) = (self.lo.ceil() as i32, self.hi.floor() as i32);
        if self.log && b > a {
            let step = ((b - a) / 8).max(1);
            return (a..=b)
                .step_by(step as usize)
                .map(|e| 10f64.powi(e))
                .collect();
        }
        let even = (0..=4).map(|i| self.lo + (self.hi - self.lo) * f64::from(i) / 4.0);
        if self.log {
            even.map(|e| 10f64.powf(e)).collect()
        } else {
            even.collect()
        }
    }
}

fn tick_label(v: f64, log: bool) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let e = v.abs().log10();
    if log && (e - e.round()).abs() < 1e-9 {
        format!("1e{}", e.round() as i32)
    } else {
        let scale = 10f64.powi(3 - e.floor() as i32);
        num((v * scale).round() / scale)
    }
}

/// Renders the chart. At most two series are drawn.
pub fn render(chart: &Chart) -> String {
    let x_axis = Axis::new(chart.x.iter().copied(), true);
    let y_axis = Axis::new(
        chart.series.iter().flat_map(|s| s.y.iter().copied()),
        chart.log_y,
    );
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |v: f64| LEFT + x_axis.frac(v) * plot_w;
    let py = |v: f64| TOP + (1.0 - y_axis.frac(v)) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = WIDTH,
        h = HEIGHT
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
        coord(WIDTH / 2.0),
        chart.title
    );
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    let _ = writeln!(
        s,
        r#"<path d="M{} {} L{} {} L{} {}" fill="none" stroke="black"/>"#,
        coord(x0),
        coord(y0),
        coord(x0),
        coord(y1),
        coord(x1),
        coord(y1)
    );
    for t in x_axis.ticks() {
        let x = coord(px(t));
        let _ = writeln!(
            s,
            r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="black"/><text x="{x}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
            coord(y1),
            coord(y1 + 5.0),
            coord(y1 + 18.0),
            tick_label(t, true)
        );
    }
    for t in y_axis.ticks() {
        let y = coord(py(t));
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="black"/><text x="{}" y="{y}" text-anchor="end" dominant-baseline="middle" font-family="sans-serif" font-size="11">{}</text>"#,
            coord(x0 - 5.0),
            coord(x0),
            coord(x0 - 8.0),
            tick_label(t, y_axis.log)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        coord((x0 + x1) / 2.0),
        coord(HEIGHT - 15.0),
        chart.x_label
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 {})">{}</text>"#,
        coord((y0 + y1) / 2.0),
        coord((y0 + y1) / 2.0),
        chart.y_label
    );
    for (i, series) in chart.series.iter().take(2).enumerate() {
        let points: Vec<String> = chart
            .x
            .iter()
            .zip(series.y)
            .map(|(&x, &y)| format!("{},{}", coord(px(x)), coord(py(y))))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            COLORS[i],
            points.join(" ")
        );
        let ly = TOP + 16.0 + 18.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="1.5"/><text x="{}" y="{ly}" dominant-baseline="middle" font-family="sans-serif" font-size="12">{}</text>"#,
            coord(x1 - 150.0),
            coord(x1 - 125.0),
            COLORS[i],
            coord(x1 - 118.0),
            series.label
        );
    }
    s.push_str("</svg>\n");
    s
}
