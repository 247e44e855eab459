//! Minimal SVG 1.1 line plots: axes, optional log y axis, legend.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Lowest decade shown on a log axis, relative to the largest value.
const LOG_DEPTH: f64 = 16.0;

pub struct Series<'a> {
    pub name: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
}

pub struct LinePlot<'a> {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub series: Vec<Series<'a>>,
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    log_y: bool,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        let t = if self.log_y { y.log10() } else { y };
        HEIGHT - BOTTOM - (t - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e-2 && v.abs() < 1e4 {
        format!("{v:.3}").trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.1e}")
    }
}

impl<'a> LinePlot<'a> {
    fn frame(&self) -> Frame {
        let xs = self.series.iter().flat_map(|s| s.x.iter().copied());
        let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        let (x0, x1) = if x0 < x1 { (x0, x1) } else { (x0 - 1.0, x0 + 1.0) };
        let ys = self.series.iter().flat_map(|s| s.y.iter().copied()).filter(|v| v.is_finite());
        let (y0, y1) = if self.log_y {
            let top = ys.clone().fold(f64::NEG_INFINITY, f64::max);
            let bottom = ys.filter(|&v| v > 0.0).fold(f64::INFINITY, f64::min);
            if top > 0.0 {
                let hi = top.log10().ceil();
                let lo = bottom.log10().floor().max(hi - LOG_DEPTH);
                (lo, if hi > lo { hi } else { lo + 1.0 })
            } else {
                (0.0, 1.0)
            }
        } else {
            let (lo, hi) = ys.fold((0.0f64, 0.0f64), |(a, b), v| (a.min(v), b.max(v)));
            if hi > lo {
                (lo, hi * 1.05)
            } else {
                (0.0, 1.0)
            }
        };
        Frame {
            x0,
            x1,
            y0,
            y1,
            log_y: self.log_y,
        }
    }

    /// Pixel coordinates of each series, split where a log axis cannot show
    /// a value (non-positive or below the lowest decade).
    pub fn segments(&self) -> Vec<Vec<Vec<(f64, f64)>>> {
        let f = self.frame();
        self.series
            .iter()
            .map(|s| {
                let mut parts = vec![Vec::new()];
                for (&x, &y) in s.x.iter().zip(s.y) {
                    let visible = y.is_finite() && (!f.log_y || (y > 0.0 && y.log10() >= f.y0));
                    if visible {
                        parts.last_mut().unwrap().push((f.px(x), f.py(y)));
                    } else if !parts.last().unwrap().is_empty() {
                        parts.push(Vec::new());
                    }
                }
                parts.retain(|p| !p.is_empty());
                parts
            })
            .collect()
    }

    pub fn render(&self) -> String {
        let f = self.frame();
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
            (LEFT + WIDTH - RIGHT) / 2.0,
            TOP / 2.0 + 5.0,
            escape(&self.title)
        );
        let (bx, by) = (LEFT, HEIGHT - BOTTOM);
        let _ = writeln!(
            out,
            r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            WIDTH - LEFT - RIGHT,
            HEIGHT - TOP - BOTTOM
        );

        for i in 0..=4 {
            let x = f.x0 + (f.x1 - f.x0) * i as f64 / 4.0;
            let px = f.px(x);
            let _ = writeln!(out, r#"<line x1="{px:.2}" y1="{by}" x2="{px:.2}" y2="{}" stroke="black"/>"#, by + 5.0);
            let _ = writeln!(
                out,
                r#"<text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#,
                by + 20.0,
                tick_label(x)
            );
        }
        let y_ticks: Vec<f64> = if f.log_y {
            let span = (f.y1 - f.y0).round() as i64;
            let step = ((span + 7) / 8).max(1);
            (0..=span).step_by(step as usize).map(|d| 10f64.powf(f.y0 + d as f64)).collect()
        } else {
            (0..=4).map(|i| f.y0 + (f.y1 - f.y0) * i as f64 / 4.0).collect()
        };
        for y in y_ticks {
            let py = f.py(y);
            let _ = writeln!(out, r#"<line x1="{}" y1="{py:.2}" x2="{bx}" y2="{py:.2}" stroke="black"/>"#, bx - 5.0);
            let label = if f.log_y {
                format!("1e{}", y.log10().round() as i64)
            } else {
                tick_label(y)
            };
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{:.2}" text-anchor="end">{label}</text>"#,
                bx - 8.0,
                py + 4.0
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            (LEFT + WIDTH - RIGHT) / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">{}</text>"#,
            (TOP + HEIGHT - BOTTOM) / 2.0,
            (TOP + HEIGHT - BOTTOM) / 2.0,
            escape(&self.y_label)
        );

        for (i, (series, parts)) in self.series.iter().zip(self.segments()).enumerate() {
            let color = COLORS[i % COLORS.len()];
            for part in parts {
                let pts: Vec<String> = part.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(
                    out,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                    pts.join(" ")
                );
            }
            let ly = TOP + 15.0 + 20.0 * i as f64;
            let lx = WIDTH - RIGHT + 15.0;
            let _ = writeln!(
                out,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
                lx + 25.0
            );
            let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, lx + 32.0, ly + 4.0, escape(series.name));
        }
        out.push_str("</svg>\n");
        out
    }
}
