//! Minimal standalone SVG rendering: axes, point sets and polylines.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 640.0;
const PAD: f64 = 56.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub scatter: Vec<Series>,
    pub lines: Vec<Series>,
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str, x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            x_range,
            y_range,
            ..Self::default()
        }
    }

    fn sx(&self, x: f64) -> f64 {
        let (lo, hi) = self.x_range;
        PAD + (x - lo) / (hi - lo) * (WIDTH - 2.0 * PAD)
    }

    fn sy(&self, y: f64) -> f64 {
        let (lo, hi) = self.y_range;
        HEIGHT - PAD - (y - lo) / (hi - lo) * (HEIGHT - 2.0 * PAD)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="24" font-size="16" text-anchor="middle">{}</text>"#, WIDTH / 2.0, escape(&self.title));

        // frame, zero axes and tick labels
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        let _ = writeln!(
            s,
            r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            WIDTH - 2.0 * PAD,
            HEIGHT - 2.0 * PAD
        );
        if x0 < 0.0 && x1 > 0.0 {
            let x = self.sx(0.0);
            let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{PAD}" x2="{x:.2}" y2="{}" stroke="#bbbbbb"/>"##, HEIGHT - PAD);
        }
        if y0 < 0.0 && y1 > 0.0 {
            let y = self.sy(0.0);
            let _ = writeln!(s, r##"<line x1="{PAD}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#bbbbbb"/>"##, WIDTH - PAD);
        }
        for (v, anchor_x, anchor_y) in [(x0, self.sx(x0), HEIGHT - PAD + 16.0), (x1, self.sx(x1), HEIGHT - PAD + 16.0)] {
            let _ = writeln!(s, r#"<text x="{anchor_x:.2}" y="{anchor_y:.2}" font-size="11" text-anchor="middle">{v}</text>"#);
        }
        for (v, anchor_y) in [(y0, self.sy(y0)), (y1, self.sy(y1))] {
            let _ = writeln!(s, r#"<text x="{:.2}" y="{anchor_y:.2}" font-size="11" text-anchor="end">{v}</text>"#, PAD - 6.0);
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 16.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="18" y="{}" font-size="13" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );

        let mut legend = Vec::new();
        for (i, series) in self.scatter.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let _ = writeln!(s, r#"<g fill="{color}" fill-opacity="0.6">"#);
            for &(x, y) in &series.points {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="1.5"/>"#, self.sx(x), self.sy(y));
            }
            s.push_str("</g>\n");
            legend.push((series.name.as_str(), color));
        }
        for (i, line) in self.lines.iter().enumerate() {
            let color = PALETTE[(self.scatter.len() + i) % PALETTE.len()];
            let pts: Vec<String> =
                line.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", self.sx(x), self.sy(y))).collect();
            let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, pts.join(" "));
            legend.push((line.name.as_str(), color));
        }
        for (i, (name, color)) in legend.iter().enumerate() {
            let y = PAD + 14.0 + 16.0 * i as f64;
            let x = WIDTH - PAD - 90.0;
            let _ = writeln!(s, r#"<rect x="{x}" y="{}" width="10" height="10" fill="{color}"/>"#, y - 9.0);
            let _ = writeln!(s, r#"<text x="{}" y="{y}" font-size="11">{}</text>"#, x + 14.0, escape(name));
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_points_and_lines() {
        let mut plot = Plot::new("t<1>", "x", "y", (-1.0, 1.0), (-1.0, 1.0));
        plot.scatter.push(Series { name: "pts".into(), points: vec![(0.0, 0.0), (0.5, -0.5)] });
        plot.lines.push(Series { name: "edge".into(), points: vec![(-1.0, -1.0), (1.0, 1.0)] });
        let svg = plot.render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("t&lt;1&gt;"));
        // origin maps to the centre
        assert!(svg.contains(r#"cx="320.00" cy="320.00""#));
    }
}
