//! Minimal SVG scatter and polyline emitter for regression figures.

use std::fmt::Write;

use num_complex::Complex64;

#[derive(Clone, Debug)]
enum Layer {
    Points { pts: Vec<Complex64>, radius: f64, color: String },
    Line { pts: Vec<Complex64>, closed: bool, color: String },
}

/// A figure in the complex plane; the imaginary axis points up.
#[derive(Clone, Debug)]
pub struct Figure {
    size: u32,
    title: Option<String>,
    layers: Vec<Layer>,
}

impl Figure {
    pub fn new(size: u32) -> Self {
        Self {
            size,
            title: None,
            layers: Vec::new(),
        }
    }

    pub fn title(mut self, t: &str) -> Self {
        self.title = Some(t.to_string());
        self
    }

    /// Dots with `radius` in thousandths of the frame size.
    pub fn scatter(mut self, pts: &[Complex64], radius: f64, color: &str) -> Self {
        self.layers.push(Layer::Points {
            pts: pts.to_vec(),
            radius,
            color: color.to_string(),
        });
        self
    }

    pub fn polyline(mut self, pts: &[Complex64], closed: bool, color: &str) -> Self {
        self.layers.push(Layer::Line {
            pts: pts.to_vec(),
            closed,
            color: color.to_string(),
        });
        self
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let all = self.layers.iter().flat_map(|l| match l {
            Layer::Points { pts, .. } | Layer::Line { pts, .. } => pts.iter(),
        });
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for z in all.filter(|z| z.re.is_finite() && z.im.is_finite()) {
            x0 = x0.min(z.re);
            x1 = x1.max(z.re);
            y0 = y0.min(z.im);
            y1 = y1.max(z.im);
        }
        if !x0.is_finite() {
            return (-1.0, 1.0, -1.0, 1.0);
        }
        // square frame with a 5% margin
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        let half = ((x1 - x0).max(y1 - y0) / 2.0).max(1e-9) * 1.05;
        (cx - half, cx + half, cy - half, cy + half)
    }

    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let s = self.size as f64;
        let map = |z: &Complex64| ((z.re - x0) / (x1 - x0) * s, (y1 - z.im) / (y1 - y0) * s);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
            self.size
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        if let Some(t) = &self.title {
            let _ = writeln!(out, r#"<title>{}</title>"#, escape(t));
        }
        // axes through the origin when visible
        if x0 < 0.0 && x1 > 0.0 {
            let (px, _) = map(&Complex64::new(0.0, 0.0));
            let _ = writeln!(out, r##"<line x1="{px:.3}" y1="0" x2="{px:.3}" y2="{s}" stroke="#ccc" stroke-width="0.5"/>"##);
        }
        if y0 < 0.0 && y1 > 0.0 {
            let (_, py) = map(&Complex64::new(0.0, 0.0));
            let _ = writeln!(out, r##"<line x1="0" y1="{py:.3}" x2="{s}" y2="{py:.3}" stroke="#ccc" stroke-width="0.5"/>"##);
        }
        for layer in &self.layers {
            match layer {
                Layer::Line { pts, closed, color } => {
                    let coords: Vec<String> = pts
                        .iter()
                        .map(|z| {
                            let (px, py) = map(z);
                            format!("{px:.3},{py:.3}")
                        })
                        .collect();
                    let tag = if *closed { "polygon" } else { "polyline" };
                    let _ = writeln!(
                        out,
                        r#"<{tag} points="{}" fill="none" stroke="{}" stroke-width="1"/>"#,
                        coords.join(" "),
                        escape(color)
                    );
                }
                Layer::Points { pts, radius, color } => {
                    let r = radius * s / 1000.0;
                    for z in pts {
                        let (px, py) = map(z);
                        let _ = writeln!(
                            out,
                            r#"<circle cx="{px:.3}" cy="{py:.3}" r="{r:.3}" fill="{}"/>"#,
                            escape(color)
                        );
                    }
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Vertices of every `<polygon>`/`<polyline>` in `svg`, in drawing
/// coordinates. Enough to re-read what [`Figure::render`] writes.
pub fn read_polylines(svg: &str) -> Vec<Vec<(f64, f64)>> {
    svg.lines()
        .filter(|l| l.starts_with("<polygon") || l.starts_with("<polyline"))
        .filter_map(|l| {
            let start = l.find("points=\"")? + 8;
            let end = start + l[start..].find('"')?;
            Some(
                l[start..end]
                    .split_whitespace()
                    .filter_map(|p| {
                        let (a, b) = p.split_once(',')?;
                        Some((a.parse().ok()?, b.parse().ok()?))
                    })
                    .collect(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_and_reads_back() {
        let tri = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let svg = Figure::new(200)
            .title("a < b")
            .polyline(&tri, true, "black")
            .scatter(&tri[..1], 5.0, "red")
            .render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("a &lt; b"));
        assert_eq!(svg.matches("<circle").count(), 1);
        let lines = read_polylines(&svg);
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].len(), 3);
        // imaginary axis points up
        assert!(lines[0][2].1 < lines[0][0].1);
    }
}
