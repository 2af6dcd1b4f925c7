//! Minimal SVG 1.1 writer. Coordinates are printed with three decimals so
//! output is byte-stable.

use std::fmt::Write;

use linkage_core::Complex64;

pub struct Svg {
    width: f64,
    height: f64,
    body: String,
}

/// A square plotting window mapping `[x0, x1] × [y0, y1]` onto a pixel box,
/// with `y` pointing up.
#[derive(Clone, Copy)]
pub struct Panel {
    pub left: f64,
    pub top: f64,
    pub size: f64,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Panel {
    /// A window centered on the origin of half-width `r`.
    pub fn centered(left: f64, top: f64, size: f64, r: f64) -> Self {
        Self {
            left,
            top,
            size,
            x0: -r,
            x1: r,
            y0: -r,
            y1: r,
        }
    }

    pub fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.left + (x - self.x0) / (self.x1 - self.x0) * self.size,
            self.top + (self.y1 - y) / (self.y1 - self.y0) * self.size,
        )
    }

    pub fn mapz(&self, z: Complex64) -> (f64, f64) {
        self.map(z.re, z.im)
    }
}

impl Svg {
    pub fn new(width: f64, height: f64) -> Self {
        let mut s = Self {
            width,
            height,
            body: String::new(),
        };
        s.rect(0.0, 0.0, width, height, "#ffffff", "none");
        s
    }

    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str, stroke: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{x:.3}" y="{y:.3}" width="{w:.3}" height="{h:.3}" fill="{fill}" stroke="{stroke}"/>"#
        );
    }

    pub fn line(&mut self, a: (f64, f64), b: (f64, f64), stroke: &str, width: f64) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{stroke}" stroke-width="{width:.3}"/>"#,
            a.0, a.1, b.0, b.1
        );
    }

    pub fn circle(&mut self, c: (f64, f64), r: f64, stroke: &str, fill: &str, dashed: bool) {
        let dash = if dashed { r#" stroke-dasharray="4 3""# } else { "" };
        let _ = writeln!(
            self.body,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{r:.3}" stroke="{stroke}" fill="{fill}"{dash}/>"#,
            c.0, c.1
        );
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, width: f64, closed: bool) {
        if pts.len() < 2 {
            return;
        }
        let mut coords = String::new();
        for (x, y) in pts {
            let _ = write!(coords, "{x:.3},{y:.3} ");
        }
        let tag = if closed { "polygon" } else { "polyline" };
        let _ = writeln!(
            self.body,
            r#"<{tag} points="{}" fill="none" stroke="{stroke}" stroke-width="{width:.3}"/>"#,
            coords.trim_end()
        );
    }

    pub fn text(&mut self, at: (f64, f64), s: &str) {
        let escaped = s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        let _ = writeln!(
            self.body,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12">{escaped}</text>"#,
            at.0, at.1
        );
    }

    /// Frame and axes of a complex-plane panel.
    pub fn axes(&mut self, p: &Panel, title: &str) {
        self.rect(p.left, p.top, p.size, p.size, "none", "#999999");
        if p.y0 < 0.0 && p.y1 > 0.0 {
            self.line(p.map(p.x0, 0.0), p.map(p.x1, 0.0), "#cccccc", 1.0);
        }
        if p.x0 < 0.0 && p.x1 > 0.0 {
            self.line(p.map(0.0, p.y0), p.map(0.0, p.y1), "#cccccc", 1.0);
        }
        self.text((p.left, p.top - 6.0), title);
    }

    /// Draws a curve on the torus `[0, 2π)²`, breaking it where it wraps.
    pub fn torus_curve(&mut self, p: &Panel, pts: &[(f64, f64)], stroke: &str, closed: bool) {
        let mut run: Vec<(f64, f64)> = Vec::new();
        let mut all: Vec<(f64, f64)> = pts.to_vec();
        if closed && !pts.is_empty() {
            all.push(pts[0]);
        }
        for (k, q) in all.iter().enumerate() {
            if k > 0 {
                let prev = all[k - 1];
                if (q.0 - prev.0).abs() > std::f64::consts::PI
                    || (q.1 - prev.1).abs() > std::f64::consts::PI
                {
                    self.polyline(&run, stroke, 1.5, false);
                    run.clear();
                }
            }
            run.push(p.map(q.0, q.1));
        }
        self.polyline(&run, stroke, 1.5, false);
    }

    pub fn finish(self) -> Vec<u8> {
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#,
            w = self.width,
            h = self.height
        );
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out.into_bytes()
    }
}

pub fn torus_panel(left: f64, top: f64, size: f64) -> Panel {
    Panel {
        left,
        top,
        size,
        x0: 0.0,
        x1: std::f64::consts::TAU,
        y0: 0.0,
        y1: std::f64::consts::TAU,
    }
}
