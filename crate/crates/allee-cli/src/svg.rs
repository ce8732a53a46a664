//! Deterministic SVG plot emitter.
//!
//! Fixed 800x800 viewBox, a margin-framed plot area with ticks, and a small
//! set of primitives (polylines, markers, raster cells). Coordinates are
//! written with two decimals so output is byte-stable for identical inputs.
//!
//! Marker legend (used by the portrait and bifurcation drawings):
//!
//! * attractor - filled disk
//! * repeller - open disk
//! * saddle - diagonal cross
//! * saddle-node - half-filled disk (left half stable side, right half
//!   unstable side)
//! * non-hyperbolic saddle (origin) - cross inside an open disk
//! * marginal - dotted open disk
//! * Bogdanov-Takens point - filled diamond
//! * limit cycles - closed polylines, dashed when unstable

use std::fmt::Write as _;

pub const SIZE: f64 = 800.0;
pub const MARGIN: f64 = 60.0;

/// Fixed colors so regression outputs are byte-for-byte reproducible.
pub mod palette {
    /// Prey nullcline (the cubic hump).
    pub const PREY_NULLCLINE: &str = "#d62728";
    /// Predator nullcline (the diagonal v = u).
    pub const PREDATOR_NULLCLINE: &str = "#8c564b";
    pub const STABLE_MANIFOLD: &str = "#6a3d9a";
    pub const UNSTABLE_MANIFOLD: &str = "#ff7f0e";
    pub const CYCLE: &str = "#2ca02c";
    pub const TRAJECTORY: &str = "#bbbbbb";
    pub const HOPF: &str = "#2ca02c";
    pub const FOLD: &str = "#000000";
    /// Basin fills, indexed by attractor id; undecided cells stay white.
    pub const BASINS: [&str; 6] = [
        "#fdbf6f", "#c7c7c7", "#a6cee3", "#b2df8a", "#cab2d6", "#ffff99",
    ];
    /// Region tints for the bifurcation diagram grid.
    pub const REGION_ONE: &str = "#f2f2f2";
    pub const REGION_THREE: &str = "#d4d4d4";
}

fn px(x: f64) -> String {
    format!("{x:.2}")
}

pub struct Plot {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    body: String,
    overlay: String,
}

impl Plot {
    /// A plot over the math-space window `[x_min, x_max] x [y_min, y_max]`.
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Plot {
            x_min,
            x_max,
            y_min,
            y_max,
            body: String::new(),
            overlay: String::new(),
        }
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN + (x - self.x_min) / (self.x_max - self.x_min) * (SIZE - 2.0 * MARGIN)
    }

    fn sy(&self, y: f64) -> f64 {
        SIZE - MARGIN - (y - self.y_min) / (self.y_max - self.y_min) * (SIZE - 2.0 * MARGIN)
    }

    /// Filled axis-aligned cell, given in math coordinates.
    pub fn cell(&mut self, x0: f64, x1: f64, y0: f64, y1: f64, fill: &str) {
        let (sx0, sx1) = (self.sx(x0), self.sx(x1));
        let (sy0, sy1) = (self.sy(y1), self.sy(y0));
        let _ = write!(
            self.body,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
            px(sx0),
            px(sy0),
            px(sx1 - sx0),
            px(sy1 - sy0),
            fill
        );
        self.body.push('\n');
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], color: &str, width: f64, dashed: bool) {
        if points.len() < 2 {
            return;
        }
        let mut d = String::new();
        for (i, &(x, y)) in points.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{} {} ", px(self.sx(x)), px(self.sy(y)));
        }
        let dash = if dashed {
            " stroke-dasharray=\"7 5\""
        } else {
            ""
        };
        let _ = write!(
            self.body,
            "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"{}/>",
            d.trim_end(),
            color,
            px(width),
            dash
        );
        self.body.push('\n');
    }

    fn marker(&mut self, element: String) {
        self.overlay.push_str(&element);
        self.overlay.push('\n');
    }

    pub fn disk_filled(&mut self, x: f64, y: f64, r: f64, color: &str) {
        let el = format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" stroke=\"black\" stroke-width=\"1.5\"/>",
            px(self.sx(x)),
            px(self.sy(y)),
            px(r),
            color
        );
        self.marker(el);
    }

    pub fn disk_open(&mut self, x: f64, y: f64, r: f64) {
        let el = format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"white\" stroke=\"black\" stroke-width=\"1.5\"/>",
            px(self.sx(x)),
            px(self.sy(y)),
            px(r)
        );
        self.marker(el);
    }

    pub fn disk_dotted(&mut self, x: f64, y: f64, r: f64) {
        let el = format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"white\" stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"2 2\"/>",
            px(self.sx(x)),
            px(self.sy(y)),
            px(r)
        );
        self.marker(el);
    }

    pub fn cross(&mut self, x: f64, y: f64, arm: f64) {
        let (cx, cy) = (self.sx(x), self.sy(y));
        let el = format!(
            "<path d=\"M{} {} L{} {} M{} {} L{} {}\" stroke=\"black\" stroke-width=\"2.5\" fill=\"none\"/>",
            px(cx - arm),
            px(cy - arm),
            px(cx + arm),
            px(cy + arm),
            px(cx - arm),
            px(cy + arm),
            px(cx + arm),
            px(cy - arm)
        );
        self.marker(el);
    }

    pub fn circled_cross(&mut self, x: f64, y: f64, r: f64) {
        self.disk_open(x, y, r);
        self.cross(x, y, r * 0.7);
    }

    /// Half-filled disk; `fill_left` selects which half carries the fill.
    pub fn half_disk(&mut self, x: f64, y: f64, r: f64, fill_left: bool) {
        let (cx, cy) = (self.sx(x), self.sy(y));
        let sweep = if fill_left { 0 } else { 1 };
        let el = format!(
            "<path d=\"M{} {} A{} {} 0 0 {} {} {} Z\" fill=\"black\"/><circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>",
            px(cx),
            px(cy - r),
            px(r),
            px(r),
            sweep,
            px(cx),
            px(cy + r),
            px(cx),
            px(cy),
            px(r)
        );
        self.marker(el);
    }

    pub fn diamond(&mut self, x: f64, y: f64, r: f64) {
        let (cx, cy) = (self.sx(x), self.sy(y));
        let el = format!(
            "<path d=\"M{} {} L{} {} L{} {} L{} {} Z\" fill=\"black\"/>",
            px(cx),
            px(cy - r),
            px(cx + r),
            px(cy),
            px(cx),
            px(cy + r),
            px(cx - r),
            px(cy)
        );
        self.marker(el);
    }

    pub fn label(&mut self, x: f64, y: f64, dx: f64, dy: f64, text: &str) {
        let el = format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\">{}</text>",
            px(self.sx(x) + dx),
            px(self.sy(y) + dy),
            text
        );
        self.marker(el);
    }

    fn ticks(lo: f64, hi: f64) -> Vec<f64> {
        let span = hi - lo;
        let raw = span / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 2.5, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|&s| span / s <= 6.0)
            .unwrap_or(mag * 10.0);
        let mut t = (lo / step).ceil() * step;
        let mut out = Vec::new();
        while t <= hi + 1e-9 * span {
            // Snap to a short decimal so tick labels stay clean.
            out.push((t / step).round() * step);
            t += step;
        }
        out
    }

    fn fmt_tick(v: f64) -> String {
        let rounded = (v * 1e6).round() / 1e6;
        crate::format::fmt_f64(if rounded == 0.0 { 0.0 } else { rounded })
    }

    /// Assembles the final SVG with frame, ticks, and axis labels.
    pub fn finish(self, x_label: &str, y_label: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {s} {s}\" width=\"{s}\" height=\"{s}\">",
            s = SIZE as u32
        );
        let _ = writeln!(
            out,
            "<rect x=\"0\" y=\"0\" width=\"{s}\" height=\"{s}\" fill=\"white\"/>",
            s = SIZE as u32
        );
        let inner = SIZE - 2.0 * MARGIN;
        let _ = writeln!(
            out,
            "<clipPath id=\"plot\"><rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/></clipPath>",
            px(MARGIN),
            px(MARGIN),
            px(inner),
            px(inner)
        );
        let _ = writeln!(out, "<g clip-path=\"url(#plot)\">");
        out.push_str(&self.body);
        let _ = writeln!(out, "</g>");
        // Markers and labels sit above the clipped data layer so glyphs on
        // the window edge are not cut in half.
        out.push_str(&self.overlay);
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>",
            px(MARGIN),
            px(MARGIN),
            px(inner),
            px(inner)
        );
        for t in Self::ticks(self.x_min, self.x_max) {
            let sx = self.sx(t);
            let _ = writeln!(
                out,
                "<line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{y1}\" stroke=\"black\"/>",
                x = px(sx),
                y0 = px(SIZE - MARGIN),
                y1 = px(SIZE - MARGIN + 6.0)
            );
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>",
                px(sx),
                px(SIZE - MARGIN + 22.0),
                Self::fmt_tick(t)
            );
        }
        for t in Self::ticks(self.y_min, self.y_max) {
            let sy = self.sy(t);
            let _ = writeln!(
                out,
                "<line x1=\"{x0}\" y1=\"{y}\" x2=\"{x1}\" y2=\"{y}\" stroke=\"black\"/>",
                y = px(sy),
                x0 = px(MARGIN - 6.0),
                x1 = px(MARGIN)
            );
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"13\">{}</text>",
                px(MARGIN - 10.0),
                px(sy + 4.5),
                Self::fmt_tick(t)
            );
        }
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>",
            px(SIZE / 2.0),
            px(SIZE - 14.0),
            x_label
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\" transform=\"rotate(-90 {} {})\">{}</text>",
            px(18.0),
            px(SIZE / 2.0),
            px(18.0),
            px(SIZE / 2.0),
            y_label
        );
        out.push_str("</svg>\n");
        out
    }
}
