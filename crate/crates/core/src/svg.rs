//! Static SVG 1.1 figures.
//!
//! The drawing uses the `uv` plane with `v` pointing up, so ordinates are
//! negated on output. Coordinates are printed with six decimals.

use std::fmt::Write;

use crate::centers::{cell_centers, centers_report_model};
use crate::dissection::GridDissection;
use crate::error::Result;
use crate::geometry::{incircle_with_tol, ConvexQuad, Point2};

#[derive(Clone, Copy, Debug, Default)]
pub struct RenderOptions {
    pub incircles: bool,
    pub centers: bool,
    pub triple_grid: bool,
}

/// Accumulates elements; the view box is fixed at construction.
pub struct Canvas {
    min: Point2,
    max: Point2,
    stroke: f64,
    body: String,
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

impl Canvas {
    /// View box around `fit` with a margin of 5% of its diameter.
    pub fn fitted(fit: &[Point2]) -> Self {
        let (mut min, mut max) = (
            Point2::new(f64::INFINITY, f64::INFINITY),
            Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for p in fit {
            min = Point2::new(min.u.min(p.u), min.v.min(p.v));
            max = Point2::new(max.u.max(p.u), max.v.max(p.v));
        }
        let mut diam: f64 = 0.0;
        for (i, a) in fit.iter().enumerate() {
            for b in &fit[i + 1..] {
                diam = diam.max(a.dist(*b));
            }
        }
        let m = 0.05 * diam;
        let min = min - Point2::new(m, m);
        let max = max + Point2::new(m, m);
        Canvas {
            min,
            max,
            stroke: 0.003 * diam,
            body: String::new(),
        }
    }

    pub fn stroke(&self) -> f64 {
        self.stroke
    }

    fn xy(p: Point2) -> String {
        format!("{},{}", fmt(p.u), fmt(-p.v))
    }

    pub fn polygon(&mut self, pts: &[Point2], class: &str, fill: &str, stroke: &str) {
        let pts: Vec<String> = pts.iter().map(|&p| Self::xy(p)).collect();
        let _ = writeln!(
            self.body,
            r#"<polygon class="{class}" points="{}" fill="{fill}" stroke="{stroke}" stroke-width="{}"/>"#,
            pts.join(" "),
            fmt(self.stroke)
        );
    }

    pub fn circle(&mut self, c: Point2, r: f64, class: &str, fill: &str, stroke: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle class="{class}" cx="{}" cy="{}" r="{}" fill="{fill}" stroke="{stroke}" stroke-width="{}"/>"#,
            fmt(c.u),
            fmt(-c.v),
            fmt(r),
            fmt(self.stroke)
        );
    }

    /// Filled dot three stroke widths across.
    pub fn marker(&mut self, c: Point2, class: &str, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle class="{class}" cx="{}" cy="{}" r="{}" fill="{fill}"/>"#,
            fmt(c.u),
            fmt(-c.v),
            fmt(3.0 * self.stroke)
        );
    }

    pub fn line(&mut self, a: Point2, b: Point2, class: &str, stroke: &str) {
        let _ = writeln!(
            self.body,
            r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="{}"/>"#,
            fmt(a.u),
            fmt(-a.v),
            fmt(b.u),
            fmt(-b.v),
            fmt(0.5 * self.stroke)
        );
    }

    pub fn label(&mut self, at: Point2, text: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{}" y="{}" font-size="{}" font-family="serif">{text}</text>"#,
            fmt(at.u),
            fmt(-at.v),
            fmt(12.0 * self.stroke)
        );
    }

    pub fn finish(self) -> String {
        let w = self.max.u - self.min.u;
        let h = self.max.v - self.min.v;
        format!(
            concat!(
                r#"<?xml version="1.0" encoding="UTF-8"?>"#,
                "\n",
                r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}">"#,
                "\n{}</svg>\n"
            ),
            fmt(self.min.u),
            fmt(-self.max.v),
            fmt(w),
            fmt(h),
            self.body
        )
    }
}

/// `n²` cell polygons plus the requested overlays.
pub fn render_dissection(d: &GridDissection, opts: RenderOptions) -> Result<String> {
    let outer = &d.source.labeled;
    let mut canvas = Canvas::fitted(outer.vertices());
    draw_cells(&mut canvas, d, opts)?;
    Ok(canvas.finish())
}

pub fn draw_cells(canvas: &mut Canvas, d: &GridDissection, opts: RenderOptions) -> Result<()> {
    for cell in d.cells() {
        canvas.polygon(&cell, "cell", "#f4f1e8", "#222222");
    }
    if opts.incircles {
        for cell in d.cells() {
            let c = incircle_with_tol(&ConvexQuad::new(cell)?, 1e-8)?;
            canvas.circle(c.center, c.radius, "incircle", "none", "#2a6fb0");
        }
    }
    if opts.triple_grid && d.n >= 1 {
        let c = cell_centers(d)?;
        for p in &c.incenters {
            canvas.marker(*p, "tg-incenter", "#2e8b57");
        }
        for p in &c.diagonal_points {
            canvas.marker(*p, "tg-diagonal", "#c0392b");
        }
        for p in &c.grid_centers {
            canvas.marker(*p, "tg-center", "#7d3c98");
        }
    }
    if opts.centers {
        let rep = centers_report_model(&d.source)?;
        canvas.marker(rep.incenter, "center-incenter", "#2e8b57");
        canvas.marker(rep.diagonal_point, "center-diagonal", "#c0392b");
        canvas.marker(rep.grid_center, "center-grid", "#7d3c98");
    }
    Ok(())
}
