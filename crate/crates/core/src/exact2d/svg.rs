use std::f64::consts::PI;
use std::fmt::Write;

use super::ArcPolygon2D;

#[derive(Debug, Clone, PartialEq)]
pub struct SvgStyle {
    pub stroke: String,
    pub fill: String,
    pub stroke_width: f64,
    /// Pixel width of the document; height follows the aspect ratio.
    pub width_px: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            stroke: "#1f4e79".into(),
            fill: "#9dc3e6".into(),
            stroke_width: 1.5,
            width_px: 480.0,
        }
    }
}

/// One arc polygon drawn with its own style.
#[derive(Debug, Clone)]
pub struct SvgLayer<'a> {
    pub polygon: &'a ArcPolygon2D,
    pub style: SvgStyle,
    pub label: Option<String>,
}

/// Standalone SVG for one arc polygon.
pub fn render_svg(polygon: &ArcPolygon2D, style: &SvgStyle) -> String {
    render_scene(
        &[SvgLayer {
            polygon,
            style: style.clone(),
            label: None,
        }],
        &[],
        style.width_px,
    )
}

/// Several layers plus marker points (e.g. the generators) in one document.
/// Output is deterministic: coordinates are printed with six decimals.
pub fn render_scene(layers: &[SvgLayer<'_>], markers: &[[f64; 2]], width_px: f64) -> String {
    let mut bbox = BBox::default();
    for layer in layers {
        bbox.add_polygon(layer.polygon);
    }
    for m in markers {
        bbox.add(*m);
    }
    if !bbox.valid() {
        bbox = BBox {
            min: [-1.0, -1.0],
            max: [1.0, 1.0],
            seen: true,
        };
    }
    let span = (bbox.max[0] - bbox.min[0]).max(bbox.max[1] - bbox.min[1]).max(1e-9);
    let pad = 0.05 * span;
    let (x0, y0) = (bbox.min[0] - pad, -(bbox.max[1] + pad));
    let (w, h) = (
        bbox.max[0] - bbox.min[0] + 2.0 * pad,
        bbox.max[1] - bbox.min[1] + 2.0 * pad,
    );
    let scale = span / width_px.max(1.0);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.0}" height="{:.0}" viewBox="{x0:.6} {y0:.6} {w:.6} {h:.6}">"#,
        width_px,
        width_px * h / w
    );
    for layer in layers {
        let style = &layer.style;
        let sw = style.stroke_width * scale;
        match layer.polygon {
            ArcPolygon2D::Empty => {
                let _ = writeln!(
                    out,
                    r#"  <text x="{:.6}" y="{:.6}" font-size="{:.6}" fill="{}">empty body</text>"#,
                    x0 + 0.1 * w,
                    y0 + 0.5 * h,
                    0.08 * w,
                    style.stroke
                );
            }
            ArcPolygon2D::SinglePoint { point } => {
                let _ = writeln!(
                    out,
                    r#"  <circle cx="{:.6}" cy="{:.6}" r="{:.6}" fill="{}"/>"#,
                    point[0],
                    -point[1],
                    3.0 * sw,
                    style.stroke
                );
            }
            ArcPolygon2D::Arcs { arcs } => {
                let _ = writeln!(
                    out,
                    r#"  <path d="{}" fill="{}" fill-opacity="0.5" stroke="{}" stroke-width="{sw:.6}"/>"#,
                    path_data(arcs),
                    style.fill,
                    style.stroke
                );
            }
        }
        if let Some(label) = &layer.label {
            let _ = writeln!(out, "  <!-- {label} -->");
        }
    }
    for m in markers {
        let _ = writeln!(
            out,
            r##"  <circle cx="{:.6}" cy="{:.6}" r="{:.6}" fill="#c00000"/>"##,
            m[0],
            -m[1],
            2.5 * scale
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Path of elliptical-arc segments. The y axis is flipped, so a
/// counterclockwise arc in the plane is drawn with sweep flag 1.
fn path_data(arcs: &[super::Arc2]) -> String {
    let mut d = String::new();
    for (k, a) in arcs.iter().enumerate() {
        let p = a.start_point();
        if k == 0 {
            let _ = write!(d, "M {:.6} {:.6}", p[0], -p[1]);
        }
        // split long arcs so that no single segment is a full circle
        let pieces = if a.sweep > PI { 2 } else { 1 };
        for i in 1..=pieces {
            let q = a.point_at(i as f64 / pieces as f64);
            let r = a.radius;
            let _ = write!(d, " A {r:.6} {r:.6} 0 0 1 {:.6} {:.6}", q[0], -q[1]);
        }
    }
    d.push_str(" Z");
    d
}

#[derive(Default)]
struct BBox {
    min: [f64; 2],
    max: [f64; 2],
    seen: bool,
}

impl BBox {
    fn valid(&self) -> bool {
        self.seen
    }

    fn add(&mut self, p: [f64; 2]) {
        if !self.seen {
            self.min = p;
            self.max = p;
            self.seen = true;
        } else {
            self.min = [self.min[0].min(p[0]), self.min[1].min(p[1])];
            self.max = [self.max[0].max(p[0]), self.max[1].max(p[1])];
        }
    }

    fn add_polygon(&mut self, polygon: &ArcPolygon2D) {
        let (Some(e), Some(w), Some(n), Some(s)) = (
            polygon.support([1.0, 0.0]),
            polygon.support([-1.0, 0.0]),
            polygon.support([0.0, 1.0]),
            polygon.support([0.0, -1.0]),
        ) else {
            return;
        };
        self.add([-w, -s]);
        self.add([e, n]);
    }
}
