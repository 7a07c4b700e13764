use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::geometry::{ArcCycle, BBox, CycleKind, Point, PointSet};

/// Something to draw. Point sets become dots; curves become one path each
/// carrying the classes `curve`, `outer` or `hole`, and `class`.
#[derive(Debug, Clone, Copy)]
pub enum SvgLayer<'a> {
    Points { class: &'a str, set: &'a PointSet },
    Curve { class: &'a str, curve: &'a ArcCycle },
}

impl SvgLayer<'_> {
    fn bbox(&self) -> BBox {
        match self {
            SvgLayer::Points { set, .. } => set.bbox(),
            SvgLayer::Curve { curve, .. } => curve.bbox(),
        }
    }
}

fn xy(p: Point) -> String {
    // SVG's y axis points down.
    format!("{} {}", p.x, -p.y + 0.0)
}

fn path_data(curve: &ArcCycle) -> String {
    let mut d = format!("M {}", xy(curve.arcs()[0].from()));
    for ca in curve.arcs() {
        let arc = &ca.arc;
        let pieces = (arc.sweep() / PI).ceil().max(1.0) as usize;
        let r = arc.radius();
        // Counterclockwise in the plane is counterclockwise on screen after
        // the flip, which is sweep-flag 0.
        let sweep_flag = u8::from(ca.reversed);
        for k in 1..=pieces {
            let t = k as f64 / pieces as f64;
            let to = if ca.reversed {
                arc.point_at_fraction(1.0 - t)
            } else {
                arc.point_at_fraction(t)
            };
            let _ = write!(d, " A {r} {r} 0 0 {sweep_flag} {}", xy(to));
        }
    }
    d.push_str(" Z");
    d
}

/// Render layers as a standalone SVG 1.1 document with native arc segments.
pub fn emit_svg(layers: &[SvgLayer<'_>]) -> String {
    let bbox = layers
        .iter()
        .map(SvgLayer::bbox)
        .reduce(|a, b| a.union(&b))
        .unwrap_or(BBox {
            min: Point::new(-1.0, -1.0),
            max: Point::new(1.0, 1.0),
        });
    let extent = bbox.width().max(bbox.height()).max(1e-9);
    let view = bbox.expanded(0.1 * extent);
    let (w, h) = (view.width(), view.height());
    let stroke = extent / 400.0;
    let dot = extent / 200.0;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {w} {h}" width="800" height="{}">"#,
        view.min.x,
        -view.max.y + 0.0,
        (800.0 * h / w).round()
    );
    let _ = writeln!(
        out,
        "<style>\n\
         .curve {{ fill: none; stroke-width: {stroke}; }}\n\
         .outer {{ stroke: #1f5fa8; }}\n\
         .hole {{ stroke: #b8481c; stroke-dasharray: {} {}; }}\n\
         .set-a {{ fill: #222222; }}\n\
         .set-b {{ fill: #2a9d3c; }}\n\
         </style>",
        4.0 * stroke,
        2.0 * stroke
    );
    for layer in layers {
        match layer {
            SvgLayer::Points { class, set } => {
                let _ = writeln!(out, r#"<g class="{class}">"#);
                for p in set.iter() {
                    let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="{dot}"/>"#, p.x, -p.y + 0.0);
                }
                let _ = writeln!(out, "</g>");
            }
            SvgLayer::Curve { class, curve } => {
                let kind = match curve.kind() {
                    CycleKind::Outer => "outer",
                    CycleKind::Hole => "hole",
                };
                let _ = writeln!(out, r#"<path class="curve {kind} {class}" d="{}"/>"#, path_data(curve));
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
