//! Schematic drawing of a curve system: marked points on a circle, one smooth trace per
//! curve leaving each point at its tangent angle, reference curves dashed on top.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Write;

use crate::curves::{CurveSystem, PointId};
use crate::geometry::Piece;
use crate::reference::ReferenceSystem;

const SIZE: f64 = 800.0;
const RADIUS: f64 = 330.0;
const STUB: f64 = 40.0;

fn color(idx: usize) -> String {
    format!("hsl({},70%,45%)", (idx * 137) % 360)
}

fn layout(sys: &CurveSystem) -> BTreeMap<PointId, (f64, f64)> {
    let n = sys.points.len() as f64;
    sys.points
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let a = TAU * k as f64 / n;
            (p.id, (SIZE / 2.0 + RADIUS * a.cos(), SIZE / 2.0 - RADIUS * a.sin()))
        })
        .collect()
}

fn point_name(id: PointId) -> String {
    match id {
        PointId::Inner { i, s } => format!("c{i},{s}"),
        PointId::Outer { l } => format!("c{l}"),
        PointId::Cone { c } => format!("c{c}"),
    }
}

pub fn render_svg(sys: &CurveSystem, refsys: Option<&ReferenceSystem>) -> String {
    let pos = layout(sys);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (ci, c) in sys.curves.iter().enumerate() {
        if (c.t.unwrap_or(1), c.s.unwrap_or(1)) != (1, 1) {
            continue;
        }
        let len = c.itinerary.len();
        let mut d = String::new();
        for k in 0..len {
            let (a, b) = (k, (k + 1) % len);
            let (x0, y0) = pos[&c.itinerary[a].point];
            let (x1, y1) = pos[&c.itinerary[b].point];
            let ta = TAU * num::ToPrimitive::to_f64(&c.current_angle(a)).unwrap_or(0.0);
            let tb = TAU * num::ToPrimitive::to_f64(&c.current_angle(b)).unwrap_or(0.0);
            if k == 0 {
                let _ = write!(d, "M{x0:.2},{y0:.2}");
            }
            let _ = write!(
                d,
                " C{:.2},{:.2} {:.2},{:.2} {x1:.2},{y1:.2}",
                x0 + STUB * ta.cos(),
                y0 - STUB * ta.sin(),
                x1 - STUB * tb.cos(),
                y1 + STUB * tb.sin()
            );
        }
        let _ = writeln!(
            s,
            r#"<path class="trace" data-label="{},{}" d="{d}" fill="none" stroke="{}" stroke-width="1.2"/>"#,
            c.label.i,
            c.label.j,
            color(ci)
        );
    }
    if let Some(refs) = refsys {
        for (k, rc) in refs.curves.iter().enumerate() {
            let pts: Vec<(f64, f64)> = rc
                .arcs
                .iter()
                .filter_map(|a| match a.piece {
                    Piece::Chord(ch) => Some(pos[&ch.point]),
                    Piece::Connector(_) => None,
                })
                .collect();
            let shift = 6.0 * (k + 1) as f64;
            let d = pts
                .iter()
                .enumerate()
                .map(|(w, (x, y))| format!("{}{:.2},{:.2}", if w == 0 { "M" } else { " L" }, x + shift, y + shift))
                .collect::<String>();
            let _ = writeln!(
                s,
                r#"<path class="reference" data-label="{}" d="{d} Z" fill="none" stroke="black" stroke-width="2" stroke-dasharray="6,4"/>"#,
                rc.label
            );
        }
    }
    for (id, (x, y)) in &pos {
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="black"/>"#);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="10">{}</text>"#, x + 6.0, y - 6.0, point_name(*id));
    }
    let _ = writeln!(s, r#"<g class="legend" font-size="10">"#);
    for (ci, c) in sys.curves.iter().enumerate().filter(|(_, c)| c.s.unwrap_or(1) == 1 && c.t.unwrap_or(1) == 1) {
        let y = 12.0 + 11.0 * ci as f64;
        let _ = writeln!(s, r#"<rect x="8" y="{:.2}" width="8" height="8" fill="{}"/>"#, y - 8.0, color(ci));
        let _ = writeln!(s, r#"<text x="20" y="{y:.2}">L({},{})</text>"#, c.label.i, c.label.j);
    }
    let _ = writeln!(s, "</g>\n</svg>");
    s
}
