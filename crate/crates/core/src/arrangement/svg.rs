//! Deterministic SVG rendering of a coloured arrangement.

use std::fmt::Write as _;

use crate::critpoints::{CriticalPoint, ValueClass};

use super::{Arrangement, Color, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SvgOptions {
    /// Skip value-0 critical points (they sit on the vertices).
    pub omit_vertex_points: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            omit_vertex_points: true,
        }
    }
}

pub const POINT_RADIUS: f64 = 0.02;

fn fmt_ring(ring: &[Point]) -> String {
    ring.iter()
        .map(|p| format!("{:.6},{:.6}", p[0], p[1]))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Model units throughout; the y axis is flipped by a group transform.
pub fn to_svg(arr: &Arrangement, points: &[CriticalPoint], opts: SvgOptions) -> String {
    let b = &arr.bbox;
    let (w, h) = (b.max[0] - b.min[0], b.max[1] - b.min[1]);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}" width="800" height="{:.0}">"#,
        b.min[0],
        -b.max[1],
        w,
        h,
        800.0 * h / w
    );
    s.push_str("<g transform=\"scale(1,-1)\">\n");
    s.push_str("<g id=\"cells\">\n");
    for c in &arr.cells {
        let fill = match c.color {
            Some(Color::Black) => "#000",
            _ => "none",
        };
        let _ = writeln!(
            s,
            r#"<polygon data-cell="{}" fill="{}" stroke="none" points="{}"/>"#,
            c.id,
            fill,
            fmt_ring(&c.boundary_vertices)
        );
    }
    s.push_str("</g>\n<g id=\"lines\" stroke=\"#555\" stroke-width=\"0.01\">\n");
    for l in &arr.lines {
        if let Some((t0, t1)) = b.clip(l) {
            let (p, q) = (l.at(t0), l.at(t1));
            let _ = writeln!(
                s,
                r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/>"#,
                p[0], p[1], q[0], q[1]
            );
        }
    }
    s.push_str("</g>\n<g id=\"critical-points\">\n");
    for p in points {
        let colour = match p.value_class {
            ValueClass::Zero if opts.omit_vertex_points => continue,
            ValueClass::Zero => "#2a2",
            ValueClass::MinusOne => "#d22",
            ValueClass::Eight => "#22d",
        };
        let _ = writeln!(
            s,
            r#"<circle cx="{:.6}" cy="{:.6}" r="{}" fill="{}"/>"#,
            p.x, p.y, POINT_RADIUS, colour
        );
    }
    s.push_str("</g>\n</g>\n</svg>\n");
    s
}
