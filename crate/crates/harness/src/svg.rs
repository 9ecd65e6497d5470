//! SVG 1.1 figures of scenes.
//!
//! Bodies are drawn as grey outlines and the intersection `H` is filled.
//! With a structure, pairwise vertices are black dots, inherited vertices
//! red dots, and edges can be stroked in a colour per owner. Gaps are the
//! region between a chord and the body boundary it cuts off, shaded in the
//! owner's colour. Numbers are printed with a fixed number of decimals so the
//! output is byte-for-byte reproducible.

use std::fmt::Write;

use cpolygon::{
    trace_boundary, ConvexDomain, NormalArc, Point64, Scene64, Structure64, VertexKind,
};

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22",
    "#7f7f7f", "#d62728",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SvgOptions {
    pub gaps: bool,
    pub edge_colors: bool,
    /// Image width in pixels; the height follows the aspect ratio.
    pub width: f64,
    /// Points per full turn when sampling a boundary.
    pub samples: usize,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            gaps: false,
            edge_colors: false,
            width: 600.0,
            samples: 720,
        }
    }
}

struct Frame {
    min: Point64,
    k: f64,
    height: f64,
}

impl Frame {
    fn xy(&self, p: Point64) -> (f64, f64) {
        (
            (p.x - self.min.x) * self.k,
            self.height - (p.y - self.min.y) * self.k,
        )
    }

    fn path(&self, pts: &[Point64], close: bool) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.xy(*p);
            let _ = write!(d, "{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" });
        }
        if close {
            d.push('Z');
        }
        d.trim_end().to_string()
    }
}

fn arc_points<B: ConvexDomain<f64>>(
    body: &B,
    arc: &NormalArc<f64>,
    per_turn: usize,
) -> Vec<Point64> {
    let steps = ((arc.extent() / std::f64::consts::TAU) * per_turn as f64)
        .ceil()
        .max(2.0) as usize;
    (0..=steps)
        .map(|i| body.boundary_at_normal(arc.at(i as f64 / steps as f64)))
        .collect()
}

fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

/// Renders `scene`, and `structure` if given. Without a structure the
/// intersection is filled from a ray trace, which also covers scenes the
/// engine does not accept.
pub fn render_svg(scene: &Scene64, structure: Option<&Structure64>, opts: &SvgOptions) -> String {
    let bodies = scene.bodies();
    let outlines: Vec<Vec<Point64>> = bodies
        .iter()
        .map(|b| arc_points(b, &NormalArc::Full, opts.samples))
        .collect();

    let (mut lo, mut hi) = (
        Point64::new(f64::INFINITY, f64::INFINITY),
        Point64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for p in outlines.iter().flatten() {
        lo = Point64::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point64::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let pad = 0.04 * (hi.x - lo.x).max(hi.y - lo.y);
    lo = Point64::new(lo.x - pad, lo.y - pad);
    hi = Point64::new(hi.x + pad, hi.y + pad);
    let k = opts.width / (hi.x - lo.x);
    let frame = Frame {
        min: lo,
        k,
        height: (hi.y - lo.y) * k,
    };

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.0}" height="{:.0}" viewBox="0 0 {:.3} {:.3}">"#,
        opts.width,
        frame.height.ceil(),
        opts.width,
        frame.height
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // the intersection
    let edge_paths: Vec<(usize, Vec<Point64>)> = match structure {
        Some(s) => {
            let mut order: Vec<usize> = (0..s.edges.len()).collect();
            order.sort_by(|&a, &b| {
                s.edges[a]
                    .normal_arc
                    .start()
                    .value()
                    .total_cmp(&s.edges[b].normal_arc.start().value())
            });
            order
                .into_iter()
                .map(|e| {
                    let rec = &s.edges[e];
                    let mut pts = arc_points(&bodies[rec.owner], &rec.normal_arc, opts.samples);
                    let last = pts.len() - 1;
                    pts[0] = s.vertices[rec.endpoints.0].point;
                    pts[last] = s.vertices[rec.endpoints.1].point;
                    (rec.owner, pts)
                })
                .collect()
        }
        None => Vec::new(),
    };
    let fill: Vec<Point64> = if structure.is_some() {
        edge_paths
            .iter()
            .flat_map(|(_, p)| p.iter().copied())
            .collect()
    } else {
        trace_boundary(scene, opts.samples.max(256))
            .map(|tb| tb.samples)
            .unwrap_or_default()
    };
    if !fill.is_empty() {
        let _ = writeln!(
            out,
            r##"<path d="{}" fill="#cfe3f7" stroke="none"/>"##,
            frame.path(&fill, true)
        );
    }

    let _ = writeln!(
        out,
        r##"<g fill="none" stroke="#888888" stroke-width="1">"##
    );
    for (i, o) in outlines.iter().enumerate() {
        let _ = writeln!(out, r#"<path id="body{i}" d="{}"/>"#, frame.path(o, true));
    }
    let _ = writeln!(out, "</g>");

    if let Some(s) = structure {
        if opts.gaps {
            let _ = writeln!(out, r#"<g fill-opacity="0.25" stroke-width="1">"#);
            for (j, fam) in s.gap_families.iter().enumerate() {
                for g in fam {
                    let mut pts = arc_points(&bodies[j], &g.open_arc, opts.samples);
                    let last = pts.len() - 1;
                    pts[0] = g.chord.0;
                    pts[last] = g.chord.1;
                    let c = color(j);
                    let _ = writeln!(
                        out,
                        r#"<path class="gap" d="{}" fill="{c}" stroke="{c}"/>"#,
                        frame.path(&pts, true)
                    );
                }
            }
            let _ = writeln!(out, "</g>");
        }
        let _ = writeln!(
            out,
            r#"<g fill="none" stroke-width="2.5" stroke-linecap="round">"#
        );
        for (owner, pts) in &edge_paths {
            let c = if opts.edge_colors {
                color(*owner)
            } else {
                "#1a3a5c"
            };
            let _ = writeln!(
                out,
                r#"<path class="edge" d="{}" stroke="{c}"/>"#,
                frame.path(pts, false)
            );
        }
        let _ = writeln!(out, "</g>");
        for v in &s.vertices {
            let (x, y) = frame.xy(v.point);
            let (class, c) = match v.kind {
                VertexKind::Pairwise { .. } => ("pairwise", "black"),
                VertexKind::Inherited { .. } => ("inherited", "#d62728"),
            };
            let _ = writeln!(
                out,
                r#"<circle class="{class}" cx="{x:.3}" cy="{y:.3}" r="4" fill="{c}"/>"#
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
