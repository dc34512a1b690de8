//! Static SVG 1.1 pictures of positive spheres.
//!
//! The positive quadrant `[0,1]²` maps to a 400 px square with a 40 px
//! margin; `y` grows upward. Coordinates are written with three decimals.

use std::fmt::Write;

use absnorm_core::classify::{classify_polygon, hat_values, ClassKind};
use absnorm_core::rational::{self, Rat};
use absnorm_core::slice::slice_positive;
use absnorm_core::{AbsNorm2, Functional2, PolygonNorm, Vec2};
use num_traits::Zero;

pub const SIZE: f64 = 480.0;
pub const MARGIN: f64 = 40.0;
pub const SCALE: f64 = 400.0;

/// Sample count for the sphere of a numeric norm.
const SAMPLES: usize = 256;

#[derive(Clone, Debug, Default)]
pub struct Overlays {
    pub dual: bool,
    pub face: bool,
    pub hats: bool,
    pub slice: Option<(Functional2, Rat)>,
}

pub fn to_px(p: [f64; 2]) -> (f64, f64) {
    (MARGIN + SCALE * p[0], MARGIN + SCALE * (1.0 - p[1]))
}

fn points(pts: &[[f64; 2]]) -> String {
    pts.iter()
        .map(|&p| {
            let (x, y) = to_px(p);
            format!("{x:.3},{y:.3}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn exact_points(pts: &[Vec2]) -> String {
    points(&pts.iter().map(|v| v.to_f64()).collect::<Vec<_>>())
}

struct Svg {
    body: String,
    warnings: Vec<String>,
}

impl Svg {
    fn polyline(&mut self, class: &str, pts: &str, extra: &str) {
        let _ = writeln!(self.body, r#"  <polyline class="{class}" points="{pts}" fill="none"{extra}/>"#);
    }

    fn marker(&mut self, p: &Vec2, label: &str) {
        let (x, y) = to_px(p.to_f64());
        let _ = writeln!(self.body, r##"  <circle class="hat" cx="{x:.3}" cy="{y:.3}" r="4" fill="#c0392b"/>"##);
        let _ = writeln!(
            self.body,
            r#"  <text class="hat-label" x="{:.3}" y="{:.3}" font-size="12">{label}</text>"#,
            x + 6.0,
            y - 6.0
        );
    }
}

fn polygon_layers(p: &PolygonNorm, ov: &Overlays, svg: &mut Svg) {
    let tag = classify_polygon(p);
    if let Some((f, eps)) = &ov.slice {
        match slice_positive(p, f, eps) {
            Ok(region) if !region.is_empty() => {
                let _ = writeln!(
                    svg.body,
                    r##"  <polygon class="slice" points="{}" fill="#f5b041" fill-opacity="0.45" stroke="none"/>"##,
                    exact_points(&region.corners)
                );
            }
            Ok(_) => svg.warnings.push(format!("slice S(B, {f}, {}) is empty", rational::format(eps))),
            Err(e) => svg.warnings.push(format!("slice overlay skipped: {e}")),
        }
    }
    svg.polyline(
        "sphere",
        &exact_points(p.vertices()),
        r##" stroke="#1f3a93" stroke-width="2""##,
    );
    if ov.dual {
        svg.polyline(
            "dual",
            &exact_points(p.dual().vertices()),
            r##" stroke="#7f8c8d" stroke-width="1.5" stroke-dasharray="6 4""##,
        );
    }
    let (h1, h2) = hat_values(p);
    let c1 = Vec2::new(rational::one(), h1.clone());
    let c2 = Vec2::new(h2.clone(), rational::one());
    if ov.face {
        match tag.kind {
            ClassKind::F { m: 2, n: 2 } | ClassKind::F { m: 2, n: 3 } => svg.polyline(
                "face",
                &exact_points(&[c1.clone(), c2.clone()]),
                r##" stroke="#27ae60" stroke-width="5" stroke-opacity="0.8""##,
            ),
            kind => svg
                .warnings
                .push(format!("face overlay needs F_{{2,2}} or F_{{2,3}}; this norm is {kind}")),
        }
    }
    if ov.hats {
        if h1.is_zero() && h2.is_zero() {
            svg.warnings.push("both hat values vanish".into());
        }
        if !h1.is_zero() {
            svg.marker(&c1, &format!("c1 = (1, {})", rational::format(&h1)));
        }
        if !h2.is_zero() {
            svg.marker(&c2, &format!("c2 = ({}, 1)", rational::format(&h2)));
        }
    }
}

/// SVG document for `norm` with the requested overlays. Overlays that do not
/// apply to the norm produce a warning line in the picture.
pub fn render(norm: &AbsNorm2, ov: &Overlays) -> String {
    let mut svg = Svg {
        body: String::new(),
        warnings: Vec::new(),
    };
    let title = match norm {
        AbsNorm2::Polygonal(p) => {
            polygon_layers(p, ov, &mut svg);
            format!("{} ({} edges)", classify_polygon(p).kind, p.edge_count())
        }
        AbsNorm2::BlackBox(bb) => {
            let pts: Vec<[f64; 2]> = (0..=SAMPLES)
                .map(|k| bb.boundary_point(std::f64::consts::FRAC_PI_2 * k as f64 / SAMPLES as f64))
                .collect();
            svg.polyline("sphere", &points(&pts), r##" stroke="#1f3a93" stroke-width="2""##);
            for (on, what) in [
                (ov.dual, "dual"),
                (ov.face, "face"),
                (ov.hats, "hats"),
                (ov.slice.is_some(), "slice"),
            ] {
                if on {
                    svg.warnings
                        .push(format!("{what} overlay needs a polygonal norm; {} is numeric", bb.label));
                }
            }
            format!("numeric norm {}", bb.label)
        }
    };
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, "  <title>{}</title>", escape(&title));
    let (ox, oy) = to_px([0.0, 0.0]);
    let (ex, _) = to_px([1.0, 0.0]);
    let (_, ey) = to_px([0.0, 1.0]);
    let _ = writeln!(
        out,
        r##"  <g class="axes" stroke="#444" stroke-width="1"><line x1="{ox:.3}" y1="{oy:.3}" x2="{:.3}" y2="{oy:.3}"/><line x1="{ox:.3}" y1="{oy:.3}" x2="{ox:.3}" y2="{:.3}"/></g>"##,
        ex + 20.0,
        ey - 20.0
    );
    out.push_str(&svg.body);
    for (i, w) in svg.warnings.iter().enumerate() {
        let _ = writeln!(
            out,
            r##"  <text class="warning" x="{MARGIN}" y="{:.3}" font-size="12" fill="#c0392b">warning: {}</text>"##,
            SIZE - 8.0 - 14.0 * (svg.warnings.len() - 1 - i) as f64,
            escape(w)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
