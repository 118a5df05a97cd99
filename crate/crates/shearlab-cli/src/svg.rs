//! Hand-rolled SVG 1.1 emitters: upper half-plane pictures with geodesics as
//! semicircles or vertical rays, and a straight-line lattice renderer.

use num_complex::Complex64;
use shearlab::farey::FareyEdge;
use shearlab::mobius::SpherePoint;

const SCALE: f64 = 100.0;

/// Drawing window in half-plane coordinates; the default covers the base
/// triangle and its near neighbors.
#[derive(Debug, Clone, Copy)]
pub struct Viewport {
    pub x0: f64,
    pub x1: f64,
    pub ymax: f64,
}

impl Default for Viewport {
    fn default() -> Self {
        Self { x0: -3.0, x1: 4.0, ymax: 3.0 }
    }
}

impl Viewport {
    fn width(&self) -> f64 {
        (self.x1 - self.x0) * SCALE
    }

    fn height(&self) -> f64 {
        self.ymax * SCALE
    }

    fn sx(&self, x: f64) -> f64 {
        (x - self.x0) * SCALE
    }

    fn sy(&self, y: f64) -> f64 {
        (self.ymax - y) * SCALE
    }

    fn contains_x(&self, x: f64) -> bool {
        x >= self.x0 && x <= self.x1
    }
}

fn header(vp: &Viewport) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        vp.width(),
        vp.height(),
        vp.width(),
        vp.height()
    )
}

fn vertical_ray(out: &mut String, vp: &Viewport, x: f64) {
    if vp.contains_x(x) {
        out.push_str(&format!(
            "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" \
             stroke=\"black\" stroke-width=\"1\"/>\n",
            vp.sx(x),
            vp.sy(0.0),
            vp.sx(x),
            vp.sy(vp.ymax)
        ));
    }
}

fn semicircle(out: &mut String, vp: &Viewport, a: f64, b: f64) {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    if hi < vp.x0 || lo > vp.x1 {
        return;
    }
    let r = (hi - lo) / 2.0 * SCALE;
    out.push_str(&format!(
        "<path d=\"M {:.3} {:.3} A {:.3} {:.3} 0 0 1 {:.3} {:.3}\" \
         fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n",
        vp.sx(lo),
        vp.sy(0.0),
        r,
        r,
        vp.sx(hi),
        vp.sy(0.0)
    ));
}

/// Boundary geodesic between two ideal points (finite real or infinity).
fn ideal_geodesic(out: &mut String, vp: &Viewport, a: &SpherePoint, b: &SpherePoint) {
    match (a.finite(), b.finite()) {
        (Some(z), Some(w)) => semicircle(out, vp, z.re, w.re),
        (Some(z), None) => vertical_ray(out, vp, z.re),
        (None, Some(w)) => vertical_ray(out, vp, w.re),
        (None, None) => {}
    }
}

/// Farey tessellation picture: geodesics plus labeled dots at the small
/// rational vertices.
pub fn farey_svg(edges: &[FareyEdge], vp: &Viewport) -> String {
    let mut out = header(vp);
    let mut labeled: Vec<String> = Vec::new();
    for e in edges {
        ideal_geodesic(&mut out, vp, &e.a().to_point(), &e.b().to_point());
        for v in [e.a(), e.b()] {
            if let Some(z) = v.to_point().finite() {
                if vp.contains_x(z.re) {
                    let label = v.to_string();
                    if !labeled.contains(&label) {
                        out.push_str(&format!(
                            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"2\" fill=\"black\"/>\n",
                            vp.sx(z.re),
                            vp.sy(0.0)
                        ));
                        out.push_str(&format!(
                            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"9\">{}</text>\n",
                            vp.sx(z.re) + 3.0,
                            vp.sy(0.0) - 3.0,
                            label
                        ));
                        labeled.push(label);
                    }
                }
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Developed boundary images: labeled dots in the plane joined by a
/// polyline in boundary order, showing the bent curve.
pub fn developed_svg(points: &[(String, Complex64)], vp: &Viewport) -> String {
    let mut out = header(vp);
    if points.len() > 1 {
        let path: Vec<String> = points
            .iter()
            .map(|(_, z)| format!("{:.3},{:.3}", vp.sx(z.re), vp.sy(z.im)))
            .collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\"/>\n",
            path.join(" ")
        ));
    }
    for (label, z) in points {
        out.push_str(&format!(
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"2\" fill=\"black\"/>\n",
            vp.sx(z.re),
            vp.sy(z.im)
        ));
        out.push_str(&format!(
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"9\">{}</text>\n",
            vp.sx(z.re) + 3.0,
            vp.sy(z.im) - 3.0,
            label
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Geodesic segment between two interior half-plane points: a vertical
/// chord or a circular arc of the geodesic through them.
fn h2_segment(out: &mut String, vp: &Viewport, z: Complex64, w: Complex64) {
    if (z.re - w.re).abs() < 1e-9 {
        out.push_str(&format!(
            "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" \
             stroke=\"black\" stroke-width=\"1\"/>\n",
            vp.sx(z.re),
            vp.sy(z.im),
            vp.sx(w.re),
            vp.sy(w.im)
        ));
        return;
    }
    let m = (z.norm_sqr() - w.norm_sqr()) / (2.0 * (z.re - w.re));
    let r = (z - m).norm() * SCALE;
    let sweep = if z.re < w.re { 1 } else { 0 };
    out.push_str(&format!(
        "<path d=\"M {:.3} {:.3} A {:.3} {:.3} 0 0 {} {:.3} {:.3}\" \
         fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n",
        vp.sx(z.re),
        vp.sy(z.im),
        r,
        r,
        sweep,
        vp.sx(w.re),
        vp.sy(w.im)
    ));
}

/// Interior configuration picture: geodesic segments plus dots.
pub fn configuration_svg(
    segments: &[(Complex64, Complex64)],
    dots: &[Complex64],
    vp: &Viewport,
) -> String {
    let mut out = header(vp);
    for (z, w) in segments {
        h2_segment(&mut out, vp, *z, *w);
    }
    for z in dots {
        out.push_str(&format!(
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"1.5\" fill=\"crimson\"/>\n",
            vp.sx(z.re),
            vp.sy(z.im)
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Euclidean lattice picture for the flute surface triangulation.
pub fn lattice_svg(edges: &[((i64, i64), (i64, i64))], radius: usize) -> String {
    let r = radius as f64;
    let pad = 0.5;
    let side = (2.0 * r + 2.0 * pad) * 40.0;
    let s = |v: f64| (v + r + pad) * 40.0;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{side:.0}\" height=\"{side:.0}\" viewBox=\"0 0 {side:.0} {side:.0}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    for ((x1, y1), (x2, y2)) in edges {
        out.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" \
             stroke=\"black\" stroke-width=\"1\"/>\n",
            s(*x1 as f64),
            s(-(*y1 as f64)),
            s(*x2 as f64),
            s(-(*y2 as f64))
        ));
    }
    out.push_str("</svg>\n");
    out
}
