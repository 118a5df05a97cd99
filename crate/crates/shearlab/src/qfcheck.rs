//! Numeric verification harness for the bending estimates: boundary disks of
//! geodesic half-spaces, nesting chains along a bent geodesic, the
//! cancellation norm of opposite small rotations, and the injectivity scan of
//! developed boundary maps.
//!
//! Geometry lives in the upper half-space model: a point of hyperbolic
//! 3-space is a base point in the complex plane together with a positive
//! height, and a geodesic with two finite ideal endpoints is the Euclidean
//! semicircle over them. The half-space orthogonal to such a geodesic at a
//! given arclength parameter traces an open disk (or half-plane) on the
//! boundary plane; nesting of those disks is what the chain report checks.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::farey::{cyclic_order_positive, FareyError, FareyVertex, Tessellation};
use crate::intersect::{crosses, IdealGeodesic, IntersectError};
use crate::mobius::{
    dist_to_identity, loxodromic, mobius_from_triples, MobiusError, MoebiusMap, SpherePoint,
};
use crate::shear::{ShearError, ShearFunction};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QfError {
    #[error("geodesic endpoints must be distinct")]
    CoincidentEndpoints,
    #[error("the two geodesics share no ideal endpoint")]
    NoCommonEndpoint,
    #[error("eps must be positive")]
    NonPositiveEps,
    #[error("shear function must be purely imaginary")]
    NonImaginaryShear,
    #[error("vertex {0} is not present at this depth")]
    VertexOutsideDepth(FareyVertex),
    #[error(transparent)]
    Farey(#[from] FareyError),
    #[error(transparent)]
    Mobius(#[from] MobiusError),
    #[error(transparent)]
    Shear(#[from] ShearError),
    #[error(transparent)]
    Intersect(#[from] IntersectError),
}

/// A point of the upper half-space model of hyperbolic 3-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H3Point {
    pub base: Complex64,
    pub height: f64,
}

impl H3Point {
    pub fn new(base: Complex64, height: f64) -> Self {
        assert!(height > 0.0, "height must be positive");
        Self { base, height }
    }
}

/// Hyperbolic distance between two upper half-space points.
pub fn dist_h3(p: &H3Point, q: &H3Point) -> f64 {
    let dz = (p.base - q.base).norm_sqr();
    let dt = (p.height - q.height).powi(2);
    (1.0 + (dz + dt) / (2.0 * p.height * q.height)).acosh()
}

/// Isometric action of a Moebius map on upper half-space.
pub fn apply_h3(m: &MoebiusMap, p: &H3Point) -> H3Point {
    let n = m.clone().normalized();
    let w = n.c * p.base + n.d;
    let den = w.norm_sqr() + n.c.norm_sqr() * p.height * p.height;
    let base = ((n.a * p.base + n.b) * w.conj() + n.a * n.c.conj() * p.height * p.height) / den;
    H3Point::new(base, p.height / den)
}

/// The boundary trace of an open half-space: an open disk or half-plane in
/// the plane. A circle region is its interior or exterior according to
/// `inside`; a half-plane is the side `Re(conj(normal) w) > offset` with a
/// unit normal.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryDisk {
    Circle { center: Complex64, radius: f64, inside: bool },
    HalfPlane { normal: Complex64, offset: f64 },
}

fn check_endpoints(endpoints: (SpherePoint, SpherePoint)) -> Result<(), QfError> {
    if endpoints.0 == endpoints.1 {
        return Err(QfError::CoincidentEndpoints);
    }
    Ok(())
}

/// Arclength-parameterized point on the geodesic over the two endpoints;
/// t = 0 at the Euclidean top of the semicircle (or at height 1 over the
/// finite endpoint when the other is infinite), increasing toward the second
/// endpoint.
pub fn geodesic_point(
    endpoints: (SpherePoint, SpherePoint),
    t: f64,
) -> Result<H3Point, QfError> {
    check_endpoints(endpoints)?;
    match endpoints {
        (SpherePoint::Finite(z1), SpherePoint::Finite(z2)) => {
            let center = (z1 + z2) / 2.0;
            let radius = (z2 - z1).norm() / 2.0;
            let u = (z2 - z1) / (z2 - z1).norm();
            Ok(H3Point::new(center + radius * t.tanh() * u, radius / t.cosh()))
        }
        (SpherePoint::Finite(z), SpherePoint::Infinity) => Ok(H3Point::new(z, t.exp())),
        (SpherePoint::Infinity, SpherePoint::Finite(z)) => Ok(H3Point::new(z, (-t).exp())),
        _ => Err(QfError::CoincidentEndpoints),
    }
}

/// Inverse of [`geodesic_point`] for a point on (or projected onto the
/// vertical plane of) the geodesic.
pub fn geodesic_parameter(
    endpoints: (SpherePoint, SpherePoint),
    p: &H3Point,
) -> Result<f64, QfError> {
    check_endpoints(endpoints)?;
    match endpoints {
        (SpherePoint::Finite(z1), SpherePoint::Finite(z2)) => {
            let center = (z1 + z2) / 2.0;
            let u = (z2 - z1) / (z2 - z1).norm();
            let along = ((p.base - center) * u.conj()).re;
            Ok((along / p.height).asinh())
        }
        (SpherePoint::Finite(_), SpherePoint::Infinity) => Ok(p.height.ln()),
        (SpherePoint::Infinity, SpherePoint::Finite(_)) => Ok(-p.height.ln()),
        _ => Err(QfError::CoincidentEndpoints),
    }
}

/// Boundary disk of the half-space cut off by the plane orthogonal to the
/// geodesic at parameter t, on the side of increasing (forward) or
/// decreasing t.
pub fn ortho_disk(
    endpoints: (SpherePoint, SpherePoint),
    t: f64,
    forward: bool,
) -> Result<BoundaryDisk, QfError> {
    check_endpoints(endpoints)?;
    match endpoints {
        (SpherePoint::Finite(z1), SpherePoint::Finite(z2)) => {
            if t == 0.0 {
                // Perpendicular-bisector plane: a half-plane on the boundary.
                let u = (z2 - z1) / (z2 - z1).norm();
                let center = (z1 + z2) / 2.0;
                let n = if forward { u } else { -u };
                Ok(BoundaryDisk::HalfPlane { normal: n, offset: (center * n.conj()).re })
            } else {
                // The orthogonal plane at parameter t traces the circle of
                // Apollonius |w - z1| / |w - z2| = e^t.
                let lambda = t.exp();
                let l2 = lambda * lambda;
                let center = (z1 - l2 * z2) / (1.0 - l2);
                let radius = lambda * (z1 - z2).norm() / (1.0 - l2).abs();
                // z2 lies inside the circle exactly when lambda > 1; the
                // forward side is the one whose boundary disk contains z2.
                let inside = if forward { lambda > 1.0 } else { lambda < 1.0 };
                Ok(BoundaryDisk::Circle { center, radius, inside })
            }
        }
        (SpherePoint::Finite(z), SpherePoint::Infinity) => Ok(BoundaryDisk::Circle {
            center: z,
            radius: t.exp(),
            inside: !forward,
        }),
        (SpherePoint::Infinity, SpherePoint::Finite(z)) => Ok(BoundaryDisk::Circle {
            center: z,
            radius: (-t).exp(),
            inside: forward,
        }),
        _ => Err(QfError::CoincidentEndpoints),
    }
}

/// Euclidean clearance between the closure of `inner` and the complement of
/// `outer`, negative (or -inf for topologically impossible pairs) when the
/// containment fails.
pub fn nesting_clearance(inner: &BoundaryDisk, outer: &BoundaryDisk) -> f64 {
    use BoundaryDisk::*;
    match (inner, outer) {
        (
            Circle { center: ci, radius: ri, inside: true },
            Circle { center: co, radius: ro, inside: true },
        ) => ro - ((ci - co).norm() + ri),
        (
            Circle { center: ci, radius: ri, inside: true },
            Circle { center: co, radius: ro, inside: false },
        ) => (ci - co).norm() - ri - ro,
        (
            Circle { center: ci, radius: ri, inside: false },
            Circle { center: co, radius: ro, inside: false },
        ) => ri - ((ci - co).norm() + ro),
        (Circle { inside: false, .. }, Circle { inside: true, .. }) => f64::NEG_INFINITY,
        (Circle { center, radius, inside: true }, HalfPlane { normal, offset }) => {
            (center * normal.conj()).re - offset - radius
        }
        (Circle { inside: false, .. }, HalfPlane { .. }) => f64::NEG_INFINITY,
        (HalfPlane { normal, offset }, Circle { center, radius, inside: false }) => {
            offset - (center * normal.conj()).re - radius
        }
        (HalfPlane { .. }, Circle { inside: true, .. }) => f64::NEG_INFINITY,
        (HalfPlane { normal: ni, offset: di }, HalfPlane { normal: no, offset: d_o }) => {
            if (ni - no).norm() > 1e-9 {
                f64::NEG_INFINITY
            } else {
                di - d_o
            }
        }
    }
}

/// True iff the closure of `inner` lies in the interior of `outer` with
/// Euclidean clearance strictly greater than `margin`.
pub fn disk_nested(inner: &BoundaryDisk, outer: &BoundaryDisk, margin: f64) -> bool {
    nesting_clearance(inner, outer) > margin
}

fn circumcircle(w1: Complex64, w2: Complex64, w3: Complex64) -> Option<(Complex64, f64)> {
    // Solve the two chordal bisector equations for the center.
    let a11 = 2.0 * (w2.re - w1.re);
    let a12 = 2.0 * (w2.im - w1.im);
    let b1 = w2.norm_sqr() - w1.norm_sqr();
    let a21 = 2.0 * (w3.re - w1.re);
    let a22 = 2.0 * (w3.im - w1.im);
    let b2 = w3.norm_sqr() - w1.norm_sqr();
    let det = a11 * a22 - a12 * a21;
    let scale = (w2 - w1).norm() * (w3 - w1).norm() * (w3 - w2).norm();
    if det.abs() < 1e-12 * scale.max(1e-300) {
        return None;
    }
    let cx = (b1 * a22 - b2 * a12) / det;
    let cy = (a11 * b2 - a21 * b1) / det;
    let center = Complex64::new(cx, cy);
    Some((center, (w1 - center).norm()))
}

fn line_through(w1: Complex64, w2: Complex64) -> (Complex64, f64) {
    let dir = (w2 - w1) / (w2 - w1).norm();
    let normal = Complex64::new(0.0, 1.0) * dir;
    (normal, (w1 * normal.conj()).re)
}

/// Image of a boundary disk under a Moebius map, reconstructed from three
/// boundary points and an interior sample.
pub fn transform_disk(m: &MoebiusMap, disk: &BoundaryDisk) -> BoundaryDisk {
    let (boundary, samples): ([Complex64; 3], Vec<SpherePoint>) = match disk {
        BoundaryDisk::Circle { center, radius, inside } => {
            let r = Complex64::new(*radius, 0.0);
            let ir = Complex64::new(0.0, *radius);
            let pts = [center + r, center + ir, center - r];
            let samples = if *inside {
                vec![
                    SpherePoint::Finite(*center),
                    SpherePoint::Finite(center + 0.5 * r),
                    SpherePoint::Finite(center + 0.3 * ir),
                ]
            } else {
                vec![
                    SpherePoint::Infinity,
                    SpherePoint::Finite(center + 3.0 * r),
                    SpherePoint::Finite(center - 2.5 * ir),
                ]
            };
            (pts, samples)
        }
        BoundaryDisk::HalfPlane { normal, offset } => {
            let p0 = normal * *offset;
            let tangent = Complex64::new(0.0, 1.0) * normal;
            let pts = [p0, p0 + tangent, p0 - tangent];
            let samples = vec![
                SpherePoint::Finite(p0 + normal),
                SpherePoint::Finite(p0 + 2.0 * normal),
                SpherePoint::Finite(p0 + normal + tangent),
            ];
            (pts, samples)
        }
    };
    let imgs: Vec<SpherePoint> = boundary
        .iter()
        .map(|w| m.apply(SpherePoint::Finite(*w)))
        .collect();
    let finite: Vec<Complex64> = imgs.iter().filter_map(|p| p.finite()).collect();

    let circle = if finite.len() == 3 {
        circumcircle(finite[0], finite[1], finite[2])
    } else {
        None
    };
    match circle {
        Some((center, radius)) => {
            for s in &samples {
                match m.apply(*s) {
                    SpherePoint::Infinity => {
                        return BoundaryDisk::Circle { center, radius, inside: false };
                    }
                    SpherePoint::Finite(w) => {
                        let gap = (w - center).norm() - radius;
                        if gap.abs() > 1e-9 * radius.max(1.0) {
                            return BoundaryDisk::Circle { center, radius, inside: gap < 0.0 };
                        }
                    }
                }
            }
            // All samples were on the boundary within tolerance; fall back
            // to the first sample's side.
            let w = m
                .apply(samples[0])
                .finite()
                .expect("infinite sample handled above");
            BoundaryDisk::Circle { center, radius, inside: (w - center).norm() < radius }
        }
        None => {
            // The image boundary passes through infinity: a straight line.
            let (normal, offset) = line_through(finite[0], finite[1]);
            for s in &samples {
                if let SpherePoint::Finite(w) = m.apply(*s) {
                    let sgn = (w * normal.conj()).re - offset;
                    if sgn.abs() > 1e-9 {
                        return if sgn > 0.0 {
                            BoundaryDisk::HalfPlane { normal, offset }
                        } else {
                            BoundaryDisk::HalfPlane { normal: -normal, offset: -offset }
                        };
                    }
                }
            }
            BoundaryDisk::HalfPlane { normal, offset }
        }
    }
}

/// Size of the defect of a pair of opposite rotations by eps about two
/// geodesics sharing an ideal endpoint.
pub fn cancellation_norm(
    g: (SpherePoint, SpherePoint),
    h: (SpherePoint, SpherePoint),
    eps: f64,
) -> Result<f64, QfError> {
    check_endpoints(g)?;
    check_endpoints(h)?;
    if eps <= 0.0 {
        return Err(QfError::NonPositiveEps);
    }
    let shared = [g.0 == h.0, g.0 == h.1, g.1 == h.0, g.1 == h.1];
    if !shared.iter().any(|&s| s) {
        return Err(QfError::NoCommonEndpoint);
    }
    let ie = Complex64::new(0.0, eps);
    let a = loxodromic(g.0, g.1, ie)?;
    let b = loxodromic(h.0, h.1, -ie)?;
    Ok(dist_to_identity(&a.compose(&b)))
}

/// Minimum pairwise chordal distance of a developed vertex-image set.
#[derive(Debug, Clone)]
pub struct InjectivityReport {
    pub min_distance: f64,
    pub pair: Option<(FareyVertex, FareyVertex)>,
}

pub fn injectivity_scan(images: &HashMap<FareyVertex, SpherePoint>) -> InjectivityReport {
    let mut keys: Vec<&FareyVertex> = images.keys().collect();
    keys.sort();
    let mut report = InjectivityReport { min_distance: f64::INFINITY, pair: None };
    for (i, u) in keys.iter().enumerate() {
        for v in &keys[i + 1..] {
            let d = images[*u].chordal_distance(&images[*v]);
            if d < report.min_distance {
                report.min_distance = d;
                report.pair = Some(((*u).clone(), (*v).clone()));
            }
        }
    }
    report
}

/// Outcome of the disk-nesting walk along a bent geodesic.
#[derive(Debug, Clone)]
pub struct NestingReport {
    pub pass: bool,
    /// Index of the first consecutive pair whose nesting fails.
    pub first_failure: Option<usize>,
    pub min_clearance: f64,
    /// Number of consecutive pairs checked.
    pub checked: usize,
    /// Number of tessellation edges crossed by the geodesic.
    pub crossed_edges: usize,
}

/// Walks the geodesic (x, y) in unit steps, bending the forward half-space
/// disks by the partial cocycles of the crossed edges, and checks that each
/// disk strictly contains the next.
pub fn nesting_chain_report(
    s: &ShearFunction,
    x: &FareyVertex,
    y: &FareyVertex,
    depth: usize,
) -> Result<NestingReport, QfError> {
    if x == y {
        return Err(QfError::CoincidentEndpoints);
    }
    let tess = Tessellation::generate(depth)?;
    for v in [x, y] {
        if !tess.vertices().contains(v) {
            return Err(QfError::VertexOutsideDepth(v.clone()));
        }
    }
    for e in tess.edges() {
        if s.value(&e).re.abs() > 1e-12 {
            return Err(QfError::NonImaginaryShear);
        }
    }

    // Normalize the geodesic to the vertical axis: x -> 0, y -> infinity.
    let witness = [FareyVertex::infinity(), FareyVertex::integer(0), FareyVertex::integer(1)]
        .into_iter()
        .find(|w| w != x && w != y)
        .expect("three candidates, two excluded");
    let to_axis = mobius_from_triples(
        [x.to_point(), y.to_point(), witness.to_point()],
        [
            SpherePoint::Finite(Complex64::new(0.0, 0.0)),
            SpherePoint::Infinity,
            SpherePoint::Finite(Complex64::new(1.0, 0.0)),
        ],
    )?;
    let from_axis = to_axis.inverse();

    // Crossed edges with their crossing parameters along the axis, and the
    // per-edge bending factors oriented with x on the left.
    let axis_geo = IdealGeodesic::rational(x.clone(), y.clone())?;
    let mut crossed: Vec<(f64, MoebiusMap)> = Vec::new();
    for e in tess.edges() {
        if !crosses(&axis_geo, &IdealGeodesic::from_edge(&e)) {
            continue;
        }
        let alpha = to_axis
            .apply(e.a().to_point())
            .finite()
            .expect("crossing edge avoids y")
            .re;
        let beta = to_axis
            .apply(e.b().to_point())
            .finite()
            .expect("crossing edge avoids y")
            .re;
        debug_assert!(alpha * beta < 0.0, "crossing endpoints straddle the axis");
        let tau = 0.5 * (-alpha * beta).ln();
        let (start, end) = if cyclic_order_positive(e.a(), e.b(), x) {
            (e.a(), e.b())
        } else {
            (e.b(), e.a())
        };
        let factor = loxodromic(end.to_point(), start.to_point(), s.value(&e))?;
        crossed.push((tau, factor));
    }
    crossed.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Subdivision window: unit steps centered at the orthogonal projection
    // of the base point over the fundamental triangle.
    let base = apply_h3(&to_axis, &H3Point::new(Complex64::new(0.0, 0.0), 1.0));
    let foot = (base.base.norm_sqr() + base.height * base.height).sqrt().ln();

    let span = depth as i64;
    let mut disks = Vec::new();
    for n in -span..=span {
        let tau = foot + n as f64;
        // Forward half-space toward y, i.e. the exterior of the circle of
        // radius e^tau in axis coordinates, pulled back and then bent.
        let axis_disk =
            BoundaryDisk::Circle { center: Complex64::new(0.0, 0.0), radius: tau.exp(), inside: false };
        let unbent = transform_disk(&from_axis, &axis_disk);
        let mut cocycle = MoebiusMap::identity();
        for (edge_tau, factor) in &crossed {
            if *edge_tau < tau {
                cocycle = cocycle.compose(factor);
            } else {
                break;
            }
        }
        disks.push(transform_disk(&cocycle, &unbent));
    }

    let mut report = NestingReport {
        pass: true,
        first_failure: None,
        min_clearance: f64::INFINITY,
        checked: disks.len() - 1,
        crossed_edges: crossed.len(),
    };
    for (n, pair) in disks.windows(2).enumerate() {
        let clearance = nesting_clearance(&pair[1], &pair[0]);
        report.min_clearance = report.min_clearance.min(clearance);
        if clearance <= 0.0 && report.pass {
            report.pass = false;
            report.first_failure = Some(n);
        }
    }
    Ok(report)
}

/// Displacement of the frame at (0, 1): the base point together with a point
/// at unit distance along the vertical tangent.
pub fn frame_displacement(m: &MoebiusMap) -> f64 {
    let j = H3Point::new(Complex64::new(0.0, 0.0), 1.0);
    let j_up = H3Point::new(Complex64::new(0.0, 0.0), std::f64::consts::E);
    dist_h3(&j, &apply_h3(m, &j)) + dist_h3(&j_up, &apply_h3(m, &j_up))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shear::{random_fan_sum_zero, ShearFunction};
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn sp(x: f64) -> SpherePoint {
        SpherePoint::Finite(Complex64::new(x, 0.0))
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn geodesic_point_examples() {
        let p = geodesic_point((sp(-1.0), sp(1.0)), 0.0).unwrap();
        assert_abs_diff_eq!(p.base.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.height, 1.0, epsilon = 1e-15);

        let p = geodesic_point((sp(0.0), SpherePoint::Infinity), 0.0).unwrap();
        assert_abs_diff_eq!(p.height, 1.0, epsilon = 1e-15);
        let p = geodesic_point((sp(0.0), SpherePoint::Infinity), 2.0f64.ln()).unwrap();
        assert_abs_diff_eq!(p.height, 2.0, epsilon = 1e-15);

        let t = (2.0 + 3.0f64.sqrt()).ln();
        let p = geodesic_point((sp(-1.0), sp(1.0)), t).unwrap();
        assert_abs_diff_eq!(p.base.re, 3.0f64.sqrt() / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.height, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn geodesic_parameter_inverts() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = sp(rng.gen_range(-5.0..5.0));
            let b = sp(rng.gen_range(-5.0..5.0) + 6.0);
            let t = rng.gen_range(-3.0..3.0);
            let p = geodesic_point((a, b), t).unwrap();
            assert_abs_diff_eq!(geodesic_parameter((a, b), &p).unwrap(), t, epsilon = 1e-10);
        }
        let p = geodesic_point((SpherePoint::Infinity, sp(2.0)), 1.3).unwrap();
        assert_abs_diff_eq!(
            geodesic_parameter((SpherePoint::Infinity, sp(2.0)), &p).unwrap(),
            1.3,
            epsilon = 1e-12
        );
    }

    #[test]
    fn geodesic_point_arclength_consistent() {
        // Unit speed: consecutive parameter steps are at hyperbolic distance
        // equal to the step.
        for step in [0.1, 0.5, 1.0] {
            let mut prev = geodesic_point((sp(-2.0), sp(3.0)), -1.0).unwrap();
            let mut t = -1.0;
            for _ in 0..5 {
                t += step;
                let next = geodesic_point((sp(-2.0), sp(3.0)), t).unwrap();
                assert_abs_diff_eq!(dist_h3(&prev, &next), step, epsilon = 1e-9);
                prev = next;
            }
        }
    }

    #[test]
    fn rejects_coincident() {
        assert_eq!(
            geodesic_point((sp(1.0), sp(1.0)), 0.0).unwrap_err(),
            QfError::CoincidentEndpoints
        );
        assert_eq!(
            ortho_disk((SpherePoint::Infinity, SpherePoint::Infinity), 0.0, true).unwrap_err(),
            QfError::CoincidentEndpoints
        );
    }

    #[test]
    fn ortho_disk_examples() {
        let d = ortho_disk((sp(0.0), SpherePoint::Infinity), 0.0, true).unwrap();
        assert_eq!(
            d,
            BoundaryDisk::Circle { center: c(0.0, 0.0), radius: 1.0, inside: false }
        );

        match ortho_disk((sp(-1.0), sp(1.0)), 0.0, true).unwrap() {
            BoundaryDisk::HalfPlane { normal, offset } => {
                assert_abs_diff_eq!((normal - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
                assert_abs_diff_eq!(offset, 0.0, epsilon = 1e-15);
            }
            other => panic!("expected half-plane, got {other:?}"),
        }
    }

    #[test]
    fn ortho_disk_passes_through_geodesic_point() {
        // The boundary circle at parameter t passes through the base-plane
        // projection at Euclidean distance matching the hemisphere over it.
        let endpoints = (sp(-2.0), sp(5.0));
        for t in [-1.5, -0.3, 0.7, 2.0] {
            let p = geodesic_point(endpoints, t).unwrap();
            match ortho_disk(endpoints, t, true).unwrap() {
                BoundaryDisk::Circle { center, radius, .. } => {
                    // The hemisphere over the boundary circle contains the
                    // geodesic point: |p - center|^2 + h^2 = r^2.
                    let lhs = (p.base - center).norm_sqr() + p.height * p.height;
                    assert_abs_diff_eq!(lhs, radius * radius, epsilon = 1e-9 * radius * radius);
                }
                other => panic!("expected circle, got {other:?}"),
            }
        }
    }

    #[test]
    fn ortho_disk_forward_contains_far_endpoint() {
        let endpoints = (sp(-2.0), sp(5.0));
        for t in [-1.5, 0.7, 2.0] {
            for forward in [true, false] {
                let target = if forward { c(5.0, 0.0) } else { c(-2.0, 0.0) };
                match ortho_disk(endpoints, t, forward).unwrap() {
                    BoundaryDisk::Circle { center, radius, inside } => {
                        let within = (target - center).norm() < radius;
                        assert_eq!(within, inside, "t={t} forward={forward}");
                    }
                    other => panic!("expected circle, got {other:?}"),
                }
            }
        }
    }

    #[test]
    fn disk_nested_examples() {
        let unit = BoundaryDisk::Circle { center: c(0.0, 0.0), radius: 1.0, inside: true };
        let big = BoundaryDisk::Circle { center: c(0.0, 0.0), radius: 2.0, inside: true };
        assert!(disk_nested(&unit, &big, 0.5));
        assert!(!disk_nested(&big, &unit, 0.0));

        let left = BoundaryDisk::Circle { center: c(-3.0, 0.0), radius: 1.0, inside: true };
        let right = BoundaryDisk::Circle { center: c(3.0, 0.0), radius: 1.0, inside: true };
        assert!(!disk_nested(&left, &right, 0.0));

        let tangent = BoundaryDisk::Circle { center: c(1.0, 0.0), radius: 1.0, inside: true };
        let outer = BoundaryDisk::Circle { center: c(0.0, 0.0), radius: 2.0, inside: true };
        assert!(!disk_nested(&tangent, &outer, 0.0));
        assert_abs_diff_eq!(nesting_clearance(&tangent, &outer), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn disk_nested_mixed_cases() {
        let inner = BoundaryDisk::Circle { center: c(4.0, 0.0), radius: 1.0, inside: true };
        let exterior = BoundaryDisk::Circle { center: c(0.0, 0.0), radius: 2.0, inside: false };
        assert!(disk_nested(&inner, &exterior, 0.9));
        assert!(!disk_nested(&inner, &exterior, 1.1));

        let hp = BoundaryDisk::HalfPlane { normal: c(1.0, 0.0), offset: 1.0 };
        assert!(disk_nested(&inner, &hp, 1.9));
        assert!(!disk_nested(&exterior, &hp, 0.0));
        assert!(disk_nested(&hp, &exterior, 0.0) == false);
        let far_exterior = BoundaryDisk::Circle { center: c(-5.0, 0.0), radius: 2.0, inside: false };
        assert!(disk_nested(&hp, &far_exterior, 3.9));

        let hp2 = BoundaryDisk::HalfPlane { normal: c(1.0, 0.0), offset: 0.0 };
        assert!(disk_nested(&hp, &hp2, 0.5));
        assert!(!disk_nested(&hp2, &hp, 0.0));
    }

    #[test]
    fn disk_nested_transitive() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let rand_disk = |rng: &mut ChaCha8Rng| {
            let center = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let radius = rng.gen_range(0.1..3.0);
            let inside = rng.gen_bool(0.7);
            BoundaryDisk::Circle { center, radius, inside }
        };
        let mut checked = 0;
        for _ in 0..20_000 {
            let a = rand_disk(&mut rng);
            let b = rand_disk(&mut rng);
            let cdisk = rand_disk(&mut rng);
            if disk_nested(&a, &b, 0.0) && disk_nested(&b, &cdisk, 0.0) {
                assert!(disk_nested(&a, &cdisk, 0.0), "{a:?} {b:?} {cdisk:?}");
                checked += 1;
            }
        }
        assert!(checked > 50, "transitivity chain sample too small: {checked}");
    }

    fn boundary_samples(d: &BoundaryDisk) -> Vec<Complex64> {
        match d {
            BoundaryDisk::Circle { center, radius, .. } => (0..24)
                .map(|k| {
                    let th = 2.0 * std::f64::consts::PI * k as f64 / 24.0;
                    center + radius * c(th.cos(), th.sin())
                })
                .collect(),
            BoundaryDisk::HalfPlane { normal, offset } => {
                let p0 = normal * *offset;
                let tangent = c(0.0, 1.0) * normal;
                (-12..12).map(|k| p0 + tangent * (k as f64 / 4.0)).collect()
            }
        }
    }

    fn boundary_gap(d: &BoundaryDisk, w: Complex64) -> f64 {
        match d {
            BoundaryDisk::Circle { center, radius, .. } => ((w - center).norm() - radius).abs(),
            BoundaryDisk::HalfPlane { normal, offset } => ((w * normal.conj()).re - offset).abs(),
        }
    }

    #[test]
    fn transform_disk_roundtrip_and_sides() {
        let m = MoebiusMap::new(c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0));
        let disk = BoundaryDisk::Circle { center: c(0.3, 0.1), radius: 0.7, inside: true };
        let img = transform_disk(&m, &disk);
        let back = transform_disk(&m.inverse(), &img);
        for w in boundary_samples(&back) {
            assert!(boundary_gap(&disk, w) < 1e-8);
        }
        // Sample interior points map into the image region.
        if let BoundaryDisk::Circle { center, radius, inside } = &img {
            let w = m.apply(sp(0.3)).finite().unwrap();
            assert_eq!((w - center).norm() < *radius, *inside);
        }
    }

    #[test]
    fn transform_disk_to_half_plane() {
        // z -> -1/z sends the unit disk at center 1 (through 0) to a region
        // whose boundary passes through infinity.
        let m = MoebiusMap::new(c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        let disk = BoundaryDisk::Circle { center: c(1.0, 0.0), radius: 1.0, inside: true };
        match transform_disk(&m, &disk) {
            BoundaryDisk::HalfPlane { normal, offset } => {
                // Image of the disk |z - 1| < 1 under -1/z is Re w < -1/2.
                assert_abs_diff_eq!((normal - c(-1.0, 0.0)).norm(), 0.0, epsilon = 1e-9);
                assert_abs_diff_eq!(offset, 0.5, epsilon = 1e-9);
            }
            other => panic!("expected half-plane, got {other:?}"),
        }
    }

    #[test]
    fn ortho_disk_commutes_with_mobius() {
        let maps = [
            MoebiusMap::new(c(1.0, 0.0), c(1.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)),
            MoebiusMap::new(c(2.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)),
            MoebiusMap::new(c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)),
        ];
        let endpoints = (sp(-1.0), sp(2.0));
        for m in &maps {
            for t in [-1.2, 0.4, 1.7] {
                for forward in [true, false] {
                    let direct = transform_disk(m, &ortho_disk(endpoints, t, forward).unwrap());
                    let ma = m.apply(endpoints.0);
                    let mb = m.apply(endpoints.1);
                    let p = apply_h3(m, &geodesic_point(endpoints, t).unwrap());
                    let t2 = geodesic_parameter((ma, mb), &p).unwrap();
                    let mapped = ortho_disk((ma, mb), t2, forward).unwrap();
                    for w in boundary_samples(&direct) {
                        assert!(
                            boundary_gap(&mapped, w) < 1e-8,
                            "boundary mismatch at t={t} forward={forward}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn h3_action_basics() {
        let j = H3Point::new(c(0.0, 0.0), 1.0);
        let shift = MoebiusMap::new(c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        let p = apply_h3(&shift, &j);
        assert_abs_diff_eq!((p.base - c(2.0, 0.0)).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p.height, 1.0, epsilon = 1e-14);

        let double = loxodromic(sp(0.0), SpherePoint::Infinity, c(2.0f64.ln(), 0.0)).unwrap();
        let p = apply_h3(&double, &j);
        assert_abs_diff_eq!(p.height, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dist_h3(&j, &p), 2.0f64.ln(), epsilon = 1e-12);

        // -1/z fixes (0, 1).
        let inv = MoebiusMap::new(c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        let p = apply_h3(&inv, &j);
        assert_abs_diff_eq!(dist_h3(&j, &p), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn h3_action_is_isometric() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let m = MoebiusMap::new(c(2.0, 0.3), c(-1.0, 0.1), c(0.7, -0.2), c(1.0, 0.0));
        for _ in 0..50 {
            let p = H3Point::new(c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)), rng.gen_range(0.1..3.0));
            let q = H3Point::new(c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)), rng.gen_range(0.1..3.0));
            assert_abs_diff_eq!(
                dist_h3(&apply_h3(&m, &p), &apply_h3(&m, &q)),
                dist_h3(&p, &q),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn cancellation_examples() {
        let g = (sp(0.0), SpherePoint::Infinity);
        assert!(cancellation_norm(g, g, 0.01).unwrap() < 1e-13);

        assert_eq!(
            cancellation_norm(g, (sp(1.0), sp(2.0)), 0.01).unwrap_err(),
            QfError::NoCommonEndpoint
        );
        assert_eq!(cancellation_norm(g, g, 0.0).unwrap_err(), QfError::NonPositiveEps);

        // Linear scaling in eps.
        let h = (sp(1.0), SpherePoint::Infinity);
        let mut slopes = Vec::new();
        for eps in [1e-1, 1e-2, 1e-3] {
            slopes.push(cancellation_norm(g, h, eps).unwrap() / eps);
        }
        let max = slopes.iter().cloned().fold(f64::MIN, f64::max);
        let min = slopes.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max / min < 1.01, "slopes {slopes:?}");
    }

    #[test]
    fn cancellation_grows_with_separation() {
        let g = (sp(0.0), SpherePoint::Infinity);
        let mut prev = 0.0;
        for n in 1..=10 {
            let h = (sp(n as f64), SpherePoint::Infinity);
            let norm = cancellation_norm(g, h, 1e-3).unwrap();
            assert!(norm > prev, "n={n}");
            prev = norm;
        }
    }

    #[test]
    fn cancellation_slope_stable() {
        for (g, h) in [
            ((sp(0.0), SpherePoint::Infinity), (sp(1.0), SpherePoint::Infinity)),
            ((sp(0.0), sp(3.0)), (sp(0.0), sp(-2.0))),
        ] {
            let mut slopes = Vec::new();
            let mut eps = 1e-4;
            while eps <= 1e-1 + 1e-12 {
                slopes.push(cancellation_norm(g, h, eps).unwrap() / eps);
                eps *= 10.0;
            }
            let max = slopes.iter().cloned().fold(f64::MIN, f64::max);
            let min = slopes.iter().cloned().fold(f64::MAX, f64::min);
            assert!(max / min <= 1.2, "slopes {slopes:?}");
        }
    }

    #[test]
    fn injectivity_examples() {
        let mut images = HashMap::new();
        for n in 0..5 {
            images.insert(FareyVertex::integer(n), sp(n as f64));
        }
        let r = injectivity_scan(&images);
        // Chordal distances shrink as the points move out; closest pair is
        // (3, 4).
        assert_eq!(
            r.pair,
            Some((FareyVertex::integer(3), FareyVertex::integer(4)))
        );
        assert!(r.min_distance > 0.0);

        images.insert(FareyVertex::integer(7), sp(0.0));
        let r = injectivity_scan(&images);
        assert_eq!(r.min_distance, 0.0);
        assert_eq!(r.pair, Some((FareyVertex::integer(0), FareyVertex::integer(7))));
    }

    #[test]
    fn nesting_zero_shear_matches_analytic() {
        let depth = 4;
        let r = nesting_chain_report(
            &ShearFunction::zero(),
            &FareyVertex::integer(0),
            &FareyVertex::infinity(),
            depth,
        )
        .unwrap();
        assert!(r.pass);
        assert_eq!(r.checked, 2 * depth);
        // Hemisphere radii e^n: the smallest consecutive clearance is
        // e^{-depth+1} - e^{-depth}.
        let expect = (-(depth as f64)).exp() * (std::f64::consts::E - 1.0);
        assert_abs_diff_eq!(r.min_clearance, expect, epsilon = 1e-9);
    }

    #[test]
    fn nesting_zero_shear_generic_pair() {
        let r = nesting_chain_report(
            &ShearFunction::zero(),
            &FareyVertex::from_integers(1, 3).unwrap(),
            &FareyVertex::integer(2),
            5,
        )
        .unwrap();
        assert!(r.pass, "unbent nesting must hold: {r:?}");
        assert!(r.crossed_edges > 0);
    }

    #[test]
    fn nesting_small_imaginary_bending_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let s = random_fan_sum_zero(4, 0.02, 16, &mut rng).times_i().unwrap();
        let r = nesting_chain_report(&s, &FareyVertex::integer(-1), &FareyVertex::integer(2), 6)
            .unwrap();
        assert!(r.pass, "small bending must keep the chain nested: {r:?}");
        assert!(r.min_clearance > 0.0);
    }

    #[test]
    fn nesting_rejects_real_shear() {
        let s = ShearFunction::from_real_entries(vec![(
            crate::farey::FareyEdge::new(FareyVertex::integer(0), FareyVertex::infinity()).unwrap(),
            0.3,
        )])
        .unwrap();
        assert_eq!(
            nesting_chain_report(&s, &FareyVertex::integer(0), &FareyVertex::integer(1), 3)
                .unwrap_err(),
            QfError::NonImaginaryShear
        );
    }

    #[test]
    fn nesting_rejects_missing_vertex() {
        let far = FareyVertex::from_integers(100, 1).unwrap();
        assert!(matches!(
            nesting_chain_report(&ShearFunction::zero(), &FareyVertex::integer(0), &far, 3),
            Err(QfError::VertexOutsideDepth(_))
        ));
    }

    #[test]
    fn frame_displacement_bounds_elliptic() {
        // Elliptic maps with axis through (0, 1): axis endpoints
        // -u e^s, u e^{-s} with |u| = 1.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let batch = |rng: &mut ChaCha8Rng| -> f64 {
            let mut worst: f64 = 0.0;
            for _ in 0..50 {
                let phi = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
                let u = c(phi.cos(), phi.sin());
                let sv = rng.gen_range(-0.3..0.3f64);
                let theta = rng.gen_range(0.01..0.5);
                let a = loxodromic(
                    SpherePoint::Finite(-u * sv.exp()),
                    SpherePoint::Finite(u * (-sv).exp()),
                    c(0.0, theta),
                )
                .unwrap();
                let ratio = frame_displacement(&a) / dist_to_identity(&a);
                worst = worst.max(ratio);
            }
            worst
        };
        let c1 = batch(&mut rng);
        let c2 = batch(&mut rng);
        assert!(c1.is_finite() && c1 > 0.0);
        assert!((c2 / c1 - 1.0).abs() < 0.2, "fitted constants {c1} vs {c2}");
    }
}
