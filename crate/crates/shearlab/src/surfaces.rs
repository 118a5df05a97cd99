//! The two concrete example surfaces: the flute-lattice triangulation with
//! its extremal-length estimates, and the (2,4,8) von Dyck orbit
//! triangulation of the punctured hyperbolic plane.
//!
//! The lattice surface is handled combinatorially (unit grid plus alternating
//! diagonals) together with the closed-form modulus bounds of its nested
//! annuli. The von Dyck surface is built geometrically in the upper
//! half-plane: a (pi/2, pi/4, pi/8) triangle is laid out explicitly, the
//! orientation-preserving symmetry group is generated as matrices, and the
//! puncture set and edge templates are propagated over a finite group ball.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use crate::mobius::{dist_to_identity, MobiusError, MoebiusMap};
use crate::shear::{ShearError, ShearFunction};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SurfaceError {
    #[error("lattice radius {0} exceeds the supported maximum 200")]
    RadiusTooLarge(usize),
    #[error("word length {0} exceeds the supported maximum 12")]
    WordLengthTooLarge(usize),
    #[error("eps must be positive and smaller than half the minimum distance from a corner to its opposite side")]
    EpsTooLarge,
    #[error("a rectangle acquired two crossing diagonals")]
    DuplicateDiagonal,
    #[error(transparent)]
    Mobius(#[from] MobiusError),
    #[error(transparent)]
    Shear(#[from] ShearError),
}

/// An abstract triangulation given by labeled vertices and unordered edges.
#[derive(Debug, Clone)]
pub struct CombinatorialTriangulation<L: Ord + Clone> {
    vertices: BTreeSet<L>,
    edges: BTreeSet<(L, L)>,
    faces: Option<Vec<[L; 3]>>,
}

impl<L: Ord + Clone> CombinatorialTriangulation<L> {
    pub fn new() -> Self {
        Self { vertices: BTreeSet::new(), edges: BTreeSet::new(), faces: None }
    }

    pub fn insert_vertex(&mut self, v: L) {
        self.vertices.insert(v);
    }

    /// Inserts an undirected edge; self-loops are rejected and duplicates
    /// are ignored. Returns whether the edge was new.
    pub fn insert_edge(&mut self, u: L, v: L) -> bool {
        assert!(u != v, "self-loops are not allowed");
        self.vertices.insert(u.clone());
        self.vertices.insert(v.clone());
        let key = if u <= v { (u, v) } else { (v, u) };
        self.edges.insert(key)
    }

    pub fn has_edge(&self, u: &L, v: &L) -> bool {
        let key = if u <= v { (u.clone(), v.clone()) } else { (v.clone(), u.clone()) };
        self.edges.contains(&key)
    }

    pub fn vertices(&self) -> &BTreeSet<L> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(L, L)> {
        &self.edges
    }

    pub fn set_faces(&mut self, faces: Vec<[L; 3]>) {
        self.faces = Some(faces);
    }

    pub fn faces(&self) -> Option<&[[L; 3]]> {
        self.faces.as_deref()
    }

    /// True iff every listed face has its three edges present.
    pub fn faces_consistent(&self) -> bool {
        self.faces.iter().flatten().all(|f| {
            self.has_edge(&f[0], &f[1]) && self.has_edge(&f[1], &f[2]) && self.has_edge(&f[0], &f[2])
        })
    }

    /// Degree of every vertex, in one pass over the edge set.
    pub fn degrees(&self) -> BTreeMap<L, usize> {
        let mut map: BTreeMap<L, usize> = self.vertices.iter().map(|v| (v.clone(), 0)).collect();
        for (u, v) in &self.edges {
            *map.get_mut(u).expect("edge endpoints are vertices") += 1;
            *map.get_mut(v).expect("edge endpoints are vertices") += 1;
        }
        map
    }
}

impl<L: Ord + Clone> Default for CombinatorialTriangulation<L> {
    fn default() -> Self {
        Self::new()
    }
}

// ---------------------------------------------------------------------------
// Flute lattice surface
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Diagonal {
    NorthEast,
    NorthWest,
}

fn bpv_with_rule(
    radius: usize,
    rule: impl Fn(i64, i64) -> Diagonal,
) -> CombinatorialTriangulation<(i64, i64)> {
    let r = radius as i64;
    let mut t = CombinatorialTriangulation::new();
    for x in -r..=r {
        for y in -r..=r {
            t.insert_vertex((x, y));
            if x < r {
                t.insert_edge((x, y), (x + 1, y));
            }
            if y < r {
                t.insert_edge((x, y), (x, y + 1));
            }
        }
    }
    for a in -r..r {
        for b in -r..r {
            match rule(a, b) {
                Diagonal::NorthEast => t.insert_edge((a, b), (a + 1, b + 1)),
                Diagonal::NorthWest => t.insert_edge((a + 1, b), (a, b + 1)),
            };
        }
    }
    t
}

/// Unit-square lattice triangulation on [-radius, radius]^2 with one diagonal
/// per square in the checkerboard pattern, so that interior vertex degrees
/// take exactly the values 4 and 8.
pub fn bpv_triangulation(
    radius: usize,
) -> Result<CombinatorialTriangulation<(i64, i64)>, SurfaceError> {
    if radius > 200 {
        return Err(SurfaceError::RadiusTooLarge(radius));
    }
    Ok(bpv_with_rule(radius, |a, b| {
        if (a + b).rem_euclid(2) == 0 {
            Diagonal::NorthEast
        } else {
            Diagonal::NorthWest
        }
    }))
}

/// Degrees of the interior lattice vertices.
pub fn interior_degrees(
    t: &CombinatorialTriangulation<(i64, i64)>,
    radius: usize,
) -> BTreeMap<(i64, i64), usize> {
    let r = radius as i64;
    t.degrees()
        .into_iter()
        .filter(|((x, y), _)| x.abs() < r && y.abs() < r)
        .collect()
}

/// The all-zero shear function of the lattice surface, tagged with the fan
/// period 8 of its high-degree vertex class (the degree-4 class has period 4,
/// which divides it).
pub fn bpv_shear_function() -> ShearFunction {
    ShearFunction::zero().with_period(8)
}

/// Half the inversive distance unit of the lattice annuli: arcsinh(1).
pub fn lattice_b() -> f64 {
    1.0f64.asinh()
}

/// Lower bound for the extremal length of the n-th nested annulus:
/// (b/2)^2 / (32 b n) = b / (128 n).
pub fn extremal_length_lower(n: usize) -> f64 {
    assert!(n >= 1, "annulus index starts at 1");
    lattice_b() / (128.0 * n as f64)
}

/// Hyperbolic length of the n-th square curve and the number of punctures it
/// encloses: ((4n - 2) b, (2n - 1)^2).
pub fn curve_length_cn(n: usize) -> (f64, usize) {
    assert!(n >= 1, "curve index starts at 1");
    ((4 * n - 2) as f64 * lattice_b(), (2 * n - 1) * (2 * n - 1))
}

// ---------------------------------------------------------------------------
// Hyperbolic plane helpers (upper half-plane model)
// ---------------------------------------------------------------------------

/// Hyperbolic distance in the upper half-plane.
pub fn dist_h2(z: Complex64, w: Complex64) -> f64 {
    (1.0 + (z - w).norm_sqr() / (2.0 * z.im * w.im)).acosh()
}

fn h2_apply(m: &MoebiusMap, z: Complex64) -> Complex64 {
    (m.a * z + m.b) / (m.c * z + m.d)
}

/// A complete geodesic with real ideal endpoints e1 < e2 (finite here; the
/// sides of the fundamental triangle never pass through infinity).
#[derive(Debug, Clone, Copy)]
struct GeoLine {
    e1: f64,
    e2: f64,
}

impl GeoLine {
    fn through(z: Complex64, w: Complex64) -> Self {
        assert!(
            (z.re - w.re).abs() > 1e-12,
            "vertical geodesics are not needed for the triangle sides"
        );
        let m = (z.norm_sqr() - w.norm_sqr()) / (2.0 * (z.re - w.re));
        let r = (z - m).norm();
        Self { e1: m - r, e2: m + r }
    }

    fn from_center(m: f64, r: f64) -> Self {
        Self { e1: m - r, e2: m + r }
    }

    // Maps the line to the vertical axis (e2 -> 0, e1 -> infinity), where
    // orthogeodesics are the circles |w| = const and the signed distance to
    // the line is ln tan(arg(w)/2).
    fn to_axis(&self, z: Complex64) -> Complex64 {
        (z - self.e2) / (z - self.e1)
    }

    fn from_axis(&self, w: Complex64) -> Complex64 {
        (self.e1 * w - self.e2) / (w - 1.0)
    }

    fn distance_to(&self, z: Complex64) -> f64 {
        let w = self.to_axis(z);
        (w.arg() / 2.0).tan().ln().abs()
    }

    /// The point at hyperbolic distance `step` from z along the orthogonal
    /// geodesic from z toward the line.
    fn step_toward(&self, z: Complex64, step: f64) -> Complex64 {
        let w = self.to_axis(z);
        let lt = (w.arg() / 2.0).tan().ln();
        assert!(step.abs() < lt.abs(), "step must stop short of the foot");
        let lt_new = if lt < 0.0 { lt + step } else { lt - step };
        let theta = 2.0 * lt_new.exp().atan();
        self.from_axis(Complex64::from_polar(w.norm(), theta))
    }
}

// ---------------------------------------------------------------------------
// The (2,4,8) triangle and its von Dyck group
// ---------------------------------------------------------------------------

/// Explicit layout of the (pi/2, pi/4, pi/8) triangle: right angle at
/// z_a = i, the pi/4 corner at z_b on the unit circle, the pi/8 corner at
/// z_c on the imaginary axis, and the mirror corner z_sigma of z_b across
/// the axis. Side lengths are named opposite their angles.
#[derive(Debug, Clone, Copy)]
pub struct Triangle248 {
    pub z_a: Complex64,
    pub z_b: Complex64,
    pub z_c: Complex64,
    pub z_sigma: Complex64,
    pub side_a: f64,
    pub side_b: f64,
    pub side_c: f64,
}

/// Places the triangle by the hyperbolic law of cosines for angles:
/// cosh(side opposite gamma) = (cos alpha cos beta + cos gamma) /
/// (sin alpha sin beta), and cyclic.
pub fn triangle_248_layout() -> Triangle248 {
    use std::f64::consts::PI;
    let (alpha, beta, gamma) = (PI / 2.0, PI / 4.0, PI / 8.0);
    let cosh_side = |x: f64, y: f64, z: f64| (x.cos() * y.cos() + z.cos()) / (x.sin() * y.sin());
    let side_a = cosh_side(beta, gamma, alpha).acosh();
    let side_b = cosh_side(alpha, gamma, beta).acosh();
    let side_c = cosh_side(alpha, beta, gamma).acosh();

    let z_a = Complex64::new(0.0, 1.0);
    let z_c = Complex64::new(0.0, side_b.exp());
    // The side through z_a orthogonal to the imaginary axis is the unit
    // circle; cosh d(i, e^{i phi}) = 1 / sin(phi), and z_b sits in the left
    // half-plane.
    let phi = PI - (1.0 / side_c.cosh()).asin();
    let z_b = Complex64::from_polar(1.0, phi);
    let z_sigma = Complex64::new(-z_b.re, z_b.im);
    Triangle248 { z_a, z_b, z_c, z_sigma, side_a, side_b, side_c }
}

impl Triangle248 {
    /// The side through z_b and z_c (opposite the right angle).
    fn hypotenuse(&self) -> GeoLine {
        GeoLine::through(self.z_b, self.z_c)
    }

    /// Its mirror image across the imaginary axis, through z_sigma and z_c.
    fn mirror_hypotenuse(&self) -> GeoLine {
        let h = self.hypotenuse();
        GeoLine { e1: -h.e2, e2: -h.e1 }
    }
}

/// Generator matrices of the orientation-preserving subgroup: A is the
/// half-turn about z_a = i and C the pi/4 rotation about z_c, obtained by
/// composing reflections in the triangle sides.
pub fn vondyck_generators() -> (MoebiusMap, MoebiusMap) {
    let t = triangle_248_layout();
    // Half-turn about i: z -> -1/z (reflection in the imaginary axis after
    // reflection in the unit circle).
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let a = MoebiusMap::new(zero, -one, one, zero);
    // C composes the reflection in the imaginary axis with the reflection in
    // the circle through z_b, z_c (center m, radius r): z -> (mz + m^2 -
    // r^2) / (z + m).
    let h = t.hypotenuse();
    let m = (h.e1 + h.e2) / 2.0;
    let r = (h.e2 - h.e1) / 2.0;
    let c = MoebiusMap::new(
        Complex64::new(m, 0.0),
        Complex64::new(m * m - r * r, 0.0),
        one,
        Complex64::new(m, 0.0),
    )
    .normalized();
    (a, c)
}

/// A group element with one witnessing word over A, C, C^{-1} (written
/// "A", "C", "c").
#[derive(Debug, Clone)]
pub struct GroupElement {
    pub map: MoebiusMap,
    pub word: String,
}

#[derive(Debug, Clone)]
pub struct VonDyckGroup {
    pub a: MoebiusMap,
    pub c: MoebiusMap,
    pub elements: Vec<GroupElement>,
}

const GROUP_DEDUP_TOL: f64 = 1e-7;

/// Breadth-first ball of the von Dyck group over the generating set
/// {A, C, C^{-1}}, deduplicated projectively at matrix tolerance 1e-7; the
/// first (shortest, then alphabetically earliest) word wins.
pub fn vondyck_generate(word_length: usize) -> Result<VonDyckGroup, SurfaceError> {
    if word_length > 12 {
        return Err(SurfaceError::WordLengthTooLarge(word_length));
    }
    let (a, c) = vondyck_generators();
    let c_inv = c.inverse();
    let gens = [('A', a.clone()), ('C', c.clone()), ('c', c_inv)];

    let mut elements = vec![GroupElement { map: MoebiusMap::identity(), word: String::new() }];
    let mut frontier: Vec<usize> = vec![0];
    for _ in 0..word_length {
        let mut next = Vec::new();
        for &i in &frontier {
            for (sym, g) in &gens {
                let map = elements[i].map.compose(g).normalized();
                if elements.iter().any(|e| e.map.projectively_close(&map, GROUP_DEDUP_TOL)) {
                    continue;
                }
                let mut word = elements[i].word.clone();
                word.push(*sym);
                next.push(elements.len());
                elements.push(GroupElement { map, word });
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(VonDyckGroup { a, c, elements })
}

impl VonDyckGroup {
    /// Residuals of the three defining relations A^2, C^8, (AC)^4.
    pub fn relation_residuals(&self) -> [f64; 3] {
        let a2 = self.a.compose(&self.a);
        let mut c8 = MoebiusMap::identity();
        for _ in 0..8 {
            c8 = c8.compose(&self.c);
        }
        let ac = self.a.compose(&self.c);
        let mut ac4 = MoebiusMap::identity();
        for _ in 0..4 {
            ac4 = ac4.compose(&ac);
        }
        [dist_to_identity(&a2), dist_to_identity(&c8), dist_to_identity(&ac4)]
    }
}

// ---------------------------------------------------------------------------
// The punctured von Dyck surface
// ---------------------------------------------------------------------------

/// Classes of the six base punctures: the three corners of the fundamental
/// kite and their three eps-satellites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexClass {
    Zb,
    Zc,
    Zsigma,
    BEps,
    CEps,
    SigmaEps,
}

impl VertexClass {
    pub fn is_delta(&self) -> bool {
        matches!(self, VertexClass::Zb | VertexClass::Zc | VertexClass::Zsigma)
    }

    /// Group orbit of the class: the half-turn about z_a identifies z_b with
    /// z_sigma (and their satellites), so those labels share an orbit.
    pub fn orbit(&self) -> u8 {
        match self {
            VertexClass::Zb | VertexClass::Zsigma => 0,
            VertexClass::Zc => 1,
            VertexClass::BEps | VertexClass::SigmaEps => 2,
            VertexClass::CEps => 3,
        }
    }
}

/// Eight kite copies meet at every corner puncture (angle pi/4 each), so a
/// complete satellite wheel always has eight spokes.
const WHEEL_SIZE: usize = 8;

#[derive(Debug, Clone)]
pub struct LabeledPoint {
    pub position: Complex64,
    pub class: VertexClass,
    pub word: String,
}

#[derive(Debug, Clone)]
pub struct KinjoVertexSet {
    pub points: Vec<LabeledPoint>,
    pub eps: f64,
}

const POINT_DEDUP_TOL: f64 = 1e-7;

impl KinjoVertexSet {
    pub fn find(&self, z: Complex64, tol: f64) -> Option<usize> {
        self.points.iter().position(|p| (p.position - z).norm() <= tol)
    }
}

/// The six base punctures: the kite corners z_b, z_c, z_sigma and the
/// eps-satellites b_eps, c_eps, sigma_eps, each at hyperbolic distance eps
/// from its corner along the orthogeodesic to the opposite kite side.
fn kinjo_base_points(eps: f64) -> Result<Vec<(Complex64, VertexClass)>, SurfaceError> {
    let t = triangle_248_layout();
    if !(eps > 0.0) || eps >= kinjo_max_eps() {
        return Err(SurfaceError::EpsTooLarge);
    }
    // c_eps sits on the imaginary axis eps below z_c.
    let c_eps = Complex64::new(0.0, (t.side_b - eps).exp());
    let b_eps = t.mirror_hypotenuse().step_toward(t.z_b, eps);
    let sigma_eps = t.hypotenuse().step_toward(t.z_sigma, eps);
    Ok(vec![
        (t.z_b, VertexClass::Zb),
        (t.z_c, VertexClass::Zc),
        (t.z_sigma, VertexClass::Zsigma),
        (b_eps, VertexClass::BEps),
        (c_eps, VertexClass::CEps),
        (sigma_eps, VertexClass::SigmaEps),
    ])
}

/// Half the minimum distance from a kite corner to its opposite side: the
/// upper bound for admissible eps.
pub fn kinjo_max_eps() -> f64 {
    let t = triangle_248_layout();
    let d_b = t.mirror_hypotenuse().distance_to(t.z_b);
    let d_sigma = t.hypotenuse().distance_to(t.z_sigma);
    // The side opposite z_c is the unit circle through z_b, i, z_sigma.
    let d_c = GeoLine::from_center(0.0, 1.0).distance_to(t.z_c);
    0.5 * d_b.min(d_sigma).min(d_c)
}

/// The default satellite distance: 0.4 times the minimum corner-to-side
/// distance.
pub fn kinjo_default_eps() -> f64 {
    0.8 * kinjo_max_eps()
}

/// Orbit of the six base punctures under the group ball, deduplicated; each
/// point keeps its class and a witnessing group word.
pub fn kinjo_vertices(word_length: usize, eps: f64) -> Result<KinjoVertexSet, SurfaceError> {
    let base = kinjo_base_points(eps)?;
    let group = vondyck_generate(word_length)?;
    let mut points: Vec<LabeledPoint> = Vec::new();
    for g in &group.elements {
        for (z, class) in &base {
            let position = h2_apply(&g.map, *z);
            if points.iter().any(|p| (p.position - position).norm() <= POINT_DEDUP_TOL) {
                continue;
            }
            points.push(LabeledPoint { position, class: *class, word: g.word.clone() });
        }
    }
    Ok(KinjoVertexSet { points, eps })
}

// Klein-model image of an upper half-plane point, where geodesics are
// Euclidean chords.
fn klein(z: Complex64) -> Complex64 {
    let w = (z - Complex64::i()) / (z + Complex64::i());
    2.0 * w / (1.0 + w.norm_sqr())
}

fn orient(p: Complex64, q: Complex64, r: Complex64) -> f64 {
    (q.re - p.re) * (r.im - p.im) - (q.im - p.im) * (r.re - p.re)
}

/// Transversal crossing of two hyperbolic segments, via the Klein model;
/// segments sharing an endpoint do not cross.
fn segments_cross_h2(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let tol = 1e-9;
    for (x, y) in [(p1, q1), (p1, q2), (p2, q1), (p2, q2)] {
        if (x - y).norm() < tol {
            return false;
        }
    }
    let (a, b, c, d) = (klein(p1), klein(p2), klein(q1), klein(q2));
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

#[derive(Debug, Clone)]
pub struct KinjoTriangulation {
    pub vertices: KinjoVertexSet,
    pub triangulation: CombinatorialTriangulation<usize>,
    /// Indices of the rectangle-diagonal edges among the edge set.
    pub diagonals: Vec<(usize, usize)>,
}

/// Builds the puncture triangulation: satellite triangles inside each kite
/// copy, spoke-and-rim wheels around each corner puncture, and one diagonal
/// per complementary rectangle, propagated over the group ball. Crossing
/// diagonals (which would mean a rectangle received two) are an error.
pub fn kinjo_triangulation(word_length: usize, eps: f64) -> Result<KinjoTriangulation, SurfaceError> {
    let verts = kinjo_vertices(word_length, eps)?;
    let group = vondyck_generate(word_length)?;
    let base = kinjo_base_points(eps)?;
    let find = |z: Complex64| verts.find(z, 1e-6);

    let mut tri = CombinatorialTriangulation::new();
    for i in 0..verts.points.len() {
        tri.insert_vertex(i);
    }

    // Satellite triangle inside every kite copy.
    let b_eps = base[3].0;
    let c_eps = base[4].0;
    let sigma_eps = base[5].0;
    for g in &group.elements {
        let imgs = [
            find(h2_apply(&g.map, b_eps)),
            find(h2_apply(&g.map, c_eps)),
            find(h2_apply(&g.map, sigma_eps)),
        ];
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            if let (Some(u), Some(v)) = (imgs[i], imgs[j]) {
                tri.insert_edge(u, v);
            }
        }
    }

    // Wheels: every corner puncture connects to the satellites at distance
    // eps, and complete wheels are closed up cyclically.
    for (vi, v) in verts.points.iter().enumerate() {
        if !v.class.is_delta() {
            continue;
        }
        let mut wheel: Vec<usize> = Vec::new();
        for (wi, w) in verts.points.iter().enumerate() {
            if !w.class.is_delta()
                && (dist_h2(v.position, w.position) - eps).abs() < 1e-6
            {
                tri.insert_edge(vi, wi);
                wheel.push(wi);
            }
        }
        if wheel.len() == WHEEL_SIZE {
            // The hyperbolic circle of radius eps about v is the Euclidean
            // circle centered at (Re v, Im v cosh eps).
            let center = Complex64::new(v.position.re, v.position.im * eps.cosh());
            wheel.sort_by(|&i, &j| {
                let ai = (verts.points[i].position - center).arg();
                let aj = (verts.points[j].position - center).arg();
                ai.total_cmp(&aj)
            });
            for k in 0..wheel.len() {
                tri.insert_edge(wheel[k], wheel[(k + 1) % wheel.len()]);
            }
        }
    }

    // Rectangle diagonals: [g b_eps, g C c_eps] and [g sigma_eps,
    // g A sigma_eps].
    let c_ceps = h2_apply(&group.c, c_eps);
    let a_sigmaeps = h2_apply(&group.a, sigma_eps);
    let mut diagonals: Vec<(usize, usize)> = Vec::new();
    for g in &group.elements {
        for (p, q) in [(b_eps, c_ceps), (sigma_eps, a_sigmaeps)] {
            if let (Some(u), Some(v)) = (find(h2_apply(&g.map, p)), find(h2_apply(&g.map, q))) {
                let key = (u.min(v), u.max(v));
                if !diagonals.contains(&key) {
                    diagonals.push(key);
                }
            }
        }
    }
    for (i, &(u1, v1)) in diagonals.iter().enumerate() {
        for &(u2, v2) in &diagonals[i + 1..] {
            if segments_cross_h2(
                verts.points[u1].position,
                verts.points[v1].position,
                verts.points[u2].position,
                verts.points[v2].position,
            ) {
                return Err(SurfaceError::DuplicateDiagonal);
            }
        }
    }
    for &(u, v) in &diagonals {
        tri.insert_edge(u, v);
    }

    Ok(KinjoTriangulation { vertices: verts, triangulation: tri, diagonals })
}
