//! Exact combinatorics of the Farey tessellation.
//!
//! Vertices are reduced fractions p/q with arbitrary-size integers, plus the
//! point at infinity encoded as (1, 0). Edges are unimodular pairs, triangles
//! are mediant triples, and the dual tree is explored breadth-first from the
//! base triangle (0, 1, infinity). Everything in this module is exact; no
//! floating point enters any combinatorial decision.

use crate::mobius::SpherePoint;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use thiserror::Error;

/// Default guardrail for dual-tree depth; overridable by callers.
pub const DEFAULT_MAX_DEPTH: usize = 25;

#[derive(Debug, Error, PartialEq)]
pub enum FareyError {
    #[error("vertex pair is not unimodular")]
    NotUnimodular,
    #[error("vertex (0, 0) is not a point of the boundary circle")]
    InvalidVertex,
    #[error("three vertices do not span a Farey triangle")]
    NotATriangle,
    #[error("requested depth {0} exceeds the configured maximum {1}")]
    DepthTooLarge(usize, usize),
    #[error("target triangle lies outside the generated range")]
    TargetOutOfRange,
    #[error("fan center is not an endpoint of the anchor edge")]
    CenterNotOnAnchor,
}

/// A vertex of the Farey tessellation: a reduced fraction p/q with q >= 0,
/// where (1, 0) encodes infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FareyVertex {
    p: BigInt,
    q: BigInt,
}

impl FareyVertex {
    pub fn new(p: BigInt, q: BigInt) -> Result<Self, FareyError> {
        if p.is_zero() && q.is_zero() {
            return Err(FareyError::InvalidVertex);
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / &g, q / &g);
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            p = -p;
            q = -q;
        }
        Ok(Self { p, q })
    }

    pub fn from_integers(p: i64, q: i64) -> Result<Self, FareyError> {
        Self::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn integer(n: i64) -> Self {
        Self { p: BigInt::from(n), q: BigInt::from(1) }
    }

    pub fn infinity() -> Self {
        Self { p: BigInt::from(1), q: BigInt::from(0) }
    }

    pub fn is_infinity(&self) -> bool {
        self.q.is_zero()
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn to_point(&self) -> SpherePoint {
        if self.is_infinity() {
            SpherePoint::Infinity
        } else {
            let p = self.p.to_f64().expect("vertex numerator fits in f64 range");
            let q = self.q.to_f64().expect("vertex denominator fits in f64 range");
            SpherePoint::Finite(Complex64::new(p / q, 0.0))
        }
    }
}

impl Ord for FareyVertex {
    /// Total order: finite fractions by value, infinity greatest.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinity(), other.is_infinity()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => (&self.p * &other.q).cmp(&(&other.p * &self.q)),
        }
    }
}

impl PartialOrd for FareyVertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for FareyVertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

/// |p1 q2 - p2 q1| = 1, the condition for two vertices to span an edge.
pub fn unimodular(u: &FareyVertex, v: &FareyVertex) -> bool {
    let det = u.p() * v.q() - v.p() * u.q();
    det.abs() == BigInt::from(1)
}

/// (p1 + p2) / (q1 + q2), automatically reduced for a unimodular pair.
pub fn mediant(u: &FareyVertex, v: &FareyVertex) -> Result<FareyVertex, FareyError> {
    if !unimodular(u, v) {
        return Err(FareyError::NotUnimodular);
    }
    FareyVertex::new(u.p() + v.p(), u.q() + v.q())
}

/// (p1 - p2) / (q1 - q2), the apex on the far side of the edge {u, v} from
/// the mediant.
fn anti_mediant(u: &FareyVertex, v: &FareyVertex) -> FareyVertex {
    FareyVertex::new(u.p() - v.p(), u.q() - v.q()).expect("u != v for unimodular pair")
}

/// An edge of the tessellation, stored with the smaller endpoint first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FareyEdge {
    a: FareyVertex,
    b: FareyVertex,
}

impl FareyEdge {
    pub fn new(u: FareyVertex, v: FareyVertex) -> Result<Self, FareyError> {
        if !unimodular(&u, &v) {
            return Err(FareyError::NotUnimodular);
        }
        if u <= v {
            Ok(Self { a: u, b: v })
        } else {
            Ok(Self { a: v, b: u })
        }
    }

    pub fn a(&self) -> &FareyVertex {
        &self.a
    }

    pub fn b(&self) -> &FareyVertex {
        &self.b
    }

    pub fn contains(&self, v: &FareyVertex) -> bool {
        &self.a == v || &self.b == v
    }

    pub fn other(&self, v: &FareyVertex) -> Option<&FareyVertex> {
        if &self.a == v {
            Some(&self.b)
        } else if &self.b == v {
            Some(&self.a)
        } else {
            None
        }
    }

    /// The two apexes completing this edge to a triangle: mediant first,
    /// anti-mediant second.
    pub fn apexes(&self) -> (FareyVertex, FareyVertex) {
        let m = mediant(&self.a, &self.b).expect("edge is unimodular");
        let n = anti_mediant(&self.a, &self.b);
        (m, n)
    }
}

impl std::fmt::Display for FareyEdge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// An ideal triangle of the tessellation, vertices sorted canonically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FareyTriangle {
    vertices: [FareyVertex; 3],
}

impl FareyTriangle {
    pub fn new(u: FareyVertex, v: FareyVertex, w: FareyVertex) -> Result<Self, FareyError> {
        if !unimodular(&u, &v) || !unimodular(&v, &w) || !unimodular(&u, &w) {
            return Err(FareyError::NotATriangle);
        }
        if u == v || v == w || u == w {
            return Err(FareyError::NotATriangle);
        }
        let mut vs = [u, v, w];
        vs.sort();
        Ok(Self { vertices: vs })
    }

    /// The base triangle (0, 1, infinity).
    pub fn delta0() -> Self {
        Self::new(
            FareyVertex::integer(0),
            FareyVertex::integer(1),
            FareyVertex::infinity(),
        )
        .expect("base triangle is valid")
    }

    pub fn vertices(&self) -> &[FareyVertex; 3] {
        &self.vertices
    }

    pub fn edges(&self) -> [FareyEdge; 3] {
        let [u, v, w] = &self.vertices;
        [
            FareyEdge::new(u.clone(), v.clone()).expect("triangle edge"),
            FareyEdge::new(v.clone(), w.clone()).expect("triangle edge"),
            FareyEdge::new(u.clone(), w.clone()).expect("triangle edge"),
        ]
    }

    pub fn contains(&self, v: &FareyVertex) -> bool {
        self.vertices.iter().any(|u| u == v)
    }

    /// The vertex of this triangle not on the given edge.
    pub fn apex_across(&self, e: &FareyEdge) -> Option<&FareyVertex> {
        if !self.vertices.iter().any(|v| e.a() == v)
            || !self.vertices.iter().any(|v| e.b() == v)
        {
            return None;
        }
        self.vertices.iter().find(|v| !e.contains(v))
    }

    /// The unique other triangle sharing the given edge.
    pub fn neighbor_across(&self, e: &FareyEdge) -> Option<FareyTriangle> {
        let apex = self.apex_across(e)?;
        let (m, n) = e.apexes();
        let new_apex = if &m == apex { n } else { m };
        Some(
            FareyTriangle::new(e.a().clone(), e.b().clone(), new_apex)
                .expect("reflected triangle is valid"),
        )
    }

    /// The three triangles sharing an edge with this one.
    pub fn neighbors(&self) -> [FareyTriangle; 3] {
        let es = self.edges();
        [
            self.neighbor_across(&es[0]).expect("edge of self"),
            self.neighbor_across(&es[1]).expect("edge of self"),
            self.neighbor_across(&es[2]).expect("edge of self"),
        ]
    }
}

impl std::fmt::Display for FareyTriangle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}, {}, {}]",
            self.vertices[0], self.vertices[1], self.vertices[2]
        )
    }
}

/// Whether the boundary triple (a, b, c) is in positive cyclic order
/// (increasing real order up to rotation, with infinity on the circle).
pub fn cyclic_order_positive(a: &FareyVertex, b: &FareyVertex, c: &FareyVertex) -> bool {
    assert!(a != b && b != c && a != c, "cyclic order needs distinct points");
    if a.is_infinity() {
        return b < c;
    }
    if b.is_infinity() {
        return c < a;
    }
    if c.is_infinity() {
        return a < b;
    }
    (a < b && b < c) || (b < c && c < a) || (c < a && a < b)
}

/// An edge with a chosen direction from `start` to `end`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrientedEdge {
    pub start: FareyVertex,
    pub end: FareyVertex,
}

impl OrientedEdge {
    pub fn edge(&self) -> FareyEdge {
        FareyEdge::new(self.start.clone(), self.end.clone()).expect("oriented edge is unimodular")
    }
}

/// Orients an edge so that the base triangle (0, 1, infinity) lies to its
/// left: a point z is left of the directed geodesic x -> y exactly when
/// (x, y, z) is positively cyclically ordered.
pub fn orient_delta0_left(e: &FareyEdge) -> OrientedEdge {
    let witness = [
        FareyVertex::integer(0),
        FareyVertex::integer(1),
        FareyVertex::infinity(),
    ]
    .into_iter()
    .find(|w| !e.contains(w))
    .expect("an edge has at most two vertices of the base triangle");
    if cyclic_order_positive(e.a(), e.b(), &witness) {
        OrientedEdge { start: e.a().clone(), end: e.b().clone() }
    } else {
        OrientedEdge { start: e.b().clone(), end: e.a().clone() }
    }
}

/// The finite ball of the tessellation within a dual-tree distance of the
/// base triangle, with parent links for separating-edge paths.
#[derive(Debug)]
pub struct Tessellation {
    depth: usize,
    triangles: Vec<FareyTriangle>,
    index: HashMap<FareyTriangle, usize>,
    parent: Vec<Option<(usize, FareyEdge)>>,
    dist: Vec<usize>,
}

impl Tessellation {
    pub fn generate(depth: usize) -> Result<Self, FareyError> {
        Self::generate_with_max(depth, DEFAULT_MAX_DEPTH)
    }

    pub fn generate_with_max(depth: usize, max_depth: usize) -> Result<Self, FareyError> {
        if depth > max_depth {
            return Err(FareyError::DepthTooLarge(depth, max_depth));
        }
        let mut triangles = vec![FareyTriangle::delta0()];
        let mut index = HashMap::new();
        index.insert(FareyTriangle::delta0(), 0usize);
        let mut parent: Vec<Option<(usize, FareyEdge)>> = vec![None];
        let mut dist = vec![0usize];
        let mut frontier = vec![0usize];
        for level in 1..=depth {
            let mut next = Vec::with_capacity(frontier.len() * 2);
            for &i in &frontier {
                let t = triangles[i].clone();
                for e in t.edges() {
                    let n = t.neighbor_across(&e).expect("edge of t");
                    if index.contains_key(&n) {
                        continue;
                    }
                    let j = triangles.len();
                    index.insert(n.clone(), j);
                    triangles.push(n);
                    parent.push(Some((i, e.clone())));
                    dist.push(level);
                    next.push(j);
                }
            }
            frontier = next;
        }
        Ok(Self { depth, triangles, index, parent, dist })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn triangles(&self) -> &[FareyTriangle] {
        &self.triangles
    }

    pub fn contains(&self, t: &FareyTriangle) -> bool {
        self.index.contains_key(t)
    }

    pub fn dual_distance(&self, t: &FareyTriangle) -> Option<usize> {
        self.index.get(t).map(|&i| self.dist[i])
    }

    pub fn triangle_index(&self, t: &FareyTriangle) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Parent triangle index and crossing edge on the dual path to the base.
    pub fn parent_link(&self, i: usize) -> Option<(usize, &FareyEdge)> {
        self.parent[i].as_ref().map(|(p, e)| (*p, e))
    }

    /// All distinct edges of the generated triangles, sorted canonically.
    pub fn edges(&self) -> Vec<FareyEdge> {
        let mut es: Vec<FareyEdge> = self
            .triangles
            .iter()
            .flat_map(|t| t.edges())
            .collect();
        es.sort();
        es.dedup();
        es
    }

    /// All distinct vertices of the generated triangles, sorted.
    pub fn vertices(&self) -> Vec<FareyVertex> {
        let mut vs: Vec<FareyVertex> = self
            .triangles
            .iter()
            .flat_map(|t| t.vertices().iter().cloned())
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Edges whose two flanking triangles are both in the generated ball,
    /// sorted canonically.
    pub fn interior_edges(&self) -> Vec<FareyEdge> {
        self.edges()
            .into_iter()
            .filter(|e| {
                let (m, n) = e.apexes();
                let t1 = FareyTriangle::new(e.a().clone(), e.b().clone(), m);
                let t2 = FareyTriangle::new(e.a().clone(), e.b().clone(), n);
                matches!((t1, t2), (Ok(t1), Ok(t2)) if self.contains(&t1) && self.contains(&t2))
            })
            .collect()
    }

    /// The triangle containing v with minimal dual-tree distance.
    pub fn triangle_containing(&self, v: &FareyVertex) -> Option<&FareyTriangle> {
        self.triangles
            .iter()
            .enumerate()
            .filter(|(_, t)| t.contains(v))
            .min_by_key(|(i, _)| self.dist[*i])
            .map(|(_, t)| t)
    }

    /// The edges separating the base triangle from `target`, ordered along
    /// the dual-tree path from the base, each oriented with the base
    /// triangle to its left.
    pub fn separating_edges(&self, target: &FareyTriangle) -> Result<Vec<OrientedEdge>, FareyError> {
        let mut i = *self.index.get(target).ok_or(FareyError::TargetOutOfRange)?;
        let mut rev = Vec::new();
        while let Some((p, e)) = &self.parent[i] {
            rev.push(orient_delta0_left(e));
            i = *p;
        }
        rev.reverse();
        Ok(rev)
    }
}

/// A finite window of the fan of edges around a common ideal endpoint,
/// indexed by consecutive integers.
#[derive(Debug, Clone)]
pub struct Fan {
    center: FareyVertex,
    lo: i64,
    edges: Vec<FareyEdge>,
}

impl Fan {
    pub fn center(&self) -> &FareyVertex {
        &self.center
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.edges.len() as i64 - 1
    }

    pub fn edge(&self, n: i64) -> Option<&FareyEdge> {
        if n < self.lo {
            return None;
        }
        self.edges.get((n - self.lo) as usize)
    }

    pub fn edges(&self) -> &[FareyEdge] {
        &self.edges
    }
}

/// Compares the fractions n1/d1 and n2/d2 with arbitrary-sign denominators.
fn cmp_frac(n1: &BigInt, d1: &BigInt, n2: &BigInt, d2: &BigInt) -> Ordering {
    let lhs = n1 * d2;
    let rhs = n2 * d1;
    if d1.is_negative() ^ d2.is_negative() {
        rhs.cmp(&lhs)
    } else {
        lhs.cmp(&rhs)
    }
}

/// Image of u under the orientation-preserving unimodular map sending the
/// fan center p/q to infinity, as an exact fraction (numerator, denominator).
struct CenterToInfinity {
    x: BigInt,
    y: BigInt,
    q: BigInt,
    neg_p: BigInt,
}

impl CenterToInfinity {
    fn new(center: &FareyVertex) -> Self {
        // Solve x p + y q = -1 so [[x, y], [q, -p]] has determinant +1.
        let e = center.p().extended_gcd(center.q());
        debug_assert!(e.gcd == BigInt::from(1));
        Self {
            x: -e.x,
            y: -e.y,
            q: center.q().clone(),
            neg_p: -center.p(),
        }
    }

    fn image(&self, u: &FareyVertex) -> (BigInt, BigInt) {
        (
            &self.x * u.p() + &self.y * u.q(),
            &self.q * u.p() + &self.neg_p * u.q(),
        )
    }
}

/// The fan window e_lo .. e_hi around `center`, with `anchor` as e_0,
/// ordered by the positive horocycle orientation: at center infinity the
/// edges (n, infinity) appear by increasing n, and every other center is
/// reduced to that case by the orientation-preserving unimodular map
/// sending it to infinity.
pub fn fan(
    center: &FareyVertex,
    lo: i64,
    hi: i64,
    anchor: &FareyEdge,
) -> Result<Fan, FareyError> {
    if !anchor.contains(center) {
        return Err(FareyError::CenterNotOnAnchor);
    }
    assert!(lo <= 0 && 0 <= hi, "window must contain the anchor index 0");
    let to_inf = CenterToInfinity::new(center);
    let successor = |e: &FareyEdge, forward: bool| -> FareyEdge {
        let u = e.other(center).expect("fan edge contains center");
        let (m, n) = e.apexes();
        let (mu, du) = to_inf.image(u);
        let pick = |cand: &FareyVertex| -> bool {
            let (mc, dc) = to_inf.image(cand);
            let bigger = cmp_frac(&mc, &dc, &mu, &du) == Ordering::Greater;
            bigger == forward
        };
        let apex = if pick(&m) { m } else { n };
        FareyEdge::new(center.clone(), apex).expect("fan neighbor is unimodular")
    };
    let mut edges = std::collections::VecDeque::new();
    edges.push_back(anchor.clone());
    let mut fwd = anchor.clone();
    for _ in 0..hi {
        fwd = successor(&fwd, true);
        edges.push_back(fwd.clone());
    }
    let mut bwd = anchor.clone();
    for _ in 0..(-lo) {
        bwd = successor(&bwd, false);
        edges.push_front(bwd.clone());
    }
    Ok(Fan { center: center.clone(), lo, edges: edges.into() })
}
