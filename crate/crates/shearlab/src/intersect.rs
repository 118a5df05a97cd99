//! Transverse-crossing predicate for ideal geodesics and crossing-count
//! matrices between two triangulations, with the finite-intersection report.
//!
//! Two complete geodesics in the hyperbolic plane cross transversally exactly
//! when their ideal endpoint pairs strictly interleave on the boundary circle.
//! Rational endpoints are tested with exact integer arithmetic; numeric
//! endpoints (e.g. developed images) fall back to binary64 angles with a
//! fixed interleaving margin and an explicit indeterminate outcome.

use num_bigint::BigInt;

use crate::farey::{cyclic_order_positive, FareyEdge, FareyError, FareyVertex};
use crate::mobius::SpherePoint;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IntersectError {
    #[error("geodesic endpoints must be distinct")]
    CoincidentEndpoints,
    #[error("numeric endpoints must lie on the extended real line")]
    NonRealEndpoint,
    #[error("integer matrix must be invertible over the rationals")]
    SingularMatrix,
    #[error(transparent)]
    Farey(#[from] FareyError),
}

/// One ideal endpoint on the extended real line.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryPoint {
    Rational(FareyVertex),
    Numeric(SpherePoint),
}

impl BoundaryPoint {
    fn to_sphere(&self) -> SpherePoint {
        match self {
            BoundaryPoint::Rational(v) => v.to_point(),
            BoundaryPoint::Numeric(p) => *p,
        }
    }

    /// Boundary angle in (-pi, pi], with infinity at pi.
    fn angle(&self) -> f64 {
        match self.to_sphere() {
            SpherePoint::Infinity => std::f64::consts::PI,
            SpherePoint::Finite(z) => 2.0 * z.re.atan(),
        }
    }
}

/// A complete geodesic given by an unordered pair of distinct boundary points.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealGeodesic {
    endpoints: (BoundaryPoint, BoundaryPoint),
}

/// Outcome of the crossing test. `Indeterminate` only arises on the numeric
/// path, when some pair of endpoints is within the interleaving margin
/// without being exactly equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Crossing {
    Crosses,
    Disjoint,
    Indeterminate,
}

const ANGLE_MARGIN: f64 = 1e-12;

impl IdealGeodesic {
    pub fn rational(a: FareyVertex, b: FareyVertex) -> Result<Self, IntersectError> {
        if a == b {
            return Err(IntersectError::CoincidentEndpoints);
        }
        Ok(Self { endpoints: (BoundaryPoint::Rational(a), BoundaryPoint::Rational(b)) })
    }

    pub fn numeric(a: SpherePoint, b: SpherePoint) -> Result<Self, IntersectError> {
        for p in [&a, &b] {
            if let SpherePoint::Finite(z) = p {
                if z.im != 0.0 || !z.re.is_finite() {
                    return Err(IntersectError::NonRealEndpoint);
                }
            }
        }
        if a == b {
            return Err(IntersectError::CoincidentEndpoints);
        }
        Ok(Self { endpoints: (BoundaryPoint::Numeric(a), BoundaryPoint::Numeric(b)) })
    }

    pub fn from_edge(e: &FareyEdge) -> Self {
        Self {
            endpoints: (
                BoundaryPoint::Rational(e.a().clone()),
                BoundaryPoint::Rational(e.b().clone()),
            ),
        }
    }

    pub fn endpoints(&self) -> (&BoundaryPoint, &BoundaryPoint) {
        (&self.endpoints.0, &self.endpoints.1)
    }

    fn rational_pair(&self) -> Option<(&FareyVertex, &FareyVertex)> {
        match (&self.endpoints.0, &self.endpoints.1) {
            (BoundaryPoint::Rational(a), BoundaryPoint::Rational(b)) => Some((a, b)),
            _ => None,
        }
    }

    /// Image under an integer matrix [[a, b], [c, d]] acting by p/q ->
    /// (a p + b q)/(c p + d q); requires rational endpoints.
    pub fn transform_integer(&self, m: &[[i64; 2]; 2]) -> Result<Self, IntersectError> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det == 0 {
            return Err(IntersectError::SingularMatrix);
        }
        let map = |v: &FareyVertex| -> Result<FareyVertex, IntersectError> {
            let p = BigInt::from(m[0][0]) * v.p() + BigInt::from(m[0][1]) * v.q();
            let q = BigInt::from(m[1][0]) * v.p() + BigInt::from(m[1][1]) * v.q();
            Ok(FareyVertex::new(p, q)?)
        };
        match self.rational_pair() {
            Some((a, b)) => Self::rational(map(a)?, map(b)?),
            None => Err(IntersectError::NonRealEndpoint),
        }
    }
}

/// Full classification of the crossing test.
pub fn crossing(e1: &IdealGeodesic, e2: &IdealGeodesic) -> Crossing {
    if let (Some((a, b)), Some((c, d))) = (e1.rational_pair(), e2.rational_pair()) {
        if a == c || a == d || b == c || b == d {
            return Crossing::Disjoint;
        }
        // Strict interleaving: c and d fall on opposite sides of the
        // geodesic (a, b) exactly when the cyclic orientations differ.
        return if cyclic_order_positive(a, c, b) != cyclic_order_positive(a, d, b) {
            Crossing::Crosses
        } else {
            Crossing::Disjoint
        };
    }
    crossing_numeric(e1, e2)
}

/// True iff the endpoint pairs strictly interleave on the boundary circle;
/// geodesics sharing an endpoint do not cross.
pub fn crosses(e1: &IdealGeodesic, e2: &IdealGeodesic) -> bool {
    crossing(e1, e2) == Crossing::Crosses
}

fn circular_distance(x: f64, y: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let d = (x - y).rem_euclid(two_pi);
    d.min(two_pi - d)
}

fn crossing_numeric(e1: &IdealGeodesic, e2: &IdealGeodesic) -> Crossing {
    let (a, b) = (&e1.endpoints.0, &e1.endpoints.1);
    let (c, d) = (&e2.endpoints.0, &e2.endpoints.1);
    if a.to_sphere() == c.to_sphere()
        || a.to_sphere() == d.to_sphere()
        || b.to_sphere() == c.to_sphere()
        || b.to_sphere() == d.to_sphere()
    {
        return Crossing::Disjoint;
    }
    let (ta, tb, tc, td) = (a.angle(), b.angle(), c.angle(), d.angle());
    for (x, y) in [(ta, tc), (ta, td), (tb, tc), (tb, td)] {
        if circular_distance(x, y) < ANGLE_MARGIN {
            return Crossing::Indeterminate;
        }
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let in_arc = |t: f64| (t - ta).rem_euclid(two_pi) < (tb - ta).rem_euclid(two_pi);
    if in_arc(tc) != in_arc(td) {
        Crossing::Crosses
    } else {
        Crossing::Disjoint
    }
}

/// Pairwise crossing counts between two finite edge lists.
#[derive(Debug, Clone)]
pub struct IntersectionMatrix {
    /// Crossed-edge count of each edge of the first list against the second.
    pub counts_first: Vec<usize>,
    /// Crossed-edge count of each edge of the second list against the first.
    pub counts_second: Vec<usize>,
    pub max_first: usize,
    pub max_second: usize,
    pub total: usize,
    pub indeterminate: usize,
}

pub fn intersection_matrix(t1: &[IdealGeodesic], t2: &[IdealGeodesic]) -> IntersectionMatrix {
    let mut counts_first = vec![0usize; t1.len()];
    let mut counts_second = vec![0usize; t2.len()];
    let mut total = 0;
    let mut indeterminate = 0;
    for (i, e1) in t1.iter().enumerate() {
        for (j, e2) in t2.iter().enumerate() {
            match crossing(e1, e2) {
                Crossing::Crosses => {
                    counts_first[i] += 1;
                    counts_second[j] += 1;
                    total += 1;
                }
                Crossing::Indeterminate => indeterminate += 1,
                Crossing::Disjoint => {}
            }
        }
    }
    IntersectionMatrix {
        max_first: counts_first.iter().copied().max().unwrap_or(0),
        max_second: counts_second.iter().copied().max().unwrap_or(0),
        counts_first,
        counts_second,
        total,
        indeterminate,
    }
}

/// Result of the bounded-intersection check at a recorded truncation depth.
/// A pass over a truncation is evidence for bounded intersections, never a
/// proof; `depth` discloses the truncation used.
#[derive(Debug, Clone)]
pub struct FiniteIntersectionReport {
    pub pass: bool,
    pub bound: usize,
    pub depth: usize,
    pub max_first: usize,
    pub max_second: usize,
    pub argmax_first: Option<IdealGeodesic>,
    pub argmax_second: Option<IdealGeodesic>,
    pub indeterminate: usize,
}

pub fn finite_intersection_check(
    t1: &[IdealGeodesic],
    t2: &[IdealGeodesic],
    bound: usize,
    depth: usize,
) -> FiniteIntersectionReport {
    let m = intersection_matrix(t1, t2);
    let argmax = |counts: &[usize], list: &[IdealGeodesic], max: usize| {
        if max == 0 {
            None
        } else {
            counts.iter().position(|&c| c == max).map(|i| list[i].clone())
        }
    };
    FiniteIntersectionReport {
        pass: m.max_first <= bound && m.max_second <= bound,
        bound,
        depth,
        max_first: m.max_first,
        max_second: m.max_second,
        argmax_first: argmax(&m.counts_first, t1, m.max_first),
        argmax_second: argmax(&m.counts_second, t2, m.max_second),
        indeterminate: m.indeterminate,
    }
}
