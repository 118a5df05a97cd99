//! Mobius and loxodromic transformation algebra on the Riemann sphere.
//!
//! Matrices are stored as determinant-1 representatives of PSL(2, C); the
//! sign ambiguity `M == -M` is resolved only inside [`dist_to_identity`].
//! The point at infinity is an explicit tag, never a large float.

use num_complex::Complex64;
use thiserror::Error;

/// A point of the Riemann sphere: a finite complex number or infinity.
#[derive(Debug, Copy, Clone, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

pub use SpherePoint::{Finite, Infinity};

impl SpherePoint {
    pub fn real(x: f64) -> Self {
        Finite(Complex64::new(x, 0.0))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match self {
            Finite(z) => Some(*z),
            Infinity => None,
        }
    }

    /// Distance in the chordal (spherical) metric, where infinity is an
    /// ordinary point at distance 2/sqrt(1+|z|^2) from a finite z.
    pub fn chordal_distance(&self, other: &SpherePoint) -> f64 {
        match (self, other) {
            (Infinity, Infinity) => 0.0,
            (Finite(z), Infinity) | (Infinity, Finite(z)) => {
                2.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (Finite(z), Finite(w)) => {
                2.0 * (z - w).norm()
                    / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
            }
        }
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        Finite(z)
    }
}

impl From<f64> for SpherePoint {
    fn from(x: f64) -> Self {
        SpherePoint::real(x)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum MobiusError {
    #[error("two of the four sphere points coincide")]
    DegenerateQuadruple,
    #[error("two of the three sphere points coincide")]
    DegenerateTriple,
    #[error("loxodromic fixed points coincide")]
    CoincidentFixedPoints,
    #[error("operation undefined for the identity map")]
    IdentityMap,
}

/// A Mobius transformation z -> (az+b)/(cz+d), normalized so ad - bc = 1.
#[derive(Debug, Copy, Clone)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }.normalized()
    }

    pub fn identity() -> Self {
        Self { a: ONE, b: ZERO, c: ZERO, d: ONE }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    #[must_use]
    pub fn normalized(self) -> Self {
        let k = ONE / self.det().sqrt();
        Self { a: self.a * k, b: self.b * k, c: self.c * k, d: self.d * k }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Composition: `self.compose(&g)` acts as self after g.
    pub fn compose(&self, g: &MoebiusMap) -> Self {
        Self {
            a: self.a * g.a + self.b * g.c,
            b: self.a * g.b + self.b * g.d,
            c: self.c * g.a + self.d * g.c,
            d: self.c * g.b + self.d * g.d,
        }
        .normalized()
    }

    pub fn apply(&self, z: SpherePoint) -> SpherePoint {
        match z {
            Infinity => {
                if self.c.norm() == 0.0 {
                    Infinity
                } else {
                    Finite(self.a / self.c)
                }
            }
            Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm() == 0.0 {
                    Infinity
                } else {
                    Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// Whether self and other agree projectively (up to sign) within tol
    /// on the normalized entries.
    pub fn projectively_close(&self, other: &MoebiusMap, tol: f64) -> bool {
        let d1 = entry_dist(self, other);
        let neg = MoebiusMap { a: -other.a, b: -other.b, c: -other.c, d: -other.d };
        let d2 = entry_dist(self, &neg);
        d1.min(d2) <= tol
    }
}

fn entry_dist(m: &MoebiusMap, n: &MoebiusMap) -> f64 {
    ((m.a - n.a).norm_sqr()
        + (m.b - n.b).norm_sqr()
        + (m.c - n.c).norm_sqr()
        + (m.d - n.d).norm_sqr())
    .sqrt()
}

/// cr(a,b,c,d) = (c-b)(a-d) / ((c-d)(b-a)), with infinity handled by the
/// standard limit convention: a factor pair containing the infinite point in
/// both a numerator and a denominator position cancels.
pub fn cross_ratio(
    a: SpherePoint,
    b: SpherePoint,
    c: SpherePoint,
    d: SpherePoint,
) -> Result<SpherePoint, MobiusError> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i] == pts[j] {
                return Err(MobiusError::DegenerateQuadruple);
            }
        }
    }
    let ratio = |num: Complex64, den: Complex64| -> SpherePoint {
        if den.norm() == 0.0 {
            Infinity
        } else {
            Finite(num / den)
        }
    };
    Ok(match (a, b, c, d) {
        (Infinity, Finite(b), Finite(c), Finite(d)) => ratio(-(c - b), c - d),
        (Finite(a), Infinity, Finite(c), Finite(d)) => ratio(-(a - d), c - d),
        (Finite(a), Finite(b), Infinity, Finite(d)) => ratio(a - d, b - a),
        (Finite(a), Finite(b), Finite(c), Infinity) => ratio(c - b, b - a),
        (Finite(a), Finite(b), Finite(c), Finite(d)) => {
            ratio((c - b) * (a - d), (c - d) * (b - a))
        }
        _ => unreachable!("at most one point can be infinite after distinctness"),
    })
}

/// The map sending z1 -> 0, z2 -> 1, z3 -> infinity.
fn to_standard_triple(
    z1: SpherePoint,
    z2: SpherePoint,
    z3: SpherePoint,
) -> Result<MoebiusMap, MobiusError> {
    if z1 == z2 || z1 == z3 || z2 == z3 {
        return Err(MobiusError::DegenerateTriple);
    }
    // (z - z1)(z2 - z3) / ((z - z3)(z2 - z1)), with limits for infinite z_i.
    let m = match (z1, z2, z3) {
        (Infinity, Finite(z2), Finite(z3)) => MoebiusMap {
            a: ZERO,
            b: -(z2 - z3),
            c: -ONE,
            d: z3,
        },
        (Finite(z1), Infinity, Finite(z3)) => MoebiusMap {
            a: ONE,
            b: -z1,
            c: ONE,
            d: -z3,
        },
        (Finite(z1), Finite(z2), Infinity) => MoebiusMap {
            a: -ONE,
            b: z1,
            c: ZERO,
            d: -(z2 - z1),
        },
        (Finite(z1), Finite(z2), Finite(z3)) => MoebiusMap {
            a: z2 - z3,
            b: -z1 * (z2 - z3),
            c: z2 - z1,
            d: -z3 * (z2 - z1),
        },
        _ => unreachable!("at most one point can be infinite after distinctness"),
    };
    Ok(m.normalized())
}

/// The unique Mobius map with src[i] -> dst[i].
pub fn mobius_from_triples(
    src: [SpherePoint; 3],
    dst: [SpherePoint; 3],
) -> Result<MoebiusMap, MobiusError> {
    let s = to_standard_triple(src[0], src[1], src[2])?;
    let t = to_standard_triple(dst[0], dst[1], dst[2])?;
    Ok(t.inverse().compose(&s))
}

/// The loxodromic (or elliptic, for purely imaginary s) transformation with
/// repelling fixed point r, attracting fixed point a, and multiplier e^s
/// measured from r to a.
pub fn loxodromic(
    r: SpherePoint,
    a: SpherePoint,
    s: Complex64,
) -> Result<MoebiusMap, MobiusError> {
    if r == a {
        return Err(MobiusError::CoincidentFixedPoints);
    }
    let es = s.exp();
    let m = match (r, a) {
        (Finite(r), Finite(a)) => MoebiusMap {
            a: r - a * es,
            b: a * r * (es - ONE),
            c: ONE - es,
            d: r * es - a,
        },
        (Finite(r), Infinity) => MoebiusMap {
            a: -es,
            b: r * (es - ONE),
            c: ZERO,
            d: -ONE,
        },
        (Infinity, Finite(a)) => MoebiusMap {
            a: ONE,
            b: a * (es - ONE),
            c: ZERO,
            d: es,
        },
        _ => unreachable!("fixed points are distinct"),
    };
    Ok(m.normalized())
}

/// Complex translation length of a non-identity map: 2 arccosh(tr/2) on the
/// sign-normalized trace, real for hyperbolic elements and purely imaginary
/// for elliptic ones, with the arccosh taken on its principal branch.
pub fn translation_length(m: &MoebiusMap) -> Result<Complex64, MobiusError> {
    if dist_to_identity(m) <= 1e-14 {
        return Err(MobiusError::IdentityMap);
    }
    let mut tr = m.trace();
    if tr.re < 0.0 || (tr.re == 0.0 && tr.im < 0.0) {
        tr = -tr;
    }
    Ok(2.0 * (tr / 2.0).acosh())
}

/// min(||M - I||_F, ||-M - I||_F) on the determinant-1 representative.
pub fn dist_to_identity(m: &MoebiusMap) -> f64 {
    let id = MoebiusMap::identity();
    let neg = MoebiusMap { a: -m.a, b: -m.b, c: -m.c, d: -m.d };
    entry_dist(m, &id).min(entry_dist(&neg, &id))
}

/// The fixed points of a non-identity map; a parabolic returns its single
/// fixed point doubled.
pub fn fixed_points(m: &MoebiusMap) -> Result<(SpherePoint, SpherePoint), MobiusError> {
    if dist_to_identity(m) <= 1e-14 {
        return Err(MobiusError::IdentityMap);
    }
    if m.c.norm() <= 1e-15 {
        let diff = m.d - m.a;
        if diff.norm() <= 1e-12 {
            return Ok((Infinity, Infinity));
        }
        return Ok((Finite(m.b / diff), Infinity));
    }
    // c z^2 + (d - a) z - b = 0; discriminant (a+d)^2 - 4 since det = 1.
    let tr = m.trace();
    let disc = tr * tr - 4.0;
    if disc.norm() <= 1e-12 {
        let z = (m.a - m.d) / (2.0 * m.c);
        return Ok((Finite(z), Finite(z)));
    }
    let sq = disc.sqrt();
    let z1 = (m.a - m.d + sq) / (2.0 * m.c);
    let z2 = (m.a - m.d - sq) / (2.0 * m.c);
    Ok((Finite(z1), Finite(z2)))
}
