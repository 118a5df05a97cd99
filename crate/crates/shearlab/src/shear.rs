//! Shear functions on Farey edges and the diagnostic functionals used to
//! certify quasisymmetry: the fan ratio functional, the box condition, the
//! partial-sum condition, the convergence functional, and fan-sum checks.

use crate::farey::{cyclic_order_positive, Fan, FareyEdge, FareyVertex, Tessellation};
use crate::mobius::{cross_ratio, MobiusError, SpherePoint};
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ShearError {
    #[error("shear values must be finite")]
    NonFiniteValue,
    #[error("imaginary part {0} outside the branch [-pi/2, pi/2]")]
    ImaginaryPartOutOfBranch(f64),
    #[error(transparent)]
    Degenerate(#[from] MobiusError),
    #[error("cross-ratio is not positive on the real line")]
    NonPositiveCrossRatio,
    #[error("cross-ratio has negative real part, outside the bending-valid half plane")]
    CrossRatioOutsideHalfPlane,
    #[error("fan window does not cover the requested indices")]
    WindowNotCovered,
    #[error("two image points collide within tolerance")]
    DegenerateImage,
    #[error("no image supplied for vertex {0}")]
    MissingImage(FareyVertex),
}

/// A complex-valued function on Farey edges with finite support over a
/// default value, optionally tagged with a fan period.
#[derive(Debug, Clone)]
pub struct ShearFunction {
    assignments: HashMap<FareyEdge, Complex64>,
    default: Complex64,
    fan_period: Option<u32>,
}

impl ShearFunction {
    pub fn new(
        assignments: HashMap<FareyEdge, Complex64>,
        default: Complex64,
        fan_period: Option<u32>,
    ) -> Result<Self, ShearError> {
        for v in assignments.values().chain(std::iter::once(&default)) {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(ShearError::NonFiniteValue);
            }
            if v.im.abs() > FRAC_PI_2 + 1e-12 {
                return Err(ShearError::ImaginaryPartOutOfBranch(v.im));
            }
        }
        Ok(Self { assignments, default, fan_period })
    }

    pub fn zero() -> Self {
        Self {
            assignments: HashMap::new(),
            default: Complex64::new(0.0, 0.0),
            fan_period: None,
        }
    }

    pub fn from_real_entries(entries: Vec<(FareyEdge, f64)>) -> Result<Self, ShearError> {
        let map = entries
            .into_iter()
            .map(|(e, x)| (e, Complex64::new(x, 0.0)))
            .collect();
        Self::new(map, Complex64::new(0.0, 0.0), None)
    }

    pub fn from_entries(entries: Vec<(FareyEdge, Complex64)>) -> Result<Self, ShearError> {
        Self::new(entries.into_iter().collect(), Complex64::new(0.0, 0.0), None)
    }

    pub fn with_period(mut self, d: u32) -> Self {
        self.fan_period = Some(d);
        self
    }

    pub fn fan_period(&self) -> Option<u32> {
        self.fan_period
    }

    pub fn value(&self, e: &FareyEdge) -> Complex64 {
        *self.assignments.get(e).unwrap_or(&self.default)
    }

    pub fn default_value(&self) -> Complex64 {
        self.default
    }

    pub fn is_real(&self) -> bool {
        self.default.im == 0.0 && self.assignments.values().all(|v| v.im == 0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.assignments
            .values()
            .map(|v| v.norm())
            .fold(self.default.norm(), f64::max)
    }

    /// Entries in canonical edge order, for reproducible reports.
    pub fn sorted_entries(&self) -> Vec<(FareyEdge, Complex64)> {
        let mut v: Vec<_> = self
            .assignments
            .iter()
            .map(|(e, x)| (e.clone(), *x))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// Pointwise i * s, turning a real function into a purely imaginary one.
    pub fn times_i(&self) -> Result<Self, ShearError> {
        let i = Complex64::new(0.0, 1.0);
        Self::new(
            self.assignments.iter().map(|(e, v)| (e.clone(), i * v)).collect(),
            i * self.default,
            self.fan_period,
        )
    }
}

/// log of the cross-ratio for a real embedded quadruple.
pub fn shear_of_quadruple(
    a: SpherePoint,
    b: SpherePoint,
    c: SpherePoint,
    d: SpherePoint,
) -> Result<f64, ShearError> {
    let cr = match cross_ratio(a, b, c, d)? {
        SpherePoint::Infinity => return Err(ShearError::NonPositiveCrossRatio),
        SpherePoint::Finite(z) => z,
    };
    if cr.im.abs() > 1e-9 * (1.0 + cr.norm()) || cr.re <= 0.0 {
        return Err(ShearError::NonPositiveCrossRatio);
    }
    Ok(cr.re.ln())
}

/// log of the cross-ratio with the branch cut fixed so the imaginary part
/// lies in [-pi/2, pi/2]; requires the cross-ratio in the closed right half
/// plane minus the origin.
pub fn complex_shear_of_quadruple(
    a: SpherePoint,
    b: SpherePoint,
    c: SpherePoint,
    d: SpherePoint,
) -> Result<Complex64, ShearError> {
    let cr = match cross_ratio(a, b, c, d)? {
        SpherePoint::Infinity => return Err(ShearError::CrossRatioOutsideHalfPlane),
        SpherePoint::Finite(z) => z,
    };
    if cr.re < 0.0 {
        return Err(ShearError::CrossRatioOutsideHalfPlane);
    }
    Ok(cr.ln())
}

/// log(sum of exp(x)) evaluated stably.
fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// The fan functional s(p; m, k):
/// e^{s(e_m)} (1 + e^{s(e_{m+1})} + ... ) / (1 + e^{-s(e_{m-1})} + ...),
/// accumulated in log space.
pub fn ratio_functional(
    s: &ShearFunction,
    fan: &Fan,
    m: i64,
    k: i64,
) -> Result<f64, ShearError> {
    log_ratio_functional(s, fan, m, k).map(f64::exp)
}

/// log of the fan functional, for windows whose value overflows binary64.
pub fn log_ratio_functional(
    s: &ShearFunction,
    fan: &Fan,
    m: i64,
    k: i64,
) -> Result<f64, ShearError> {
    assert!(k >= 0, "window size k must be nonnegative");
    if m - k < fan.lo() || m + k > fan.hi() {
        return Err(ShearError::WindowNotCovered);
    }
    let val = |n: i64| s.value(fan.edge(n).expect("covered index")).re;
    let mut num_terms = vec![0.0];
    let mut acc = 0.0;
    for j in 1..=k {
        acc += val(m + j);
        num_terms.push(acc);
    }
    let mut den_terms = vec![0.0];
    acc = 0.0;
    for j in 1..=k {
        acc -= val(m - j);
        den_terms.push(acc);
    }
    Ok(val(m) + log_sum_exp(&num_terms) - log_sum_exp(&den_terms))
}

/// Truncation parameters accompanying every certificate report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub fan_count: usize,
    pub k_max: i64,
}

#[derive(Debug, Clone)]
pub struct QsBoxReport {
    pub bound: f64,
    pub truncation: Truncation,
    pub worst: f64,
    pub worst_witness: Option<(FareyVertex, i64, i64)>,
    pub violations: Vec<(FareyVertex, i64, i64, f64)>,
    pub pass: bool,
}

/// Evaluates the box condition 1/M <= s(p; m, k) <= M over the supplied
/// fans, all base indices m whose window fits, and all k <= k_max.
pub fn qs_box_check(s: &ShearFunction, bound: f64, fans: &[Fan], k_max: i64) -> QsBoxReport {
    assert!(bound > 1.0, "box bound must exceed 1");
    let mut worst = 1.0;
    let mut worst_witness = None;
    let mut violations = Vec::new();
    for fan in fans {
        for k in 0..=k_max {
            for m in (fan.lo() + k)..=(fan.hi() - k) {
                let v = ratio_functional(s, fan, m, k).expect("window fits");
                let dev = v.max(1.0 / v);
                if dev > worst {
                    worst = dev;
                    worst_witness = Some((fan.center().clone(), m, k));
                }
                if v > bound || v < 1.0 / bound {
                    violations.push((fan.center().clone(), m, k, v));
                }
            }
        }
    }
    QsBoxReport {
        bound,
        truncation: Truncation { fan_count: fans.len(), k_max },
        worst,
        worst_witness,
        pass: violations.is_empty(),
        violations,
    }
}

#[derive(Debug, Clone)]
pub struct PartialSumReport {
    pub bound: f64,
    pub truncation: Truncation,
    pub sup: f64,
    pub witness: Option<(FareyVertex, i64, i64)>,
    pub pass: bool,
}

/// sup over fans and windows [m, m+k], k < window_max, of |sum of s(e_j)|;
/// passes when the sup is at most the bound.
pub fn partial_sum_check(
    s: &ShearFunction,
    bound: f64,
    fans: &[Fan],
    window_max: i64,
) -> PartialSumReport {
    assert!(window_max >= 1, "window_max must be at least 1");
    let mut sup = 0.0;
    let mut witness = None;
    for fan in fans {
        for m in fan.lo()..=fan.hi() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..window_max.min(fan.hi() - m + 1) {
                acc += s.value(fan.edge(m + k).expect("index in window"));
                if acc.norm() > sup {
                    sup = acc.norm();
                    witness = Some((fan.center().clone(), m, k));
                }
            }
        }
    }
    PartialSumReport {
        bound,
        truncation: Truncation { fan_count: fans.len(), k_max: window_max },
        sup,
        witness,
        pass: sup <= bound,
    }
}

/// Truncated convergence functional: sup over fans, m, and k <= k_max of
/// max(s1(p;m,k)/s2(p;m,k), inverse). Equals 1 exactly when s1 = s2 on the
/// covered windows.
pub fn convergence_functional(
    s1: &ShearFunction,
    s2: &ShearFunction,
    fans: &[Fan],
    k_max: i64,
) -> f64 {
    assert!(s1.is_real() && s2.is_real(), "convergence functional is real-valued");
    let mut sup = 1.0f64;
    for fan in fans {
        for k in 0..=k_max {
            for m in (fan.lo() + k)..=(fan.hi() - k) {
                let r1 = ratio_functional(s1, fan, m, k).expect("window fits");
                let r2 = ratio_functional(s2, fan, m, k).expect("window fits");
                sup = sup.max(r1 / r2).max(r2 / r1);
            }
        }
    }
    sup
}

#[derive(Debug, Clone)]
pub struct FanSumReport {
    pub tolerance: f64,
    pub residuals: Vec<(FareyVertex, f64)>,
    pub max_residual: f64,
    pub pass: bool,
}

/// Per-fan maximum of |sum of s over d consecutive edges|; passes when all
/// residuals stay within the tolerance.
pub fn fan_sum_zero_check(
    s: &ShearFunction,
    fans: &[(Fan, usize)],
    tolerance: f64,
) -> FanSumReport {
    let mut residuals = Vec::new();
    let mut max_residual = 0.0f64;
    for (fan, d) in fans {
        let d = *d as i64;
        assert!(
            fan.hi() - fan.lo() + 1 >= d,
            "fan window must cover at least one full period"
        );
        let mut fan_max = 0.0f64;
        for m in fan.lo()..=(fan.hi() - d + 1) {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..d {
                acc += s.value(fan.edge(m + j).expect("index in window"));
            }
            fan_max = fan_max.max(acc.norm());
        }
        max_residual = max_residual.max(fan_max);
        residuals.push((fan.center().clone(), fan_max));
    }
    FanSumReport {
        tolerance,
        residuals,
        max_residual,
        pass: max_residual <= tolerance,
    }
}

/// The quadruple around an edge, arranged in increasing circular order as
/// (a, b, c, d) with b, d the edge endpoints and a, c the apexes.
pub fn edge_quadruple(e: &FareyEdge) -> [FareyVertex; 4] {
    let (m, n) = e.apexes();
    let (u, v) = (e.a().clone(), e.b().clone());
    let cand = [m.clone(), u.clone(), n.clone(), v.clone()];
    let positive = cyclic_order_positive(&cand[0], &cand[1], &cand[2])
        && cyclic_order_positive(&cand[0], &cand[2], &cand[3]);
    if positive {
        cand
    } else {
        [n, u, m, v]
    }
}

/// The shear function induced by a boundary vertex map: for each edge, the
/// complex shear of the image quadruple, with the apex order fixed by the
/// frozen orientation convention of this crate (see the develop module's
/// single-edge round trip).
pub fn induced_shears(
    images: &HashMap<FareyVertex, SpherePoint>,
    edges: &[FareyEdge],
) -> Result<ShearFunction, ShearError> {
    let mut entries = Vec::with_capacity(edges.len());
    for e in edges {
        let [a, b, c, d] = edge_quadruple(e);
        let img = |v: &FareyVertex| -> Result<SpherePoint, ShearError> {
            images
                .get(v)
                .copied()
                .ok_or_else(|| ShearError::MissingImage(v.clone()))
        };
        let (ia, ib, ic, id) = (img(&a)?, img(&b)?, img(&c)?, img(&d)?);
        let pts = [ia, ib, ic, id];
        for i in 0..4 {
            for j in i + 1..4 {
                if pts[i].chordal_distance(&pts[j]) < 1e-12 {
                    return Err(ShearError::DegenerateImage);
                }
            }
        }
        let value = complex_shear_of_quadruple(ic, ib, ia, id)?;
        entries.push((e.clone(), value));
    }
    ShearFunction::from_entries(entries)
}

/// The fans of a tessellation ball: one fan per vertex, anchored on the
/// canonically smallest incident edge, with the window [-half_width,
/// half_width].
pub fn fans_for_tessellation(tess: &Tessellation, half_width: i64) -> Vec<Fan> {
    let edges = tess.edges();
    tess.vertices()
        .iter()
        .map(|v| {
            let anchor = edges
                .iter()
                .find(|e| e.contains(v))
                .expect("tessellation vertex has an incident edge")
                .clone();
            crate::farey::fan(v, -half_width, half_width, &anchor)
                .expect("anchor contains center")
        })
        .collect()
}

/// A random real fan-sum-zero shear function: a period-d pattern with zero
/// sum and sup norm exactly `sup`, repeated on the fan at infinity over the
/// aligned window [-half_width, half_width), zero elsewhere.
pub fn random_fan_sum_zero(
    period: usize,
    sup: f64,
    half_width: i64,
    rng: &mut impl rand::Rng,
) -> ShearFunction {
    assert!(period >= 2 && sup > 0.0 && half_width > 0);
    let mut pattern: Vec<f64> = (0..period - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let tail: f64 = -pattern.iter().sum::<f64>();
    pattern.push(tail);
    let max = pattern.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = sup / max;
    let aligned = (half_width as usize / period * period) as i64;
    let mut entries = Vec::new();
    for n in -aligned..aligned {
        let idx = (n.rem_euclid(period as i64)) as usize;
        let e = FareyEdge::new(FareyVertex::integer(n), FareyVertex::infinity())
            .expect("vertical edges are unimodular");
        entries.push((e, pattern[idx] * scale));
    }
    ShearFunction::from_real_entries(entries)
        .expect("finite real values")
        .with_period(period as u32)
}
