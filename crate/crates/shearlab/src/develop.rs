//! The developing (cocycle) map: reconstructing boundary vertex images from
//! a shear function by composing loxodromic factors along the separating
//! edges between the base triangle and each target.
//!
//! The frozen sign convention of this crate: every separating edge is
//! oriented with the base triangle to its left, and the factor for an edge
//! carrying shear value s is the loxodromic with repelling fixed point at
//! the oriented edge's end and attracting fixed point at its start. The
//! single-edge round trip (shear log 2 on (0, infinity) sends -1 to -2 and
//! is recovered by `induced_shears`) pins this choice; see the unit tests.

use crate::farey::{FareyError, FareyTriangle, FareyVertex, OrientedEdge, Tessellation};
use crate::mobius::{loxodromic, MoebiusMap, SpherePoint};
use crate::shear::{induced_shears, ShearError, ShearFunction};
use num_complex::Complex64;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DevelopError {
    #[error("developed image of {0} hit the pole of the cocycle")]
    ImageAtPoleCollision(FareyVertex),
    #[error("develop_vertex requires a real shear function; use bend for complex values")]
    NonRealShear,
    #[error(transparent)]
    Farey(#[from] FareyError),
    #[error(transparent)]
    Shear(#[from] ShearError),
}

/// The cocycle factor for one oriented separating edge.
fn edge_factor(s: &ShearFunction, g: &OrientedEdge) -> MoebiusMap {
    let value = s.value(&g.edge());
    loxodromic(g.end.to_point(), g.start.to_point(), value)
        .expect("oriented edge has distinct endpoints")
}

/// The composition T_{g_0} o ... o T_{g_n} for a separating-edge path in
/// order from the base triangle outward; the factor nearest the target acts
/// first. Matrices are multiplied once and applied once.
pub fn cocycle(s: &ShearFunction, path: &[OrientedEdge]) -> MoebiusMap {
    let mut m = MoebiusMap::identity();
    for g in path {
        m = m.compose(&edge_factor(s, g));
    }
    m
}

fn develop_in(
    s: &ShearFunction,
    tess: &Tessellation,
    v: &FareyVertex,
) -> Result<SpherePoint, DevelopError> {
    let t = tess
        .triangle_containing(v)
        .ok_or(FareyError::TargetOutOfRange)?
        .clone();
    let path = tess.separating_edges(&t)?;
    let image = cocycle(s, &path).apply(v.to_point());
    match image {
        SpherePoint::Infinity if !v.is_infinity() => {
            Err(DevelopError::ImageAtPoleCollision(v.clone()))
        }
        SpherePoint::Finite(z) if !z.re.is_finite() || !z.im.is_finite() => {
            Err(DevelopError::ImageAtPoleCollision(v.clone()))
        }
        _ => Ok(image),
    }
}

/// Develops a single vertex of a real shear function.
pub fn develop_vertex(
    s: &ShearFunction,
    tess: &Tessellation,
    v: &FareyVertex,
) -> Result<SpherePoint, DevelopError> {
    if !s.is_real() {
        return Err(DevelopError::NonRealShear);
    }
    develop_in(s, tess, v)
}

/// Develops a single vertex with complex (bending) shear values.
pub fn bend(
    s: &ShearFunction,
    tess: &Tessellation,
    v: &FareyVertex,
) -> Result<SpherePoint, DevelopError> {
    develop_in(s, tess, v)
}

/// Vertex images of a developing map over a tessellation ball, normalized to
/// the identity on the base triangle.
#[derive(Debug, Clone)]
pub struct DevelopedMap {
    pub vertex_images: HashMap<FareyVertex, SpherePoint>,
    pub depth: usize,
    /// For real input: whether the images are strictly increasing on the
    /// finite rational vertices. None for complex input.
    pub monotone_on_reals: Option<bool>,
}

/// Develops every vertex of the depth ball. Cocycles are accumulated along
/// the dual tree, so each triangle costs one matrix product.
pub fn develop_map(s: &ShearFunction, depth: usize) -> Result<DevelopedMap, DevelopError> {
    let tess = Tessellation::generate(depth)?;
    develop_map_on(s, &tess)
}

pub fn develop_map_on(
    s: &ShearFunction,
    tess: &Tessellation,
) -> Result<DevelopedMap, DevelopError> {
    // Cocycle per triangle, reusing the parent's composition.
    let mut cocycles: Vec<MoebiusMap> = Vec::with_capacity(tess.triangles().len());
    for i in 0..tess.triangles().len() {
        let m = match tess.parent_link(i) {
            None => MoebiusMap::identity(),
            Some((pi, e)) => {
                let g = crate::farey::orient_delta0_left(e);
                cocycles[pi].compose(&edge_factor(s, &g))
            }
        };
        cocycles.push(m);
    }

    // First BFS occurrence of a vertex is a containing triangle of minimal
    // dual distance, matching Tessellation::triangle_containing.
    let mut home: HashMap<FareyVertex, usize> = HashMap::new();
    for (i, t) in tess.triangles().iter().enumerate() {
        for u in t.vertices() {
            home.entry(u.clone()).or_insert(i);
        }
    }

    let mut vertex_images = HashMap::new();
    for v in tess.vertices() {
        let i = home[&v];
        let image = cocycles[i].apply(v.to_point());
        match image {
            SpherePoint::Infinity if !v.is_infinity() => {
                return Err(DevelopError::ImageAtPoleCollision(v));
            }
            SpherePoint::Finite(z) if !z.re.is_finite() || !z.im.is_finite() => {
                return Err(DevelopError::ImageAtPoleCollision(v));
            }
            _ => {}
        }
        vertex_images.insert(v, image);
    }

    let monotone_on_reals = if s.is_real() {
        let mut finite: Vec<(&FareyVertex, f64)> = vertex_images
            .iter()
            .filter_map(|(v, p)| p.finite().map(|z| (v, z.re)))
            .collect();
        finite.sort_by(|a, b| a.0.cmp(b.0));
        Some(finite.windows(2).all(|w| w[0].1 < w[1].1))
    } else {
        None
    };

    Ok(DevelopedMap {
        vertex_images,
        depth: tess.depth(),
        monotone_on_reals,
    })
}

/// The factor lists of the real/imaginary decomposition for the path to
/// `target`: real-length factors on the original edges, and imaginary-length
/// factors on the geodesics transported by the running real composition.
/// The product of all bending factors followed by all real factors equals
/// the full complex cocycle up to sign.
pub fn split_real_imaginary(
    s: &ShearFunction,
    tess: &Tessellation,
    target: &FareyTriangle,
) -> Result<(Vec<MoebiusMap>, Vec<MoebiusMap>), DevelopError> {
    let path = tess.separating_edges(target)?;
    let mut real_factors = Vec::with_capacity(path.len());
    let mut bending_factors = Vec::with_capacity(path.len());
    let mut running_real = MoebiusMap::identity();
    for g in &path {
        let value = s.value(&g.edge());
        let r = loxodromic(
            g.end.to_point(),
            g.start.to_point(),
            Complex64::new(value.re, 0.0),
        )
        .expect("distinct endpoints");
        running_real = running_real.compose(&r);
        let b = loxodromic(
            running_real.apply(g.end.to_point()),
            running_real.apply(g.start.to_point()),
            Complex64::new(0.0, value.im),
        )
        .expect("transported endpoints stay distinct");
        real_factors.push(r);
        bending_factors.push(b);
    }
    Ok((real_factors, bending_factors))
}

/// max over the ball's interior edges of |induced_shears(develop(s)) - s|.
pub fn roundtrip_residual(s: &ShearFunction, depth: usize) -> Result<f64, DevelopError> {
    let tess = Tessellation::generate(depth)?;
    let dm = develop_map_on(s, &tess)?;
    let edges = tess.interior_edges();
    let induced = induced_shears(&dm.vertex_images, &edges)?;
    Ok(edges
        .iter()
        .map(|e| (induced.value(e) - s.value(e)).norm())
        .fold(0.0, f64::max))
}
