//! JSON documents exchanged by the CLI: serialized shear functions and edge
//! lists for the intersection checker.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use shearlab::farey::{FareyEdge, FareyVertex, Tessellation};
use shearlab::intersect::IdealGeodesic;
use shearlab::shear::ShearFunction;

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
pub struct ShearEntry {
    /// Edge endpoints as reduced integer fractions [p1, q1, p2, q2];
    /// infinity is 1/0.
    pub edge: [i64; 4],
    pub value: [f64; 2],
}

/// Version-1 shear function document: complex default value, finitely many
/// explicit unimodular edges, optional fan period.
#[derive(Debug, Serialize, Deserialize)]
pub struct ShearFunctionDocument {
    pub version: u32,
    pub default: [f64; 2],
    pub entries: Vec<ShearEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan_period: Option<u32>,
}

fn vertex(p: i64, q: i64) -> Result<FareyVertex, CliError> {
    FareyVertex::from_integers(p, q).map_err(|e| CliError::Usage(format!("bad vertex {p}/{q}: {e}")))
}

fn edge(spec: &[i64; 4]) -> Result<FareyEdge, CliError> {
    let u = vertex(spec[0], spec[1])?;
    let v = vertex(spec[2], spec[3])?;
    FareyEdge::new(u, v).map_err(|e| CliError::Usage(format!("bad edge {spec:?}: {e}")))
}

fn small_int(n: &BigInt) -> Result<i64, CliError> {
    n.to_i64()
        .ok_or_else(|| CliError::Usage(format!("vertex coordinate {n} does not fit in 64 bits")))
}

fn edge_spec(e: &FareyEdge) -> Result<[i64; 4], CliError> {
    Ok([
        small_int(e.a().p())?,
        small_int(e.a().q())?,
        small_int(e.b().p())?,
        small_int(e.b().q())?,
    ])
}

impl ShearFunctionDocument {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid shear document {}: {e}", path.display())))
    }

    pub fn to_shear_function(&self) -> Result<ShearFunction, CliError> {
        if self.version != 1 {
            return Err(CliError::Usage(format!(
                "unsupported shear document version {}",
                self.version
            )));
        }
        let mut assignments = HashMap::new();
        for entry in &self.entries {
            let e = edge(&entry.edge)?;
            let value = Complex64::new(entry.value[0], entry.value[1]);
            if assignments.insert(e, value).is_some() {
                return Err(CliError::Usage(format!("duplicate edge {:?}", entry.edge)));
            }
        }
        ShearFunction::new(
            assignments,
            Complex64::new(self.default[0], self.default[1]),
            self.fan_period,
        )
        .map_err(|e| CliError::Usage(format!("invalid shear function: {e}")))
    }

    pub fn from_shear_function(s: &ShearFunction) -> Result<Self, CliError> {
        let mut entries = Vec::new();
        for (e, v) in s.sorted_entries() {
            entries.push(ShearEntry { edge: edge_spec(&e)?, value: [v.re, v.im] });
        }
        let d = s.default_value();
        Ok(Self { version: 1, default: [d.re, d.im], entries, fan_period: s.fan_period() })
    }
}

/// Edge-list document for the intersection checker: either an explicit list
/// of unimodular edges, or a Farey ball of the given depth, optionally
/// pushed forward by an integer matrix.
#[derive(Debug, Serialize, Deserialize)]
pub struct EdgeListDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[i64; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub farey_depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<[[i64; 2]; 2]>,
}

impl EdgeListDocument {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid edge list {}: {e}", path.display())))
    }

    pub fn to_geodesics(&self, max_depth: usize) -> Result<Vec<IdealGeodesic>, CliError> {
        let mut list: Vec<IdealGeodesic> = match (&self.edges, self.farey_depth) {
            (Some(specs), None) => {
                let mut out = Vec::with_capacity(specs.len());
                for spec in specs {
                    // Any pair of distinct rational boundary points, not
                    // just unimodular Farey edges.
                    let g = IdealGeodesic::rational(
                        vertex(spec[0], spec[1])?,
                        vertex(spec[2], spec[3])?,
                    )
                    .map_err(|e| CliError::Usage(format!("bad geodesic {spec:?}: {e}")))?;
                    out.push(g);
                }
                out
            }
            (None, Some(depth)) => {
                if depth > max_depth {
                    return Err(CliError::Usage(format!(
                        "farey_depth {depth} exceeds the depth limit {max_depth}"
                    )));
                }
                let tess = Tessellation::generate(depth)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                tess.edges().iter().map(IdealGeodesic::from_edge).collect()
            }
            _ => {
                return Err(CliError::Usage(
                    "edge list must set exactly one of \"edges\" or \"farey_depth\"".into(),
                ))
            }
        };
        if let Some(m) = &self.transform {
            list = list
                .iter()
                .map(|g| g.transform_integer(m))
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Usage(format!("bad transform: {e}")))?;
        }
        Ok(list)
    }
}
