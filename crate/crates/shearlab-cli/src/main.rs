//! Command-line front end: JSON reports and SVG figures for every library
//! module. Reports are deterministic (sorted keys, exact float round trip)
//! and always carry the truncation parameters they were computed with.

mod document;
mod svg;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};
use shearlab::develop::{develop_map, roundtrip_residual, DevelopError};
use shearlab::farey::Tessellation;
use shearlab::intersect::{finite_intersection_check, BoundaryPoint, IdealGeodesic};
use shearlab::mobius::SpherePoint;
use shearlab::qfcheck::injectivity_scan;
use shearlab::shear::{
    fan_sum_zero_check, fans_for_tessellation, partial_sum_check, qs_box_check, ShearFunction,
};
use shearlab::surfaces;

use document::{EdgeListDocument, ShearFunctionDocument};
use svg::Viewport;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, files, or documents; exit 2.
    Usage(String),
    /// Numeric-regime failure (pole collision, invalid cross-ratio); exit 3.
    Numeric(String),
    /// A requested certificate failed under --strict; exit 4.
    Certificate(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Certificate(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) | CliError::Certificate(m) => {
                write!(f, "{m}")
            }
        }
    }
}

fn develop_error(e: DevelopError) -> CliError {
    match e {
        DevelopError::ImageAtPoleCollision(v) => {
            CliError::Numeric(format!("developed image of vertex {v} hit a pole"))
        }
        other => CliError::Usage(other.to_string()),
    }
}

#[derive(Parser)]
#[command(name = "shearlab", version, about = "Shear coordinates on the Farey tessellation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Report destination (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG figure to this path
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a Farey tessellation ball and render it
    Farey {
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Develop a shear function into boundary vertex images
    Develop {
        shear_file: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Accept complex (bending) shear values
        #[arg(long)]
        complex: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run quasisymmetry certificates on a shear function
    Check {
        shear_file: PathBuf,
        /// Box-condition bound M (> 1)
        #[arg(long)]
        qs_box: Option<f64>,
        /// Partial-sum bound C
        #[arg(long)]
        partial_sum: Option<f64>,
        /// Check the fan-sum-zero puncture condition
        #[arg(long)]
        fan_zero: bool,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        k_max: i64,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        /// Exit nonzero when a certificate fails
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build one of the example surfaces
    Surface {
        #[command(subcommand)]
        surface: SurfaceCommand,
    },
    /// Count crossings between two edge lists
    Intersect {
        edges_a: PathBuf,
        edges_b: PathBuf,
        /// Per-edge crossing bound to certify
        #[arg(long, default_value_t = 0)]
        bound: usize,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SurfaceCommand {
    /// Flute lattice triangulation with extremal-length tables
    Bpv {
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Punctured von Dyck (2,4,8) orbit triangulation
    Kinjo {
        #[arg(long, default_value_t = 4)]
        word_length: usize,
        /// Satellite distance (default: 0.4 of the minimum corner-to-side
        /// distance)
        #[arg(long)]
        eps: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn max_depth() -> usize {
    std::env::var("SHEARLAB_MAX_DEPTH")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(25)
}

fn check_depth(depth: usize) -> Result<(), CliError> {
    let limit = max_depth();
    if depth > limit {
        return Err(CliError::Usage(format!(
            "depth {depth} exceeds the limit {limit} (override with SHEARLAB_MAX_DEPTH)"
        )));
    }
    Ok(())
}

fn write_output(out: &Option<PathBuf>, value: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("report serializes") + "\n";
    match out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn report_head(command: &str, parameters: Value) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("parameters".into(), parameters);
    m
}

fn sphere_point_json(p: &SpherePoint) -> Value {
    match p.finite() {
        Some(z) => json!([z.re, z.im]),
        None => json!("inf"),
    }
}

fn geodesic_json(g: &IdealGeodesic) -> Value {
    let endpoint = |b: &BoundaryPoint| match b {
        BoundaryPoint::Rational(v) => json!(v.to_string()),
        BoundaryPoint::Numeric(p) => sphere_point_json(p),
    };
    let (a, b) = g.endpoints();
    json!([endpoint(a), endpoint(b)])
}

fn cmd_farey(depth: usize, output: &OutputArgs) -> Result<(), CliError> {
    check_depth(depth)?;
    let tess = Tessellation::generate(depth).map_err(|e| CliError::Usage(e.to_string()))?;
    let triangles: Vec<Value> = tess
        .triangles()
        .iter()
        .map(|t| Value::Array(t.vertices().iter().map(|v| json!(v.to_string())).collect()))
        .collect();
    let mut report = report_head("farey", json!({ "depth": depth }));
    report.insert("triangle_count".into(), json!(tess.triangles().len()));
    report.insert("edge_count".into(), json!(tess.edges().len()));
    report.insert("triangles".into(), Value::Array(triangles));
    if let Some(path) = &output.svg {
        write_file(path, &svg::farey_svg(&tess.edges(), &Viewport::default()))?;
    }
    write_output(&output.out, &Value::Object(report))
}

fn load_shear(path: &Path, allow_complex: bool) -> Result<ShearFunction, CliError> {
    let s = ShearFunctionDocument::load(path)?.to_shear_function()?;
    if !allow_complex && !s.is_real() {
        return Err(CliError::Usage(
            "shear function has imaginary parts; pass --complex to develop a bending map".into(),
        ));
    }
    Ok(s)
}

fn cmd_develop(
    shear_file: &Path,
    depth: usize,
    complex: bool,
    output: &OutputArgs,
) -> Result<(), CliError> {
    check_depth(depth)?;
    let s = load_shear(shear_file, complex)?;
    let dm = develop_map(&s, depth).map_err(develop_error)?;
    let residual = roundtrip_residual(&s, depth).map_err(develop_error)?;

    let mut sorted: Vec<_> = dm.vertex_images.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(b.0));
    let images: Vec<Value> = sorted
        .iter()
        .map(|(v, p)| json!({ "vertex": v.to_string(), "image": sphere_point_json(p) }))
        .collect();

    let mut report = report_head(
        "develop",
        json!({ "depth": depth, "shear_file": shear_file.display().to_string(), "complex": complex }),
    );
    report.insert("roundtrip_residual".into(), json!(residual));
    report.insert("monotone_on_reals".into(), json!(dm.monotone_on_reals));
    // Canonical echo of the parsed input, so the report is self-contained.
    report.insert(
        "shear_function".into(),
        serde_json::to_value(ShearFunctionDocument::from_shear_function(&s)?)
            .expect("document serializes"),
    );
    if complex {
        let inj = injectivity_scan(&dm.vertex_images);
        report.insert(
            "injectivity".into(),
            json!({
                "min_chordal_distance": inj.min_distance,
                "pair": inj.pair.map(|(u, v)| [u.to_string(), v.to_string()]),
            }),
        );
    }
    report.insert("images".into(), Value::Array(images));

    if let Some(path) = &output.svg {
        let points: Vec<(String, Complex64)> = sorted
            .iter()
            .filter_map(|(v, p)| p.finite().map(|z| (v.to_string(), z)))
            .collect();
        write_file(path, &svg::developed_svg(&points, &Viewport::default()))?;
    }
    write_output(&output.out, &Value::Object(report))
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    shear_file: &Path,
    qs_box: Option<f64>,
    partial_sum: Option<f64>,
    fan_zero: bool,
    depth: usize,
    k_max: i64,
    tolerance: f64,
    strict: bool,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    check_depth(depth)?;
    if qs_box.is_none() && partial_sum.is_none() && !fan_zero {
        return Err(CliError::Usage(
            "no certificate requested; pass --qs-box, --partial-sum, and/or --fan-zero".into(),
        ));
    }
    if k_max < 1 {
        return Err(CliError::Usage("--k-max must be at least 1".into()));
    }
    let s = load_shear(shear_file, true)?;
    let period = ShearFunctionDocument::load(shear_file)?.fan_period;
    let tess = Tessellation::generate(depth).map_err(|e| CliError::Usage(e.to_string()))?;
    let half_width = (2 * k_max).max(period.unwrap_or(0) as i64);
    let fans = fans_for_tessellation(&tess, half_width);

    let mut checks = serde_json::Map::new();
    let mut all_pass = true;

    if let Some(bound) = qs_box {
        if bound <= 1.0 {
            return Err(CliError::Usage("--qs-box bound must exceed 1".into()));
        }
        if !s.is_real() {
            return Err(CliError::Usage("--qs-box requires a real shear function".into()));
        }
        let r = qs_box_check(&s, bound, &fans, k_max);
        all_pass &= r.pass;
        checks.insert(
            "qs_box".into(),
            json!({
                "bound": r.bound,
                "truncation": { "fan_count": r.truncation.fan_count, "k_max": r.truncation.k_max },
                "worst": r.worst,
                "worst_witness": r.worst_witness.map(|(v, m, k)| json!([v.to_string(), m, k])),
                "violations": r.violations.len(),
                "pass": r.pass,
            }),
        );
    }

    if let Some(bound) = partial_sum {
        let r = partial_sum_check(&s, bound, &fans, k_max);
        all_pass &= r.pass;
        checks.insert(
            "partial_sum".into(),
            json!({
                "bound": r.bound,
                "truncation": { "fan_count": r.truncation.fan_count, "k_max": r.truncation.k_max },
                "sup": r.sup,
                "witness": r.witness.map(|(v, m, k)| json!([v.to_string(), m, k])),
                "pass": r.pass,
            }),
        );
    }

    if fan_zero {
        let d = period.ok_or_else(|| {
            CliError::Usage("--fan-zero requires fan_period in the shear document".into())
        })? as usize;
        if d == 0 || (d as i64) > 2 * half_width + 1 {
            return Err(CliError::Usage(format!("fan period {d} does not fit the fan window")));
        }
        let with_period: Vec<_> = fans.iter().map(|f| (f.clone(), d)).collect();
        let r = fan_sum_zero_check(&s, &with_period, tolerance);
        all_pass &= r.pass;
        checks.insert(
            "fan_sum_zero".into(),
            json!({
                "tolerance": r.tolerance,
                "period": d,
                "fan_count": r.residuals.len(),
                "max_residual": r.max_residual,
                "pass": r.pass,
            }),
        );
    }

    let mut report = report_head(
        "check",
        json!({
            "shear_file": shear_file.display().to_string(),
            "depth": depth,
            "k_max": k_max,
            "tolerance": tolerance,
            "strict": strict,
        }),
    );
    report.insert("checks".into(), Value::Object(checks));
    report.insert("pass".into(), json!(all_pass));
    write_output(out, &Value::Object(report))?;
    if strict && !all_pass {
        return Err(CliError::Certificate("one or more certificates failed".into()));
    }
    Ok(())
}

fn cmd_surface_bpv(radius: usize, output: &OutputArgs) -> Result<(), CliError> {
    let t = surfaces::bpv_triangulation(radius).map_err(|e| CliError::Usage(e.to_string()))?;
    let interior = surfaces::interior_degrees(&t, radius);
    let mut census: BTreeMap<usize, usize> = BTreeMap::new();
    for d in interior.values() {
        *census.entry(*d).or_insert(0) += 1;
    }
    let pass = census.keys().all(|d| *d == 4 || *d == 8);
    let extremal: Vec<Value> = (1..=10)
        .map(|n| json!({ "n": n, "lower_bound": surfaces::extremal_length_lower(n) }))
        .collect();
    let curves: Vec<Value> = (1..=10)
        .map(|n| {
            let (len, punctures) = surfaces::curve_length_cn(n);
            json!({ "n": n, "length": len, "punctures": punctures })
        })
        .collect();

    let mut report = report_head("surface-bpv", json!({ "radius": radius }));
    report.insert("vertex_count".into(), json!(t.vertices().len()));
    report.insert("edge_count".into(), json!(t.edges().len()));
    report.insert(
        "interior_degree_census".into(),
        json!(census.iter().map(|(d, c)| (d.to_string(), *c)).collect::<BTreeMap<_, _>>()),
    );
    report.insert("extremal_length_lower".into(), Value::Array(extremal));
    report.insert("curves".into(), Value::Array(curves));
    report.insert("pass".into(), json!(pass));
    if let Some(path) = &output.svg {
        let edges: Vec<_> = t.edges().iter().copied().collect();
        write_file(path, &svg::lattice_svg(&edges, radius))?;
    }
    write_output(&output.out, &Value::Object(report))
}

fn cmd_surface_kinjo(
    word_length: usize,
    eps: Option<f64>,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let eps = eps.unwrap_or_else(surfaces::kinjo_default_eps);
    let k = surfaces::kinjo_triangulation(word_length, eps).map_err(|e| match e {
        surfaces::SurfaceError::DuplicateDiagonal => CliError::Numeric(e.to_string()),
        other => CliError::Usage(other.to_string()),
    })?;
    let degrees = k.triangulation.degrees();
    let mut census: BTreeMap<usize, usize> = BTreeMap::new();
    for d in degrees.values() {
        *census.entry(*d).or_insert(0) += 1;
    }
    let max_valence = degrees.values().copied().max().unwrap_or(0);

    let mut report =
        report_head("surface-kinjo", json!({ "word_length": word_length, "eps": eps }));
    report.insert("vertex_count".into(), json!(k.vertices.points.len()));
    report.insert("edge_count".into(), json!(k.triangulation.edges().len()));
    report.insert("diagonal_count".into(), json!(k.diagonals.len()));
    report.insert(
        "degree_census".into(),
        json!(census.iter().map(|(d, c)| (d.to_string(), *c)).collect::<BTreeMap<_, _>>()),
    );
    report.insert("max_valence".into(), json!(max_valence));
    report.insert("pass".into(), json!(max_valence <= 8));
    if let Some(path) = &output.svg {
        let pos = |i: &usize| k.vertices.points[*i].position;
        let segments: Vec<_> =
            k.triangulation.edges().iter().map(|(u, v)| (pos(u), pos(v))).collect();
        let dots: Vec<_> = k.vertices.points.iter().map(|p| p.position).collect();
        write_file(path, &svg::configuration_svg(&segments, &dots, &Viewport::default()))?;
    }
    write_output(&output.out, &Value::Object(report))
}

fn cmd_intersect(
    edges_a: &Path,
    edges_b: &Path,
    bound: usize,
    strict: bool,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    let doc_a = EdgeListDocument::load(edges_a)?;
    let doc_b = EdgeListDocument::load(edges_b)?;
    let list_a = doc_a.to_geodesics(max_depth())?;
    let list_b = doc_b.to_geodesics(max_depth())?;
    let depth = doc_a.farey_depth.unwrap_or(0).max(doc_b.farey_depth.unwrap_or(0));
    let r = finite_intersection_check(&list_a, &list_b, bound, depth);

    let mut report = report_head(
        "intersect",
        json!({
            "edges_a": edges_a.display().to_string(),
            "edges_b": edges_b.display().to_string(),
            "bound": bound,
            "depth": depth,
            "strict": strict,
        }),
    );
    report.insert("edge_count_a".into(), json!(list_a.len()));
    report.insert("edge_count_b".into(), json!(list_b.len()));
    report.insert("max_first".into(), json!(r.max_first));
    report.insert("max_second".into(), json!(r.max_second));
    report.insert("indeterminate".into(), json!(r.indeterminate));
    report.insert("argmax_first".into(), r.argmax_first.as_ref().map(geodesic_json).into());
    report.insert("argmax_second".into(), r.argmax_second.as_ref().map(geodesic_json).into());
    report.insert("pass".into(), json!(r.pass));
    write_output(out, &Value::Object(report))?;
    if strict && !r.pass {
        return Err(CliError::Certificate(format!(
            "crossing maxima ({}, {}) exceed the bound {bound}",
            r.max_first, r.max_second
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Farey { depth, output } => cmd_farey(depth, &output),
        Command::Develop { shear_file, depth, complex, output } => {
            cmd_develop(&shear_file, depth, complex, &output)
        }
        Command::Check {
            shear_file,
            qs_box,
            partial_sum,
            fan_zero,
            depth,
            k_max,
            tolerance,
            strict,
            out,
        } => cmd_check(
            &shear_file,
            qs_box,
            partial_sum,
            fan_zero,
            depth,
            k_max,
            tolerance,
            strict,
            &out,
        ),
        Command::Surface { surface } => match surface {
            SurfaceCommand::Bpv { radius, output } => cmd_surface_bpv(radius, &output),
            SurfaceCommand::Kinjo { word_length, eps, output } => {
                cmd_surface_kinjo(word_length, eps, &output)
            }
        },
        Command::Intersect { edges_a, edges_b, bound, strict, out } => {
            cmd_intersect(&edges_a, &edges_b, bound, strict, &out)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.code());
    }
}
