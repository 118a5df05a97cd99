use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shearlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(path: &Path, value: &Value) {
    std::fs::write(path, serde_json::to_string_pretty(value).unwrap()).unwrap();
}

fn zero_doc() -> Value {
    json!({ "version": 1, "default": [0.0, 0.0], "entries": [], "fan_period": 3 })
}

#[test]
fn farey_depth_two_draws_ten_triangles() {
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("farey.svg");
    let out = run(&["farey", "--depth", "2", "--svg", svg_path.to_str().unwrap()]);
    let report = json_stdout(&out);
    assert_eq!(report["triangle_count"], 10);
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<path"));
}

#[test]
fn farey_depth_zero_is_base_triangle() {
    let report = json_stdout(&run(&["farey", "--depth", "0"]));
    assert_eq!(report["triangle_count"], 1);
    assert_eq!(report["triangles"][0], json!(["0/1", "1/1", "inf"]));
}

#[test]
fn farey_invalid_depth_is_usage_error() {
    let out = run(&["farey", "--depth", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn depth_guardrail_env_override() {
    let out = bin().args(["farey", "--depth", "30"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["farey", "--depth", "5"])
        .env("SHEARLAB_MAX_DEPTH", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["farey", "--depth", "5"])
        .env("SHEARLAB_MAX_DEPTH", "6")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn develop_zero_shear_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let shear = dir.path().join("zero.json");
    write(&shear, &zero_doc());
    let report = json_stdout(&run(&["develop", shear.to_str().unwrap(), "--depth", "4"]));
    assert!(report["roundtrip_residual"].as_f64().unwrap() <= 1e-12);
    assert_eq!(report["monotone_on_reals"], true);
    for image in report["images"].as_array().unwrap() {
        let v = image["vertex"].as_str().unwrap();
        if v == "inf" {
            assert_eq!(image["image"], "inf");
        } else {
            let (p, q) = v.split_once('/').unwrap();
            let expected = p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap();
            let got = image["image"][0].as_f64().unwrap();
            assert!((got - expected).abs() <= 1e-13, "{v} -> {got}");
        }
    }
}

#[test]
fn develop_single_edge_log2() {
    let dir = tempfile::tempdir().unwrap();
    let shear = dir.path().join("log2.json");
    write(
        &shear,
        &json!({
            "version": 1,
            "default": [0.0, 0.0],
            "entries": [{ "edge": [0, 1, 1, 0], "value": [std::f64::consts::LN_2, 0.0] }],
        }),
    );
    let report = json_stdout(&run(&["develop", shear.to_str().unwrap(), "--depth", "5"]));
    assert!(report["roundtrip_residual"].as_f64().unwrap() <= 1e-10);
    let minus_one = report["images"]
        .as_array()
        .unwrap()
        .iter()
        .find(|i| i["vertex"] == "-1/1")
        .unwrap();
    assert!((minus_one["image"][0].as_f64().unwrap() + 2.0).abs() <= 1e-12);
}

#[test]
fn develop_complex_reports_injectivity() {
    let dir = tempfile::tempdir().unwrap();
    let shear = dir.path().join("bend.json");
    write(
        &shear,
        &json!({
            "version": 1,
            "default": [0.0, 0.05],
            "entries": [],
            "fan_period": 4,
        }),
    );
    let svg_path = dir.path().join("bend.svg");
    let out = run(&[
        "develop",
        shear.to_str().unwrap(),
        "--depth",
        "4",
        "--complex",
        "--svg",
        svg_path.to_str().unwrap(),
    ]);
    let report = json_stdout(&out);
    let min = report["injectivity"]["min_chordal_distance"].as_f64().unwrap();
    assert!(min > 1e-4, "min chordal distance {min}");
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.contains("polyline"));
    // Without --complex the same file is a usage error.
    let out = run(&["develop", shear.to_str().unwrap(), "--depth", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn develop_echoes_document_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let shear = dir.path().join("odd.json");
    let doc = json!({
        "version": 1,
        "default": [0.0, 0.0],
        "entries": [
            { "edge": [0, 1, 1, 0], "value": [0.1 + 0.2, 0.0] },
            { "edge": [0, 1, 1, 1], "value": [-(1.0 / 3.0), 0.0] },
        ],
    });
    write(&shear, &doc);
    let report = json_stdout(&run(&["develop", shear.to_str().unwrap(), "--depth", "3"]));
    let echoed = &report["shear_function"];
    assert_eq!(echoed["version"], 1);
    assert_eq!(echoed["default"], json!([0.0, 0.0]));
    let entries = echoed["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    // Exact float round trip through parse + emit.
    for entry in entries {
        let value = entry["value"][0].as_f64().unwrap();
        assert!(value == 0.1 + 0.2 || value == -(1.0 / 3.0), "value {value}");
    }
}

#[test]
fn develop_rejects_bad_documents() {
    let dir = tempfile::tempdir().unwrap();
    let shear = dir.path().join("bad.json");
    // Non-unimodular edge.
    write(
        &shear,
        &json!({
            "version": 1,
            "default": [0.0, 0.0],
            "entries": [{ "edge": [0, 1, 2, 1], "value": [1.0, 0.0] }],
        }),
    );
    assert_eq!(run(&["develop", shear.to_str().unwrap()]).status.code(), Some(2));
    // Duplicate edge.
    write(
        &shear,
        &json!({
            "version": 1,
            "default": [0.0, 0.0],
            "entries": [
                { "edge": [0, 1, 1, 0], "value": [1.0, 0.0] },
                { "edge": [1, 0, 0, 1], "value": [2.0, 0.0] },
            ],
        }),
    );
    assert_eq!(run(&["develop", shear.to_str().unwrap()]).status.code(), Some(2));
    // Wrong version.
    write(&shear, &json!({ "version": 2, "default": [0.0, 0.0], "entries": [] }));
    assert_eq!(run(&["develop", shear.to_str().unwrap()]).status.code(), Some(2));
    // Missing file.
    assert_eq!(run(&["develop", "no-such-file.json"]).status.code(), Some(2));
}

#[test]
fn check_zero_shears_pass_all() {
    let dir = tempfile::tempdir().unwrap();
    let shear = dir.path().join("zero.json");
    write(&shear, &zero_doc());
    let report = json_stdout(&run(&[
        "check",
        shear.to_str().unwrap(),
        "--qs-box",
        "2",
        "--partial-sum",
        "1",
        "--fan-zero",
        "--depth",
        "4",
    ]));
    assert_eq!(report["pass"], true);
    for name in ["qs_box", "partial_sum", "fan_sum_zero"] {
        assert_eq!(report["checks"][name]["pass"], true, "{name}");
    }
}

#[test]
fn check_constant_shears_fail_partial_sum() {
    let dir = tempfile::tempdir().unwrap();
    let shear = dir.path().join("one.json");
    write(&shear, &json!({ "version": 1, "default": [1.0, 0.0], "entries": [] }));
    let report_path = dir.path().join("report.json");
    let out = run(&[
        "check",
        shear.to_str().unwrap(),
        "--partial-sum",
        "1",
        "--depth",
        "4",
        "--strict",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["pass"], false);
    // Windows of length k sum to k: arithmetic growth.
    assert!(report["checks"]["partial_sum"]["sup"].as_f64().unwrap() > 1.0);
}

#[test]
fn check_random_fan_zero_passes_proof_bound() {
    use num_traits::ToPrimitive;
    use rand::SeedableRng;
    use shearlab::shear::random_fan_sum_zero;

    let dir = tempfile::tempdir().unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for d in [3u32, 4] {
        let s = random_fan_sum_zero(d as usize, 0.5, 16, &mut rng);
        let entries: Vec<Value> = s
            .sorted_entries()
            .iter()
            .map(|(e, v)| {
                json!({
                    "edge": [
                        e.a().p().to_i64().unwrap(),
                        e.a().q().to_i64().unwrap(),
                        e.b().p().to_i64().unwrap(),
                        e.b().q().to_i64().unwrap(),
                    ],
                    "value": [v.re, v.im],
                })
            })
            .collect();
        let doc = json!({
            "version": 1,
            "default": [0.0, 0.0],
            "entries": entries,
            "fan_period": d,
        });
        let shear = dir.path().join(format!("fanzero{d}.json"));
        write(&shear, &doc);
        // The proof bound for zero-sum periods: C = (d - 1) sup norm.
        let bound = (d - 1) as f64 * s.sup_norm();
        let report = json_stdout(&run(&[
            "check",
            shear.to_str().unwrap(),
            "--partial-sum",
            &format!("{}", bound + 1e-12),
            "--depth",
            "4",
            "--k-max",
            &d.to_string(),
            "--strict",
        ]));
        assert_eq!(report["pass"], true, "period {d}");
    }
}

#[test]
fn check_requires_a_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let shear = dir.path().join("zero.json");
    write(&shear, &zero_doc());
    assert_eq!(run(&["check", shear.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn check_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let shear = dir.path().join("zero.json");
    write(&shear, &zero_doc());
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = run(&[
            "check",
            shear.to_str().unwrap(),
            "--qs-box",
            "2",
            "--depth",
            "4",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn surface_bpv_census_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("bpv.svg");
    let report = json_stdout(&run(&[
        "surface",
        "bpv",
        "--radius",
        "3",
        "--svg",
        svg_path.to_str().unwrap(),
    ]));
    assert_eq!(report["pass"], true);
    assert_eq!(report["interior_degree_census"], json!({ "4": 12, "8": 13 }));
    let b = 1.0f64.asinh();
    for row in report["extremal_length_lower"].as_array().unwrap() {
        let n = row["n"].as_u64().unwrap() as usize;
        assert_eq!(
            row["lower_bound"].as_f64().unwrap(),
            shearlab::surfaces::extremal_length_lower(n)
        );
    }
    let c2 = &report["curves"].as_array().unwrap()[1];
    assert!((c2["length"].as_f64().unwrap() - 6.0 * b).abs() < 1e-14);
    assert_eq!(c2["punctures"], 9);
    assert!(std::fs::read_to_string(&svg_path).unwrap().contains("<line"));
}

#[test]
fn surface_kinjo_valence_bounded() {
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("kinjo.svg");
    let report = json_stdout(&run(&[
        "surface",
        "kinjo",
        "--word-length",
        "4",
        "--svg",
        svg_path.to_str().unwrap(),
    ]));
    assert_eq!(report["pass"], true);
    assert!(report["max_valence"].as_u64().unwrap() <= 8);
    assert!(report["diagonal_count"].as_u64().unwrap() > 0);
    assert!(std::fs::read_to_string(&svg_path).unwrap().contains("<path"));
}

#[test]
fn intersect_identical_and_translated_lists() {
    let dir = tempfile::tempdir().unwrap();
    let fa = dir.path().join("fa.json");
    let fb = dir.path().join("fb.json");
    write(&fa, &json!({ "farey_depth": 4 }));
    write(&fb, &json!({ "farey_depth": 4 }));
    let report =
        json_stdout(&run(&["intersect", fa.to_str().unwrap(), fb.to_str().unwrap()]));
    assert_eq!(report["max_first"], 0);
    assert_eq!(report["pass"], true);

    write(&fb, &json!({ "farey_depth": 4, "transform": [[1, 1], [0, 1]] }));
    let report =
        json_stdout(&run(&["intersect", fa.to_str().unwrap(), fb.to_str().unwrap()]));
    assert_eq!(report["max_second"], 0);
    assert_eq!(report["pass"], true);
}

#[test]
fn intersect_doubled_farey_crosses() {
    let dir = tempfile::tempdir().unwrap();
    let fa = dir.path().join("fa.json");
    let fb = dir.path().join("fb.json");
    write(&fa, &json!({ "farey_depth": 4 }));
    write(&fb, &json!({ "farey_depth": 4, "transform": [[2, 0], [0, 1]] }));
    let out = run(&[
        "intersect",
        fa.to_str().unwrap(),
        fb.to_str().unwrap(),
        "--bound",
        "0",
        "--strict",
    ]);
    assert_eq!(out.status.code(), Some(4));
    // With bound 1 the doubled tessellation passes.
    let report = json_stdout(&run(&[
        "intersect",
        fa.to_str().unwrap(),
        fb.to_str().unwrap(),
        "--bound",
        "1",
    ]));
    assert_eq!(report["max_first"], 1);
    assert_eq!(report["pass"], true);
}

#[test]
fn intersect_explicit_edge_lists() {
    let dir = tempfile::tempdir().unwrap();
    let fa = dir.path().join("fa.json");
    let fb = dir.path().join("fb.json");
    write(&fa, &json!({ "edges": [[0, 1, 2, 1]] }));
    write(&fb, &json!({ "edges": [[1, 1, 1, 0]] }));
    let report = json_stdout(&run(&[
        "intersect",
        fa.to_str().unwrap(),
        fb.to_str().unwrap(),
        "--bound",
        "1",
    ]));
    assert_eq!(report["max_first"], 1);
    assert_eq!(report["argmax_first"], json!(["0/1", "2/1"]));
    // Malformed list: both or neither selector.
    write(&fa, &json!({ "edges": [[0, 1, 1, 0]], "farey_depth": 2 }));
    let out = run(&["intersect", fa.to_str().unwrap(), fb.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
