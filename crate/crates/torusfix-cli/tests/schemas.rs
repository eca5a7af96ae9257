//! Conformance of real inputs and reports to the schema files published
//! under `docs/`: every JSON document the binary reads or writes must
//! validate against its schema, across all verdict branches.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

use torusfix::criterion::ac_instance;
use torusfix::scalar::qi;

fn exe() -> Command {
    Command::new(env!("CARGO_BIN_EXE_torusfix"))
}

fn run(args: &[&str]) -> Output {
    exe().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("report parses as JSON")
}

fn docs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs")
}

fn assert_valid(schema_file: &str, instance: &Value, label: &str) {
    let text = fs::read_to_string(docs_dir().join(schema_file))
        .unwrap_or_else(|e| panic!("{schema_file} is readable: {e}"));
    let schema: Value =
        serde_json::from_str(&text).unwrap_or_else(|e| panic!("{schema_file} parses: {e}"));
    let validator = jsonschema::validator_for(&schema)
        .unwrap_or_else(|e| panic!("{schema_file} compiles as a schema: {e}"));
    let errors: Vec<String> = validator
        .iter_errors(instance)
        .map(|e| format!("{} (at instance path '{}')", e, e.instance_path()))
        .collect();
    assert!(
        errors.is_empty(),
        "{label} violates {schema_file}:\n{}",
        errors.join("\n")
    );
}

/// Materialize the named fixture groups in a fresh temporary directory.
fn fixture_dir(groups: &[&str]) -> TempDir {
    let dir = TempDir::new().expect("temp dir");
    for g in groups {
        let out = run(&["fixtures", g, "--out-dir", dir.path().to_str().unwrap()]);
        assert!(
            out.status.success(),
            "fixtures {g}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    dir
}

fn read_value(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).expect("file readable")).expect("file parses")
}

fn path_arg(dir: &TempDir, file: &str) -> String {
    dir.path().join(file).to_str().unwrap().to_string()
}

/// A triangle whose three edges share one direction: its parallel class
/// closes a cycle and both labels at each vertex are dependent.
fn parallel_triangle_file(dir: &TempDir) -> String {
    let triangle = json!({
        "n": 2,
        "vertices": ["p", "q", "r"],
        "edges": [
            {"u": "p", "v": "q", "label": [1, 0]},
            {"u": "q", "v": "r", "label": [1, 0]},
            {"u": "r", "v": "p", "label": [1, 0]},
        ],
    });
    let path = dir.path().join("parallel-triangle.json");
    fs::write(&path, format!("{triangle:#}\n")).expect("write input");
    path.to_str().unwrap().to_string()
}

#[test]
fn every_published_schema_compiles() {
    let mut count = 0;
    for entry in fs::read_dir(docs_dir()).expect("docs directory exists") {
        let path = entry.expect("dir entry").path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let text = fs::read_to_string(&path).expect("schema readable");
        let schema: Value = serde_json::from_str(&text)
            .unwrap_or_else(|e| panic!("{} parses: {e}", path.display()));
        jsonschema::validator_for(&schema)
            .unwrap_or_else(|e| panic!("{} compiles as a schema: {e}", path.display()));
        count += 1;
    }
    assert!(count >= 10, "expected the full schema set, found {count}");
}

#[test]
fn graph_inputs_and_reports_conform() {
    let dir = fixture_dir(&["s6-graph", "theta3-triangle", "double-edge"]);
    for name in ["s6-graph.json", "theta3-triangle.json", "double-edge.json"] {
        let v = read_value(&dir.path().join(name));
        assert_valid("graph-input.schema.json", &v, name);
    }
    let parallel = parallel_triangle_file(&dir);
    assert_valid("graph-input.schema.json", &read_value(Path::new(&parallel)), "parallel triangle");

    for (input, bound, label) in [
        (path_arg(&dir, "s6-graph.json"), "8", "six-sphere graph report"),
        (path_arg(&dir, "theta3-triangle.json"), "6", "theta graph report"),
        (parallel.clone(), "4", "parallel-triangle graph report"),
    ] {
        let out = run(&["graph-cohomology", &input, "--degree-bound", bound, "--format", "json"]);
        assert_valid("graph-report.schema.json", &stdout_json(&out), label);
    }

    for (input, label) in [
        (path_arg(&dir, "s6-graph.json"), "six-sphere realizability report"),
        (parallel.clone(), "parallel-triangle realizability report"),
    ] {
        let out = run(&["graph-realizable", &input, "--format", "json"]);
        assert_valid("graph-realizable-report.schema.json", &stdout_json(&out), label);
    }

    for (input, label) in [
        (path_arg(&dir, "double-edge.json"), "double-edge independence report"),
        (parallel, "parallel-triangle independence report"),
    ] {
        let out = run(&["gkm-validate", &input, "--format", "json"]);
        assert_valid("gkm-validate-report.schema.json", &stdout_json(&out), label);
    }
}

#[test]
fn circle_inputs_and_reports_conform() {
    let dir = fixture_dir(&["ac-family"]);
    let names = [
        "ac-0.json",
        "ac-1.json",
        "ac-2.json",
        "ac-4.json",
        "ac-neg1.json",
        "ac-9-4.json",
    ];
    for name in names {
        let v = read_value(&dir.path().join(name));
        assert_valid("circle-input.schema.json", &v, name);
    }
    // ac-1 realizable, ac-2 not realizable, ac-0 hypothesis violated: all
    // three verdict branches of the report schema
    for name in ["ac-1.json", "ac-2.json", "ac-0.json"] {
        let out = run(&["circle-realizable", &path_arg(&dir, name), "--format", "json"]);
        assert_valid("circle-report.schema.json", &stdout_json(&out), name);
    }
}

#[test]
fn system_inputs_and_reports_conform() {
    let dir = fixture_dir(&["s6-system"]);
    let input = path_arg(&dir, "s6-system.json");
    let v = read_value(Path::new(&input));
    assert_valid("system-input.schema.json", &v, "s6-system.json");

    let out = run(&["system-check", &input, "--degree-bound", "4", "--format", "json"]);
    assert_valid("system-report.schema.json", &stdout_json(&out), "six-sphere system report");

    // corrupting one structure character exercises the invalid branch
    // (violations populated, hypotheses null)
    let mut bad = v;
    bad["rstructure"]["trivial|T"][1]["char"] = bad["rstructure"]["trivial|T"][0]["char"].clone();
    let bad_path = dir.path().join("corrupt.json");
    fs::write(&bad_path, format!("{bad:#}\n")).expect("write corrupted input");
    let out = run(&[
        "system-check",
        bad_path.to_str().unwrap(),
        "--degree-bound",
        "2",
        "--format",
        "json",
    ]);
    let report = stdout_json(&out);
    assert_eq!(report["valid"], false);
    assert_valid("system-report.schema.json", &report, "invalid system report");
}

#[test]
fn criterion_inputs_and_reports_conform() {
    let dir = TempDir::new().expect("temp dir");
    // c = 1 verifies every condition; c = 2 fails the degree-0 splitting
    for (c, name) in [(1, "family-1.json"), (2, "family-2.json")] {
        let data = ac_instance(&qi(c)).expect("family builds");
        let v = data.to_json();
        assert_valid("criterion-input.schema.json", &v, name);
        let path = dir.path().join(name);
        fs::write(&path, format!("{v:#}\n")).expect("write input");
        let out = run(&[
            "criterion-check",
            path.to_str().unwrap(),
            "--degree-bound",
            "8",
            "--format",
            "json",
        ]);
        assert_valid("criterion-report.schema.json", &stdout_json(&out), name);
    }
}
