//! End-to-end checks of the command-line binary: documented example
//! outputs, exit-code conventions, fixture generation, and byte-level
//! determinism of the reports.

use std::fs;
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

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Materialize the named fixture groups in a fresh temporary directory.
fn fixture_dir(groups: &[&str]) -> TempDir {
    let dir = TempDir::new().expect("temp dir");
    for g in groups {
        let out = run(&["fixtures", g, "--out-dir", dir.path().to_str().unwrap()]);
        assert_eq!(code(&out), 0, "fixtures {g}: {}", stderr(&out));
    }
    dir
}

fn path_arg(dir: &TempDir, file: &str) -> String {
    dir.path().join(file).to_str().unwrap().to_string()
}

#[test]
fn fixture_files_are_written_deterministically() {
    let d1 = fixture_dir(&["ac-family", "s6-graph"]);
    let d2 = fixture_dir(&["ac-family", "s6-graph"]);
    for name in [
        "ac-0.json",
        "ac-1.json",
        "ac-2.json",
        "ac-4.json",
        "ac-neg1.json",
        "ac-9-4.json",
        "s6-graph.json",
    ] {
        let a = fs::read(d1.path().join(name)).expect(name);
        let b = fs::read(d2.path().join(name)).expect(name);
        assert_eq!(a, b, "{name} differs between two runs");
        assert!(a.ends_with(b"\n"), "{name} lacks a trailing newline");
    }
    let out = run(&["fixtures", "s6-system", "--out-dir", d1.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let listing = stdout(&out);
    assert!(listing.contains("wrote "), "{listing}");
    assert!(listing.contains("s6-system.json"), "{listing}");
}

#[test]
fn fixtures_default_to_the_working_directory() {
    let dir = TempDir::new().expect("temp dir");
    let out = exe()
        .args(["fixtures", "theta3-triangle"])
        .current_dir(dir.path())
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(dir.path().join("theta3-triangle.json").exists());
}

#[test]
fn unknown_fixture_name_is_an_input_error() {
    let dir = TempDir::new().expect("temp dir");
    let out = run(&["fixtures", "nope", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("unknown fixture name 'nope'"), "stderr: {err}");
    assert!(err.contains("s6-graph"), "stderr lists the available names: {err}");
}

#[test]
fn graph_realizable_prints_the_documented_verdict() {
    let dir = fixture_dir(&["s6-graph"]);
    let out = run(&["graph-realizable", &path_arg(&dir, "s6-graph.json")]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let body = stdout(&out);
    assert!(body.starts_with("realizable: true"), "{body}");
}

#[test]
fn graph_cohomology_matches_the_six_sphere_series() {
    let dir = fixture_dir(&["s6-graph"]);
    let input = path_arg(&dir, "s6-graph.json");
    let out = run(&[
        "graph-cohomology",
        &input,
        "--degree-bound",
        "8",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).expect("json report");
    assert_eq!(v["schema"], "torusfix/1");
    assert_eq!(v["hilbert"], json!([1, 2, 3, 5, 7]));
    assert_eq!(v["odd_degrees"], "zero");
    assert_eq!(v["realizable"], true);

    let text = run(&["graph-cohomology", &input, "--degree-bound", "8"]);
    let body = stdout(&text);
    assert!(
        body.contains("hilbert (even degrees 0..8): (1, 2, 3, 5, 7)"),
        "{body}"
    );
    assert!(body.contains("realizable: true"), "{body}");
}

#[test]
fn circle_family_spans_all_three_verdicts() {
    let dir = fixture_dir(&["ac-family"]);

    let realizable = run(&["circle-realizable", &path_arg(&dir, "ac-1.json")]);
    assert_eq!(code(&realizable), 0, "{}", stderr(&realizable));
    let body = stdout(&realizable);
    assert!(body.starts_with("realizable: true"), "{body}");
    assert!(body.contains("rank: 2"), "{body}");

    let split = run(&["circle-realizable", &path_arg(&dir, "ac-2.json")]);
    assert_eq!(code(&split), 0, "negative verdicts still exit 0");
    assert!(
        stdout(&split).contains("not realizable: field extension t^2-2"),
        "{}",
        stdout(&split)
    );
    let split_json = run(&[
        "circle-realizable",
        &path_arg(&dir, "ac-2.json"),
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&split_json)).expect("json report");
    assert_eq!(v["schema"], "torusfix/1");
    assert_eq!(v["verdict"]["status"], "not-realizable");

    let violated = run(&["circle-realizable", &path_arg(&dir, "ac-0.json")]);
    assert_eq!(code(&violated), 0, "{}", stderr(&violated));
    assert!(
        stdout(&violated).contains("hypothesis violated"),
        "{}",
        stdout(&violated)
    );
}

#[test]
fn gkm_validate_flags_dependent_edges_at_a_vertex() {
    let dir = fixture_dir(&["double-edge"]);
    let ok = run(&["gkm-validate", &path_arg(&dir, "double-edge.json")]);
    assert_eq!(code(&ok), 0, "{}", stderr(&ok));
    assert!(
        stdout(&ok).contains("independence axiom: holds"),
        "{}",
        stdout(&ok)
    );

    let tmp = TempDir::new().expect("temp dir");
    let bad = tmp.path().join("parallel-triangle.json");
    let triangle = json!({
        "n": 2,
        "vertices": ["p", "q", "r"],
        "edges": [
            {"u": "p", "v": "q", "label": [1, 0]},
            {"u": "q", "v": "r", "label": [1, 0]},
            {"u": "r", "v": "p", "label": [1, 0]},
        ],
    });
    fs::write(&bad, format!("{triangle:#}\n")).expect("write input");
    let out = run(&["gkm-validate", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("fails at vertex"), "{}", stdout(&out));
}

#[test]
fn system_check_validates_the_bundled_diagram() {
    let dir = fixture_dir(&["s6-system"]);
    let input = path_arg(&dir, "s6-system.json");
    let out = run(&[
        "system-check",
        &input,
        "--degree-bound",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).expect("json report");
    assert_eq!(v["schema"], "torusfix/1");
    assert_eq!(v["kind"], "system-check");
    assert_eq!(v["valid"], true);
    assert!(v["lc"]["k_restriction"].is_string());
    assert!(!v["nodes"].as_array().unwrap().is_empty());
    for cond in v["tc"].as_array().unwrap() {
        assert_eq!(cond["verdict"]["status"], "verified", "{cond}");
    }

    let text = run(&["system-check", &input, "--degree-bound", "4"]);
    let body = stdout(&text);
    assert!(body.starts_with("valid: true"), "{body}");
    assert!(
        body.contains("node trivial|trivial: hilbert (1,0,2,0,3)"),
        "{body}"
    );
}

#[test]
fn dependent_structure_characters_invalidate_the_system() {
    let dir = fixture_dir(&["s6-system"]);
    let input = path_arg(&dir, "s6-system.json");
    let mut v: Value =
        serde_json::from_str(&fs::read_to_string(&input).expect("fixture readable"))
            .expect("fixture parses");
    v["rstructure"]["trivial|T"][1]["char"] = v["rstructure"]["trivial|T"][0]["char"].clone();
    let bad = dir.path().join("corrupt.json");
    fs::write(&bad, format!("{v:#}\n")).expect("write corrupted input");
    let out = run(&["system-check", bad.to_str().unwrap(), "--degree-bound", "2"]);
    assert_eq!(
        code(&out),
        0,
        "a failed validation is still a computed result: {}",
        stderr(&out)
    );
    let body = stdout(&out);
    assert!(body.starts_with("valid: false"), "{body}");
    assert!(body.contains("dependent"), "{body}");
}

#[test]
fn criterion_check_verifies_the_rank_two_family() {
    let dir = TempDir::new().expect("temp dir");
    let file = dir.path().join("family.json");
    let data = ac_instance(&qi(1)).expect("family builds");
    fs::write(&file, format!("{:#}\n", data.to_json())).expect("write input");

    let text = run(&["criterion-check", file.to_str().unwrap(), "--degree-bound", "8"]);
    assert_eq!(code(&text), 0, "{}", stderr(&text));
    let body = stdout(&text);
    assert!(body.trim_end().ends_with("verdict: verified"), "{body}");
    assert!(body.contains("sum closure: verified"), "{body}");
    assert!(body.contains("map compatibility: verified"), "{body}");

    let js = run(&[
        "criterion-check",
        file.to_str().unwrap(),
        "--degree-bound",
        "8",
        "--format",
        "json",
    ]);
    assert_eq!(code(&js), 0, "{}", stderr(&js));
    let v: Value = serde_json::from_str(&stdout(&js)).expect("json report");
    assert_eq!(v["schema"], "torusfix/1");
    assert_eq!(v["kind"], "criterion-check");
    assert_eq!(v["verdict"], "verified");
}

#[test]
fn unreadable_or_malformed_input_exits_one() {
    let missing = run(&["graph-cohomology", "/nonexistent/no-such-file.json"]);
    assert_eq!(code(&missing), 1);
    assert!(stderr(&missing).contains("cannot read"), "{}", stderr(&missing));

    let dir = TempDir::new().expect("temp dir");
    let junk = dir.path().join("junk.json");
    fs::write(&junk, "this is { not json").expect("write junk");
    let out = run(&["circle-realizable", junk.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("not valid JSON"), "{}", stderr(&out));
}

#[test]
fn reports_are_byte_deterministic_for_a_fixed_seed() {
    let dir = fixture_dir(&["s6-system"]);
    let input = path_arg(&dir, "s6-system.json");
    let args = [
        "system-check",
        input.as_str(),
        "--degree-bound",
        "4",
        "--format",
        "json",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(
        a.stdout, b.stdout,
        "the same input, flags and seed must reproduce the report bytes"
    );
}
