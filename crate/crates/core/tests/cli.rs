use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ehpcert"));
    c.env_remove("EHPCERT_MAX_GENERATORS")
        .env_remove("EHPCERT_MAX_TERMS")
        .env_remove("EHPCERT_WALL_CLOCK_SECS");
    c
}

fn run(c: &mut Command) -> Output {
    c.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn so3_manifest(checks: Value) -> Value {
    json!({"schema_version": 1, "algebra": {"zoo": "so", "n": 3}, "checks": checks})
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(dir.path(), "ok.json", &so3_manifest(json!([{"check": "nil_degree", "k": 1}])));
    assert_eq!(run(bin().arg("run").arg(&ok)).status.code(), Some(0));

    let refuted = write(dir.path(), "ref.json", &so3_manifest(json!([{"check": "nil_bound", "k": 1, "s": 1}])));
    assert_eq!(run(bin().arg("run").arg(&refuted)).status.code(), Some(1));

    let bad = write(
        dir.path(),
        "bad.json",
        &json!({"schema_version": 1, "algebra": {"zoo": "so", "n": 3}, "checks": [{"check": "nil_bound", "k": 1}]}),
    );
    let out = run(bin().arg("run").arg(&bad));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("manifest.checks[0]"));

    assert_eq!(run(bin().arg("run").arg(dir.path().join("missing.json"))).status.code(), Some(2));
    assert_eq!(run(bin().arg("frobnicate")).status.code(), Some(2));
}

#[test]
fn resource_cap_precedence() {
    let dir = tempfile::tempdir().unwrap();
    // Needs k(s+1) = 6 generators.
    let m = write(dir.path(), "m.json", &so3_manifest(json!([
        {"check": "nil_bound", "k": 1, "s": 5},
        {"check": "nil_degree", "k": 1}
    ])));
    let out_dir = dir.path().join("capped");
    let o = run(bin().env("EHPCERT_MAX_GENERATORS", "4").arg("run").arg(&m).arg("--out").arg(&out_dir));
    assert_eq!(o.status.code(), Some(3));
    let summary = read(&out_dir.join("summary.json"));
    assert_eq!(summary["checks"][0]["status"], "resource_cap");
    assert_eq!(summary["caps"]["max_generators"], 4);

    // The command line beats the environment.
    let o = run(bin().env("EHPCERT_MAX_GENERATORS", "4").arg("run").arg(&m).arg("--max-generators").arg("8"));
    assert_eq!(o.status.code(), Some(0));

    // The manifest beats the environment.
    let mut v = so3_manifest(json!([{"check": "nil_bound", "k": 1, "s": 5}]));
    v["caps"] = json!({"max_generators": 8});
    let m2 = write(dir.path(), "m2.json", &v);
    assert_eq!(run(bin().env("EHPCERT_MAX_GENERATORS", "4").arg("run").arg(&m2)).status.code(), Some(0));

    let o = run(bin().env("EHPCERT_MAX_GENERATORS", "many").arg("run").arg(&m2));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn export_then_run_matches_zoo() {
    let dir = tempfile::tempdir().unwrap();
    let exported = dir.path().join("su2.json");
    let o = run(bin().args(["export", r#"{"zoo": "su", "n": 2}"#, "--out"]).arg(&exported));
    assert_eq!(o.status.code(), Some(0));

    let checks = json!([{"check": "nil_degree", "k": 1}, {"check": "nil_bound", "k": 2, "s": 1}]);
    let from_zoo = write(dir.path(), "a.json", &json!({"schema_version": 1, "algebra": {"zoo": "su", "n": 2}, "checks": checks}));
    let from_file = write(dir.path(), "b.json", &json!({"schema_version": 1, "algebra": {"file": "su2.json"}, "checks": checks}));
    for (m, out) in [(&from_zoo, "out_a"), (&from_file, "out_b")] {
        assert_eq!(run(bin().arg("run").arg(m).arg("--out").arg(dir.path().join(out))).status.code(), Some(0));
    }
    for f in ["00_nil_degree.json", "01_nil_bound.json"] {
        let a = read(&dir.path().join("out_a").join(f));
        let b = read(&dir.path().join("out_b").join(f));
        assert_eq!(a["result"]["subject"], b["result"]["subject"], "{f}");
        assert_eq!(a["result"]["verdict"], b["result"]["verdict"], "{f}");
        assert_eq!(a["result"]["degree"], b["result"]["degree"], "{f}");
    }

    // Exporting the exported file is a fixed point.
    let again = dir.path().join("again.json");
    assert_eq!(run(bin().arg("export").arg(&exported).arg("--out").arg(&again)).status.code(), Some(0));
    assert_eq!(std::fs::read(&exported).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn inspect_reports_flags() {
    let o = run(bin().args(["inspect", r#"{"zoo": "cd_tower", "l": 3}"#]));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dim"], 8);
    assert_eq!(v["flags"]["associative"]["holds"], false);
    assert_eq!(v["flags"]["alternative"]["holds"], true);
}

#[test]
fn bundles_are_reproducible_without_timing() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", &so3_manifest(json!([
        {"check": "nil_degree", "k": 1},
        {"check": "theorem_a", "premise": [{"k": 1, "s": 2}], "n": [4, 6]}
    ])));
    let mut outputs = Vec::new();
    for (i, jobs) in ["1", "4"].into_iter().enumerate() {
        let out = dir.path().join(format!("run{i}"));
        let o = run(bin().arg("run").arg(&m).args(["--jobs", jobs, "--out"]).arg(&out));
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(out);
    }
    for f in ["summary.json", "00_nil_degree.json", "01_theorem_a.json"] {
        assert_eq!(
            std::fs::read(outputs[0].join(f)).unwrap(),
            std::fs::read(outputs[1].join(f)).unwrap(),
            "{f}"
        );
    }
    let s = read(&outputs[0].join("summary.json"));
    assert!(s.get("elapsed_ms").is_none());

    let timed = dir.path().join("timed");
    run(bin().arg("run").arg(&m).arg("--timing").arg("--out").arg(&timed));
    assert!(read(&timed.join("summary.json")).get("elapsed_ms").is_some());
    assert!(read(&timed.join("00_nil_degree.json")).get("elapsed_ms").is_some());
}

#[test]
fn modular_mode_is_labelled() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", &so3_manifest(json!([{"check": "nil_bound", "k": 1, "s": 2}])));
    let out = dir.path().join("out");
    let o = run(bin().arg("run").arg(&m).args(["--mode", "modular", "--trials", "25", "--seed", "9", "--out"]).arg(&out));
    assert_eq!(o.status.code(), Some(0));
    let r = read(&out.join("00_nil_bound.json"));
    let mode = &r["result"]["mode"];
    assert_eq!(mode["label"], "probabilistic");
    assert_eq!(mode["trials"], 25);
    assert_eq!(mode["seed"], 9);
}

#[test]
fn cd_tower_table() {
    let o = run(bin().args(["table", "cd_tower"]));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["table"].as_array().unwrap();
    let l4 = rows.iter().find(|r| r["family"] == "l=4").unwrap();
    assert_eq!(l4["dim"], 16);
    assert_eq!(l4["alternative"], false);
    assert_eq!(l4["zero_divisor"], true);
}
