use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cuspforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspforge"))
        .args(args)
        .env_remove("CUSPFORGE_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json_file(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

#[test]
fn file_chain_from_gosset_to_spin_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    let out = cuspforge(&["gosset", "--n", "3", "--dual", "--out", &p(d, "p3.json")]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_file(&d.join("p3.json"))["type"], "face_lattice");

    let out = cuspforge(&["fill", "--in", &p(d, "p3.json"), "--choices", "v0:0,v1:0,v2:0", "--out", &p(d, "filled.json")]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_file(&d.join("filled.json"))["filling"].as_array().unwrap().len(), 3);

    let out = cuspforge(&["gosset", "--n", "3", "--out", &p(d, "g3.json")]);
    assert_eq!(code(&out), 0);
    let out = cuspforge(&["subdivide", "--in", &p(d, "g3.json"), "--out", &p(d, "k.json")]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_file(&d.join("k.json"))["type"], "simplicial");

    let out = cuspforge(&["colour", "--in", &p(d, "filled.json"), "--out", &p(d, "torus.rzk")]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = cuspforge(&["homology", "--in", &p(d, "torus.rzk"), "--coeff", "z"]);
    assert_eq!(code(&out), 0);
    let h: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(h["euler"], 0);

    let out = cuspforge(&["colour", "--in", &p(d, "p3.json"), "--cusped", "--out", &p(d, "cusped.json")]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = cuspforge(&[
        "spin-report",
        "--manifold",
        &p(d, "cusped.json"),
        "--filling",
        &p(d, "torus.rzk"),
        "--filled",
        &p(d, "filled.json"),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["cusps"].as_array().unwrap().len(), 12);
    assert_eq!(report["dirac"], "Discrete");
}

#[test]
fn census_prints_exact_total() {
    let out = cuspforge(&["census", "--n", "8"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("magnitude: ~2.3"), "{text}");
    assert!(text.lines().next().unwrap().starts_with("total cusps: "));
}

#[test]
fn invalid_dimension_exits_with_2() {
    assert_eq!(code(&cuspforge(&["gosset", "--n", "9"])), 2);
    assert_eq!(code(&cuspforge(&["census", "--n", "2"])), 2);
}

#[test]
fn malformed_input_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"type\": \"simplicial\"").unwrap();
    assert_eq!(code(&cuspforge(&["rzk", "--in", &p(dir.path(), "bad.json")])), 2);
}

#[test]
fn budget_exits_with_3() {
    let out = cuspforge(&["pipeline", "--n", "3", "--budget", "10"]);
    assert_eq!(code(&out), 3);
    let err: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(err["code"], "budget_exceeded");

    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("k.json"), r#"{"type": "simplicial", "vertices": 4, "facets": [[0, 1], [1, 2], [2, 3], [3, 0]]}"#)
        .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cuspforge"))
        .args(["rzk", "--in", &p(dir.path(), "k.json")])
        .env("CUSPFORGE_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn verify_suites_pass() {
    for suite in ["homology", "characteristic", "duality"] {
        let out = cuspforge(&["verify", suite]);
        assert_eq!(code(&out), 0, "{suite}: {}", stdout(&out));
    }
}
